#include "cone/config.hpp"

#include "cone/error.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

namespace cone {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

template <class T>
std::optional<T> parse_number(const std::string& text) {
    T value{};
    const char* first = text.data();
    const char* last = first + text.size();
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc() || ptr != last) return std::nullopt;
    return value;
}

}  // namespace

Config Config::parse(std::istream& in, const std::string& source) {
    Config cfg;
    cfg.source_ = source;
    std::string line, section;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']' || line.size() < 3)
                throw ConfigError(source + ":" + std::to_string(lineno) + ": malformed section header");
            section = trim(line.substr(1, line.size() - 2));
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError(source + ":" + std::to_string(lineno) + ": expected `key = value`");
        std::string key = trim(line.substr(0, eq));
        if (key.empty()) throw ConfigError(source + ":" + std::to_string(lineno) + ": empty key");
        if (!section.empty()) key = section + "." + key;
        if (cfg.entries_.count(key))
            throw ConfigError(source + ":" + std::to_string(lineno) + ": duplicate key `" + key + "`");
        cfg.entries_[key] = Entry{trim(line.substr(eq + 1)), lineno};
    }
    return cfg;
}

Config Config::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file `" + path + "`");
    return parse(in, path);
}

void Config::set(const std::string& key, const std::string& value) { entries_[key] = Entry{value, 0}; }

bool Config::has(const std::string& key) const { return entries_.count(key) != 0; }

void Config::fail(const std::string& key, const std::string& message) const {
    auto it = entries_.find(key);
    std::string where = source_;
    if (it != entries_.end() && it->second.line > 0) where += ":" + std::to_string(it->second.line);
    throw ConfigError(where + ": key `" + key + "`: " + message);
}

std::string Config::get_string(const std::string& key) const {
    auto it = entries_.find(key);
    if (it == entries_.end()) fail(key, "missing");
    return it->second.value;
}

std::string Config::get_string(const std::string& key, const std::string& fallback) const {
    return has(key) ? get_string(key) : fallback;
}

double Config::get_double(const std::string& key) const {
    auto v = parse_number<double>(get_string(key));
    if (!v) fail(key, "not a number: `" + get_string(key) + "`");
    return *v;
}

double Config::get_double(const std::string& key, double fallback) const {
    return has(key) ? get_double(key) : fallback;
}

long long Config::get_int(const std::string& key) const {
    auto v = parse_number<long long>(get_string(key));
    if (!v) fail(key, "not an integer: `" + get_string(key) + "`");
    return *v;
}

long long Config::get_int(const std::string& key, long long fallback) const {
    return has(key) ? get_int(key) : fallback;
}

std::uint64_t Config::get_u64(const std::string& key, std::uint64_t fallback) const {
    if (!has(key)) return fallback;
    auto v = parse_number<std::uint64_t>(get_string(key));
    if (!v) fail(key, "not an unsigned integer: `" + get_string(key) + "`");
    return *v;
}

std::vector<double> Config::get_doubles(const std::string& key) const {
    std::vector<double> out;
    std::stringstream ss(get_string(key));
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (item.empty()) continue;
        auto v = parse_number<double>(item);
        if (!v) fail(key, "not a number list: `" + get_string(key) + "`");
        out.push_back(*v);
    }
    return out;
}

}  // namespace cone
