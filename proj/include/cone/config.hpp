#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace cone {

// Flat key-value configuration. Lines are `key = value`; `#` starts a comment;
// `[section]` prefixes subsequent keys with `section.`.
class Config {
public:
    struct Entry {
        std::string value;
        int line = 0;
    };

    static Config parse(std::istream& in, const std::string& source = "<config>");
    static Config load(const std::string& path);

    void set(const std::string& key, const std::string& value);
    bool has(const std::string& key) const;

    std::string get_string(const std::string& key) const;
    std::string get_string(const std::string& key, const std::string& fallback) const;
    double get_double(const std::string& key) const;
    double get_double(const std::string& key, double fallback) const;
    long long get_int(const std::string& key) const;
    long long get_int(const std::string& key, long long fallback) const;
    std::uint64_t get_u64(const std::string& key, std::uint64_t fallback) const;
    std::vector<double> get_doubles(const std::string& key) const;

    const std::map<std::string, Entry>& entries() const { return entries_; }
    const std::string& source() const { return source_; }

private:
    [[noreturn]] void fail(const std::string& key, const std::string& message) const;

    std::map<std::string, Entry> entries_;
    std::string source_;
};

}  // namespace cone
