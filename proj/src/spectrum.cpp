#include "cone/spectrum.hpp"

#include "cone/config.hpp"
#include "cone/error.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <numbers>
#include <ostream>
#include <sstream>

namespace cone {

CrossSection CrossSection::circle(double alpha) {
    CrossSection cs;
    cs.kind = CrossSectionKind::circle;
    cs.alpha = alpha;
    return cs;
}

CrossSection CrossSection::sphere() {
    CrossSection cs;
    cs.kind = CrossSectionKind::sphere;
    return cs;
}

CrossSection CrossSection::explicit_spectrum(std::vector<EigenPair> pairs) {
    CrossSection cs;
    cs.kind = CrossSectionKind::explicit_list;
    cs.pairs = std::move(pairs);
    return cs;
}

std::string to_string(CrossSectionKind kind) {
    switch (kind) {
        case CrossSectionKind::circle: return "circle";
        case CrossSectionKind::sphere: return "sphere";
        case CrossSectionKind::explicit_list: return "explicit";
    }
    return "?";
}

void ConeModel::validate() const {
    if (n < 2) throw DomainError("ConeModel: n must be >= 2");
    if (!(a >= 0) || !std::isfinite(a)) throw DomainError("ConeModel: potential a must be >= 0");
    switch (cross_section.kind) {
        case CrossSectionKind::circle:
            if (n != 2) throw DomainError("ConeModel: circle cross-section requires n = 2");
            if (!(cross_section.alpha > 0) || !std::isfinite(cross_section.alpha))
                throw DomainError("ConeModel: circle scale alpha must be positive");
            break;
        case CrossSectionKind::sphere: break;
        case CrossSectionKind::explicit_list:
            for (const auto& p : cross_section.pairs) {
                if (!(p.lambda >= 0) || !std::isfinite(p.lambda))
                    throw DomainError("ConeModel: explicit eigenvalues must be >= 0");
                if (p.d < 1) throw DomainError("ConeModel: explicit multiplicities must be >= 1");
            }
            break;
    }
}

double ConeModel::cross_section_volume() const {
    switch (cross_section.kind) {
        case CrossSectionKind::circle: return 2 * std::numbers::pi * cross_section.alpha;
        case CrossSectionKind::sphere: {
            const double m = n;  // |S^{n-1}| = 2 pi^{n/2} / Gamma(n/2)
            return 2 * std::pow(std::numbers::pi, m / 2) / std::tgamma(m / 2);
        }
        case CrossSectionKind::explicit_list: break;
    }
    throw UnsupportedCrossSection("cross-section volume is unknown for an explicit spectrum");
}

SpectrumTable::SpectrumTable(int n, double K, std::vector<SpectrumEntry> entries)
    : n_(n), K_(K), entries_(std::move(entries)) {
    if (entries_.empty()) throw EmptySpectrum("SpectrumTable: no entries");
    offsets_.assign(1, 0);
    for (std::size_t i = 0; i < entries_.size(); ++i) {
        const auto& e = entries_[i];
        if (e.d < 1) throw DomainError("SpectrumTable: multiplicity must be >= 1");
        if (e.nu > K_) throw DomainError("SpectrumTable: entry above truncation K");
        if (i > 0 && !(e.nu > entries_[i - 1].nu)) throw DomainError("SpectrumTable: orders must increase strictly");
        offsets_.push_back(offsets_.back() + static_cast<std::size_t>(e.d));
    }
}

std::size_t SpectrumTable::entry_of_slot(std::size_t s) const {
    auto it = std::upper_bound(offsets_.begin(), offsets_.end(), s);
    return static_cast<std::size_t>(it - offsets_.begin()) - 1;
}

double nu_from_lambda(double lambda, int n) {
    const double c = 0.5 * (n - 2);
    return std::sqrt(lambda + c * c);
}

namespace {

long double binomial(long long top, long long k) {
    if (top < 0 || k < 0 || k > top) return 0;
    long double r = 1;
    for (long long i = 1; i <= k; ++i) r = r * static_cast<long double>(top - k + i) / static_cast<long double>(i);
    return r;
}

}  // namespace

SpectrumTable build_spectrum(const ConeModel& model, double K) {
    model.validate();
    const int n = model.n;
    if (!(K >= 0.5 * (n - 2)) || !std::isfinite(K))
        throw EmptySpectrum("build_spectrum: K = " + std::to_string(K) + " is below (n-2)/2");
    std::map<double, long long> merged;  // eigenvalue of -Delta_h -> multiplicity
    const auto& cs = model.cross_section;
    const auto within = [&](double lambda) { return nu_from_lambda(lambda + model.a, n) <= K; };
    switch (cs.kind) {
        case CrossSectionKind::circle:
            for (long long k = 0;; ++k) {
                const double lambda = std::pow(static_cast<double>(k) / cs.alpha, 2);
                if (!within(lambda)) break;
                merged[lambda] += (k == 0 ? 1 : 2);
            }
            break;
        case CrossSectionKind::sphere:
            for (long long k = 0;; ++k) {
                const double lambda = static_cast<double>(k) * static_cast<double>(k + n - 2);
                if (!within(lambda)) break;
                const long double d = binomial(k + n - 1, n - 1) - binomial(k + n - 3, n - 1);
                merged[lambda] += static_cast<long long>(std::llround(d));
            }
            break;
        case CrossSectionKind::explicit_list:
            for (const auto& p : cs.pairs)
                if (within(p.lambda)) merged[p.lambda] += p.d;
            break;
    }
    if (merged.empty())
        throw EmptySpectrum("build_spectrum: K = " + std::to_string(K) + " is below the smallest order");
    std::vector<SpectrumEntry> entries;
    for (const auto& [lambda, d] : merged) {
        const double total = lambda + model.a;
        const double nu = nu_from_lambda(total, n);
        if (!entries.empty() && nu == entries.back().nu) {
            entries.back().d += static_cast<int>(d);
            continue;
        }
        entries.push_back({nu, total, static_cast<int>(d)});
    }
    return SpectrumTable(n, K, std::move(entries));
}

void write_spectrum_csv(const SpectrumTable& table, std::ostream& out) {
    out << "nu,lambda,d\n";
    char buf[96];
    for (const auto& e : table.entries()) {
        std::snprintf(buf, sizeof buf, "%.17g,%.17g,%d\n", e.nu, e.lambda, e.d);
        out << buf;
    }
}

ConeModel cone_model_from_config(const Config& cfg, const std::string& prefix) {
    ConeModel model;
    model.n = static_cast<int>(cfg.get_int(prefix + "n", 2));
    model.a = cfg.get_double(prefix + "a", 0.0);
    const std::string kind = cfg.get_string(prefix + "cross_section", "circle");
    if (kind == "circle") {
        model.cross_section = CrossSection::circle(cfg.get_double(prefix + "alpha", 1.0));
    } else if (kind == "sphere") {
        model.cross_section = CrossSection::sphere();
    } else if (kind == "explicit") {
        std::vector<EigenPair> pairs;
        std::stringstream ss(cfg.get_string(prefix + "spectrum"));
        std::string item;
        while (std::getline(ss, item, ',')) {
            double lambda = 0;
            int d = 0;
            if (std::sscanf(item.c_str(), " %lf : %d", &lambda, &d) != 2)
                throw ConfigError(cfg.source() + ": key `" + prefix + "spectrum`: expected `lambda:d` items");
            pairs.push_back({lambda, d});
        }
        model.cross_section = CrossSection::explicit_spectrum(std::move(pairs));
    } else {
        throw ConfigError(cfg.source() + ": key `" + prefix + "cross_section`: unknown value `" + kind + "`");
    }
    try {
        model.validate();
    } catch (const DomainError& e) {
        throw ConfigError(cfg.source() + ": " + e.what());
    }
    return model;
}

}  // namespace cone
