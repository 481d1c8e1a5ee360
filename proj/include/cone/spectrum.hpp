#pragma once

#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

namespace cone {

class Config;

enum class CrossSectionKind { circle, sphere, explicit_list };

struct EigenPair {
    double lambda = 0;
    int d = 1;
};

struct CrossSection {
    CrossSectionKind kind = CrossSectionKind::circle;
    double alpha = 1.0;            // circle scale: circumference 2 pi alpha
    std::vector<EigenPair> pairs;  // explicit spectrum of -Delta_h

    static CrossSection circle(double alpha);
    static CrossSection sphere();
    static CrossSection explicit_spectrum(std::vector<EigenPair> pairs);
};

// Cone of dimension n over a cross-section, with constant potential q = a.
struct ConeModel {
    int n = 2;
    CrossSection cross_section;
    double a = 0.0;

    void validate() const;
    // Riemannian volume of the cross-section; not defined for explicit spectra.
    double cross_section_volume() const;
};

struct SpectrumEntry {
    double nu;
    double lambda;  // eigenvalue of -Delta_h + a
    int d;
};

class SpectrumTable {
public:
    SpectrumTable(int n, double K, std::vector<SpectrumEntry> entries);

    int dimension() const { return n_; }
    double K() const { return K_; }
    const std::vector<SpectrumEntry>& entries() const { return entries_; }
    std::size_t size() const { return entries_.size(); }
    const SpectrumEntry& operator[](std::size_t i) const { return entries_[i]; }

    // Coefficient slots are (entry, l) pairs laid out entry-major.
    std::size_t slots() const { return offsets_.back(); }
    std::size_t slot(std::size_t entry, int l) const { return offsets_[entry] + static_cast<std::size_t>(l); }
    std::size_t entry_of_slot(std::size_t slot) const;

private:
    int n_;
    double K_;
    std::vector<SpectrumEntry> entries_;
    std::vector<std::size_t> offsets_;
};

using TablePtr = std::shared_ptr<const SpectrumTable>;

double nu_from_lambda(double lambda, int n);

SpectrumTable build_spectrum(const ConeModel& model, double K);

void write_spectrum_csv(const SpectrumTable& table, std::ostream& out);

// Reads keys n, cross_section (circle | sphere | explicit), alpha, a and
// spectrum (for explicit: comma-separated `lambda:d` items) under `prefix`.
ConeModel cone_model_from_config(const Config& cfg, const std::string& prefix = "cone.");

std::string to_string(CrossSectionKind kind);

}  // namespace cone
