#pragma once

#include "cone/field.hpp"

namespace cone {

// Samples f(r_i, theta_j) on a radial grid times a uniform angle grid
// theta_j = 2 pi j / M (angle, not arc length), row-major in (i, j).
struct PolarSamples {
    std::size_t radial = 0;
    std::size_t angular = 0;
    std::vector<cplx> values;

    cplx& at(std::size_t i, std::size_t j) { return values[i * angular + j]; }
    cplx at(std::size_t i, std::size_t j) const { return values[i * angular + j]; }
};

// Normalized eigenfunction of slot l (0-based) of circle index k on the circle
// of circumference 2 pi alpha: cos for l = 0, sin for l = 1.
double circle_eigenfunction(int k, int l, double alpha, double theta);

// Circle index k of every table entry.
std::vector<int> circle_indices(const ConeModel& model, const SpectrumTable& table);

ModeField mode_decompose(const PolarSamples& samples, const ConeModel& model, GridPtr grid, TablePtr table);

PolarSamples mode_recompose(const ModeField& field, const ConeModel& model, std::size_t angular);

// max_i | ||f(r_i, .)||^2_{L^2(Sigma)} - sum |a(r_i)|^2 |
double parseval_check(const ModeField& field, const PolarSamples& samples, const ConeModel& model);

}  // namespace cone
