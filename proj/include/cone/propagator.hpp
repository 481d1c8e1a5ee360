#pragma once

#include "cone/cutoff.hpp"
#include "cone/field.hpp"
#include "cone/hankel.hpp"

#include <span>
#include <vector>

namespace cone {

// b_{nu,l} = H_nu a_{nu,l} on the spectral grid (default: the physical grid, mirrored).
SpectralField distorted_fourier(const ModeField& field, GridPtr spectral = nullptr,
                                const TransformOptions& options = {});

// v_{nu,l}(t, r) = H_nu[e^{i t rho^2} b_{nu,l}](r) on the physical grid
// (default: the spectral grid, mirrored). Modes with zero coefficients stay zero.
ModeField evolve(const SpectralField& spec, double t, GridPtr physical = nullptr);

// Multiplies every mode by beta(rho / N).
SpectralField frequency_localize(const SpectralField& spec, double N, BumpVariant variant = BumpVariant::standard);

struct EvolvedField {
    std::vector<double> times;
    std::vector<ModeField> fields;
    std::vector<double> masses;  // L^2(M) norm per time
};

EvolvedField sample_solution(const SpectralField& spec, std::span<const double> times, GridPtr physical = nullptr);

// L^2(M) norm; equals the l2 norm of the coefficient arrays by orthogonality.
double mass(const FieldData& field);

}  // namespace cone
