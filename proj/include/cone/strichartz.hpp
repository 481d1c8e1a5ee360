#pragma once

#include "cone/estimates.hpp"
#include "cone/field.hpp"
#include "cone/spectrum.hpp"

#include <functional>

namespace cone {

struct StrichartzOptions {
    double q = 4;
    double r_min = 1.0 / 256;     // innermost annulus [r_min, 2 r_min] in rescaled radius
    double tail_tolerance = 1e-3; // stop once an annulus adds less than this share of the total
    double r_floor = 8;           // never stop before this rescaled radius
    int max_annuli = 48;
    ScanNumerics numerics;
};

struct StrichartzResult {
    double N = 0;
    double q = 0;
    double lhs = 0;         // ||e^{itH} u0||_{L^q_{t,z}}
    double datum_norm = 0;  // ||u0||_{L^2}
    double ratio = 0;       // lhs / (N^{n/2 - (n+2)/q} datum_norm)
    int annuli = 0;
    double r_max = 0;       // outer radius reached, rescaled
};

// Radial datum with distorted Fourier profile b(rho) beta(rho/N) in the lowest
// mode. Computed in the variables sigma = rho/N, r' = N r, t' = N^2 t.
StrichartzResult strichartz_ratio(const ConeModel& model, const std::function<cplx(double)>& b, double N,
                                  const StrichartzOptions& options = {});

// Radial datum given in physical space (only the lowest slot may be nonzero);
// its profile is P_N u0 with beta(rho/N).
StrichartzResult strichartz_ratio(const ConeModel& model, const ModeField& u0, double N,
                                  const StrichartzOptions& options = {});

}  // namespace cone
