#pragma once

namespace cone {

// C-infinity step: 0 for x <= 0, 1 for x >= 1.
double smooth_step(double x);

// Bump supported in [1, 2] with peak value 1 at x = 3/2.
double bump(double x);

// Littlewood-Paley profile phi(x) - phi(2x), supported in [1/2, 2]; its dyadic
// dilates sum to one on (0, inf).
double partition_bump(double x);

enum class BumpVariant { standard, partition };

double bump(double x, BumpVariant variant);

// Angular cutoff: 1 on [-delta, delta], 0 outside [-2 delta, 2 delta].
double chi_delta(double theta, double delta);

}  // namespace cone
