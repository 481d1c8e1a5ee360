#include "cone/cutoff.hpp"

#include <cmath>

namespace cone {

namespace {

double f(double x) { return x > 0 ? std::exp(-1.0 / x) : 0.0; }

}  // namespace

double smooth_step(double x) {
    if (x <= 0) return 0.0;
    if (x >= 1) return 1.0;
    const double a = f(x), b = f(1 - x);
    return a / (a + b);
}

double bump(double x) {
    if (x <= 1 || x >= 2) return 0.0;
    // exp(-1/(x-1)) exp(-1/(2-x)) peaks at e^-4.
    return std::exp(4.0 - 1.0 / (x - 1) - 1.0 / (2 - x));
}

double partition_bump(double x) {
    if (x <= 0.5 || x >= 2) return 0.0;
    const auto phi = [](double y) { return smooth_step(2 - y); };
    return phi(x) - phi(2 * x);
}

double bump(double x, BumpVariant variant) {
    return variant == BumpVariant::standard ? bump(x) : partition_bump(x);
}

double chi_delta(double theta, double delta) {
    return smooth_step((2 * delta - std::fabs(theta)) / delta);
}

}  // namespace cone
