#pragma once

#include <cstddef>
#include <vector>

namespace cone {

struct QuadratureRule {
    std::vector<double> nodes;
    std::vector<double> weights;

    std::size_t size() const { return nodes.size(); }
};

// Gauss-Legendre rule on [-1, 1]. Rules are computed once per order and cached.
const QuadratureRule& gauss_legendre(int points);

// Composite Gauss-Legendre rule on [a, b] with equal-width panels.
QuadratureRule composite_gauss_legendre(double a, double b, int panels, int points);

// Appends the nodes of a `points`-point rule on [a, b] to `rule`.
void append_gauss_legendre(QuadratureRule& rule, double a, double b, int points);

}  // namespace cone
