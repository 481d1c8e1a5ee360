#include "cone/quadrature.hpp"

#include "cone/error.hpp"

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>

namespace cone {

namespace {

QuadratureRule compute_rule(int n) {
    QuadratureRule rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    for (int i = 0; i < (n + 1) / 2; ++i) {
        // Newton iteration on P_n starting from the Tricomi estimate.
        long double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        long double dp = 0;
        for (int iter = 0; iter < 100; ++iter) {
            long double p0 = 1, p1 = x;
            for (int k = 2; k <= n; ++k) {
                long double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1);
            long double dx = p1 / dp;
            x -= dx;
            if (std::fabs(static_cast<double>(dx)) < 1e-19) break;
        }
        long double w = 2 / ((1 - x * x) * dp * dp);
        rule.nodes[i] = -static_cast<double>(x);
        rule.nodes[n - 1 - i] = static_cast<double>(x);
        rule.weights[i] = rule.weights[n - 1 - i] = static_cast<double>(w);
    }
    if (n % 2 == 1) rule.nodes[n / 2] = 0.0;
    return rule;
}

}  // namespace

const QuadratureRule& gauss_legendre(int points) {
    if (points < 1 || points > 256) throw DomainError("gauss_legendre: order out of range");
    static std::mutex mutex;
    static std::map<int, std::unique_ptr<QuadratureRule>> cache;
    std::lock_guard<std::mutex> lock(mutex);
    auto& slot = cache[points];
    if (!slot) slot = std::make_unique<QuadratureRule>(compute_rule(points));
    return *slot;
}

void append_gauss_legendre(QuadratureRule& rule, double a, double b, int points) {
    const auto& base = gauss_legendre(points);
    const double half = 0.5 * (b - a), mid = 0.5 * (a + b);
    for (int i = 0; i < points; ++i) {
        rule.nodes.push_back(mid + half * base.nodes[i]);
        rule.weights.push_back(half * base.weights[i]);
    }
}

QuadratureRule composite_gauss_legendre(double a, double b, int panels, int points) {
    if (panels < 1) throw DomainError("composite_gauss_legendre: panels < 1");
    QuadratureRule rule;
    rule.nodes.reserve(static_cast<std::size_t>(panels) * points);
    rule.weights.reserve(static_cast<std::size_t>(panels) * points);
    const double h = (b - a) / panels;
    for (int p = 0; p < panels; ++p) {
        const double lo = a + p * h;
        const double hi = (p + 1 == panels) ? b : lo + h;
        append_gauss_legendre(rule, lo, hi, points);
    }
    return rule;
}

}  // namespace cone
