#include "cone/grid.hpp"

#include "cone/error.hpp"
#include "cone/quadrature.hpp"

#include <atomic>
#include <cmath>

namespace cone {

namespace {

std::uint64_t next_grid_id() {
    static std::atomic<std::uint64_t> counter{1};
    return counter++;
}

constexpr int kPanelPoints = 10;
constexpr double kLogSpan = 1e-4;

}  // namespace

std::string to_string(GridKind kind) {
    switch (kind) {
        case GridKind::uniform: return "uniform";
        case GridKind::log_uniform: return "log_uniform";
        case GridKind::gauss_legendre: return "gauss_legendre";
    }
    return "?";
}

GridKind grid_kind_from_string(const std::string& name) {
    if (name == "uniform") return GridKind::uniform;
    if (name == "log_uniform" || name == "log-uniform") return GridKind::log_uniform;
    if (name == "gauss_legendre" || name == "gauss-legendre") return GridKind::gauss_legendre;
    throw ConfigError("unknown grid kind `" + name + "`");
}

RadialGrid::RadialGrid(int n, GridKind kind, double r_max, std::vector<double> nodes, std::vector<double> weights)
    : n_(n), kind_(kind), r_max_(r_max), nodes_(std::move(nodes)), weights_(std::move(weights)), id_(next_grid_id()) {
    if (nodes_.size() != weights_.size() || nodes_.empty()) throw ShapeError("RadialGrid: node/weight mismatch");
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
        if (!(nodes_[i] > 0) || (i > 0 && !(nodes_[i] > nodes_[i - 1])))
            throw DomainError("RadialGrid: nodes must be positive and strictly increasing");
        if (!(weights_[i] > 0)) throw DomainError("RadialGrid: weights must be positive");
    }
}

GridPtr make_grid(int n, double r_max, std::size_t count, GridKind kind) {
    if (n < 2) throw DomainError("make_grid: n must be >= 2");
    if (!(r_max > 0) || !std::isfinite(r_max)) throw DomainError("make_grid: r_max must be positive");
    if (count < 16) throw DomainError("make_grid: count must be >= 16");
    std::vector<double> nodes(count), weights(count);
    switch (kind) {
        case GridKind::uniform: {
            const double h = r_max / static_cast<double>(count);
            for (std::size_t i = 0; i < count; ++i) {
                nodes[i] = h * static_cast<double>(i + 1);
                weights[i] = h * std::pow(nodes[i], n - 1);
            }
            weights.back() *= 0.5;
            break;
        }
        case GridKind::log_uniform: {
            const double lo = std::log(r_max * kLogSpan), du = -std::log(kLogSpan) / static_cast<double>(count);
            for (std::size_t i = 0; i < count; ++i) {
                nodes[i] = std::exp(lo + (static_cast<double>(i) + 0.5) * du);
                weights[i] = du * std::pow(nodes[i], n);
            }
            break;
        }
        case GridKind::gauss_legendre: {
            const int panels = static_cast<int>((count + kPanelPoints - 1) / kPanelPoints);
            return make_gl_grid(n, r_max, panels, kPanelPoints);
        }
    }
    return std::make_shared<const RadialGrid>(n, kind, r_max, std::move(nodes), std::move(weights));
}

GridPtr make_gl_grid(int n, double r_max, int panels, int points_per_panel) {
    if (n < 2) throw DomainError("make_gl_grid: n must be >= 2");
    if (!(r_max > 0)) throw DomainError("make_gl_grid: r_max must be positive");
    auto rule = composite_gauss_legendre(0.0, r_max, panels, points_per_panel);
    for (std::size_t i = 0; i < rule.size(); ++i) rule.weights[i] *= std::pow(rule.nodes[i], n - 1);
    return std::make_shared<const RadialGrid>(n, GridKind::gauss_legendre, r_max, std::move(rule.nodes),
                                              std::move(rule.weights));
}

}  // namespace cone
