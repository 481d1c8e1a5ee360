#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

namespace cone {

enum class GridKind { uniform, log_uniform, gauss_legendre };

std::string to_string(GridKind kind);
GridKind grid_kind_from_string(const std::string& name);

// Radial nodes with weights for the measure r^{n-1} dr on (0, r_max].
class RadialGrid {
public:
    RadialGrid(int n, GridKind kind, double r_max, std::vector<double> nodes, std::vector<double> weights);

    int dimension() const { return n_; }
    GridKind kind() const { return kind_; }
    double r_max() const { return r_max_; }
    std::size_t size() const { return nodes_.size(); }
    const std::vector<double>& nodes() const { return nodes_; }
    const std::vector<double>& weights() const { return weights_; }
    double node(std::size_t i) const { return nodes_[i]; }
    double weight(std::size_t i) const { return weights_[i]; }
    // Identity used as a cache key; equal for copies of one grid.
    std::uint64_t id() const { return id_; }

private:
    int n_;
    GridKind kind_;
    double r_max_;
    std::vector<double> nodes_;
    std::vector<double> weights_;
    std::uint64_t id_;
};

using GridPtr = std::shared_ptr<const RadialGrid>;

// Trapezoid (uniform), midpoint in log r (log_uniform, lower end r_max * 1e-4)
// or composite 10-point Gauss-Legendre (gauss_legendre).
GridPtr make_grid(int n, double r_max, std::size_t count, GridKind kind);

// Composite Gauss-Legendre grid on [0, r_max] with the given panel layout.
GridPtr make_gl_grid(int n, double r_max, int panels, int points_per_panel = 10);

}  // namespace cone
