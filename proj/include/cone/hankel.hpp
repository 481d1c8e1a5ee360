#pragma once

#include "cone/field.hpp"

#include <Eigen/Dense>

#include <memory>
#include <span>
#include <string>
#include <vector>

namespace cone {

// (x)^{-(n-2)/2} J_nu(x), finite at x = 0.
double hankel_kernel(double nu, double x, int n);

// Dense kernel K(j, i) = (rho_j r_i)^{-(n-2)/2} J_nu(rho_j r_i), cached per
// (nu, input grid, output grid). Cached matrices are never modified.
std::shared_ptr<const Eigen::MatrixXd> kernel_matrix(double nu, const RadialGrid& in, const RadialGrid& out);
void clear_kernel_cache();

struct TransformOptions {
    bool certify_tail = true;
    double tail_tolerance = 1e-8;
};

// max |f| over the outer 10% of the grid, relative to max |f| (0 for f = 0).
double tail_ratio(std::span<const cplx> f, const RadialGrid& grid);
// Throws TruncationError when tail_ratio exceeds the tolerance.
void certify_tail(std::span<const cplx> f, const RadialGrid& grid, double tolerance, const std::string& what);

double l2_norm(std::span<const cplx> f, const RadialGrid& grid);
cplx inner_product(std::span<const cplx> f, std::span<const cplx> g, const RadialGrid& grid);

std::vector<cplx> hankel_transform(double nu, std::span<const cplx> f, const RadialGrid& in, const RadialGrid& out,
                                   const TransformOptions& options = {});

// Direct (uncached) evaluation at arbitrary output points.
std::vector<cplx> hankel_transform_at(double nu, std::span<const cplx> f, const RadialGrid& in,
                                      std::span<const double> rho, const TransformOptions& options = {});

// | ||H_nu f|| - ||f|| |.
double isometry_defect(double nu, std::span<const cplx> f, const RadialGrid& in, const RadialGrid& out);

// -f'' - (n-1)/r f' + (nu^2 - ((n-2)/2)^2)/r^2 f by three-point differences.
// The outermost nodes must carry |f| <= 1e-3 max |f|.
std::vector<cplx> apply_A_nu(double nu, std::span<const cplx> f, const RadialGrid& grid);

struct HankelDefects {
    double nu;
    std::string profile;
    double involution;      // ||H H f - f|| / ||f||
    double isometry;        // | ||H f|| - ||f|| | / ||f||
    double self_adjoint;    // |<H f, g> - <f, H g>| / (||f|| ||g||)
    double diagonalization; // ||H A f - rho^2 H f|| / ||rho^2 H f||
};

struct HankelBattery {
    std::vector<double> orders{0.0, 0.5, 1.0, 5.5, 10.0};
    // Gaussian profiles exp(-(r - c)^2 / (2 w^2)) as (c, w).
    std::vector<std::pair<double, double>> profiles{{4, 0.5}, {5, 0.7}, {6, 0.8}, {7, 1.0}, {8, 0.6}, {9, 1.2}};
    double r_max = 20.0;
    int panels = 100;             // Gauss-Legendre panels of 10 points, mirrored spectral grid
    std::size_t fd_count = 1000;  // uniform grid for the differential operator
};

std::vector<HankelDefects> hankel_selftest(const HankelBattery& battery = {});

}  // namespace cone
