#include "cone/hankel.hpp"

#include "cone/bessel.hpp"
#include "cone/error.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <map>
#include <mutex>
#include <sstream>
#include <tuple>

namespace cone {

namespace {

std::uint64_t bits(double x) {
    std::uint64_t b;
    std::memcpy(&b, &x, sizeof b);
    return b;
}

struct Cache {
    std::mutex mutex;
    std::map<std::tuple<std::uint64_t, std::uint64_t, std::uint64_t>, std::shared_ptr<const Eigen::MatrixXd>> map;
};

Cache& cache() {
    static Cache c;
    return c;
}

// x^{-c} J_nu(x) by the power series with the leading factor in log space.
double kernel_series(double nu, double x, double c) {
    if (x == 0) return nu == c ? std::exp(-nu * std::log(2.0) - std::lgamma(nu + 1)) : 0.0;
    const double half = 0.5 * x;
    double term = std::exp(nu * std::log(half) - c * std::log(x) - std::lgamma(nu + 1));
    double sum = term;
    for (int m = 1; m < 200; ++m) {
        term *= -half * half / (m * (nu + m));
        sum += term;
        if (std::fabs(term) <= 1e-17 * std::fabs(sum)) break;
    }
    return sum;
}

std::vector<cplx> apply_kernel(const Eigen::MatrixXd& K, std::span<const cplx> f, const RadialGrid& in) {
    const Eigen::Index N = static_cast<Eigen::Index>(in.size());
    Eigen::VectorXd re(N), im(N);
    for (Eigen::Index i = 0; i < N; ++i) {
        re(i) = f[i].real() * in.weight(i);
        im(i) = f[i].imag() * in.weight(i);
    }
    const Eigen::VectorXd gr = K * re, gi = K * im;
    std::vector<cplx> g(static_cast<std::size_t>(K.rows()));
    for (Eigen::Index j = 0; j < K.rows(); ++j) g[j] = {gr(j), gi(j)};
    return g;
}

void check_input(double nu, std::span<const cplx> f, const RadialGrid& in, const TransformOptions& opt) {
    if (!(nu >= 0) || !std::isfinite(nu)) throw DomainError("hankel_transform: order must be >= 0");
    if (f.size() != in.size()) throw ShapeError("hankel_transform: profile length does not match the grid");
    if (opt.certify_tail) certify_tail(f, in, opt.tail_tolerance, "hankel_transform input");
}

}  // namespace

double hankel_kernel(double nu, double x, int n) {
    const double c = 0.5 * (n - 2);
    if (c == 0) return bessel::eval(nu, x);
    if (x < 1) return kernel_series(nu, x, c);
    return std::pow(x, -c) * bessel::eval(nu, x);
}

std::shared_ptr<const Eigen::MatrixXd> kernel_matrix(double nu, const RadialGrid& in, const RadialGrid& out) {
    if (in.dimension() != out.dimension()) throw ShapeError("kernel_matrix: grid dimensions differ");
    auto& c = cache();
    const auto key = std::make_tuple(bits(nu), in.id(), out.id());
    {
        std::lock_guard<std::mutex> lock(c.mutex);
        if (auto it = c.map.find(key); it != c.map.end()) return it->second;
        // The kernel is symmetric in (r, rho): reuse the reverse pair when present.
        if (auto it = c.map.find(std::make_tuple(bits(nu), out.id(), in.id())); it != c.map.end()) {
            auto T = std::make_shared<const Eigen::MatrixXd>(it->second->transpose());
            return c.map.emplace(key, std::move(T)).first->second;
        }
    }
    const Eigen::Index rows = static_cast<Eigen::Index>(out.size()), cols = static_cast<Eigen::Index>(in.size());
    auto K = std::make_shared<Eigen::MatrixXd>(rows, cols);
    const bool symmetric = in.id() == out.id();
    const int n = in.dimension();
    const double cexp = 0.5 * (n - 2);
    const bessel::Order order(nu);
    const auto entry = [&](double x) {
        if (cexp == 0) return order(x);
        if (x < 1) return kernel_series(nu, x, cexp);
        return std::pow(x, -cexp) * order(x);
    };
#pragma omp parallel for schedule(dynamic, 8)
    for (Eigen::Index j = 0; j < rows; ++j) {
        const Eigen::Index first = symmetric ? j : 0;
        for (Eigen::Index i = first; i < cols; ++i) (*K)(j, i) = entry(out.node(j) * in.node(i));
    }
    if (symmetric)
        for (Eigen::Index j = 0; j < rows; ++j)
            for (Eigen::Index i = 0; i < j; ++i) (*K)(j, i) = (*K)(i, j);
    std::lock_guard<std::mutex> lock(c.mutex);
    return c.map.emplace(key, std::move(K)).first->second;
}

void clear_kernel_cache() {
    std::lock_guard<std::mutex> lock(cache().mutex);
    cache().map.clear();
}

double tail_ratio(std::span<const cplx> f, const RadialGrid& grid) {
    double peak = 0, tail = 0;
    const double edge = 0.9 * grid.r_max();
    for (std::size_t i = 0; i < f.size(); ++i) {
        const double a = std::abs(f[i]);
        peak = std::max(peak, a);
        if (grid.node(i) >= edge) tail = std::max(tail, a);
    }
    return peak > 0 ? tail / peak : 0.0;
}

void certify_tail(std::span<const cplx> f, const RadialGrid& grid, double tolerance, const std::string& what) {
    const double t = tail_ratio(f, grid);
    if (t > tolerance) {
        std::ostringstream os;
        os << what << ": profile not negligible near r_max = " << grid.r_max() << " (tail ratio " << t
           << " > " << tolerance << ")";
        throw TruncationError(os.str());
    }
}

double l2_norm(std::span<const cplx> f, const RadialGrid& grid) {
    double s = 0;
    for (std::size_t i = 0; i < f.size(); ++i) s += grid.weight(i) * std::norm(f[i]);
    return std::sqrt(s);
}

cplx inner_product(std::span<const cplx> f, std::span<const cplx> g, const RadialGrid& grid) {
    cplx s{};
    for (std::size_t i = 0; i < f.size(); ++i) s += grid.weight(i) * f[i] * std::conj(g[i]);
    return s;
}

std::vector<cplx> hankel_transform(double nu, std::span<const cplx> f, const RadialGrid& in, const RadialGrid& out,
                                   const TransformOptions& options) {
    check_input(nu, f, in, options);
    return apply_kernel(*kernel_matrix(nu, in, out), f, in);
}

std::vector<cplx> hankel_transform_at(double nu, std::span<const cplx> f, const RadialGrid& in,
                                      std::span<const double> rho, const TransformOptions& options) {
    check_input(nu, f, in, options);
    std::vector<cplx> g(rho.size());
    const int n = in.dimension();
#pragma omp parallel for schedule(dynamic, 4)
    for (std::size_t j = 0; j < rho.size(); ++j) {
        cplx s{};
        for (std::size_t i = 0; i < in.size(); ++i)
            if (f[i] != cplx{}) s += hankel_kernel(nu, rho[j] * in.node(i), n) * in.weight(i) * f[i];
        g[j] = s;
    }
    return g;
}

double isometry_defect(double nu, std::span<const cplx> f, const RadialGrid& in, const RadialGrid& out) {
    const auto g = hankel_transform(nu, f, in, out);
    return std::fabs(l2_norm(g, out) - l2_norm(f, in));
}

std::vector<cplx> apply_A_nu(double nu, std::span<const cplx> f, const RadialGrid& grid) {
    const std::size_t N = grid.size();
    if (f.size() != N) throw ShapeError("apply_A_nu: profile length does not match the grid");
    double peak = 0;
    for (const auto& v : f) peak = std::max(peak, std::abs(v));
    if (peak > 0 && (std::abs(f[0]) > 1e-3 * peak || std::abs(f[N - 1]) > 1e-3 * peak))
        throw BoundaryError("apply_A_nu: profile support touches the grid boundary");
    const int n = grid.dimension();
    const double c = 0.5 * (n - 2);
    const double potential = nu * nu - c * c;
    std::vector<cplx> out(N);
    for (std::size_t i = 0; i < N; ++i) {
        // Stencil nodes; the end nodes reuse the neighbouring interior stencil.
        const std::size_t k = std::clamp<std::size_t>(i, 1, N - 2);
        const double x0 = grid.node(k - 1), x1 = grid.node(k), x2 = grid.node(k + 1), x = grid.node(i);
        // Derivatives of the quadratic interpolant through the three nodes, evaluated at x.
        const double d0 = (x0 - x1) * (x0 - x2), d1 = (x1 - x0) * (x1 - x2), d2 = (x2 - x0) * (x2 - x1);
        const cplx f1 = f[k - 1] * ((x - x1) + (x - x2)) / d0 + f[k] * ((x - x0) + (x - x2)) / d1 +
                        f[k + 1] * ((x - x0) + (x - x1)) / d2;
        const cplx f2 = 2.0 * (f[k - 1] / d0 + f[k] / d1 + f[k + 1] / d2);
        out[i] = -f2 - (n - 1) / x * f1 + potential / (x * x) * f[i];
    }
    return out;
}

std::vector<HankelDefects> hankel_selftest(const HankelBattery& battery) {
    const auto grid = make_gl_grid(2, battery.r_max, battery.panels);
    const auto fd = make_grid(2, battery.r_max, battery.fd_count, GridKind::uniform);
    const auto gaussian = [](const RadialGrid& g, double c, double w) {
        std::vector<cplx> f(g.size());
        for (std::size_t i = 0; i < g.size(); ++i) f[i] = std::exp(-0.5 * std::pow((g.node(i) - c) / w, 2));
        return f;
    };
    std::vector<HankelDefects> rows;
    for (double nu : battery.orders) {
        for (std::size_t p = 0; p < battery.profiles.size(); ++p) {
            const auto [c, w] = battery.profiles[p];
            const auto [c2, w2] = battery.profiles[(p + 1) % battery.profiles.size()];
            const auto f = gaussian(*grid, c, w), g = gaussian(*grid, c2, w2);
            const auto Hf = hankel_transform(nu, f, *grid, *grid);
            const auto Hg = hankel_transform(nu, g, *grid, *grid);
            const auto HHf = hankel_transform(nu, Hf, *grid, *grid, {false, 0});
            const double nf = l2_norm(f, *grid), ng = l2_norm(g, *grid);
            std::vector<cplx> diff(f.size());
            for (std::size_t i = 0; i < f.size(); ++i) diff[i] = HHf[i] - f[i];

            HankelDefects row{};
            row.nu = nu;
            std::ostringstream name;
            name << "gaussian(c=" << c << ",w=" << w << ")";
            row.profile = name.str();
            row.involution = l2_norm(diff, *grid) / nf;
            row.isometry = std::fabs(l2_norm(Hf, *grid) - nf) / nf;
            row.self_adjoint = std::abs(inner_product(Hf, g, *grid) - inner_product(f, Hg, *grid)) / (nf * ng);

            const auto u = gaussian(*fd, c, w);
            const auto Au = apply_A_nu(nu, u, *fd);
            const auto HAu = hankel_transform(nu, Au, *fd, *grid, {false, 0});
            const auto Hu = hankel_transform(nu, u, *fd, *grid);
            std::vector<cplx> lhs(Hu.size()), err(Hu.size());
            for (std::size_t j = 0; j < Hu.size(); ++j) {
                lhs[j] = grid->node(j) * grid->node(j) * Hu[j];
                err[j] = HAu[j] - lhs[j];
            }
            row.diagonalization = l2_norm(err, *grid) / l2_norm(lhs, *grid);
            rows.push_back(row);
        }
    }
    return rows;
}

}  // namespace cone
