#include <doctest.h>

#include "cone/error.hpp"
#include "cone/hankel.hpp"

#include <cmath>
#include <numbers>
#include <random>

using namespace cone;

namespace {

template <class F>
std::vector<cplx> sample(const RadialGrid& g, F f) {
    std::vector<cplx> out(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) out[i] = f(g.node(i));
    return out;
}

double max_abs_diff(const std::vector<cplx>& a, const std::vector<cplx>& b) {
    double m = 0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

}  // namespace

TEST_CASE("kernel values") {
    // n = 3, nu = 1/2: x^{-1/2} J_{1/2}(x) = sqrt(2/pi) sin(x)/x.
    CHECK(hankel_kernel(0.5, 0, 3) == doctest::Approx(std::sqrt(2 / std::numbers::pi)).epsilon(1e-15));
    for (double x : {1e-8, 0.3, 0.999999, 1.0, 1.5, 7.0})
        CHECK(hankel_kernel(0.5, x, 3) ==
              doctest::Approx(std::sqrt(2 / std::numbers::pi) * std::sin(x) / x).epsilon(1e-12));
    CHECK(hankel_kernel(1.5, 0, 3) == 0.0);
    CHECK(hankel_kernel(2.0, 0.5, 2) == doctest::Approx(std::cyl_bessel_j(2.0, 0.5)).epsilon(1e-14));
}

TEST_CASE("self-reciprocal Gaussian") {
    auto g = make_gl_grid(2, 12, 60);
    auto zero = std::vector<cplx>(g->size());
    for (auto v : hankel_transform(0, zero, *g, *g)) CHECK(v == cplx{});

    auto f = sample(*g, [](double r) { return std::exp(-r * r / 2); });
    auto Hf = hankel_transform(0, f, *g, *g);
    CHECK(max_abs_diff(Hf, f) < 1e-6);
    // Independent oracle: composite Simpson with the standard-library J_0.
    for (double rho : {0.5, 2.0, 4.5}) {
        const int N = 20000;
        const double h = 12.0 / N;
        double s = 0;
        for (int k = 0; k <= N; ++k) {
            const double r = k * h;
            const double wk = (k == 0 || k == N) ? 1 : (k % 2 ? 4 : 2);
            s += wk * std::exp(-r * r / 2) * std::cyl_bessel_j(0.0, rho * r) * r;
        }
        s *= h / 3;
        auto at = hankel_transform_at(0, f, *g, std::vector<double>{rho});
        CHECK(std::abs(at[0] - s) < 1e-9);
    }
    CHECK(isometry_defect(0, f, *g, *g) <= 1e-6);
}

TEST_CASE("round trip, isometry and self-adjointness on a reduced battery") {
    HankelBattery b;
    b.profiles = {{4, 0.55}, {6, 0.8}};
    b.r_max = 15;
    b.panels = 75;
    b.fd_count = 750;
    for (const auto& row : hankel_selftest(b)) {
        INFO("nu = " << row.nu << " " << row.profile);
        CHECK(row.involution <= 1e-6);
        CHECK(row.isometry <= 1e-6);
        CHECK(row.self_adjoint <= 1e-8);
        CHECK(row.diagonalization <= 1e-3);
    }
}

TEST_CASE("random band-limited profile, nu = 7") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> centre(4, 8), width(0.6, 1.0);
    std::normal_distribution<double> amp;
    std::vector<std::array<double, 4>> bumps;
    for (int k = 0; k < 6; ++k) bumps.push_back({centre(rng), width(rng), amp(rng), amp(rng)});
    auto g = make_gl_grid(2, 15, 75);
    auto f = sample(*g, [&](double r) {
        cplx s{};
        for (auto [c, w, a, b] : bumps) s += cplx(a, b) * std::exp(-0.5 * std::pow((r - c) / w, 2));
        return s;
    });
    CHECK(isometry_defect(7, f, *g, *g) / l2_norm(f, *g) <= 1e-5);
}

TEST_CASE("linearity") {
    auto g = make_gl_grid(2, 15, 40);
    auto f = sample(*g, [](double r) { return std::exp(-std::pow(r - 5, 2)); });
    auto h = sample(*g, [](double r) { return cplx(0, 1) * std::exp(-2 * std::pow(r - 7, 2)); });
    const cplx a(0.3, -1.2);
    std::vector<cplx> comb(f.size());
    for (std::size_t i = 0; i < f.size(); ++i) comb[i] = a * f[i] + h[i];
    auto Hc = hankel_transform(3, comb, *g, *g);
    auto Hf = hankel_transform(3, f, *g, *g);
    auto Hh = hankel_transform(3, h, *g, *g);
    for (std::size_t j = 0; j < Hc.size(); ++j) CHECK(std::abs(Hc[j] - (a * Hf[j] + Hh[j])) < 1e-14);
}

TEST_CASE("transform at nodes equals the cached transform") {
    auto g = make_gl_grid(3, 12, 30);
    auto f = sample(*g, [](double r) { return std::exp(-std::pow(r - 4, 2)); });
    auto H = hankel_transform(1.5, f, *g, *g);
    auto Hat = hankel_transform_at(1.5, f, *g, g->nodes());
    CHECK(max_abs_diff(H, Hat) < 1e-13);
    // n = 3, nu = 1/2 reduces to the sine transform sqrt(2/pi) int f(r) sin(r rho)/(r rho) r^2 dr.
    auto S = hankel_transform_at(0.5, f, *g, std::vector<double>{1.3});
    double direct = 0;
    for (std::size_t i = 0; i < g->size(); ++i)
        direct += std::sqrt(2 / std::numbers::pi) * std::sin(1.3 * g->node(i)) / (1.3 * g->node(i)) *
                  f[i].real() * g->weight(i);
    CHECK(S[0].real() == doctest::Approx(direct).epsilon(1e-13));
}

TEST_CASE("tail certification") {
    auto g = make_gl_grid(2, 6, 30);
    auto f = sample(*g, [](double r) { return std::exp(-std::pow(r - 5, 2)); });
    CHECK(tail_ratio(f, *g) > 1e-8);
    CHECK_THROWS_AS(hankel_transform(0, f, *g, *g), TruncationError);
    CHECK_NOTHROW(hankel_transform(0, f, *g, *g, {false, 0}));
    CHECK(tail_ratio(std::vector<cplx>(g->size()), *g) == 0.0);
}

TEST_CASE("radial operator by finite differences") {
    const auto analytic = [](double r) {
        const double f = std::exp(-std::pow(r - 3, 2));
        const double f1 = -2 * (r - 3) * f, f2 = (4 * std::pow(r - 3, 2) - 2) * f;
        return -f2 - f1 / r;
    };
    double errs[2];
    int k = 0;
    for (std::size_t count : {600, 1200}) {
        auto g = make_grid(2, 12, count, GridKind::uniform);
        auto f = sample(*g, [](double r) { return std::exp(-std::pow(r - 3, 2)); });
        auto Af = apply_A_nu(0, f, *g);
        double e = 0;
        for (std::size_t i = 1; i + 1 < g->size(); ++i) e = std::max(e, std::abs(Af[i] - analytic(g->node(i))));
        errs[k++] = e;
    }
    CHECK(errs[0] < 1e-3);
    CHECK(errs[0] / errs[1] == doctest::Approx(4.0).epsilon(0.1));

    // n = 3, nu = 3/2: A = -d^2 - (2/r) d + 2/r^2.
    auto g = make_grid(3, 12, 2400, GridKind::uniform);
    auto f = sample(*g, [](double r) { return std::exp(-std::pow(r - 4, 2)); });
    auto Af = apply_A_nu(1.5, f, *g);
    for (std::size_t i = 1; i + 1 < g->size(); i += 97) {
        const double r = g->node(i), e = std::exp(-std::pow(r - 4, 2));
        const double f1 = -2 * (r - 4) * e, f2 = (4 * std::pow(r - 4, 2) - 2) * e;
        CHECK(std::fabs(Af[i].real() - (-f2 - 2 / r * f1 + 2 / (r * r) * e)) < 1e-4);
    }

    auto zero = std::vector<cplx>(g->size());
    for (auto v : apply_A_nu(2, zero, *g)) CHECK(v == cplx{});
    auto tip = sample(*g, [](double r) { return std::exp(-r * r); });
    CHECK_THROWS_AS(apply_A_nu(0, tip, *g), BoundaryError);
    auto edge = sample(*g, [](double r) { return std::exp(-std::pow(r - 12, 2)); });
    CHECK_THROWS_AS(apply_A_nu(0, edge, *g), BoundaryError);
}
