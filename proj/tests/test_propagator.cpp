#include <doctest.h>

#include "cone/error.hpp"
#include "cone/propagator.hpp"

#include <cmath>
#include <numbers>

using namespace cone;

namespace {

constexpr double pi = std::numbers::pi;

// Plane R^2 as the cone over the unit circle, with a Gaussian datum.
struct Plane {
    ConeModel model{2, CrossSection::circle(1), 0};
    TablePtr table = std::make_shared<const SpectrumTable>(build_spectrum(model, 3));
    GridPtr physical = make_gl_grid(2, 130, 260);
    GridPtr spectral = make_gl_grid(2, 9, 450);
    ModeField datum{table, physical};

    Plane() {
        for (std::size_t i = 0; i < physical->size(); ++i) {
            const double r = physical->node(i);
            datum.mode(0)[i] = std::sqrt(2 * pi) * std::exp(-r * r / 2);
        }
    }

    // Free evolution of exp(-r^2/2) under the multiplier e^{i t rho^2}.
    static cplx exact(double t, double r) {
        const cplx d(1, -2 * t);
        return std::exp(-r * r / (2.0 * d)) / d;
    }
};

double relative_distance(const FieldData& a, const FieldData& b) {
    double num = 0, den = 0;
    const auto& w = a.grid()->weights();
    for (std::size_t s = 0; s < a.slots(); ++s)
        for (std::size_t i = 0; i < a.nodes(); ++i) {
            num += w[i] * std::norm(a.mode(s)[i] - b.mode(s)[i]);
            den += w[i] * std::norm(b.mode(s)[i]);
        }
    return std::sqrt(num / den);
}

}  // namespace

TEST_CASE("distorted Fourier transform of the plane Gaussian") {
    Plane P;
    auto spec = distorted_fourier(P.datum, P.spectral);
    CHECK(spec.active_slots() == std::vector<std::size_t>{0});
    double worst = 0;
    for (std::size_t j = 0; j < P.spectral->size(); ++j) {
        const double rho = P.spectral->node(j);
        worst = std::max(worst, std::abs(spec.mode(0)[j] - std::sqrt(2 * pi) * std::exp(-rho * rho / 2)));
    }
    CHECK(worst < 1e-6);
    CHECK(std::fabs(mass(spec) - mass(P.datum)) <= 1e-6 * mass(P.datum));

    ModeField zero(P.table, P.physical);
    auto z = distorted_fourier(zero, P.spectral);
    for (auto v : z.values()) CHECK(v == cplx{});
    CHECK(mass(evolve(z, 1.0, P.physical)) == 0.0);
}

TEST_CASE("evolution: identity, unitarity and the free Euclidean flow") {
    Plane P;
    auto spec = distorted_fourier(P.datum, P.spectral);
    CHECK(relative_distance(evolve(spec, 0.0, P.physical), P.datum) <= 1e-6);

    const double m0 = mass(P.datum);
    for (double t : {0.1, 1.0, 10.0, -10.0, -3.7, -0.4, 2.2, 6.5})
        CHECK(std::fabs(mass(evolve(spec, t, P.physical)) - m0) <= 1e-6 * m0);

    double worst = 0;
    for (double t : {-2.0, -1.0, -0.5, 0.25, 1.0, 2.0}) {
        auto u = evolve(spec, t, P.physical);
        for (std::size_t i = 0; i < P.physical->size() && P.physical->node(i) <= 8; ++i) {
            const cplx numeric = u.mode(0)[i] / std::sqrt(2 * pi);  // constant eigenfunction 1/sqrt(2 pi)
            worst = std::max(worst, std::abs(numeric - Plane::exact(t, P.physical->node(i))));
        }
    }
    CHECK(worst <= 1e-4);
}

TEST_CASE("time reversal and semigroup through physical space") {
    Plane P;
    auto spec = distorted_fourier(P.datum, P.spectral);
    auto u1 = evolve(spec, 1.0, P.physical);
    auto back = evolve(distorted_fourier(u1, P.spectral), -1.0, P.physical);
    CHECK(relative_distance(back, P.datum) <= 1e-5);

    auto u_direct = evolve(spec, 1.7, P.physical);
    auto u_steps = evolve(distorted_fourier(u1, P.spectral), 0.7, P.physical);
    CHECK(relative_distance(u_steps, u_direct) <= 1e-5);
}

TEST_CASE("modes decouple") {
    Plane P;
    ModeField single(P.table, P.physical);
    const std::size_t slot = P.table->slot(2, 1);
    for (std::size_t i = 0; i < P.physical->size(); ++i) {
        const double r = P.physical->node(i);
        single.mode(slot)[i] = r * r * std::exp(-0.5 * std::pow(r - 4, 2));
    }
    auto spec = distorted_fourier(single, P.spectral);
    CHECK(spec.active_slots() == std::vector<std::size_t>{slot});
    auto u = evolve(spec, 0.6, P.physical);
    CHECK(u.active_slots() == std::vector<std::size_t>{slot});

    const std::vector<double> times{-1.0, 0.0, 0.5, 3.0};
    auto ev = sample_solution(spec, times, P.physical);
    REQUIRE(ev.masses.size() == times.size());
    for (double m : ev.masses) CHECK(m == doctest::Approx(ev.masses[1]).epsilon(1e-6));
    for (const auto& f : ev.fields) CHECK(f.active_slots() == std::vector<std::size_t>{slot});
}

TEST_CASE("frequency localization") {
    Plane P;
    auto grid = make_gl_grid(2, 40, 200);
    SpectralField spec(P.table, grid);
    for (std::size_t s = 0; s < spec.slots(); ++s)
        for (std::size_t j = 0; j < grid->size(); ++j)
            spec.mode(s)[j] = cplx(std::exp(-0.01 * grid->node(j)), 0.1 * static_cast<double>(s));

    for (double N : {0.5, 2.0, 8.0}) {
        auto loc = frequency_localize(spec, N);
        for (std::size_t s = 0; s < loc.slots(); ++s)
            for (std::size_t j = 0; j < grid->size(); ++j) {
                const double rho = grid->node(j);
                if (rho <= N || rho >= 2 * N) CHECK(loc.mode(s)[j] == cplx{});
            }
        auto twice = frequency_localize(frequency_localize(spec, N), 4 * N);
        for (auto v : twice.values()) CHECK(v == cplx{});
    }

    // Dyadic partition of unity over the whole grid.
    SpectralField sum(P.table, grid);
    const int lo = static_cast<int>(std::floor(std::log2(grid->node(0)))) - 1;
    const int hi = static_cast<int>(std::ceil(std::log2(grid->r_max()))) + 1;
    for (int k = lo; k <= hi; ++k) {
        auto piece = frequency_localize(spec, std::ldexp(1.0, k), BumpVariant::partition);
        for (std::size_t q = 0; q < sum.values().size(); ++q) sum.values()[q] += piece.values()[q];
    }
    double worst = 0;
    for (std::size_t q = 0; q < sum.values().size(); ++q)
        worst = std::max(worst, std::abs(sum.values()[q] - spec.values()[q]));
    CHECK(worst <= 1e-8);
    CHECK_THROWS_AS(frequency_localize(spec, 0), DomainError);
}
