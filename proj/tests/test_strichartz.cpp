#include <doctest.h>

#include "cone/cutoff.hpp"
#include "cone/error.hpp"
#include "cone/strichartz.hpp"

#include <cmath>

using namespace cone;

namespace {

ConeModel plane() { return {2, CrossSection::circle(1), 0}; }

StrichartzOptions quick() {
    StrichartzOptions o;
    o.tail_tolerance = 2e-2;
    o.r_min = 1.0 / 16;
    return o;
}

ModeField ring(double scale) {
    const auto table = std::make_shared<const SpectrumTable>(build_spectrum(plane(), 1));
    const auto grid = make_gl_grid(2, 12, 240);
    ModeField u(table, grid);
    for (std::size_t i = 0; i < grid->size(); ++i) u.mode(0)[i] = bump(scale * grid->node(i));
    return u;
}

}  // namespace

TEST_CASE("spectral bump ratio does not depend on N") {
    const auto flat = [](double) { return cplx(1, 0); };
    const auto a = strichartz_ratio(plane(), flat, 1, quick());
    const auto b = strichartz_ratio(plane(), flat, 32, quick());
    CHECK(a.ratio == doctest::Approx(b.ratio).epsilon(1e-12));
    CHECK(b.lhs == doctest::Approx(32 * a.lhs).epsilon(1e-12));
    CHECK(b.datum_norm == doctest::Approx(32 * a.datum_norm).epsilon(1e-12));
    CHECK(a.ratio > 0);
}

TEST_CASE("parabolic rescaling covariance") {
    // u0(2 r) localized at 2N has the same ratio as u0 localized at N.
    const auto a = strichartz_ratio(plane(), ring(1), 2, quick());
    const auto b = strichartz_ratio(plane(), ring(2), 4, quick());
    CHECK(std::abs(a.ratio - b.ratio) <= 1e-3 * a.ratio);
}

TEST_CASE("Strichartz input checks") {
    auto u = ring(1);
    u.mode(1)[3] = 1;
    CHECK_THROWS_AS(strichartz_ratio(plane(), u, 1), DomainError);
    CHECK_THROWS_AS(strichartz_ratio(plane(), ring(1), 0), DomainError);
    StrichartzOptions inf;
    inf.q = kInf;
    CHECK_THROWS_AS(strichartz_ratio(plane(), [](double) { return cplx(1); }, 1, inf), DomainError);
    const ConeModel listed{2, CrossSection::explicit_spectrum({{0, 1}, {1, 2}}), 0};
    CHECK_THROWS_AS(strichartz_ratio(listed, [](double) { return cplx(1); }, 1), UnsupportedCrossSection);
    CHECK_THROWS_AS(strichartz_ratio(plane(), [](double) { return cplx(0); }, 1), DomainError);
}
