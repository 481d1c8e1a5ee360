#include "cone/bessel.hpp"

#include "cone/cutoff.hpp"
#include "cone/error.hpp"
#include "cone/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace cone::bessel {

namespace {

constexpr double pi = std::numbers::pi;
constexpr int kPanelPoints = 16;
// At most this much phase per Gauss-Legendre panel.
constexpr double kPhasePerPanel = 8.0;
constexpr double kImagResidueTol = 1e-10;
constexpr long kNodeCap = 200'000'000;

std::string params(double nu, double r) {
    std::ostringstream os;
    os.precision(17);
    os << "(nu=" << nu << ", r=" << r << ")";
    return os.str();
}

void check_domain(const char* fn, double nu, double r) {
    if (!(nu >= 0) || !(r >= 0) || !std::isfinite(nu) || !std::isfinite(r))
        throw DomainError(std::string(fn) + ": negative or non-finite argument " + params(nu, r));
}

double sin_nu_pi(double nu) {
    const double k = std::round(nu);
    const double s = std::sin(pi * (nu - k));
    return std::fmod(k, 2.0) == 0 ? s : -s;
}

// Integrates f over [a, b] with 16-point panels of width <= max_width.
template <class F>
double integrate(F&& f, double a, double b, double max_width) {
    if (!(b > a)) return 0.0;
    const long panels = std::max(1L, static_cast<long>(std::ceil((b - a) / max_width)));
    if (panels * kPanelPoints > kNodeCap) throw QuadratureError("panel refinement exceeds the node cap");
    const auto& gl = gauss_legendre(kPanelPoints);
    const double h = (b - a) / static_cast<double>(panels);
    double total = 0;
    for (long p = 0; p < panels; ++p) {
        const double mid = a + (static_cast<double>(p) + 0.5) * h;
        double s = 0;
        for (int k = 0; k < kPanelPoints; ++k) s += gl.weights[k] * f(mid + 0.5 * h * gl.nodes[k]);
        total += 0.5 * h * s;
    }
    return total;
}

double phase_width(double rate) { return std::min(pi / 8, kPhasePerPanel / std::max(rate, 1e-300)); }

// (1/pi) int_0^pi cos(r sin t - nu t) dt.
double schlafli_tilde(double nu, double r) {
    const auto f = [=](double t) { return std::cos(r * std::sin(t) - nu * t); };
    return integrate(f, 0.0, pi, phase_width(r + nu)) / pi;
}

std::vector<double> coefficients_a(double nu, int M) {
    std::vector<double> out;
    for (int m = 0; m <= M; ++m) out.push_back(asym_coeff(m, nu).a);
    return out;
}

std::vector<double> coefficients_b(double nu, int M) {
    std::vector<double> out;
    for (int m = 0; m <= M; ++m) out.push_back(asym_coeff(m, nu).b);
    return out;
}

}  // namespace

std::string to_string(Regime regime) {
    switch (regime) {
        case Regime::series: return "series";
        case Regime::small_argument: return "small_argument";
        case Regime::transition: return "transition";
        case Regime::oscillatory: return "oscillatory";
    }
    return "?";
}

std::string to_string(Method method) {
    switch (method) {
        case Method::series: return "series";
        case Method::schlafli: return "schlafli";
        case Method::asymptotic: return "asymptotic";
    }
    return "?";
}

Regime classify(double nu, double r) {
    check_domain("classify", nu, r);
    if (nu < 1 && r <= 20) return Regime::series;
    if (r <= nu / 2) return Regime::small_argument;
    if (r < 2 * nu) return Regime::transition;
    return Regime::oscillatory;
}

double eval_series(double nu, double r) {
    check_domain("eval_series", nu, r);
    if (r > std::max(20.0, nu)) throw RegimeError("eval_series: argument too large " + params(nu, r));
    if (r == 0) return nu == 0 ? 1.0 : 0.0;
    using ld = long double;
    const ld half = static_cast<ld>(r) / 2;
    const ld x2 = half * half;
    ld term = std::exp(static_cast<ld>(nu) * std::log(half) - std::lgamma(static_cast<ld>(nu) + 1));
    ld sum = term;
    for (int m = 1; m < 2000; ++m) {
        term *= -x2 / (static_cast<ld>(m) * (static_cast<ld>(nu) + m));
        sum += term;
        if (m > half && std::fabs(term) <= 1e-18L * std::fabs(sum)) break;
        if (term == 0) break;
    }
    return static_cast<double>(sum);
}

double eval_E(double nu, double r) {
    check_domain("eval_E", nu, r);
    if (!(r > 0)) throw DomainError("eval_E: r must be positive " + params(nu, r));
    const double s_nu = sin_nu_pi(nu);
    if (s_nu == 0) return 0.0;
    // Upper limit where the exponent reaches 37, i.e. the integrand is below 1e-16.
    const auto exponent = [=](double s) { return r * std::sinh(s) + nu * s; };
    double lo = 0, hi = std::asinh(37.0 / r);
    for (int it = 0; it < 200 && hi - lo > 1e-14 * hi; ++it) {
        const double mid = 0.5 * (lo + hi);
        (exponent(mid) < 37 ? lo : hi) = mid;
    }
    const double S = hi;
    const auto f = [&](double s) { return std::exp(-exponent(s)); };
    // Geometrically graded panels: the integrand decays on the scale 1/(r + nu).
    double a = 0, width = std::min(S, 0.5 / (r + nu));
    double total = 0;
    while (a < S) {
        const double b = std::min(S, a + width);
        total += integrate(f, a, b, b - a);
        a = b;
        width *= 2;
    }
    return s_nu / pi * total;
}

double eval_schlafli(double nu, double r) {
    check_domain("eval_schlafli", nu, r);
    if (!(r > 0) || r > 1e6) throw DomainError("eval_schlafli: r outside (0, 1e6] " + params(nu, r));
    // Full complex integrand over [-pi, pi]; the imaginary part must cancel.
    const double width = phase_width(r + nu);
    const auto re = [=](double t) { return std::cos(r * std::sin(t) - nu * t); };
    const auto im = [=](double t) { return std::sin(r * std::sin(t) - nu * t); };
    const double real = (integrate(re, -pi, 0.0, width) + integrate(re, 0.0, pi, width)) / (2 * pi);
    const double imag = (integrate(im, -pi, 0.0, width) + integrate(im, 0.0, pi, width)) / (2 * pi);
    if (std::fabs(imag) > kImagResidueTol)
        throw QuadratureError("eval_schlafli: imaginary residue " + std::to_string(imag) + " at " + params(nu, r));
    return real - eval_E(nu, r);
}

AsymCoeffs asym_coeff(int m, double nu) {
    if (m < 0) throw DomainError("asym_coeff: m must be >= 0");
    using ld = long double;
    const ld v = nu;
    ld pa = 1, pb = 1, fa = 1, fb = 1;
    for (int i = 0; i < 4 * m; ++i) pa *= v + 0.5L - 2 * m + i;
    for (int i = 0; i < 4 * m + 2; ++i) pb *= v - 0.5L - 2 * m + i;
    for (int k = 1; k <= 2 * m; ++k) fa *= k;
    fb = fa * (2 * m + 1);
    const ld sign = (m % 2 == 0) ? 1 : -1;
    const ld four_m = std::pow(4.0L, m);
    return {m, static_cast<double>(sign * pa / (four_m * fa)), static_cast<double>(sign * pb / (2 * four_m * fb))};
}

double asymptotic_threshold(double nu) { return std::max({2 * nu, 2 * nu * nu, 10.0}); }

Order::Order(double nu, int M) : nu_(nu), a_(coefficients_a(nu, M)), b_(coefficients_b(nu, M)) {
    check_domain("Order", nu, 0.0);
    if (M < 0) throw DomainError("Order: truncation order must be >= 0");
}

double Order::asymptotic(double r) const {
    if (!(r >= asymptotic_threshold(nu_)))
        throw RegimeError("eval_asymptotic: argument below max(2 nu, 2 nu^2, 10) " + params(nu_, r));
    const double inv2 = 1.0 / (r * r);
    double P = 0, Q = 0;
    for (std::size_t m = a_.size(); m-- > 0;) {
        P = P * inv2 + a_[m];
        Q = Q * inv2 + b_[m];
    }
    Q /= r;
    const double omega = r - (0.5 * nu_ + 0.25) * pi;
    return std::sqrt(2 / (pi * r)) * (P * std::cos(omega) - Q * std::sin(omega));
}

Evaluation Order::evaluate(double r) const {
    const Regime regime = classify(nu_, r);
    switch (regime) {
        case Regime::series:
        case Regime::small_argument: return {eval_series(nu_, r), regime, Method::series};
        case Regime::transition: break;
        case Regime::oscillatory:
            if (r >= asymptotic_threshold(nu_)) return {asymptotic(r), regime, Method::asymptotic};
            break;
    }
    return {schlafli_tilde(nu_, r) - eval_E(nu_, r), regime, Method::schlafli};
}

double eval_asymptotic(double nu, double r, int M) {
    check_domain("eval_asymptotic", nu, r);
    return Order(nu, M).asymptotic(r);
}

Evaluation evaluate(double nu, double r, int M) {
    check_domain("eval", nu, r);
    return Order(nu, M).evaluate(r);
}

double eval(double nu, double r) { return evaluate(nu, r).value; }

std::vector<double> eval_sequence(double nu0, int count, double r) {
    check_domain("eval_sequence", nu0, r);
    std::vector<double> out(std::max(count, 0));
    int k = 0;
    if (count >= 2 && nu0 + 1 <= r / 2) {
        out[0] = eval(nu0, r);
        out[1] = eval(nu0 + 1, r);
        for (k = 2; k < count && nu0 + k <= r / 2; ++k)
            out[k] = 2 * (nu0 + k - 1) / r * out[k - 1] - out[k - 2];
    }
    for (; k < count; ++k) out[k] = eval(nu0 + k, r);
    return out;
}

SchlafliPieces eval_schlafli_pieces(double nu, double r, double delta) {
    check_domain("eval_schlafli_pieces", nu, r);
    if (r < 1) throw DomainError("eval_schlafli_pieces: r must be >= 1 " + params(nu, r));
    if (!(delta > 0 && delta < pi / 8)) throw DomainError("eval_schlafli_pieces: delta outside (0, pi/8)");
    const double width = phase_width(r + nu);
    const double fine = std::min(width, delta / 16);  // resolves the cutoff transition
    const auto phase = [=](double t) { return std::cos(r * std::sin(t) - nu * t); };
    const auto chi = [=](double t) { return chi_delta(t, delta); };
    SchlafliPieces p{};
    p.j1 = (integrate(phase, 0.0, delta, width) +
            integrate([&](double t) { return phase(t) * chi(t); }, delta, 2 * delta, fine)) / pi;
    p.j2 = integrate(phase, pi / 2 + delta, pi, width) / pi;
    p.j3 = (integrate([&](double t) { return phase(t) * (1 - chi(t)); }, delta, 2 * delta, fine) +
            integrate(phase, 2 * delta, pi / 2 + delta, width)) / pi;
    return p;
}

std::complex<double> eval_psi(const PhaseKernelParams& p) {
    check_domain("eval_psi", p.nu, p.r);
    if (!(p.delta > 0 && p.delta < pi / 8)) throw DomainError("eval_psi: delta outside (0, pi/8)");
    if (!std::isfinite(p.m)) throw DomainError("eval_psi: m must be finite");
    const std::function<double(double)> beta = p.beta ? p.beta : [](double x) { return bump(x); };
    const double d = p.delta;

    // Angular rule on [0, 2 delta]; the integrand in theta is even after pairing +-theta.
    QuadratureRule th;
    const double th_rate = 2 * p.r + p.nu;
    const auto add_panels = [](QuadratureRule& q, double a, double b, double w) {
        const long panels = std::max(1L, static_cast<long>(std::ceil((b - a) / w)));
        if (panels * kPanelPoints > kNodeCap / 1000)
            throw QuadratureError("eval_psi: oscillatory quadrature needs too many panels");
        for (long k = 0; k < panels; ++k)
            append_gauss_legendre(q, a + (b - a) * k / panels, a + (b - a) * (k + 1) / panels, kPanelPoints);
    };
    add_panels(th, 0.0, d, std::min(d, phase_width(th_rate)));
    add_panels(th, d, 2 * d, std::min(d / 16, phase_width(th_rate)));
    std::vector<double> chi(th.size()), sn(th.size());
    for (std::size_t k = 0; k < th.size(); ++k) {
        chi[k] = 2 * chi_delta(th.nodes[k], d) * th.weights[k];
        sn[k] = std::sin(th.nodes[k]);
    }

    QuadratureRule rh;
    const double rh_rate = 4 * std::fabs(p.m) + p.r * std::sin(2 * d);
    add_panels(rh, 1.0, 2.0, std::min(1.0 / 64, phase_width(rh_rate)));

    std::complex<double> total{};
    for (std::size_t j = 0; j < rh.size(); ++j) {
        const double rho = rh.nodes[j];
        const double amp = beta(rho);
        if (amp == 0) continue;
        double c = 0;
        for (std::size_t k = 0; k < th.size(); ++k) c += chi[k] * std::cos(rho * p.r * sn[k] - p.nu * th.nodes[k]);
        const double w = rh.weights[j] * amp * std::pow(rho, 0.5 * p.n) * c;
        total += w * std::polar(1.0, p.m * rho * rho);
    }
    return total;
}

}  // namespace cone::bessel
