#include "cone/strichartz.hpp"

#include "cone/cutoff.hpp"
#include "cone/error.hpp"
#include "cone/hankel.hpp"
#include "cone/quadrature.hpp"

#include <cmath>
#include <memory>

namespace cone {

namespace {

// Piecewise barycentric interpolation on Gauss-Legendre panels over [1, 2].
class PanelInterpolant {
public:
    static constexpr int kPanels = 64;
    static constexpr int kPoints = 16;

    explicit PanelInterpolant(const std::function<std::vector<cplx>(const std::vector<double>&)>& sample) {
        const auto rule = composite_gauss_legendre(1.0, 2.0, kPanels, kPoints);
        nodes_ = rule.nodes;
        values_ = sample(nodes_);
        const auto& ref = gauss_legendre(kPoints).nodes;
        bary_.resize(kPoints);
        for (int i = 0; i < kPoints; ++i) {
            double w = 1;
            for (int k = 0; k < kPoints; ++k)
                if (k != i) w *= ref[static_cast<std::size_t>(i)] - ref[static_cast<std::size_t>(k)];
            bary_[static_cast<std::size_t>(i)] = 1 / w;
        }
    }

    cplx operator()(double x) const {
        if (x <= 1 || x >= 2) return 0;
        const int panel = std::min(kPanels - 1, static_cast<int>((x - 1) * kPanels));
        const std::size_t base = static_cast<std::size_t>(panel) * kPoints;
        cplx num = 0;
        double den = 0;
        for (std::size_t i = 0; i < kPoints; ++i) {
            const double diff = x - nodes_[base + i];
            if (diff == 0) return values_[base + i];
            const double w = bary_[i] / diff;
            num += w * values_[base + i];
            den += w;
        }
        return num / den;
    }

private:
    std::vector<double> nodes_;
    std::vector<cplx> values_;
    std::vector<double> bary_;
};

StrichartzResult rescaled_ratio(const ConeModel& model, const std::function<cplx(double)>& b_tilde, double N,
                                const StrichartzOptions& options) {
    model.validate();
    const int n = model.n;
    const double q = options.q;
    if (!(q >= 2) || !std::isfinite(q)) throw DomainError("Strichartz exponent q must be finite and at least 2");
    if (!(N > 0)) throw DomainError("frequency scale N must be positive");
    const double volume = model.cross_section_volume();

    const auto full = build_spectrum(model, nu_from_lambda(model.a, n) + 1e-12);
    auto table = std::make_shared<const SpectrumTable>(
        SpectrumTable(n, full.K(), std::vector<SpectrumEntry>{SpectrumEntry{full[0].nu, full[0].lambda, 1}}));
    LocalizedData data;
    data.table = table;
    data.basis.emplace_back([&](double s) { return b_tilde(s).real(); });
    data.basis.emplace_back([&](double s) { return b_tilde(s).imag(); });
    Eigen::MatrixXcd Z(1, 2);
    Z << cplx(1, 0), cplx(0, 1);
    data.trials.push_back(Z);

    const auto rule = composite_gauss_legendre(1.0, 2.0, 64, 16);
    double norm2 = 0;
    for (std::size_t j = 0; j < rule.nodes.size(); ++j) {
        const double s = rule.nodes[j];
        norm2 += rule.weights[j] * std::pow(s, n - 1) * std::norm(b_tilde(s) * bump(s));
    }
    if (!(norm2 > 0)) throw DomainError("Strichartz datum has no spectral mass in [N, 2N]");

    StrichartzResult res;
    res.N = N;
    res.q = q;
    double total = 0;
    double R = options.r_min;
    for (int k = 0;; ++k, R *= 2) {
        if (k == options.max_annuli)
            throw TruncationError("Strichartz radial sum did not settle within " + std::to_string(k) + " annuli");
        const double part = std::pow(annulus_norms(data, q, R, options.numerics).lhs[0], q);
        total += part;
        res.annuli = k + 1;
        res.r_max = 2 * R;
        if (2 * R >= options.r_floor && part <= options.tail_tolerance * total) break;
    }
    // The lowest mode has constant angular profile |Sigma|^{-1/2}.
    const double v_norm = std::pow(volume, 1 / q - 0.5) * std::pow(total, 1 / q);
    res.lhs = std::pow(N, n - (n + 2) / q) * v_norm;
    res.datum_norm = std::pow(N, n / 2.0) * std::sqrt(norm2);
    res.ratio = v_norm / std::sqrt(norm2);
    return res;
}

}  // namespace

StrichartzResult strichartz_ratio(const ConeModel& model, const std::function<cplx(double)>& b, double N,
                                  const StrichartzOptions& options) {
    if (!b) throw DomainError("Strichartz profile is empty");
    return rescaled_ratio(model, [&](double s) { return b(N * s); }, N, options);
}

StrichartzResult strichartz_ratio(const ConeModel& model, const ModeField& u0, double N,
                                  const StrichartzOptions& options) {
    u0.validate();
    if (u0.table()->dimension() != model.n) throw ShapeError("datum and cone dimensions differ");
    for (std::size_t slot : u0.active_slots())
        if (slot != 0) throw DomainError("Strichartz ratio needs radial data (lowest mode only)");
    if (!(N > 0)) throw DomainError("frequency scale N must be positive");
    const double nu0 = (*u0.table())[0].nu;
    const PanelInterpolant profile([&](const std::vector<double>& sigma) {
        std::vector<double> rho(sigma.size());
        for (std::size_t i = 0; i < sigma.size(); ++i) rho[i] = N * sigma[i];
        return hankel_transform_at(nu0, u0.mode(0), *u0.grid(), rho);
    });
    return rescaled_ratio(model, [&](double s) { return profile(s); }, N, options);
}

}  // namespace cone
