#include "cone/estimates.hpp"

#include "cone/bessel.hpp"
#include "cone/error.hpp"
#include "cone/quadrature.hpp"

#include <fftw3.h>

#include <memory>
#include <mutex>
#include <numbers>
#include <random>
#include <sstream>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace cone {

namespace {

double default_beta(double rho) { return bump(rho); }

const std::function<double(double)>& beta_or_default(const std::function<double(double)>& beta) {
    static const std::function<double(double)> fallback = default_beta;
    return beta ? beta : fallback;
}

double default_dt(double q) {
    if (q <= 2) return 1.0;
    if (q <= 4) return 0.8;
    if (q <= 5) return 0.6;
    if (std::isfinite(q)) return std::min(0.3, 2.7 / q);
    return 0.2;
}

double default_r_width(double q) { return q <= 2 ? 2.5 : 1.25; }

bool smooth_size(std::size_t n) {
    for (std::size_t p : {2u, 3u, 5u, 7u})
        while (n % p == 0) n /= p;
    return n == 1;
}

std::size_t fft_size(double want) {
    auto n = static_cast<std::size_t>(std::ceil(want));
    if (n % 2) ++n;
    while (!smooth_size(n)) n += 2;
    return n;
}

std::mutex& fftw_planner_mutex() {
    static std::mutex m;
    return m;
}

struct FftwBuffer {
    void* p = nullptr;
    explicit FftwBuffer(std::size_t bytes) : p(fftw_malloc(bytes)) {
        if (!p) throw std::bad_alloc();
    }
    ~FftwBuffer() { fftw_free(p); }
    FftwBuffer(const FftwBuffer&) = delete;
    FftwBuffer& operator=(const FftwBuffer&) = delete;
};

struct R2CPlan {
    fftw_plan plan = nullptr;
    explicit R2CPlan(std::size_t n) {
        FftwBuffer in(sizeof(double) * n), out(sizeof(fftw_complex) * (n / 2 + 1));
        std::lock_guard lock(fftw_planner_mutex());
        plan = fftw_plan_dft_r2c_1d(static_cast<int>(n), static_cast<double*>(in.p),
                                    static_cast<fftw_complex*>(out.p), FFTW_ESTIMATE);
        if (!plan) throw NumericalError("FFTW could not plan a transform of size " + std::to_string(n));
    }
    ~R2CPlan() {
        std::lock_guard lock(fftw_planner_mutex());
        fftw_destroy_plan(plan);
    }
    R2CPlan(const R2CPlan&) = delete;
    R2CPlan& operator=(const R2CPlan&) = delete;
};

int max_threads() {
#ifdef _OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

void check_q(double q) {
    if (!(q >= 2)) throw DomainError("norm exponent q must lie in [2, inf], got " + std::to_string(q));
}

}  // namespace

double default_slope_threshold(EstimateId id) { return id == EstimateId::E36 ? 0.1 : 0.05; }

std::string to_string(EstimateId id) {
    switch (id) {
        case EstimateId::E31: return "E31";
        case EstimateId::E32: return "E32";
        case EstimateId::E33: return "E33";
        case EstimateId::E34: return "E34";
        case EstimateId::E35: return "E35";
        case EstimateId::E36: return "E36";
    }
    return "?";
}

EstimateId estimate_id_from_string(const std::string& name) {
    for (auto id : {EstimateId::E31, EstimateId::E32, EstimateId::E33, EstimateId::E34, EstimateId::E35,
                    EstimateId::E36})
        if (to_string(id) == name) return id;
    throw ConfigError("unknown estimate `" + name + "` (expected E31..E36)");
}

void EstimateSpec::validate() const {
    auto fail = [&](const std::string& msg) { throw DomainError(to_string(id) + ": " + msg); };
    if (n < 2) fail("dimension must be at least 2");
    check_q(q);
    if (!(p >= 1)) fail("p must be at least 1");
    switch (id) {
        case EstimateId::E34:
        case EstimateId::E35: {
            const bool e34 = id == EstimateId::E34;
            if (e34 ? !(p >= 2 && p < 4) : !(p >= 1 && p < 2))
                fail(e34 ? "p must lie in [2, 4)" : "p must lie in [1, 2)");
            const double q_expected = p == 1 ? kInf : 3 * p / (p - 1);
            if (std::abs(q - q_expected) > 1e-12 * std::max(1.0, q_expected) && q != q_expected)
                fail("q must equal 3p'");
            break;
        }
        case EstimateId::E36:
            if (!(epsilon > 0)) fail("epsilon must be positive");
            break;
        default: break;
    }
}

EstimateSpec estimate_spec(EstimateId id, int n, double p, double epsilon) {
    const double half_decay = -(n - 1) / 2.0;
    EstimateSpec s{id, n, 2, 2, 0, 0, 0, epsilon};
    switch (id) {
        case EstimateId::E31:
            s = {id, n, 2, 2, 0, 0.5, n / 2.0, epsilon};
            break;
        case EstimateId::E32:
            s = {id, n, kInf, 1, 1.0 / 3, half_decay, 0, epsilon};
            break;
        case EstimateId::E33:
            s = {id, n, kInf, 2, 0, half_decay, 0, epsilon};
            break;
        case EstimateId::E34:
        case EstimateId::E35: {
            if (p == 0) p = id == EstimateId::E34 ? 3.0 : 1.5;
            const double q = p == 1 ? kInf : 3 * p / (p - 1);
            const double gamma = id == EstimateId::E34 ? 4 / q : 2 / q + 1.0 / 3;
            s = {id, n, q, p, gamma, (n - 1) * (1 / q - 0.5), n / q, epsilon};
            break;
        }
        case EstimateId::E36:
            s = {id, n, 4, 4, 1, -(n - 1) / 4.0 + epsilon, n / 4.0, epsilon};
            break;
    }
    s.validate();
    return s;
}

cplx LocalizedData::b(std::size_t trial, std::size_t slot, double rho) const {
    const auto& Z = trials.at(trial);
    cplx sum = 0;
    for (std::size_t k = 0; k < basis.size(); ++k) sum += Z(static_cast<Eigen::Index>(slot), static_cast<Eigen::Index>(k)) * basis[k](rho);
    return sum;
}

void LocalizedData::validate() const {
    if (!table) throw ShapeError("localized data has no spectrum table");
    if (basis.empty()) throw ShapeError("localized data has no basis functions");
    for (const auto& Z : trials) {
        if (Z.rows() != static_cast<Eigen::Index>(table->slots()) || Z.cols() != static_cast<Eigen::Index>(basis.size()))
            throw ShapeError("coefficient matrix must be slots x basis");
        if (!Z.allFinite()) throw DomainError("non-finite coefficient");
    }
}

LocalizedData random_coefficients(TablePtr table, int trials, std::uint64_t seed, double band) {
    if (!table) throw ShapeError("random_coefficients: null table");
    if (trials < 1) throw DomainError("trial count must be positive");
    constexpr int kBasis = 4;
    LocalizedData data;
    data.table = table;
    for (int k = 0; k < kBasis; ++k)
        data.basis.emplace_back([k](double rho) { return std::cos(k * std::numbers::pi * (rho - 1)); });
    const int n = table->dimension();
    for (int trial = 0; trial < trials; ++trial) {
        Eigen::MatrixXcd Z = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(table->slots()), kBasis);
        for (std::size_t e = 0; e < table->size(); ++e) {
            const auto& entry = (*table)[e];
            if (entry.nu > band) continue;
            const double scale = std::pow(1 + entry.nu, -(n - 1) / 2.0 - 1) / std::numbers::sqrt2;
            for (int l = 0; l < entry.d; ++l) {
                std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                                  static_cast<std::uint32_t>(trial), static_cast<std::uint32_t>(e),
                                  static_cast<std::uint32_t>(l)};
                std::mt19937_64 rng(seq);
                std::normal_distribution<double> normal;
                const auto row = static_cast<Eigen::Index>(table->slot(e, l));
                for (int k = 0; k < kBasis; ++k) {
                    const double re = normal(rng);
                    const double im = normal(rng);
                    Z(row, k) = scale * cplx(re, im);
                }
            }
        }
        data.trials.push_back(std::move(Z));
    }
    return data;
}

double angular_l2_profile(const LocalizedData& data, std::size_t trial, double t, double r,
                          const std::function<double(double)>& beta_in) {
    data.validate();
    if (!(r > 0)) throw DomainError("angular_l2_profile: r must be positive");
    const auto& beta = beta_or_default(beta_in);
    const int n = data.table->dimension();
    const int panels = static_cast<int>(std::ceil((4 * std::abs(t) + r) / 3)) + 16;
    const auto rule = composite_gauss_legendre(1.0, 2.0, panels, 16);
    const auto& Z = data.trials.at(trial);

    std::vector<cplx> kernel(rule.nodes.size());
    std::vector<std::vector<double>> phi(data.basis.size(), std::vector<double>(rule.nodes.size()));
    for (std::size_t j = 0; j < rule.nodes.size(); ++j) {
        const double rho = rule.nodes[j];
        kernel[j] = rule.weights[j] * beta(rho) * std::pow(rho, n / 2.0) * std::polar(1.0, t * rho * rho);
        for (std::size_t k = 0; k < data.basis.size(); ++k) phi[k][j] = data.basis[k](rho);
    }
    double sum = 0;
    for (std::size_t e = 0; e < data.table->size(); ++e) {
        const auto& entry = (*data.table)[e];
        bool any = false;
        for (int l = 0; l < entry.d && !any; ++l)
            any = Z.row(static_cast<Eigen::Index>(data.table->slot(e, l))).squaredNorm() > 0;
        if (!any) continue;
        const bessel::Order J(entry.nu);
        std::vector<cplx> basis_integrals(data.basis.size(), 0.0);
        for (std::size_t j = 0; j < rule.nodes.size(); ++j) {
            const cplx w = kernel[j] * J(r * rule.nodes[j]);
            for (std::size_t k = 0; k < data.basis.size(); ++k) basis_integrals[k] += w * phi[k][j];
        }
        for (int l = 0; l < entry.d; ++l) {
            const auto row = static_cast<Eigen::Index>(data.table->slot(e, l));
            cplx I = 0;
            for (std::size_t k = 0; k < data.basis.size(); ++k) I += Z(row, static_cast<Eigen::Index>(k)) * basis_integrals[k];
            sum += std::norm(I);
        }
    }
    return std::pow(r, -(n - 2) / 2.0) * std::sqrt(sum);
}

double weighted_coefficient_norm(const LocalizedData& data, std::size_t trial, const EstimateSpec& spec) {
    data.validate();
    const auto rule = composite_gauss_legendre(1.0, 2.0, 64, 16);
    const int n = data.table->dimension();
    double acc = 0;
    for (std::size_t j = 0; j < rule.nodes.size(); ++j) {
        const double rho = rule.nodes[j];
        double s = 0;
        for (std::size_t slot = 0; slot < data.table->slots(); ++slot)
            s += spec.weight((*data.table)[data.table->entry_of_slot(slot)].nu) * std::norm(data.b(trial, slot, rho));
        const double f = std::sqrt(s) * bump(rho);
        if (std::isfinite(spec.p))
            acc += rule.weights[j] * std::pow(rho, n - 1) * std::pow(f, spec.p);
        else
            acc = std::max(acc, f);
    }
    return std::isfinite(spec.p) ? std::pow(acc, 1 / spec.p) : acc;
}

MixedNormResult mixed_norm(const std::function<double(double, double)>& profile, double q, double R, int n,
                           double T0, double dt, const TimeTruncation& truncation) {
    check_q(q);
    if (!(R > 0) || !(T0 > 0) || !(dt > 0)) throw DomainError("mixed_norm: R, T0 and dt must be positive");
    const bool sup = !std::isfinite(q);
    const int panels = std::max(1, static_cast<int>(std::ceil(R / 0.5)));
    const auto rule = composite_gauss_legendre(R, 2 * R, panels, 10);

    // Accumulates the slab dt * sum_r over midpoints t in [lo, hi) and (-hi, -lo].
    auto slab = [&](long lo, long hi) {
        double acc = 0;
        for (long k = lo; k < hi; ++k) {
            for (double sign : {1.0, -1.0}) {
                const double t = sign * (k + 0.5) * dt;
                for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
                    const double v = std::abs(profile(t, rule.nodes[i]));
                    if (sup)
                        acc = std::max(acc, v);
                    else
                        acc += dt * rule.weights[i] * std::pow(rule.nodes[i], n - 1) * std::pow(v, q);
                }
            }
        }
        return acc;
    };
    auto combine = [&](double a, double b) { return sup ? std::max(a, b) : a + b; };
    auto finish = [&](double a) { return sup ? a : std::pow(a, 1 / q); };

    long K = std::max(1L, std::lround(T0 / dt));
    double inner = slab(0, K / 2);
    double total = combine(inner, slab(K / 2, K));
    MixedNormResult res;
    for (int doubling = 0;; ++doubling) {
        res.value = finish(total);
        res.previous = finish(inner);
        res.T = K * dt;
        res.doublings = doubling;
        if (std::abs(res.value - res.previous) <= truncation.tolerance * res.value) return res;
        if (doubling == truncation.max_doublings) break;
        inner = total;
        total = combine(total, slab(K, 2 * K));
        K *= 2;
    }
    std::ostringstream msg;
    msg.precision(10);
    msg << "time truncation did not converge by T = " << res.T << ": " << res.previous << " -> " << res.value;
    throw TruncationError(msg.str());
}

AnnulusNorms annulus_norms(const LocalizedData& data, double q, double R, const ScanNumerics& numerics,
                           const std::function<double(double)>& beta_in) {
    data.validate();
    check_q(q);
    if (!(R > 0)) throw DomainError("annulus radius must be positive");
    const auto& beta = beta_or_default(beta_in);
    const auto& table = *data.table;
    const int n = table.dimension();
    const bool sup = !std::isfinite(q);
    const std::size_t B = data.basis.size();
    const std::size_t trials = data.trial_count();
    if (trials == 0) throw ShapeError("localized data has no trials");

    // One group per spectrum entry that carries data in some trial.
    struct Group {
        double nu;
        Eigen::Index d;
        Eigen::MatrixXcd Z;  // B x (d * trials), column trial * d + l
    };
    std::vector<Group> groups;
    for (std::size_t e = 0; e < table.size(); ++e) {
        const auto d = static_cast<Eigen::Index>(table[e].d);
        Eigen::MatrixXcd Z(static_cast<Eigen::Index>(B), d * static_cast<Eigen::Index>(trials));
        for (std::size_t tr = 0; tr < trials; ++tr)
            for (Eigen::Index l = 0; l < d; ++l)
                Z.col(static_cast<Eigen::Index>(tr) * d + l) =
                    data.trials[tr].row(static_cast<Eigen::Index>(table.slot(e, static_cast<int>(l)))).transpose();
        if (Z.squaredNorm() > 0) groups.push_back({table[e].nu, d, std::move(Z)});
    }

    AnnulusNorms out;
    out.lhs.assign(trials, 0.0);
    out.lhs_half.assign(trials, 0.0);
    if (groups.empty()) {
        out.converged = true;
        return out;
    }
    std::vector<bessel::Order> orders;
    for (const auto& g : groups) orders.emplace_back(g.nu);

    const double width = numerics.r_panel_width > 0 ? numerics.r_panel_width : default_r_width(q);
    const int r_panels = std::max(1, static_cast<int>(std::ceil(R / width)));
    const auto r_rule = composite_gauss_legendre(R, 2 * R, r_panels, numerics.r_panel_points);
    const std::size_t nr = r_rule.nodes.size();
    const double dt_target = numerics.dt > 0 ? numerics.dt : default_dt(q);

    double T_half = 2 * (R + numerics.t_slack);
    for (int doubling = 0; doubling <= numerics.truncation.max_doublings; ++doubling, T_half *= 2) {
        const double ds = std::numbers::pi / T_half;
        const auto samples = static_cast<std::size_t>(std::floor(3 / ds)) + 1;  // s_j = 1 + j ds < 4
        const std::size_t N = fft_size(std::max(2 * T_half / dt_target, static_cast<double>(samples + 1)));
        const std::size_t H = N / 2 + 1;
        const double dt = 2 * T_half / static_cast<double>(N);
        const R2CPlan plan(N);

        // Basis weights h_k(s) ds including beta and the rho^{n/2} / (2 sqrt s) Jacobian.
        std::vector<double> sqrt_s(samples);
        std::vector<std::vector<double>> h(B, std::vector<double>(samples));
        for (std::size_t j = 0; j < samples; ++j) {
            const double s = 1 + static_cast<double>(j) * ds;
            const double rho = std::sqrt(s);
            sqrt_s[j] = rho;
            const double common = beta(rho) * std::pow(rho, n / 2.0) / (2 * rho) * ds;
            for (std::size_t k = 0; k < B; ++k) h[k][j] = common * data.basis[k](rho);
        }

        std::vector<double> full(nr * trials, 0.0), half(nr * trials, 0.0), where(sup ? nr * trials : 0, 0.0);
        std::size_t active_total = 0;
        const long n_groups = static_cast<long>(groups.size());
        const int team = numerics.threads > 0 ? numerics.threads : max_threads();

#pragma omp parallel num_threads(team) reduction(+ : active_total)
        {
            FftwBuffer in_buf(sizeof(double) * N);
            auto* in = static_cast<double*>(in_buf.p);
            std::vector<std::unique_ptr<FftwBuffer>> outs;
            for (long g = 0; g < n_groups; ++g)
                for (std::size_t k = 0; k < B; ++k)
                    outs.push_back(std::make_unique<FftwBuffer>(sizeof(fftw_complex) * H));
            std::vector<double> J(samples), amp(H);
            std::vector<std::size_t> rows;

#pragma omp for schedule(dynamic)
            for (long ir = 0; ir < static_cast<long>(nr); ++ir) {
                const double r = r_rule.nodes[static_cast<std::size_t>(ir)];
                std::fill(amp.begin(), amp.end(), 0.0);
                for (long g = 0; g < n_groups; ++g) {
                    for (std::size_t j = 0; j < samples; ++j) J[j] = orders[static_cast<std::size_t>(g)](r * sqrt_s[j]);
                    for (std::size_t k = 0; k < B; ++k) {
                        for (std::size_t j = 0; j < samples; ++j) in[j] = J[j] * h[k][j];
                        std::fill(in + samples, in + N, 0.0);
                        auto* o = static_cast<fftw_complex*>(outs[static_cast<std::size_t>(g) * B + k]->p);
                        fftw_execute_dft_r2c(plan.plan, in, o);
                        for (std::size_t m = 0; m < H; ++m)
                            amp[m] = std::max(amp[m], o[m][0] * o[m][0] + o[m][1] * o[m][1]);
                    }
                }
                const double peak = *std::max_element(amp.begin(), amp.end());
                const double cut = peak * numerics.skip_tolerance * numerics.skip_tolerance;
                // Row list: index m >= 0 means t = m dt, and m + H means t = -m dt.
                rows.clear();
                for (std::size_t m = 0; m < H; ++m) {
                    if (peak == 0 || amp[m] < cut) continue;
                    rows.push_back(m);
                    if (m != 0 && m != N / 2) rows.push_back(m + H);
                }
                active_total += rows.size();
                if (rows.empty()) continue;
                const auto A = static_cast<Eigen::Index>(rows.size());
                Eigen::MatrixXd S = Eigen::MatrixXd::Zero(A, static_cast<Eigen::Index>(trials));
                Eigen::MatrixXcd F(A, static_cast<Eigen::Index>(B));
                for (long g = 0; g < n_groups; ++g) {
                    for (std::size_t k = 0; k < B; ++k) {
                        const auto* o = static_cast<const fftw_complex*>(outs[static_cast<std::size_t>(g) * B + k]->p);
                        for (Eigen::Index a = 0; a < A; ++a) {
                            const std::size_t m = rows[static_cast<std::size_t>(a)];
                            // The transform carries e^{-2 pi i m j / N}; positive times use the conjugate.
                            F(a, static_cast<Eigen::Index>(k)) =
                                m < H ? cplx(o[m][0], -o[m][1]) : cplx(o[m - H][0], o[m - H][1]);
                        }
                    }
                    const auto& grp = groups[static_cast<std::size_t>(g)];
                    const Eigen::MatrixXcd I = F * grp.Z;
                    for (std::size_t tr = 0; tr < trials; ++tr)
                        S.col(static_cast<Eigen::Index>(tr)) +=
                            I.middleCols(static_cast<Eigen::Index>(tr) * grp.d, grp.d).cwiseAbs2().rowwise().sum();
                }
                const double c = std::pow(r, -(n - 2.0));
                const double w = r_rule.weights[static_cast<std::size_t>(ir)] * std::pow(r, n - 1);
                for (std::size_t tr = 0; tr < trials; ++tr) {
                    double acc_full = 0, acc_half = 0, t_max = 0;
                    for (Eigen::Index a = 0; a < A; ++a) {
                        const std::size_t m = rows[static_cast<std::size_t>(a)];
                        const double t = static_cast<double>(m < H ? m : m - H) * dt;
                        const double P2 = c * S(a, static_cast<Eigen::Index>(tr));
                        const double v = sup ? std::sqrt(P2) : dt * std::pow(P2, q / 2);
                        const bool inner = t <= T_half / 2;
                        if (sup) {
                            if (v > acc_full) t_max = m < H ? t : -t;
                            acc_full = std::max(acc_full, v);
                            if (inner) acc_half = std::max(acc_half, v);
                        } else {
                            acc_full += v;
                            if (inner) acc_half += v;
                        }
                    }
                    const std::size_t idx = static_cast<std::size_t>(ir) * trials + tr;
                    full[idx] = sup ? acc_full : w * acc_full;
                    half[idx] = sup ? acc_half : w * acc_half;
                    if (sup) where[idx] = t_max;
                }
            }
        }

        bool converged = true;
        if (sup) {
            out.arg_t.assign(trials, 0.0);
            out.arg_r.assign(trials, r_rule.nodes[0]);
        }
        for (std::size_t tr = 0; tr < trials; ++tr) {
            double f = 0, hf = 0;
            for (std::size_t ir = 0; ir < nr; ++ir) {
                const std::size_t idx = ir * trials + tr;
                if (sup && full[idx] > f) {
                    out.arg_t[tr] = where[idx];
                    out.arg_r[tr] = r_rule.nodes[ir];
                }
                f = sup ? std::max(f, full[idx]) : f + full[idx];
                hf = sup ? std::max(hf, half[idx]) : hf + half[idx];
            }
            out.lhs[tr] = sup ? f : std::pow(f, 1 / q);
            out.lhs_half[tr] = sup ? hf : std::pow(hf, 1 / q);
            if (std::abs(out.lhs[tr] - out.lhs_half[tr]) > numerics.truncation.tolerance * out.lhs[tr])
                converged = false;
        }
        out.T = T_half;
        out.doublings = doubling;
        out.r_nodes = nr;
        out.t_nodes = active_total;
        out.dt = dt;
        out.dr = r_rule.nodes[0] - R;
        for (std::size_t i = 1; i < nr; ++i) out.dr = std::max(out.dr, r_rule.nodes[i] - r_rule.nodes[i - 1]);
        out.dr = std::max(out.dr, 2 * R - r_rule.nodes[nr - 1]);
        out.converged = converged;
        if (converged) return out;
    }
    std::ostringstream msg;
    msg.precision(10);
    msg << "annulus R = " << R << ": time truncation did not converge by T = " << out.T;
    for (std::size_t tr = 0; tr < trials; ++tr)
        if (std::abs(out.lhs[tr] - out.lhs_half[tr]) > numerics.truncation.tolerance * out.lhs[tr]) {
            msg << " (trial " << tr << ": " << out.lhs_half[tr] << " -> " << out.lhs[tr] << ")";
            break;
        }
    throw TruncationError(msg.str());
}

double refine_supremum(const LocalizedData& data, std::size_t trial, const AnnulusNorms& norms, double R,
                       const std::function<double(double)>& beta) {
    if (trial >= norms.arg_t.size()) throw ShapeError("refine_supremum: no grid maximizer recorded");
    double t = norms.arg_t[trial], r = norms.arg_r[trial];
    auto f = [&](double tt, double rr) { return angular_l2_profile(data, trial, tt, rr, beta); };
    double best = f(t, r);
    // Golden-section search along one coordinate, keeping the best value seen.
    auto search = [&](double lo, double hi, auto&& g) {
        const double phi = (std::sqrt(5.0) - 1) / 2;
        double a = lo, b = hi;
        double x1 = b - phi * (b - a), x2 = a + phi * (b - a);
        double f1 = g(x1), f2 = g(x2);
        for (int it = 0; it < 14; ++it) {
            if (f1 > f2) {
                b = x2; x2 = x1; f2 = f1; x1 = b - phi * (b - a); f1 = g(x1);
            } else {
                a = x1; x1 = x2; f1 = f2; x2 = a + phi * (b - a); f2 = g(x2);
            }
        }
        return f1 > f2 ? std::pair{x1, f1} : std::pair{x2, f2};
    };
    for (int sweep = 0; sweep < 3; ++sweep) {
        auto [tn, ft] = search(t - norms.dt, t + norms.dt, [&](double x) { return f(x, r); });
        if (ft > best) { best = ft; t = tn; }
        const double lo = std::max(R, r - norms.dr), hi = std::min(2 * R, r + norms.dr);
        auto [rn, fr] = search(lo, hi, [&](double x) { return f(t, x); });
        if (fr > best) { best = fr; r = rn; }
    }
    return std::max(best, norms.lhs.at(trial));
}

RatioResult localized_ratio(const EstimateSpec& spec, const LocalizedData& data, double R, std::size_t trial,
                            const ScanNumerics& numerics) {
    spec.validate();
    if (data.table && data.table->dimension() != spec.n) throw DomainError("estimate and cone dimensions differ");
    LocalizedData single{data.table, data.basis, {data.trials.at(trial)}};
    const auto norms = annulus_norms(single, spec.q, R, numerics);
    RatioResult res;
    res.lhs = std::isfinite(spec.q) ? norms.lhs[0] : refine_supremum(single, 0, norms, R);
    res.rhs = spec.envelope(R) * weighted_coefficient_norm(single, 0, spec);
    if (!(res.rhs > 0)) throw DomainError("localized_ratio: coefficient norm vanishes");
    res.ratio = res.lhs / res.rhs;
    res.T = norms.T;
    res.doublings = norms.doublings;
    return res;
}

LineFit fit_loglog(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2) throw ShapeError("fit_loglog needs at least two matching points");
    const double m = static_cast<double>(x.size());
    double sx = 0, sy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += std::log(x[i]);
        sy += std::log(y[i]);
    }
    const double mx = sx / m, my = sy / m;
    double sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (std::log(x[i]) - mx) * (std::log(x[i]) - mx);
        sxy += (std::log(x[i]) - mx) * (std::log(y[i]) - my);
    }
    LineFit fit;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    if (x.size() > 2) {
        double ssr = 0;
        for (std::size_t i = 0; i < x.size(); ++i) {
            const double e = std::log(y[i]) - fit.intercept - fit.slope * std::log(x[i]);
            ssr += e * e;
        }
        fit.slope_error = std::sqrt(ssr / (m - 2) / sxx);
    }
    return fit;
}

ScanReport dyadic_scan(const EstimateSpec& spec, const LocalizedData& data, double R_min, double R_max,
                       std::uint64_t seed, const ScanNumerics& numerics, double threshold) {
    spec.validate();
    data.validate();
    if (data.table->dimension() != spec.n) throw DomainError("estimate and cone dimensions differ");
    if (!(R_min > 0) || !(R_max >= R_min)) throw DomainError("scan range must satisfy 0 < R_min <= R_max");
    ScanReport report;
    report.spec = spec;
    report.seed = seed;
    report.trials = static_cast<int>(data.trial_count());
    report.threshold = threshold >= 0 ? threshold : default_slope_threshold(spec.id);

    std::vector<double> coefficient_norms(data.trial_count());
    for (std::size_t tr = 0; tr < data.trial_count(); ++tr) {
        coefficient_norms[tr] = weighted_coefficient_norm(data, tr, spec);
        if (!(coefficient_norms[tr] > 0)) throw DomainError("dyadic_scan: a trial has vanishing coefficients");
    }
    std::vector<double> Rs, ratios;
    for (double R = R_min; R <= R_max * (1 + 1e-12); R *= 2) {
        const auto norms = annulus_norms(data, spec.q, R, numerics);
        std::vector<double> lhs = norms.lhs;
        if (!std::isfinite(spec.q)) {
            // Refine the grid suprema of every trial that could hold the maximum.
            double grid_best = 0;
            for (std::size_t tr = 0; tr < lhs.size(); ++tr) grid_best = std::max(grid_best, lhs[tr] / coefficient_norms[tr]);
            for (std::size_t tr = 0; tr < lhs.size(); ++tr)
                if (lhs[tr] / coefficient_norms[tr] >= 0.9 * grid_best) lhs[tr] = refine_supremum(data, tr, norms, R);
        }
        ScanRow row{R, 0, 0, -1, 0, norms.T, norms.doublings};
        for (std::size_t tr = 0; tr < data.trial_count(); ++tr) {
            const double rhs = spec.envelope(R) * coefficient_norms[tr];
            const double ratio = lhs[tr] / rhs;
            if (ratio > row.ratio) row = {R, lhs[tr], rhs, ratio, tr, norms.T, norms.doublings};
        }
        report.rows.push_back(row);
        report.max_ratio = std::max(report.max_ratio, row.ratio);
        Rs.push_back(R);
        ratios.push_back(row.ratio);
    }
    if (Rs.size() >= 2) {
        const auto fit = fit_loglog(Rs, ratios);
        report.slope = fit.slope;
        report.slope_error = fit.slope_error;
    }
    report.trend_ok = report.slope <= report.threshold;
    return report;
}

}  // namespace cone
