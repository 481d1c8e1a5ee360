#pragma once

#include "cone/cutoff.hpp"
#include "cone/field.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <string>
#include <vector>

namespace cone {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

enum class EstimateId { E31, E32, E33, E34, E35, E36 };

std::string to_string(EstimateId id);
EstimateId estimate_id_from_string(const std::string& name);

// One localized restriction estimate: exponents, angular weight (1 + nu)^gamma,
// RHS norm L^p(rho^{n-1} drho) and envelope min{R^e1, R^e2}.
struct EstimateSpec {
    EstimateId id;
    int n;
    double q;
    double p;
    double gamma;
    double e1;
    double e2;
    double epsilon;

    double weight(double nu) const { return std::pow(1 + nu, gamma); }
    double envelope(double R) const { return std::min(std::pow(R, e1), std::pow(R, e2)); }
    void validate() const;
};

// Default p: E34 -> 3 (q = 4.5), E35 -> 1.5 (q = 9). epsilon applies to E36 only.
EstimateSpec estimate_spec(EstimateId id, int n, double p = 0, double epsilon = 0.1);

// Coefficients b_{nu,l}(rho) = sum_k Z(slot, k) phi_k(rho) on [1, 2], with real
// basis functions phi_k shared by all slots. Each trial has its own Z.
struct LocalizedData {
    TablePtr table;
    std::vector<std::function<double(double)>> basis;
    std::vector<Eigen::MatrixXcd> trials;  // slots x basis

    std::size_t trial_count() const { return trials.size(); }
    cplx b(std::size_t trial, std::size_t slot, double rho) const;
    void validate() const;
};

// Complex Gaussian coefficients on the cosine basis cos(k pi (rho - 1)),
// k < 4, scaled by (1 + nu)^{-(n-1)/2 - 1}. Slots with nu > band stay zero.
// Each (seed, trial, slot) has its own stream, so shared modes are identical
// across tables of different truncation.
LocalizedData random_coefficients(TablePtr table, int trials, std::uint64_t seed, double band = kInf);

// r^{-(n-2)/2} (sum |int e^{i t rho^2} J_nu(r rho) b beta rho^{n/2} drho|^2)^{1/2}
// by direct quadrature.
double angular_l2_profile(const LocalizedData& data, std::size_t trial, double t, double r,
                          const std::function<double(double)>& beta = {});

// RHS norm ||(sum w(nu) |b|^2)^{1/2} beta||_{L^p(rho^{n-1} drho)} without the envelope.
double weighted_coefficient_norm(const LocalizedData& data, std::size_t trial, const EstimateSpec& spec);

struct TimeTruncation {
    double tolerance = 1e-3;
    int max_doublings = 10;
};

struct MixedNormResult {
    double value = 0;
    double previous = 0;  // norm over the half window
    double T = 0;
    int doublings = 0;
};

// L^q_t([-T, T]; L^q([R, 2R], r^{n-1} dr)) of a profile, with T doubled from T0
// until the increment over the last doubling is below the tolerance. Midpoint
// rule in t, Gauss-Legendre in r; q = inf is the grid supremum.
MixedNormResult mixed_norm(const std::function<double(double, double)>& profile, double q, double R, int n,
                           double T0, double dt, const TimeTruncation& truncation = {});

struct ScanNumerics {
    TimeTruncation truncation;
    double t_slack = 48;       // T0 = 2 (R + t_slack) / N^2 in rescaled time
    double dt = 0;             // 0 selects by q
    double r_panel_width = 0;  // 0 selects by q
    int r_panel_points = 10;
    double skip_tolerance = 1e-7;
    int threads = 0;           // 0 leaves the OpenMP default
};

struct AnnulusNorms {
    std::vector<double> lhs;       // per trial, over [-T, T]
    std::vector<double> lhs_half;  // per trial, over [-T/2, T/2]
    double T = 0;
    int doublings = 0;
    bool converged = false;
    std::size_t r_nodes = 0;
    std::size_t t_nodes = 0;
    double dt = 0;
    double dr = 0;                // widest gap between radial nodes
    std::vector<double> arg_t;    // q = inf: grid maximizer per trial
    std::vector<double> arg_r;
};

// ||r^{-(n-2)/2} (sum |I|^2)^{1/2}||_{L^q_t L^q([R, 2R], r^{n-1} dr)} for every trial,
// with I evaluated by FFT in s = rho^2. Throws TruncationError if the time
// window does not converge within the doubling cap.
AnnulusNorms annulus_norms(const LocalizedData& data, double q, double R, const ScanNumerics& numerics = {},
                           const std::function<double(double)>& beta = {});

// q = inf: climbs the direct profile from the grid maximizer of `trial` within
// one grid cell and returns the larger of the refined and grid values.
double refine_supremum(const LocalizedData& data, std::size_t trial, const AnnulusNorms& norms, double R,
                       const std::function<double(double)>& beta = {});

struct RatioResult {
    double lhs = 0;
    double rhs = 0;
    double ratio = 0;
    double T = 0;
    int doublings = 0;
};

RatioResult localized_ratio(const EstimateSpec& spec, const LocalizedData& data, double R, std::size_t trial = 0,
                            const ScanNumerics& numerics = {});

struct ScanRow {
    double R;
    double lhs;
    double rhs;
    double ratio;  // max over trials
    std::size_t trial;
    double T;
    int doublings;
};

struct ScanReport {
    EstimateSpec spec;
    std::vector<ScanRow> rows;
    std::uint64_t seed = 0;
    int trials = 0;
    double max_ratio = 0;
    double slope = 0;       // least-squares slope of log max-ratio against log R
    double slope_error = 0; // standard error of the slope (0 with fewer than 3 rows)
    double threshold = 0;   // default_slope_threshold unless overridden
    bool trend_ok = true;   // slope <= threshold
};

// Largest admissible log-log slope of a scan: 0.1 for E36, 0.05 otherwise.
double default_slope_threshold(EstimateId id);

// Runs annulus_norms for each dyadic R in [R_min, R_max] and fits the trend.
ScanReport dyadic_scan(const EstimateSpec& spec, const LocalizedData& data, double R_min, double R_max,
                       std::uint64_t seed = 0, const ScanNumerics& numerics = {}, double threshold = -1);

struct LineFit {
    double slope = 0;
    double intercept = 0;
    double slope_error = 0;
};

LineFit fit_loglog(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace cone
