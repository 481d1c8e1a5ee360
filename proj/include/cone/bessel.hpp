#pragma once

#include <complex>
#include <functional>
#include <string>
#include <vector>

namespace cone::bessel {

enum class Regime { series, small_argument, transition, oscillatory };
enum class Method { series, schlafli, asymptotic };

std::string to_string(Regime regime);
std::string to_string(Method method);

// series when nu < 1 and r <= 20; otherwise split at r = nu/2 and r = 2 nu.
Regime classify(double nu, double r);

// Default truncation order of the large-argument expansion.
inline constexpr int kDefaultOrder = 6;
// Bound |E_nu(r)| <= kEBoundConstant / (r + nu).
inline constexpr double kEBoundConstant = 0.31830988618379067;  // 1/pi

double eval_series(double nu, double r);
double eval_schlafli(double nu, double r);
double eval_E(double nu, double r);

struct AsymCoeffs {
    int m = 0;
    double a = 1.0;
    double b = 0.0;
};

AsymCoeffs asym_coeff(int m, double nu);

// Smallest argument where the large-argument expansion is used.
double asymptotic_threshold(double nu);

double eval_asymptotic(double nu, double r, int M = kDefaultOrder);

struct Evaluation {
    double value;
    Regime regime;
    Method method;
};

Evaluation evaluate(double nu, double r, int M = kDefaultOrder);
double eval(double nu, double r);

// Fixed-order evaluator: caches expansion coefficients and sin(nu pi).
class Order {
public:
    explicit Order(double nu, int M = kDefaultOrder);

    double nu() const { return nu_; }
    double operator()(double r) const { return evaluate(r).value; }
    Evaluation evaluate(double r) const;
    double asymptotic(double r) const;

private:
    double nu_;
    std::vector<double> a_, b_;
};

// J_{nu0 + k}(r) for k = 0..count-1. Forward recurrence while the order stays
// below r/2, direct evaluation beyond.
std::vector<double> eval_sequence(double nu0, int count, double r);

struct SchlafliPieces {
    double j1;  // chi_delta-weighted part near theta = 0
    double j2;  // |theta| in [pi/2 + delta, pi]
    double j3;  // remainder, weighted by 1 - chi_delta
};

// Partition of the Schlaefli integral (1/2pi) int_{-pi}^{pi} e^{i(r sin - nu theta)}.
SchlafliPieces eval_schlafli_pieces(double nu, double r, double delta = 0.1);

struct PhaseKernelParams {
    double nu = 0;
    double r = 0;
    double m = 0;
    int n = 2;
    double delta = 0.1;
    std::function<double(double)> beta;  // supported in [1, 2]; empty means the standard bump
};

std::complex<double> eval_psi(const PhaseKernelParams& params);

}  // namespace cone::bessel
