#pragma once

// Sub-Weibull(alpha) tail calculus.
//
// The psi_alpha quasi-norm of X is inf{c > 0 : E[exp((|X|/c)^alpha) - 1] <= 1}.
// alpha = 2 is the sub-Gaussian case, alpha = 1 sub-exponential. This header
// collects the norm estimator together with the explicit moment, centering,
// summation and tail constants used by the concentration bounds.

#include <cstddef>
#include <span>

namespace conc::subweibull {

struct SubWeibullParams {
    double alpha = 2.0;
    double norm = 0.0;
};

// Threshold/probability pair: P(|S| >= threshold) <= prob.
struct TailBound {
    double threshold = 0.0;
    double prob = 1.0;
};

// exp(x^alpha) - 1.
double psi_alpha(double x, double alpha);

// Smallest c with mean(psi_alpha(|x_i| / c)) <= 1, found by bisection to a
// relative tolerance of 1e-9. Returns norm 0 for the all-zero sample.
SubWeibullParams estimate_psi_norm(std::span<const double> sample, double alpha);

// Weighted variant: the sample mean is replaced by sum_i w_i psi(|x_i|/c), so a
// finite distribution (values, probabilities) gives its exact quasi-norm.
SubWeibullParams estimate_psi_norm(std::span<const double> values, std::span<const double> weights,
                                   double alpha);

// min(1, 2 exp(-(eps/norm)^alpha)).
double tail_bound(double eps, const SubWeibullParams& params);

// Moment constant C1(alpha) with ||X||_{L_p} <= C1 ||X||_{psi_alpha} p^{1/alpha}.
double moment_const_c1(double alpha);
double lp_bound_from_psi(int p, const SubWeibullParams& params);

// Quasi-triangle constant: 2^{1/alpha} for alpha < 1, otherwise 1.
double sum_const_c2(double alpha);

// ||X - EX|| <= C3 ||X||, C3 = C2 (1 + C1 (log 2)^{-1/alpha}).
double centering_const_c3(double alpha);

// Constant of the L_p bound for sums of i.i.d. symmetric variables with
// P(|X_i| >= t) <= exp(-t^alpha).
double latala_const_c4(double alpha);

// C4 (p^{1/alpha} + sqrt(p n)) for alpha < 1,
// C4 (p^{1/alpha} n^{(alpha-1)/alpha} + sqrt(p n)) for alpha >= 1. Requires p >= 2.
double latala_sum_lp_bound(double alpha, long long n, double p);

// If ||X||_{L_p} <= C1 sqrt(p) + C2 p^{1/alpha} for all p >= 1 then
// P(|X| >= e C1 sqrt(eps) + e C2 eps^{1/alpha}) <= e exp(-eps).
TailBound tail_from_lp(double c1, double c2, double alpha, double eps);

// Coefficients of the sum-concentration bound for independent centered
// sub-Weibull variables with ||X_i||_{psi_alpha} <= C_X:
//
//   ||sum X_i||_{L_p} <= C_X (lp_sqrt sqrt(n) sqrt(p) + lp_power n^{((alpha-1)/alpha) v 0} p^{1/alpha})
//
// and, after the moment-to-tail step, the tail coefficients
// tail_sqrt = e * lp_sqrt and tail_power = e * lp_power.
struct SumConcentrationConstants {
    double lp_sqrt = 0.0;
    double lp_power = 0.0;
    double tail_sqrt = 0.0;
    double tail_power = 0.0;
};

SumConcentrationConstants sum_concentration_constants(double alpha);

// P(|sum_{i<=n} X_i| >= tail_sqrt C_X sqrt(n eps) + tail_power C_X n^{..} eps^{1/alpha})
//   <= min(1, e exp(-eps)).
TailBound sum_concentration_bound(double alpha, double cx, long long n, double eps);

}  // namespace conc::subweibull
