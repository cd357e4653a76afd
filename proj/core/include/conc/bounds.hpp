#pragma once

// Evaluators for the beta-mixing concentration bound on
// sup_theta |(1/T) sum_t g(Z_t, theta) - E g|, its single-epsilon form, the
// effective-sample-size rule and the ERM oracle inequalities.

#include <array>
#include <cstddef>
#include <functional>

#include "conc/mixing.hpp"

namespace conc::bounds {

// beta(l) for l >= 0.
using BetaFunction = std::function<double(long long)>;

BetaFunction beta_zero();
BetaFunction beta_from_envelope(const mixing::MixingEnvelope& env);
// Exact coefficients of a finite stationary chain (P^l computed per call).
BetaFunction beta_from_chain(const mixing::MarkovChainSpec& spec);

struct BoundInputs {
    double alpha = 2.0;
    double C_Theta = 1.0;
    double C_Z = 1.0;
    double r = 2.0;
    double s = 2.0;
    double gamma2 = 0.0;
    double gamma_alpha = 0.0;
    long long T = 1;
    long long n = 1;
    BetaFunction beta = beta_zero();
    double eps1 = 2.0;
    double eps2 = 1.0;
};

// Throws DomainError / InvalidArgument on violated invariants:
// 1 <= n <= T, eps1 >= 2, eps2 > 0, r >= 1, s > 0, alpha > 0, nonnegative constants.
void validate(const BoundInputs& in);

struct BoundResult {
    // Sum of terms; the sharper, decomposed threshold.
    double threshold = 0.0;
    // C_alpha C_Theta ((1+gamma2) sqrt(eps1/n) + (1+gamma_alpha) eps1^{1/alpha} / n^{1/(alpha v 1)}) + C_Z eps2.
    double compact_threshold = 0.0;
    // Blocked-sum concentration, chaining, coupling.
    std::array<double, 3> terms{};
    double failure_prob = 1.0;
    double raw_prob = 1.0;  // before clamping to [0, 1]
    bool vacuous = false;   // raw_prob >= 1
};

// Tail coefficients of the independent-block sum bound.
struct TailConstants {
    double c_sqrt = 0.0;   // C'
    double c_power = 0.0;  // C''
    double c_alpha = 0.0;  // max{9 C', (4^{(alpha+1)/alpha} + 1) C''}
};
TailConstants tail_constants(double alpha);

// n^{1/max(alpha, 1)}.
double power_scale(double n, double alpha);

BoundResult theorem_bound(const BoundInputs& in);

// Single-epsilon form with eps >= 2: threshold
//   C_alpha C_Theta ((1+gamma2) sqrt(eps/n) + (1+gamma_alpha) eps^{1/alpha}/n^{..})
//   + C_Z beta^{s/(r(r+s))}(floor(T/(n+1))) e^eps,
// probability min(1, 13 (T/n) e^{-eps}). Uses every field of `in` except eps1/eps2.
BoundResult simplified_bound(long long T, long long n, double eps, const BoundInputs& in);

struct SampleSize {
    double eta = 0.0;
    long long n = 1;
    bool clamped = false;  // ceil(T^eta) exceeded T
};

// eta = (zeta - 4)/(zeta + 2), n = ceil(T^eta) clamped to T.
SampleSize effective_sample_size(long long T, double zeta);

struct OracleBound {
    double bound = 0.0;
    double prob = 0.0;  // 1 - 13/n clamped to [0, 1]
    long long n = 1;
    bool vacuous = false;
};

// C (gamma2 sqrt(log n / n) + gamma1 log n / n + C_Z / sqrt n).
OracleBound oracle_inequality_bound(long long T, double zeta, double gamma2, double gamma1, double C, double C_Z);

// C (sqrt(d log n / n) + d log n / n + sqrt(log d / n)); T >= 8.
OracleBound nn_bound(long long T, double zeta, long long d, double C);

}  // namespace conc::bounds
