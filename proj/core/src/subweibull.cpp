#include "conc/subweibull.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "conc/errors.hpp"

namespace conc::subweibull {

namespace {

constexpr double kE = std::numbers::e;
constexpr double kLog2 = std::numbers::ln2;
constexpr double kBisectionRelTol = 1e-9;

void require_alpha(double alpha) {
    if (!(alpha > 0.0) || !std::isfinite(alpha)) {
        throw DomainError("alpha must be positive and finite, got " + std::to_string(alpha));
    }
}

void require_nonnegative(double x, const char* name) {
    if (!(x >= 0.0)) {
        throw DomainError(std::string(name) + " must be nonnegative, got " + std::to_string(x));
    }
}

// sum_i w_i psi(|x_i| / c); w == nullptr means uniform weights 1/n.
double mean_psi(std::span<const double> x, const double* w, double c, double alpha) {
    double acc = 0.0;
    const double uniform = 1.0 / static_cast<double>(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double wi = w ? w[i] : uniform;
        if (wi == 0.0 || x[i] == 0.0) continue;
        acc += wi * std::expm1(std::pow(std::abs(x[i]) / c, alpha));
        if (!std::isfinite(acc)) return acc;
    }
    return acc;
}

SubWeibullParams bisect_norm(std::span<const double> x, const double* w, double alpha) {
    require_alpha(alpha);
    if (x.empty()) throw InvalidArgument("estimate_psi_norm: empty sample");
    double max_abs = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (!std::isfinite(x[i])) throw InvalidArgument("estimate_psi_norm: non-finite sample value");
        if (w == nullptr || w[i] > 0.0) max_abs = std::max(max_abs, std::abs(x[i]));
    }
    if (max_abs == 0.0) return {alpha, 0.0};

    double lo = std::numeric_limits<double>::epsilon() * max_abs;
    double hi = 10.0 * max_abs;
    // For small alpha, 10 max|x| can still be infeasible (psi(0.1) > 1 when
    // alpha is tiny); widen until the upper end satisfies the constraint.
    while (mean_psi(x, w, hi, alpha) > 1.0) {
        lo = hi;
        hi *= 2.0;
    }
    while (hi - lo > kBisectionRelTol * hi) {
        const double mid = 0.5 * (lo + hi);
        if (mean_psi(x, w, mid, alpha) <= 1.0) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    return {alpha, hi};
}

}  // namespace

double psi_alpha(double x, double alpha) {
    require_alpha(alpha);
    require_nonnegative(x, "x");
    return std::expm1(std::pow(x, alpha));
}

SubWeibullParams estimate_psi_norm(std::span<const double> sample, double alpha) {
    return bisect_norm(sample, nullptr, alpha);
}

SubWeibullParams estimate_psi_norm(std::span<const double> values, std::span<const double> weights,
                                   double alpha) {
    if (values.size() != weights.size()) {
        throw InvalidArgument("estimate_psi_norm: values and weights differ in length");
    }
    double total = 0.0;
    for (double wi : weights) {
        if (!(wi >= 0.0)) throw InvalidArgument("estimate_psi_norm: negative weight");
        total += wi;
    }
    if (std::abs(total - 1.0) > 1e-9) {
        throw InvalidArgument("estimate_psi_norm: weights must sum to one");
    }
    return bisect_norm(values, weights.data(), alpha);
}

double tail_bound(double eps, const SubWeibullParams& params) {
    require_alpha(params.alpha);
    require_nonnegative(eps, "eps");
    require_nonnegative(params.norm, "norm");
    if (params.norm == 0.0) return eps > 0.0 ? 0.0 : 1.0;
    return std::min(1.0, 2.0 * std::exp(-std::pow(eps / params.norm, params.alpha)));
}

double moment_const_c1(double alpha) {
    require_alpha(alpha);
    return 2.0 * std::sqrt(2.0 * std::numbers::pi) * std::exp(alpha / 12.0) * std::exp(1.0 / (2.0 * kE)) *
           std::pow(alpha, -(alpha + 2.0) / (2.0 * alpha));
}

double lp_bound_from_psi(int p, const SubWeibullParams& params) {
    if (p < 1) throw DomainError("lp_bound_from_psi: p must be >= 1");
    require_nonnegative(params.norm, "norm");
    return moment_const_c1(params.alpha) * params.norm * std::pow(static_cast<double>(p), 1.0 / params.alpha);
}

double sum_const_c2(double alpha) {
    require_alpha(alpha);
    return alpha < 1.0 ? std::pow(2.0, 1.0 / alpha) : 1.0;
}

double centering_const_c3(double alpha) {
    return sum_const_c2(alpha) * (1.0 + moment_const_c1(alpha) * std::pow(kLog2, -1.0 / alpha));
}

double latala_const_c4(double alpha) {
    require_alpha(alpha);
    if (alpha >= 1.0) return 4.0 * kE;
    return 2.0 * std::pow(kE, 3.0) * std::pow(2.0 * std::numbers::pi, 0.25) * std::exp(1.0 / 24.0) *
           std::pow(2.0 * std::exp(2.0 / kE) / alpha, 1.0 / alpha);
}

double latala_sum_lp_bound(double alpha, long long n, double p) {
    require_alpha(alpha);
    if (n < 1) throw DomainError("latala_sum_lp_bound: n must be >= 1");
    if (!(p >= 2.0)) throw DomainError("latala_sum_lp_bound: p must be >= 2");
    const double nn = static_cast<double>(n);
    const double root = std::sqrt(p) * std::sqrt(nn);
    const double power = std::pow(p, 1.0 / alpha);
    if (alpha < 1.0) return latala_const_c4(alpha) * (power + root);
    return latala_const_c4(alpha) * (power * std::pow(nn, (alpha - 1.0) / alpha) + root);
}

TailBound tail_from_lp(double c1, double c2, double alpha, double eps) {
    require_alpha(alpha);
    require_nonnegative(c1, "C1");
    require_nonnegative(c2, "C2");
    require_nonnegative(eps, "eps");
    return {kE * c1 * std::sqrt(eps) + kE * c2 * std::pow(eps, 1.0 / alpha),
            std::min(1.0, kE * std::exp(-eps))};
}

SumConcentrationConstants sum_concentration_constants(double alpha) {
    require_alpha(alpha);
    const double sym = std::pow(2.0, std::min(1.0 / alpha, 1.0));       // 2^{(1/alpha) ^ 1}
    const double lift = std::max(std::sqrt(2.0), std::pow(2.0, 1.0 / alpha));  // extends p >= 2 to p >= 1
    const double c4 = latala_const_c4(alpha);
    const double shift = std::pow(kLog2, 1.0 / alpha);

    SumConcentrationConstants k;
    if (alpha <= 1.0) {
        k.lp_sqrt = sym * (c4 * lift + shift);
        k.lp_power = sym * c4 * lift;
    } else {
        // Extra 2^{(1/alpha) ^ 1} factor on the power term.
        k.lp_sqrt = sym * lift * (c4 + shift);
        k.lp_power = sym * lift * sym * c4;
    }
    k.tail_sqrt = kE * k.lp_sqrt;
    k.tail_power = kE * k.lp_power;
    return k;
}

TailBound sum_concentration_bound(double alpha, double cx, long long n, double eps) {
    require_alpha(alpha);
    require_nonnegative(cx, "C_X");
    require_nonnegative(eps, "eps");
    if (n < 1) throw DomainError("sum_concentration_bound: n must be >= 1");
    const auto k = sum_concentration_constants(alpha);
    const double nn = static_cast<double>(n);
    const double power_growth = std::pow(nn, std::max((alpha - 1.0) / alpha, 0.0));
    return tail_from_lp(k.lp_sqrt * cx * std::sqrt(nn), k.lp_power * cx * power_growth, alpha, eps);
}

}  // namespace conc::subweibull
