#include "conc/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "conc/coupling.hpp"
#include "conc/errors.hpp"
#include "conc/subweibull.hpp"

namespace conc::bounds {

namespace {

void require(bool ok, const std::string& what) {
    if (!ok) throw DomainError(what);
}

double clamp01(double p) {
    return std::clamp(p, 0.0, 1.0);
}

double coupling_exponent(const BoundInputs& in) {
    return in.s / (in.r * (in.r + in.s));
}

// beta^{s/(r(r+s))} at lag floor(T/(n+1)).
double coupling_factor(long long T, long long n, const BoundInputs& in) {
    const double b = in.beta(T / (n + 1));
    if (!(b >= 0.0 && b <= 1.0)) throw DomainError("beta must lie in [0, 1], got " + std::to_string(b));
    return b == 0.0 ? 0.0 : std::pow(b, coupling_exponent(in));
}

void validate_shape(const BoundInputs& in) {
    require(in.alpha > 0.0 && std::isfinite(in.alpha), "alpha must be positive");
    require(in.C_Theta >= 0.0, "C_Theta must be nonnegative");
    require(in.C_Z >= 0.0, "C_Z must be nonnegative");
    require(in.r >= 1.0, "r must be >= 1");
    require(in.s > 0.0, "s must be positive");
    require(in.gamma2 >= 0.0 && in.gamma_alpha >= 0.0, "gamma functionals must be nonnegative");
    if (!in.beta) throw InvalidArgument("bound inputs need a beta function");
}

}  // namespace

BetaFunction beta_zero() {
    return [](long long) { return 0.0; };
}

BetaFunction beta_from_envelope(const mixing::MixingEnvelope& env) {
    return [env](long long l) { return std::min(1.0, mixing::beta_envelope(env, static_cast<std::size_t>(l))); };
}

BetaFunction beta_from_chain(const mixing::MarkovChainSpec& spec) {
    mixing::validate(spec);
    return [spec](long long l) { return mixing::beta_coefficient_exact(spec, static_cast<std::size_t>(l)); };
}

void validate(const BoundInputs& in) {
    validate_shape(in);
    if (in.n < 1 || in.n > in.T) {
        throw InvalidArgument("need 1 <= n <= T, got n=" + std::to_string(in.n) + ", T=" + std::to_string(in.T));
    }
    require(in.eps1 >= 2.0, "eps1 must be >= 2");
    require(in.eps2 > 0.0, "eps2 must be positive");
}

TailConstants tail_constants(double alpha) {
    const auto k = subweibull::sum_concentration_constants(alpha);
    TailConstants c;
    c.c_sqrt = k.tail_sqrt;
    c.c_power = k.tail_power;
    // Compact form dominates 1x + 8x (sqrt part) and 1x + 4^{(a+1)/a}x (power part).
    c.c_alpha = std::max(9.0 * c.c_sqrt, (std::pow(4.0, (alpha + 1.0) / alpha) + 1.0) * c.c_power);
    return c;
}

double power_scale(double n, double alpha) {
    return std::pow(n, 1.0 / std::max(alpha, 1.0));
}

BoundResult theorem_bound(const BoundInputs& in) {
    validate(in);
    coupling::block_layout(in.T, in.n);
    const auto c = tail_constants(in.alpha);
    const double n = static_cast<double>(in.n);
    const double root = std::sqrt(in.eps1) / std::sqrt(n);
    const double power = std::pow(in.eps1, 1.0 / in.alpha) / power_scale(n, in.alpha);
    const double chain_factor = std::pow(4.0, (in.alpha + 1.0) / in.alpha);

    BoundResult out;
    out.terms[0] = c.c_sqrt * in.C_Theta * root + c.c_power * in.C_Theta * power;
    out.terms[1] = 8.0 * c.c_sqrt * in.C_Theta * in.gamma2 * root +
                   chain_factor * c.c_power * in.C_Theta * in.gamma_alpha * power;
    out.terms[2] = in.C_Z * in.eps2;
    out.threshold = out.terms[0] + out.terms[1] + out.terms[2];
    out.compact_threshold =
        c.c_alpha * in.C_Theta * ((1.0 + in.gamma2) * root + (1.0 + in.gamma_alpha) * power) + in.C_Z * in.eps2;

    const double blocks = static_cast<double>(in.T) / n;
    out.raw_prob = 5.0 * blocks * std::exp(-in.eps1) + 8.0 * blocks * coupling_factor(in.T, in.n, in) / in.eps2;
    out.failure_prob = clamp01(out.raw_prob);
    out.vacuous = out.raw_prob >= 1.0;
    return out;
}

BoundResult simplified_bound(long long T, long long n, double eps, const BoundInputs& in) {
    validate_shape(in);
    if (n < 1 || n > T) throw InvalidArgument("need 1 <= n <= T");
    require(eps >= 2.0, "eps must be >= 2");
    coupling::block_layout(T, n);
    const auto c = tail_constants(in.alpha);
    const double nn = static_cast<double>(n);
    const double root = std::sqrt(eps) / std::sqrt(nn);
    const double power = std::pow(eps, 1.0 / in.alpha) / power_scale(nn, in.alpha);

    BoundResult out;
    out.terms[0] = c.c_alpha * in.C_Theta * (root + power);
    out.terms[1] = c.c_alpha * in.C_Theta * (in.gamma2 * root + in.gamma_alpha * power);
    out.terms[2] = in.C_Z * coupling_factor(T, n, in) * std::exp(eps);
    out.threshold = out.terms[0] + out.terms[1] + out.terms[2];
    out.compact_threshold = out.threshold;
    out.raw_prob = 13.0 * (static_cast<double>(T) / nn) * std::exp(-eps);
    out.failure_prob = clamp01(out.raw_prob);
    out.vacuous = out.raw_prob >= 1.0;
    return out;
}

SampleSize effective_sample_size(long long T, double zeta) {
    if (T < 1) throw DomainError("T must be >= 1");
    if (!(zeta > 4.0) || !std::isfinite(zeta)) throw DomainError("zeta must exceed 4, got " + std::to_string(zeta));
    SampleSize out;
    out.eta = (zeta - 4.0) / (zeta + 2.0);
    const double x = std::pow(static_cast<double>(T), out.eta);
    const double nearest = std::round(x);
    // pow(10000, 0.5) and friends can land an ulp above an integer.
    const double c = std::abs(x - nearest) <= 1e-12 * x ? nearest : std::ceil(x);
    out.n = static_cast<long long>(c);
    if (out.n > T) {
        out.n = T;
        out.clamped = true;
    }
    out.n = std::max(out.n, 1LL);
    return out;
}

OracleBound oracle_inequality_bound(long long T, double zeta, double gamma2, double gamma1, double C, double C_Z) {
    require(gamma2 >= 0.0 && gamma1 >= 0.0, "gamma functionals must be nonnegative");
    require(C > 0.0, "C must be positive");
    require(C_Z >= 0.0, "C_Z must be nonnegative");
    const auto ss = effective_sample_size(T, zeta);
    const double n = static_cast<double>(ss.n);
    const double ln = std::log(n);
    OracleBound out;
    out.n = ss.n;
    out.bound = C * (gamma2 * std::sqrt(ln / n) + gamma1 * ln / n + C_Z / std::sqrt(n));
    out.prob = clamp01(1.0 - 13.0 / n);
    out.vacuous = out.prob == 0.0;
    return out;
}

OracleBound nn_bound(long long T, double zeta, long long d, double C) {
    if (T < 8) throw DomainError("nn_bound requires T >= 8");
    if (d < 1) throw DomainError("nn_bound requires d >= 1");
    require(C > 0.0, "C must be positive");
    const auto ss = effective_sample_size(T, zeta);
    const double n = static_cast<double>(ss.n);
    const double dd = static_cast<double>(d);
    const double ln = std::log(n);
    OracleBound out;
    out.n = ss.n;
    out.bound = C * (std::sqrt(dd * ln / n) + dd * ln / n + std::sqrt(std::log(dd) / n));
    out.prob = clamp01(1.0 - 13.0 / n);
    out.vacuous = out.prob == 0.0;
    return out;
}

}  // namespace conc::bounds
