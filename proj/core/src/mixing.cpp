#include "conc/mixing.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "conc/errors.hpp"
#include "conc/rng.hpp"

namespace conc::mixing {

namespace {

using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

std::vector<double> flatten(const std::vector<std::vector<double>>& rows) {
    const std::size_t m = rows.size();
    if (m == 0) throw InvalidArgument("transition matrix is empty");
    std::vector<double> flat;
    flat.reserve(m * m);
    for (const auto& r : rows) {
        if (r.size() != m) throw InvalidArgument("transition matrix must be square");
        flat.insert(flat.end(), r.begin(), r.end());
    }
    return flat;
}

Eigen::Map<const RowMatrix> as_matrix(const MarkovChainSpec& spec) {
    return {spec.P.data(), static_cast<Eigen::Index>(spec.m), static_cast<Eigen::Index>(spec.m)};
}

std::size_t draw_state(const double* probs, std::size_t m, Rng& rng) {
    const double u = uniform01(rng);
    double acc = 0.0;
    for (std::size_t y = 0; y < m; ++y) {
        acc += probs[y];
        if (u < acc) return y;
    }
    // Rounding left u beyond the last cumulative sum: take the last state with mass.
    for (std::size_t y = m; y-- > 0;) {
        if (probs[y] > 0.0) return y;
    }
    return m - 1;
}

double beta_from_power(const MarkovChainSpec& spec, const RowMatrix& Pl) {
    double s = 0.0;
    for (std::size_t x = 0; x < spec.m; ++x) {
        for (std::size_t y = 0; y < spec.m; ++y) {
            s += std::abs(spec.pi[x] * Pl(x, y) - spec.pi[x] * spec.pi[y]);
        }
    }
    return 0.5 * s;
}

}  // namespace

std::vector<double> stationary_distribution(const std::vector<double>& P, std::size_t m) {
    if (m == 0 || P.size() != m * m) throw InvalidArgument("stationary_distribution: bad matrix shape");
    Eigen::Map<const RowMatrix> Pm(P.data(), m, m);
    const Eigen::Index k = static_cast<Eigen::Index>(m);
    Eigen::MatrixXd A = Pm.transpose() - Eigen::MatrixXd::Identity(k, k);
    A.row(k - 1).setOnes();
    Eigen::VectorXd b = Eigen::VectorXd::Zero(k);
    b(k - 1) = 1.0;
    Eigen::FullPivLU<Eigen::MatrixXd> lu(A);
    lu.setThreshold(1e-12);
    if (lu.rank() < k) {
        throw InvalidArgument("stationary_distribution: chain has no unique stationary law; supply pi");
    }
    Eigen::VectorXd pi = lu.solve(b);
    std::vector<double> out(m);
    for (std::size_t i = 0; i < m; ++i) out[i] = std::max(0.0, pi(i));
    double total = 0.0;
    for (double v : out) total += v;
    for (double& v : out) v /= total;
    return out;
}

void validate(const MarkovChainSpec& spec) {
    if (spec.m == 0) throw InvalidArgument("Markov chain needs at least one state");
    if (spec.P.size() != spec.m * spec.m) throw InvalidArgument("P must be m x m");
    if (spec.pi.size() != spec.m) throw InvalidArgument("pi must have length m");
    for (std::size_t x = 0; x < spec.m; ++x) {
        double row = 0.0;
        for (std::size_t y = 0; y < spec.m; ++y) {
            const double v = spec.p(x, y);
            if (!(v >= 0.0) || !std::isfinite(v)) throw InvalidArgument("P has a negative or non-finite entry");
            row += v;
        }
        if (std::abs(row - 1.0) > 1e-12) {
            throw InvalidArgument("row " + std::to_string(x) + " of P does not sum to 1");
        }
    }
    double total = 0.0;
    for (double v : spec.pi) {
        if (!(v >= 0.0)) throw InvalidArgument("pi has a negative entry");
        total += v;
    }
    if (std::abs(total - 1.0) > 1e-10) throw InvalidArgument("pi does not sum to 1");
    for (std::size_t y = 0; y < spec.m; ++y) {
        double s = 0.0;
        for (std::size_t x = 0; x < spec.m; ++x) s += spec.pi[x] * spec.p(x, y);
        if (std::abs(s - spec.pi[y]) > 1e-10) throw InvalidArgument("pi is not stationary for P");
    }
}

MarkovChainSpec MarkovChainSpec::from_matrix(std::vector<std::vector<double>> rows) {
    MarkovChainSpec spec;
    spec.m = rows.size();
    spec.P = flatten(rows);
    for (double v : spec.P) {
        if (!(v >= 0.0)) throw InvalidArgument("P has a negative entry");
    }
    spec.pi = stationary_distribution(spec.P, spec.m);
    validate(spec);
    return spec;
}

MarkovChainSpec MarkovChainSpec::from_matrix(std::vector<std::vector<double>> rows, std::vector<double> pi) {
    MarkovChainSpec spec;
    spec.m = rows.size();
    spec.P = flatten(rows);
    spec.pi = std::move(pi);
    validate(spec);
    return spec;
}

MarkovChainSpec MarkovChainSpec::two_state(double p, double q) {
    if (!(p >= 0.0 && p <= 1.0 && q >= 0.0 && q <= 1.0)) {
        throw InvalidArgument("two_state: flip probabilities must lie in [0, 1]");
    }
    if (p + q == 0.0) return from_matrix({{1.0, 0.0}, {0.0, 1.0}}, {0.5, 0.5});
    return from_matrix({{1.0 - p, p}, {q, 1.0 - q}}, {q / (p + q), p / (p + q)});
}

StatePath simulate_markov_chain(const MarkovChainSpec& spec, std::size_t T, std::uint64_t seed) {
    validate(spec);
    if (T == 0) throw InvalidArgument("simulate_markov_chain: T must be positive");
    Rng rng(seed);
    StatePath path(T);
    path[0] = draw_state(spec.pi.data(), spec.m, rng);
    for (std::size_t t = 1; t < T; ++t) {
        path[t] = draw_state(spec.P.data() + path[t - 1] * spec.m, spec.m, rng);
    }
    return path;
}

RealTrajectory simulate_ar1(double phi, double sigma, std::size_t d, std::size_t T, std::uint64_t seed) {
    if (!(std::abs(phi) < 1.0)) throw DomainError("simulate_ar1: |phi| must be < 1");
    if (!(sigma > 0.0)) throw DomainError("simulate_ar1: sigma must be positive");
    if (d == 0 || T == 0) throw InvalidArgument("simulate_ar1: d and T must be positive");
    Rng rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    RealTrajectory out{T, d, std::vector<double>(T * d)};
    const double sd0 = sigma / std::sqrt(1.0 - phi * phi);
    for (std::size_t c = 0; c < d; ++c) out.values[c] = sd0 * normal(rng);
    for (std::size_t t = 1; t < T; ++t) {
        for (std::size_t c = 0; c < d; ++c) {
            out.values[t * d + c] = phi * out.values[(t - 1) * d + c] + sigma * normal(rng);
        }
    }
    return out;
}

std::vector<double> transition_power(const MarkovChainSpec& spec, std::size_t l) {
    validate(spec);
    const auto k = static_cast<Eigen::Index>(spec.m);
    RowMatrix result = RowMatrix::Identity(k, k);
    RowMatrix base = as_matrix(spec);
    for (std::size_t e = l; e > 0; e >>= 1) {
        if (e & 1) result = result * base;
        if (e > 1) base = base * base;
    }
    return {result.data(), result.data() + result.size()};
}

double beta_coefficient_exact(const MarkovChainSpec& spec, std::size_t l) {
    const auto Pl = transition_power(spec, l);
    Eigen::Map<const RowMatrix> M(Pl.data(), spec.m, spec.m);
    return std::clamp(beta_from_power(spec, M), 0.0, 1.0);
}

std::vector<double> beta_sequence(const MarkovChainSpec& spec, std::size_t max_l) {
    validate(spec);
    const auto k = static_cast<Eigen::Index>(spec.m);
    const RowMatrix P = as_matrix(spec);
    RowMatrix Pl = RowMatrix::Identity(k, k);
    std::vector<double> out;
    out.reserve(max_l + 1);
    for (std::size_t l = 0; l <= max_l; ++l) {
        if (l > 0) Pl = Pl * P;
        out.push_back(std::clamp(beta_from_power(spec, Pl), 0.0, 1.0));
    }
    return out;
}

MixingEnvelope MixingEnvelope::polynomial(double zeta) {
    if (!(zeta > 4.0) || !std::isfinite(zeta)) {
        throw DomainError("polynomial mixing envelope needs zeta > 4, got " + std::to_string(zeta));
    }
    MixingEnvelope env;
    env.kind_ = Kind::Polynomial;
    env.zeta_ = zeta;
    return env;
}

MixingEnvelope MixingEnvelope::geometric(double rho, double c) {
    if (!(rho > 0.0 && rho < 1.0)) throw DomainError("geometric mixing envelope needs rho in (0, 1)");
    if (!(c > 0.0) || !std::isfinite(c)) throw DomainError("geometric mixing envelope needs c > 0");
    MixingEnvelope env;
    env.kind_ = Kind::Geometric;
    env.rho_ = rho;
    env.c_ = c;
    return env;
}

double beta_envelope(const MixingEnvelope& env, std::size_t l) {
    if (l == 0) return 1.0;
    const double x = static_cast<double>(l);
    if (env.kind() == MixingEnvelope::Kind::Polynomial) return std::pow(x, -env.zeta());
    return env.c() * std::pow(env.rho(), x);
}

double fit_polynomial_zeta(const MarkovChainSpec& spec, std::size_t max_l) {
    if (max_l < 2) throw InvalidArgument("fit_polynomial_zeta: need max_l >= 2");
    const auto beta = beta_sequence(spec, max_l);
    double zeta = std::numeric_limits<double>::infinity();
    for (std::size_t l = 2; l <= max_l; ++l) {
        if (beta[l] <= 0.0) continue;
        zeta = std::min(zeta, -std::log(beta[l]) / std::log(static_cast<double>(l)));
    }
    return zeta;
}

double second_eigenvalue_modulus(const MarkovChainSpec& spec) {
    validate(spec);
    if (spec.m < 2) return 0.0;
    Eigen::EigenSolver<Eigen::MatrixXd> solver(Eigen::MatrixXd(as_matrix(spec)), false);
    std::vector<double> mods;
    for (Eigen::Index i = 0; i < solver.eigenvalues().size(); ++i) mods.push_back(std::abs(solver.eigenvalues()(i)));
    std::sort(mods.begin(), mods.end(), std::greater<>());
    return mods[1];
}

}  // namespace conc::mixing
