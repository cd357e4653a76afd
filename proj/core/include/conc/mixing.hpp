#pragma once

// Dependent-process generators with known mixing structure, and exact
// beta-mixing coefficients for finite stationary Markov chains.

#include <cstddef>
#include <cstdint>
#include <vector>

namespace conc::mixing {

struct MarkovChainSpec {
    std::size_t m = 0;
    std::vector<double> P;   // row-major m x m, row-stochastic
    std::vector<double> pi;  // stationary law

    double p(std::size_t x, std::size_t y) const noexcept { return P[x * m + y]; }

    // Builds a spec from a transition matrix, solving for pi.
    static MarkovChainSpec from_matrix(std::vector<std::vector<double>> rows);
    // Builds a spec with a caller-supplied pi (checked against pi P = pi).
    static MarkovChainSpec from_matrix(std::vector<std::vector<double>> rows, std::vector<double> pi);

    // Two-state chain leaving state 0 with probability p and state 1 with q.
    static MarkovChainSpec two_state(double p, double q);
};

// Throws InvalidArgument unless P is row-stochastic (1e-12), nonnegative and
// pi is a stationary distribution (1e-10).
void validate(const MarkovChainSpec& spec);

// Solves pi P = pi, sum pi = 1. Throws InvalidArgument when the chain has no
// unique stationary law.
std::vector<double> stationary_distribution(const std::vector<double>& P, std::size_t m);

// Trajectory of state indices Z_1..Z_T.
using StatePath = std::vector<std::size_t>;

// Row-major T x d real trajectory.
struct RealTrajectory {
    std::size_t T = 0;
    std::size_t d = 0;
    std::vector<double> values;

    double operator()(std::size_t t, std::size_t c) const noexcept { return values[t * d + c]; }
    const double* row(std::size_t t) const noexcept { return values.data() + t * d; }
};

// Z_1 ~ pi, Z_{t+1} | Z_t = x ~ P(x, .).
StatePath simulate_markov_chain(const MarkovChainSpec& spec, std::size_t T, std::uint64_t seed);

// Componentwise stationary AR(1): X_{t+1} = phi X_t + sigma xi_t.
RealTrajectory simulate_ar1(double phi, double sigma, std::size_t d, std::size_t T, std::uint64_t seed);

// P^l, row-major.
std::vector<double> transition_power(const MarkovChainSpec& spec, std::size_t l);

// (1/2) sum_{x,y} |pi(x) P^l(x,y) - pi(x) pi(y)|, with P^0 = I.
double beta_coefficient_exact(const MarkovChainSpec& spec, std::size_t l);

// beta(0..max_l) in one pass of repeated multiplication.
std::vector<double> beta_sequence(const MarkovChainSpec& spec, std::size_t max_l);

class MixingEnvelope {
public:
    enum class Kind { Polynomial, Geometric };

    // l^{-zeta}; zeta must exceed 4.
    static MixingEnvelope polynomial(double zeta);
    // c rho^l with rho in (0,1), c > 0.
    static MixingEnvelope geometric(double rho, double c);

    Kind kind() const noexcept { return kind_; }
    double zeta() const noexcept { return zeta_; }
    double rho() const noexcept { return rho_; }
    double c() const noexcept { return c_; }

private:
    MixingEnvelope() = default;
    Kind kind_ = Kind::Polynomial;
    double zeta_ = 0.0;
    double rho_ = 0.0;
    double c_ = 0.0;
};

// Envelope value at lag l; 1 at l = 0.
double beta_envelope(const MixingEnvelope& env, std::size_t l);

// Largest zeta with beta(l) <= l^{-zeta} for every l in 2..max_l (l = 1 never
// binds). +inf when beta vanishes on the whole range.
double fit_polynomial_zeta(const MarkovChainSpec& spec, std::size_t max_l);

// Second largest eigenvalue modulus of P.
double second_eigenvalue_modulus(const MarkovChainSpec& spec);

}  // namespace conc::mixing
