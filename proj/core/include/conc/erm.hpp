#pragma once

// Single-hidden-layer perceptron regression f(x) = sum_k psi_k sigma(x . w_k)
// over Theta = {|psi_k| <= C, ||w_k||_2 <= C}, square-loss ERM, and Monte
// Carlo risk evaluation.

#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

namespace conc::erm {

enum class Activation { Relu, Tanh };

Activation parse_activation(const std::string& name);
std::string to_string(Activation a);

struct PerceptronSpec {
    std::size_t K = 1;
    std::size_t d = 1;
    Activation activation = Activation::Relu;
    double C_Theta = 1.0;
    double L = 1.0;

    std::size_t num_params() const noexcept { return K * d + K; }
};

void validate(const PerceptronSpec& spec);

struct PerceptronParams {
    std::vector<double> w;    // row-major K x d
    std::vector<double> psi;  // length K

    static PerceptronParams zeros(const PerceptronSpec& spec);
};

// Throws InvalidArgument on shape mismatch or when params leave Theta
// (relative slack 1e-12).
void check_params(const PerceptronSpec& spec, const PerceptronParams& params);
bool in_parameter_set(const PerceptronSpec& spec, const PerceptronParams& params) noexcept;

// Clips psi and rescales each w_k onto the C_Theta ball.
void project(const PerceptronSpec& spec, PerceptronParams& params);

nlohmann::json params_to_json(const PerceptronParams& params);
PerceptronParams params_from_json(const nlohmann::json& doc);

double activate(Activation a, double x) noexcept;
// Derivative; the ReLU sub-gradient at 0 is 0.
double activate_derivative(Activation a, double x) noexcept;

double perceptron_forward(const PerceptronSpec& spec, const PerceptronParams& params, std::span<const double> x);

struct RegressionData {
    std::size_t T = 0;
    std::size_t d = 0;
    std::vector<double> X;  // row-major T x d
    std::vector<double> Y;
    std::uint64_t seed = 0;

    std::span<const double> x(std::size_t t) const noexcept { return {X.data() + t * d, d}; }
};

// Y_t = f_teacher(X_t) + noise_sd * xi_t with X an AR(1) process in each
// coordinate (stationary start) and xi_t i.i.d. standard Gaussian.
struct DataGenerator {
    PerceptronSpec spec;
    PerceptronParams teacher;
    double phi = 0.6;
    double sigma = 1.0;
    double noise_sd = 0.0;

    RegressionData generate(std::size_t T, std::uint64_t seed) const;
    // m independent draws from the stationary law of (X_t, Y_t).
    RegressionData stationary_sample(std::size_t m, std::uint64_t seed) const;
    // Stationary standard deviation of each X coordinate.
    double x_scale() const noexcept;
};

// (1/T) sum (Y_t - f(X_t))^2.
double empirical_risk(const PerceptronSpec& spec, const PerceptronParams& params, const RegressionData& data);

struct TrainConfig {
    enum class Mode { Auto, Gradient, Grid };

    std::size_t restarts = 20;
    std::size_t steps = 2000;
    // Initial step; NaN selects 0.1 / (K sqrt(d)). Halved every quarter of the budget.
    double step0 = std::numeric_limits<double>::quiet_NaN();
    std::uint64_t seed = 0;
    Mode mode = Mode::Gradient;
    // Points per coordinate in grid mode.
    std::size_t grid_points = 41;
};

// Largest parameter count for which grid mode is allowed.
inline constexpr std::size_t kMaxGridParams = 4;

struct TrainResult {
    PerceptronParams params;
    double risk = 0.0;
    std::size_t best_restart = 0;
    std::size_t discarded = 0;
};

// Multi-start projected gradient descent (or exhaustive grid search). Every
// restart uses its own stream derived from (seed, restart); the lowest risk
// wins and ties go to the lowest restart index. Throws TrainingFailed when no
// restart stays finite.
TrainResult train_erm(const PerceptronSpec& spec, const RegressionData& data, const TrainConfig& config);

// Feasible points of the per-coordinate grid on [-C_Theta, C_Theta]^p.
std::vector<PerceptronParams> parameter_grid(const PerceptronSpec& spec, std::size_t points_per_coord);

struct RiskEstimate {
    double mean = 0.0;
    double std_error = 0.0;
};

inline constexpr std::size_t kMinMonteCarloDraws = 100;

// Mean squared residual over a fixed evaluation sample, with its standard error.
RiskEstimate risk_on_sample(const PerceptronSpec& spec, const PerceptronParams& params, const RegressionData& sample);

// Monte Carlo population risk over m stationary draws (m >= 100).
RiskEstimate population_risk(const PerceptronSpec& spec, const PerceptronParams& params,
                             const DataGenerator& generator, std::size_t m, std::uint64_t seed);

struct OracleEstimate {
    double risk = 0.0;
    double std_error = 0.0;
    PerceptronParams params;
    // Always true: training can only approach the infimum from above.
    bool upper_bound = true;
};

// Upper estimate of inf_Theta R: ERM on a 10x larger sample with 10x the
// restarts, compared (on the same evaluation draws) with any supplied
// candidates; returns the smallest.
OracleEstimate oracle_risk(const PerceptronSpec& spec, const DataGenerator& generator, std::size_t T,
                           const TrainConfig& config, const RegressionData& evaluation,
                           std::span<const PerceptronParams> candidates = {});

struct BasicInequalityResult {
    bool passed = false;
    double lhs = 0.0;    // |R(grid ERM) - min_grid R|
    double rhs = 0.0;    // 2 max_grid |R_T - R|
    double slack = 0.0;  // rhs - lhs
};

// Checks |R(theta_g) - min R| <= 2 sup |R_T - R| on grid u {theta_hat}, where
// theta_g minimizes R_T over that set and R is evaluated on `evaluation`.
BasicInequalityResult basic_inequality_check(const PerceptronSpec& spec, const PerceptronParams& theta_hat,
                                             const RegressionData& data, const RegressionData& evaluation,
                                             std::span<const PerceptronParams> grid);

// Same check with R on the grid supplied (grid_risk[i] = R(grid[i]) on
// `evaluation`), for repeated checks against a fixed grid.
BasicInequalityResult basic_inequality_check(const PerceptronSpec& spec, const PerceptronParams& theta_hat,
                                             const RegressionData& data, const RegressionData& evaluation,
                                             std::span<const PerceptronParams> grid,
                                             std::span<const double> grid_risk);

struct NNConstants {
    double C1 = 0.0;
    double C2 = 0.0;
    double C_prime = 0.0;
    double d_theta_scale = 1.0;
    double d_x_scale = 0.0;
    // Derived inputs for the concentration bound (r = s = 2).
    double C_Theta_bound = 0.0;
    double C_Z = 0.0;
};

// 2 + C1(2)/sqrt(log 2).
double default_c_prime();

// C1 = max{(1+C') L C sigma_X (K+1), sqrt(K) C' L C^2 sigma_X, sigma_Y};
// C2 = K L C^2 c_vershynin sigma_X sqrt(log d), with d = 1 lifted to d = 2.
NNConstants nn_condition_constants(const PerceptronSpec& spec, double sigma_X, double sigma_Y,
                                   double c_prime = default_c_prime(), double c_vershynin = 1.0);

}  // namespace conc::erm
