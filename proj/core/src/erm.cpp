#include "conc/erm.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include <nlohmann/json.hpp>

#include "conc/errors.hpp"
#include "conc/mixing.hpp"
#include "conc/rng.hpp"
#include "conc/subweibull.hpp"

namespace conc::erm {

namespace {

constexpr double kFeasibleSlack = 1e-12;

double norm2(std::span<const double> v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return std::sqrt(s);
}

void check_data(const PerceptronSpec& spec, const RegressionData& data) {
    if (data.T == 0) throw InvalidArgument("regression data is empty");
    if (data.d != spec.d) throw InvalidArgument("regression data dimension differs from the perceptron input dimension");
    if (data.X.size() != data.T * data.d || data.Y.size() != data.T) {
        throw InvalidArgument("regression data arrays have inconsistent sizes");
    }
}

// Squared residuals for every observation.
std::vector<double> squared_residuals(const PerceptronSpec& spec, const PerceptronParams& params,
                                      const RegressionData& data) {
    std::vector<double> out(data.T);
    for (std::size_t t = 0; t < data.T; ++t) {
        const double r = data.Y[t] - perceptron_forward(spec, params, data.x(t));
        out[t] = r * r;
    }
    return out;
}

// One gradient-descent run; returns the best iterate seen. risk is +inf when
// the run went non-finite.
TrainResult descend(const PerceptronSpec& spec, const RegressionData& data, const TrainConfig& config,
                    std::size_t restart) {
    Rng rng = make_rng(config.seed, {restart});
    const double scale = std::min(spec.C_Theta, 1.0);
    std::uniform_real_distribution<double> unif(-scale, scale);
    std::normal_distribution<double> normal(0.0, scale / std::sqrt(static_cast<double>(spec.d)));

    PerceptronParams p = PerceptronParams::zeros(spec);
    for (double& v : p.w) v = normal(rng);
    for (double& v : p.psi) v = unif(rng);
    project(spec, p);

    const std::size_t K = spec.K, d = spec.d, T = data.T;
    const double step0 = std::isnan(config.step0)
                             ? 0.1 / (static_cast<double>(K) * std::sqrt(static_cast<double>(d)))
                             : config.step0;
    const std::size_t quarter = std::max<std::size_t>(1, config.steps / 4);

    TrainResult best{p, std::numeric_limits<double>::infinity(), restart, 0};
    std::vector<double> act(K), grad_w(K * d), grad_psi(K), pre(K);
    for (std::size_t s = 0; s <= config.steps; ++s) {
        std::fill(grad_w.begin(), grad_w.end(), 0.0);
        std::fill(grad_psi.begin(), grad_psi.end(), 0.0);
        double loss = 0.0;
        for (std::size_t t = 0; t < T; ++t) {
            const double* x = data.X.data() + t * d;
            double f = 0.0;
            for (std::size_t k = 0; k < K; ++k) {
                double a = 0.0;
                for (std::size_t c = 0; c < d; ++c) a += x[c] * p.w[k * d + c];
                pre[k] = a;
                act[k] = activate(spec.activation, a);
                f += p.psi[k] * act[k];
            }
            const double r = data.Y[t] - f;
            loss += r * r;
            for (std::size_t k = 0; k < K; ++k) {
                grad_psi[k] -= r * act[k];
                const double g = r * p.psi[k] * activate_derivative(spec.activation, pre[k]);
                for (std::size_t c = 0; c < d; ++c) grad_w[k * d + c] -= g * x[c];
            }
        }
        loss /= static_cast<double>(T);
        if (!std::isfinite(loss)) {
            best.risk = std::numeric_limits<double>::infinity();
            return best;
        }
        if (loss < best.risk) {
            best.risk = loss;
            best.params = p;
        }
        if (s == config.steps) break;

        const double step = step0 * std::pow(0.5, static_cast<double>(std::min<std::size_t>(s / quarter, 3)));
        const double g_scale = 2.0 / static_cast<double>(T);
        for (std::size_t i = 0; i < p.w.size(); ++i) p.w[i] -= step * g_scale * grad_w[i];
        for (std::size_t k = 0; k < K; ++k) p.psi[k] -= step * g_scale * grad_psi[k];
        project(spec, p);
    }
    return best;
}

}  // namespace

Activation parse_activation(const std::string& name) {
    if (name == "relu") return Activation::Relu;
    if (name == "tanh") return Activation::Tanh;
    if (name == "sigmoid") {
        throw InvalidArgument("activation 'sigmoid' is not supported: the perceptron model requires sigma(0) = 0");
    }
    throw InvalidArgument("unknown activation '" + name + "' (expected relu or tanh)");
}

std::string to_string(Activation a) {
    return a == Activation::Relu ? "relu" : "tanh";
}

void validate(const PerceptronSpec& spec) {
    if (spec.K < 1 || spec.d < 1) throw InvalidArgument("perceptron needs K >= 1 and d >= 1");
    if (!(spec.C_Theta > 0.0) || !std::isfinite(spec.C_Theta)) throw DomainError("C_Theta must be positive");
    if (!(spec.L > 0.0) || !std::isfinite(spec.L)) throw DomainError("activation Lipschitz constant must be positive");
}

PerceptronParams PerceptronParams::zeros(const PerceptronSpec& spec) {
    return {std::vector<double>(spec.K * spec.d, 0.0), std::vector<double>(spec.K, 0.0)};
}

void check_params(const PerceptronSpec& spec, const PerceptronParams& params) {
    if (params.w.size() != spec.K * spec.d || params.psi.size() != spec.K) {
        throw InvalidArgument("perceptron parameters do not match K x d");
    }
    const double limit = spec.C_Theta * (1.0 + kFeasibleSlack);
    for (std::size_t k = 0; k < spec.K; ++k) {
        if (!(std::abs(params.psi[k]) <= limit)) throw InvalidArgument("psi_k outside [-C_Theta, C_Theta]");
        if (!(norm2({params.w.data() + k * spec.d, spec.d}) <= limit)) {
            throw InvalidArgument("w_k outside the C_Theta ball");
        }
    }
}

bool in_parameter_set(const PerceptronSpec& spec, const PerceptronParams& params) noexcept {
    try {
        check_params(spec, params);
        return true;
    } catch (const std::exception&) {
        return false;
    }
}

void project(const PerceptronSpec& spec, PerceptronParams& params) {
    for (double& v : params.psi) v = std::clamp(v, -spec.C_Theta, spec.C_Theta);
    for (std::size_t k = 0; k < spec.K; ++k) {
        double* wk = params.w.data() + k * spec.d;
        const double nrm = norm2({wk, spec.d});
        if (nrm > spec.C_Theta) {
            const double f = spec.C_Theta / nrm;
            for (std::size_t c = 0; c < spec.d; ++c) wk[c] *= f;
        }
    }
}

nlohmann::json params_to_json(const PerceptronParams& params) {
    const std::size_t K = params.psi.size();
    const std::size_t d = K ? params.w.size() / K : 0;
    nlohmann::json w = nlohmann::json::array();
    for (std::size_t k = 0; k < K; ++k) {
        w.push_back(std::vector<double>(params.w.begin() + k * d, params.w.begin() + (k + 1) * d));
    }
    return {{"w", w}, {"psi", params.psi}};
}

PerceptronParams params_from_json(const nlohmann::json& doc) {
    if (!doc.is_object() || !doc.contains("w") || !doc.contains("psi")) {
        throw InvalidArgument("parameter document needs \"w\" and \"psi\"");
    }
    PerceptronParams p;
    p.psi = doc.at("psi").get<std::vector<double>>();
    const auto rows = doc.at("w").get<std::vector<std::vector<double>>>();
    if (rows.size() != p.psi.size()) throw InvalidArgument("\"w\" must have one row per entry of \"psi\"");
    for (const auto& r : rows) {
        if (r.size() != rows.front().size()) throw InvalidArgument("\"w\" rows differ in length");
        p.w.insert(p.w.end(), r.begin(), r.end());
    }
    return p;
}

double activate(Activation a, double x) noexcept {
    return a == Activation::Relu ? (x > 0.0 ? x : 0.0) : std::tanh(x);
}

double activate_derivative(Activation a, double x) noexcept {
    if (a == Activation::Relu) return x > 0.0 ? 1.0 : 0.0;
    const double t = std::tanh(x);
    return 1.0 - t * t;
}

double perceptron_forward(const PerceptronSpec& spec, const PerceptronParams& params, std::span<const double> x) {
    if (x.size() != spec.d) throw InvalidArgument("perceptron_forward: input has wrong dimension");
    if (params.w.size() != spec.K * spec.d || params.psi.size() != spec.K) {
        throw InvalidArgument("perceptron_forward: parameters do not match K x d");
    }
    double f = 0.0;
    for (std::size_t k = 0; k < spec.K; ++k) {
        double a = 0.0;
        for (std::size_t c = 0; c < spec.d; ++c) a += x[c] * params.w[k * spec.d + c];
        f += params.psi[k] * activate(spec.activation, a);
    }
    return f;
}

RegressionData DataGenerator::generate(std::size_t T, std::uint64_t seed) const {
    validate(spec);
    const auto X = mixing::simulate_ar1(phi, sigma, spec.d, T, derive_seed(seed, {0}));
    Rng noise_rng(derive_seed(seed, {1}));
    std::normal_distribution<double> normal(0.0, 1.0);
    RegressionData data{T, spec.d, X.values, std::vector<double>(T), seed};
    for (std::size_t t = 0; t < T; ++t) {
        data.Y[t] = perceptron_forward(spec, teacher, data.x(t));
        if (noise_sd > 0.0) data.Y[t] += noise_sd * normal(noise_rng);
    }
    return data;
}

double DataGenerator::x_scale() const noexcept {
    return sigma / std::sqrt(1.0 - phi * phi);
}

RegressionData DataGenerator::stationary_sample(std::size_t m, std::uint64_t seed) const {
    validate(spec);
    if (!(std::abs(phi) < 1.0)) throw DomainError("generator needs |phi| < 1");
    Rng rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    RegressionData data{m, spec.d, std::vector<double>(m * spec.d), std::vector<double>(m), seed};
    const double sx = x_scale();
    for (std::size_t t = 0; t < m; ++t) {
        for (std::size_t c = 0; c < spec.d; ++c) data.X[t * spec.d + c] = sx * normal(rng);
        data.Y[t] = perceptron_forward(spec, teacher, data.x(t));
        if (noise_sd > 0.0) data.Y[t] += noise_sd * normal(rng);
    }
    return data;
}

double empirical_risk(const PerceptronSpec& spec, const PerceptronParams& params, const RegressionData& data) {
    check_data(spec, data);
    double s = 0.0;
    for (std::size_t t = 0; t < data.T; ++t) {
        const double r = data.Y[t] - perceptron_forward(spec, params, data.x(t));
        s += r * r;
    }
    return s / static_cast<double>(data.T);
}

std::vector<PerceptronParams> parameter_grid(const PerceptronSpec& spec, std::size_t points_per_coord) {
    validate(spec);
    if (points_per_coord < 2) throw InvalidArgument("parameter grid needs at least 2 points per coordinate");
    const std::size_t p = spec.num_params();
    if (p > kMaxGridParams) {
        throw InvalidArgument("grid mode supports at most " + std::to_string(kMaxGridParams) + " parameters, got " +
                              std::to_string(p));
    }
    std::vector<double> axis(points_per_coord);
    for (std::size_t i = 0; i < points_per_coord; ++i) {
        axis[i] = -spec.C_Theta + 2.0 * spec.C_Theta * static_cast<double>(i) / static_cast<double>(points_per_coord - 1);
    }
    std::vector<PerceptronParams> out;
    std::vector<std::size_t> idx(p, 0);
    for (;;) {
        PerceptronParams q = PerceptronParams::zeros(spec);
        for (std::size_t i = 0; i < spec.K * spec.d; ++i) q.w[i] = axis[idx[i]];
        for (std::size_t k = 0; k < spec.K; ++k) q.psi[k] = axis[idx[spec.K * spec.d + k]];
        if (in_parameter_set(spec, q)) out.push_back(std::move(q));
        std::size_t pos = 0;
        while (pos < p && ++idx[pos] == points_per_coord) idx[pos++] = 0;
        if (pos == p) break;
    }
    return out;
}

TrainResult train_erm(const PerceptronSpec& spec, const RegressionData& data, const TrainConfig& config) {
    validate(spec);
    check_data(spec, data);
    const bool grid = config.mode == TrainConfig::Mode::Grid ||
                      (config.mode == TrainConfig::Mode::Auto && spec.num_params() <= kMaxGridParams);
    if (grid) {
        const auto candidates = parameter_grid(spec, config.grid_points);
        TrainResult best{candidates.front(), std::numeric_limits<double>::infinity(), 0, 0};
        for (std::size_t i = 0; i < candidates.size(); ++i) {
            const double r = empirical_risk(spec, candidates[i], data);
            if (!std::isfinite(r)) {
                ++best.discarded;
                continue;
            }
            if (r < best.risk) best = {candidates[i], r, i, best.discarded};
        }
        if (!std::isfinite(best.risk)) throw TrainingFailed("grid search: every grid point gave a non-finite risk");
        return best;
    }

    if (config.restarts == 0) throw InvalidArgument("train_erm: restarts must be >= 1");
    TrainResult best{PerceptronParams::zeros(spec), std::numeric_limits<double>::infinity(), 0, 0};
    for (std::size_t r = 0; r < config.restarts; ++r) {
        TrainResult run = descend(spec, data, config, r);
        if (!std::isfinite(run.risk)) {
            ++best.discarded;
            continue;
        }
        if (run.risk < best.risk) {
            const std::size_t discarded = best.discarded;
            best = std::move(run);
            best.discarded = discarded;
        }
    }
    if (!std::isfinite(best.risk)) throw TrainingFailed("train_erm: all restarts produced non-finite risk");
    // The zero predictor lies in Theta; never return anything that fits worse.
    const auto zero = PerceptronParams::zeros(spec);
    const double zero_risk = empirical_risk(spec, zero, data);
    if (zero_risk < best.risk) {
        best.params = zero;
        best.risk = zero_risk;
        best.best_restart = config.restarts;
    }
    return best;
}

RiskEstimate risk_on_sample(const PerceptronSpec& spec, const PerceptronParams& params, const RegressionData& sample) {
    check_data(spec, sample);
    const auto sq = squared_residuals(spec, params, sample);
    const double m = static_cast<double>(sq.size());
    double mean = 0.0;
    for (double v : sq) mean += v;
    mean /= m;
    double var = 0.0;
    for (double v : sq) var += (v - mean) * (v - mean);
    var = sq.size() > 1 ? var / (m - 1.0) : 0.0;
    return {mean, std::sqrt(var / m)};
}

RiskEstimate population_risk(const PerceptronSpec& spec, const PerceptronParams& params,
                             const DataGenerator& generator, std::size_t m, std::uint64_t seed) {
    if (m < kMinMonteCarloDraws) {
        throw InvalidArgument("population_risk: need at least " + std::to_string(kMinMonteCarloDraws) +
                              " Monte Carlo draws, got " + std::to_string(m));
    }
    return risk_on_sample(spec, params, generator.stationary_sample(m, seed));
}

OracleEstimate oracle_risk(const PerceptronSpec& spec, const DataGenerator& generator, std::size_t T,
                           const TrainConfig& config, const RegressionData& evaluation,
                           std::span<const PerceptronParams> candidates) {
    TrainConfig big = config;
    big.restarts = config.restarts * 10;
    big.seed = derive_seed(config.seed, {0x0c1e});
    const auto data = generator.generate(T * 10, derive_seed(config.seed, {0xda7a}));
    const auto fitted = train_erm(spec, data, big);

    const auto est = risk_on_sample(spec, fitted.params, evaluation);
    OracleEstimate best{est.mean, est.std_error, fitted.params, true};
    for (const auto& c : candidates) {
        check_params(spec, c);
        const auto e = risk_on_sample(spec, c, evaluation);
        if (e.mean < best.risk) best = {e.mean, e.std_error, c, true};
    }
    return best;
}

BasicInequalityResult basic_inequality_check(const PerceptronSpec& spec, const PerceptronParams& theta_hat,
                                             const RegressionData& data, const RegressionData& evaluation,
                                             std::span<const PerceptronParams> grid,
                                             std::span<const double> grid_risk) {
    if (grid_risk.size() != grid.size()) throw InvalidArgument("basic_inequality_check: one risk per grid point");
    double best_emp = empirical_risk(spec, theta_hat, data);
    double risk_at_best_emp = risk_on_sample(spec, theta_hat, evaluation).mean;
    double min_risk = risk_at_best_emp;
    double sup_gap = std::abs(best_emp - risk_at_best_emp);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double emp = empirical_risk(spec, grid[i], data);
        const double pop = grid_risk[i];
        if (emp < best_emp) {
            best_emp = emp;
            risk_at_best_emp = pop;
        }
        min_risk = std::min(min_risk, pop);
        sup_gap = std::max(sup_gap, std::abs(emp - pop));
    }
    BasicInequalityResult res;
    res.lhs = std::abs(risk_at_best_emp - min_risk);
    res.rhs = 2.0 * sup_gap;
    res.slack = res.rhs - res.lhs;
    // Rounding in the two risk sums can leave the identity off by an ulp.
    res.passed = res.lhs <= res.rhs * (1.0 + 1e-12) + 1e-15;
    return res;
}

BasicInequalityResult basic_inequality_check(const PerceptronSpec& spec, const PerceptronParams& theta_hat,
                                             const RegressionData& data, const RegressionData& evaluation,
                                             std::span<const PerceptronParams> grid) {
    std::vector<double> risk;
    risk.reserve(grid.size());
    for (const auto& g : grid) risk.push_back(risk_on_sample(spec, g, evaluation).mean);
    return basic_inequality_check(spec, theta_hat, data, evaluation, grid, risk);
}

double default_c_prime() {
    return 2.0 + subweibull::moment_const_c1(2.0) / std::sqrt(std::numbers::ln2);
}

NNConstants nn_condition_constants(const PerceptronSpec& spec, double sigma_X, double sigma_Y, double c_prime,
                                   double c_vershynin) {
    validate(spec);
    if (!(sigma_X > 0.0) || !(sigma_Y > 0.0)) throw DomainError("sigma_X and sigma_Y must be positive");
    if (!(c_prime > 0.0) || !(c_vershynin > 0.0)) throw DomainError("constants must be positive");
    const double K = static_cast<double>(spec.K);
    const double C = spec.C_Theta;
    const double L = spec.L;

    NNConstants out;
    out.C_prime = c_prime;
    out.C1 = std::max({(1.0 + c_prime) * L * C * sigma_X * (K + 1.0), std::sqrt(K) * c_prime * L * C * C * sigma_X,
                       sigma_Y});
    const double log_d = std::log(static_cast<double>(std::max<std::size_t>(spec.d, 2)));
    out.C2 = K * L * C * C * c_vershynin * sigma_X * std::sqrt(log_d);
    out.d_theta_scale = 1.0;
    out.d_x_scale = K * L * C * C;
    out.C_Theta_bound = 16.0 * out.C1 * out.C1;
    out.C_Z = 12.0 * out.C1 * subweibull::moment_const_c1(2.0) * std::sqrt(4.0) * (out.C1 + out.C2);
    return out;
}

}  // namespace conc::erm
