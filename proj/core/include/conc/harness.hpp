#pragma once

// Experiment orchestration: configuration, seeded replication runs and result
// emission.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "conc/bounds.hpp"
#include "conc/erm.hpp"
#include "conc/mixing.hpp"

namespace conc::harness {

enum class ExperimentKind { Concentration, ErmOracle, BetaProfile, GammaProfile };

ExperimentKind parse_kind(const std::string& name);
std::string to_string(ExperimentKind kind);

enum class OutputFormat { Csv, Json };

OutputFormat parse_format(const std::string& name);

// How the effective sample size n is chosen for each T.
enum class SampleRule { Fixed, Zeta, Iid };

// Which beta function enters the bound.
enum class BetaMode { Exact, Zero, Envelope };

struct ConcentrationSettings {
    std::vector<double> values;  // state values v_x; g(x, theta) = (v_x - theta)^2
    std::size_t theta_points = 41;
    double theta_radius = 1.0;
    SampleRule n_rule = SampleRule::Zeta;
    double zeta = 10.0;
    long long n = 0;
    BetaMode beta_mode = BetaMode::Exact;
    std::optional<mixing::MixingEnvelope> envelope;
    double target_prob = 0.05;
    double coupling_share = 0.5;
    double r = 1.0;
    double s = 8.0;
};

struct ErmSettings {
    erm::DataGenerator generator;
    erm::TrainConfig train;
    std::size_t mc_draws = 100000;
    double zeta = 10.0;
    double bound_constant = 1.0;
    bool use_nn_bound = true;
    double gamma2 = 1.0;
    double gamma1 = 1.0;
    double C_Z = 1.0;
    std::size_t check_grid_size = 64;
    std::size_t oracle_T = 1024;
};

struct ExperimentConfig {
    ExperimentKind kind = ExperimentKind::Concentration;
    std::string name;
    std::uint64_t seed = 0;
    std::size_t replications = 1;
    std::vector<long long> T_grid;
    std::size_t threads = 1;
    std::string output;
    OutputFormat format = OutputFormat::Csv;

    std::optional<mixing::MarkovChainSpec> chain;
    ConcentrationSettings concentration;
    ErmSettings erm;
};

// Chain document: {"two_state": {"p", "q"}} or {"P": [[...]], "pi"?: [...]}.
// Errors are ConfigError prefixed with `path`.
mixing::MarkovChainSpec parse_chain(const nlohmann::json& j, const std::string& path);
// {"kind": "polynomial", "zeta"} or {"kind": "geometric", "rho", "c"?}.
mixing::MixingEnvelope parse_envelope(const nlohmann::json& j, const std::string& path);

// Throws ConfigError with the JSON path of the offending field.
ExperimentConfig parse_config(const nlohmann::json& doc);
ExperimentConfig load_config(const std::string& path);

struct ResultRecord {
    std::string experiment;
    long long T = 0;
    long long n = 0;
    std::size_t replication = 0;
    std::uint64_t seed = 0;
    double observed = 0.0;
    double threshold = 0.0;
    bool exceeded = false;
    double wall_ms = 0.0;

    // Not serialized: outcome of the per-replication basic inequality check.
    std::optional<bool> basic_inequality_passed;
};

// Per-T bound calibration used by the concentration experiment.
struct Calibration {
    long long T = 0;
    long long n = 0;
    double eps1 = 0.0;
    double eps2 = 0.0;
    double C_Theta = 0.0;
    double C_Z = 0.0;
    double gamma2 = 0.0;
    bounds::BoundResult bound;
};

Calibration calibrate_concentration(const ExperimentConfig& config, long long T);

// Runs `tasks` jobs over `threads` workers; job(i) must only write slot i.
void parallel_for(std::size_t tasks, std::size_t threads, const std::function<void(std::size_t)>& job);

std::vector<ResultRecord> run_concentration_experiment(const ExperimentConfig& config);
std::vector<ResultRecord> run_erm_experiment(const ExperimentConfig& config);
std::vector<ResultRecord> run_experiment(const ExperimentConfig& config);

void write_results(const std::vector<ResultRecord>& records, OutputFormat format, std::ostream& out);
// Throws IoError naming the path.
void emit_results(const std::vector<ResultRecord>& records, OutputFormat format, const std::string& path);
std::vector<ResultRecord> parse_results_json(const std::string& text);

}  // namespace conc::harness
