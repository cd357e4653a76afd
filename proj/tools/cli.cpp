#include "cli.hpp"

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "conc/bounds.hpp"
#include "conc/chaining.hpp"
#include "conc/errors.hpp"
#include "conc/harness.hpp"
#include "conc/mixing.hpp"

namespace conc::cli {

namespace {

using nlohmann::json;

struct GlobalOptions {
    std::string config;
    std::string out;
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> threads;
    std::optional<std::string> format;
    std::size_t max_lag = 20;
};

json read_json(const std::string& path) {
    if (path.empty()) throw ConfigError("--config: a JSON configuration file is required");
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path);
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError(path + ": " + e.what());
    }
}

harness::OutputFormat resolve_format(const GlobalOptions& g, harness::OutputFormat fallback) {
    if (!g.format) return fallback;
    try {
        return harness::parse_format(*g.format);
    } catch (const std::exception&) {
        throw ConfigError("--format: expected csv or json, got " + *g.format);
    }
}

// Writes to `path` ("" or "-" means `out`).
void emit(const std::string& path, std::ostream& out, const std::function<void(std::ostream&)>& writer) {
    if (path.empty() || path == "-") {
        writer(out);
        out.flush();
        return;
    }
    std::ofstream file(path, std::ios::binary);
    if (!file) throw IoError("cannot open " + path + " for writing");
    writer(file);
    file.flush();
    if (!file) throw IoError("write failed: " + path);
}

std::string fmt(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

template <class V>
V get_or(const json& j, const char* key, V fallback) {
    if (!j.contains(key)) return fallback;
    try {
        return j.at(key).get<V>();
    } catch (const json::exception& e) {
        throw ConfigError(std::string("/") + key + ": " + e.what());
    }
}

template <class V>
V get_required(const json& j, const char* key) {
    if (!j.contains(key)) throw ConfigError(std::string("/") + key + ": required field is missing");
    return get_or<V>(j, key, V{});
}

// Key/value pairs written as a two-column CSV or a flat JSON object.
void write_pairs(const json& obj, harness::OutputFormat format, std::ostream& os) {
    if (format == harness::OutputFormat::Json) {
        os << obj.dump(2) << '\n';
        return;
    }
    os << "quantity,value\n";
    for (const auto& [key, value] : obj.items()) {
        if (value.is_object()) {
            for (const auto& [sub, v] : value.items()) {
                os << key << '.' << sub << ',' << (v.is_number() ? fmt(v.get<double>()) : v.dump()) << '\n';
            }
        } else if (value.is_number()) {
            os << key << ',' << fmt(value.get<double>()) << '\n';
        } else {
            os << key << ',' << (value.is_string() ? value.get<std::string>() : value.dump()) << '\n';
        }
    }
}

void cmd_simulate(const GlobalOptions& g, std::ostream& out) {
    const json doc = read_json(g.config);
    const auto T = get_required<std::size_t>(doc, "T");
    if (T < 1) throw ConfigError("/T: must be >= 1");
    const std::uint64_t seed = g.seed.value_or(get_or<std::uint64_t>(doc, "seed", 0));
    const auto format = resolve_format(g, harness::OutputFormat::Csv);

    if (doc.contains("chain")) {
        const auto spec = harness::parse_chain(doc.at("chain"), "/chain");
        const auto path = mixing::simulate_markov_chain(spec, T, seed);
        emit(g.out, out, [&](std::ostream& os) {
            if (format == harness::OutputFormat::Json) {
                os << json{{"t", T}, {"state", path}}.dump() << '\n';
                return;
            }
            os << "t,state\n";
            for (std::size_t t = 0; t < path.size(); ++t) os << t + 1 << ',' << path[t] << '\n';
        });
        return;
    }
    if (doc.contains("ar1")) {
        const auto& a = doc.at("ar1");
        const double phi = get_required<double>(a, "phi");
        const double sigma = get_or<double>(a, "sigma", 1.0);
        const auto d = get_or<std::size_t>(a, "d", 1);
        if (!(std::abs(phi) < 1.0)) throw ConfigError("/ar1/phi: must satisfy |phi| < 1");
        if (!(sigma > 0.0)) throw ConfigError("/ar1/sigma: must be positive");
        if (d < 1) throw ConfigError("/ar1/d: must be >= 1");
        const auto traj = mixing::simulate_ar1(phi, sigma, d, T, seed);
        emit(g.out, out, [&](std::ostream& os) {
            if (format == harness::OutputFormat::Json) {
                json rows = json::array();
                for (std::size_t t = 0; t < traj.T; ++t) {
                    rows.push_back(std::vector<double>(traj.row(t), traj.row(t) + traj.d));
                }
                os << json{{"T", traj.T}, {"d", traj.d}, {"x", rows}}.dump() << '\n';
                return;
            }
            os << "t";
            for (std::size_t c = 0; c < traj.d; ++c) os << ",x" << c;
            os << '\n';
            for (std::size_t t = 0; t < traj.T; ++t) {
                os << t + 1;
                for (std::size_t c = 0; c < traj.d; ++c) os << ',' << fmt(traj(t, c));
                os << '\n';
            }
        });
        return;
    }
    throw ConfigError("/: expected a \"chain\" or \"ar1\" section");
}

void cmd_beta(const GlobalOptions& g, std::ostream& out) {
    const json doc = read_json(g.config);
    const auto spec = harness::parse_chain(doc.contains("chain") ? doc.at("chain") : doc,
                                           doc.contains("chain") ? "/chain" : "");
    const auto max_lag = get_or<std::size_t>(doc, "max_lag", g.max_lag);
    const auto beta = mixing::beta_sequence(spec, max_lag);
    const auto format = resolve_format(g, harness::OutputFormat::Csv);
    emit(g.out, out, [&](std::ostream& os) {
        if (format == harness::OutputFormat::Json) {
            json rows = json::array();
            for (std::size_t l = 0; l < beta.size(); ++l) rows.push_back({{"l", l}, {"beta", beta[l]}});
            os << rows.dump() << '\n';
            return;
        }
        os << "l,beta\n";
        for (std::size_t l = 0; l < beta.size(); ++l) os << l << ',' << fmt(beta[l]) << '\n';
    });
}

chaining::FiniteMetricSpace space_from(const json& doc) {
    try {
        if (doc.contains("distances")) {
            const auto rows = doc.at("distances").get<std::vector<std::vector<double>>>();
            std::vector<double> flat;
            for (const auto& r : rows) {
                if (r.size() != rows.size()) throw ConfigError("/distances: matrix must be square");
                flat.insert(flat.end(), r.begin(), r.end());
            }
            return chaining::FiniteMetricSpace(rows.size(), std::move(flat));
        }
        if (doc.contains("points")) {
            const auto rows = doc.at("points").get<std::vector<std::vector<double>>>();
            if (rows.empty()) throw ConfigError("/points: empty");
            std::vector<double> flat;
            for (const auto& r : rows) {
                if (r.size() != rows[0].size()) throw ConfigError("/points: rows differ in dimension");
                flat.insert(flat.end(), r.begin(), r.end());
            }
            return chaining::FiniteMetricSpace::euclidean(flat, rows[0].size());
        }
        if (doc.contains("line")) {
            const auto xs = doc.at("line").get<std::vector<double>>();
            return chaining::FiniteMetricSpace::on_line(xs);
        }
    } catch (const json::exception& e) {
        throw ConfigError(std::string("metric space: ") + e.what());
    }
    throw ConfigError("/: expected \"distances\", \"points\" or \"line\"");
}

void cmd_gamma(const GlobalOptions& g, std::ostream& out) {
    const json doc = read_json(g.config);
    const auto space = space_from(doc);
    const double alpha = get_or<double>(doc, "alpha", 2.0);
    if (!(alpha > 0.0)) throw ConfigError("/alpha: must be positive");

    const auto seq = chaining::greedy_admissible_sequence(space);
    json result{{"points", space.size()},
                {"alpha", alpha},
                {"diameter", space.diameter()},
                {"depth", seq.depth()},
                {"gamma_greedy", chaining::gamma_value(space, seq, alpha)},
                {"entropy_bound", chaining::entropy_integral_gamma_bound(space, alpha)}};
    if (space.size() <= chaining::kExactGammaLimit) result["gamma_exact"] = chaining::gamma_exact_small(space, alpha);

    const auto format = resolve_format(g, harness::OutputFormat::Json);
    emit(g.out, out, [&](std::ostream& os) { write_pairs(result, format, os); });
}

bounds::BetaFunction beta_from(const json& doc) {
    if (!doc.contains("beta")) return bounds::beta_zero();
    const auto& b = doc.at("beta");
    const auto kind = get_required<std::string>(b, "kind");
    if (kind == "zero") return bounds::beta_zero();
    if (kind == "polynomial" || kind == "geometric") {
        return bounds::beta_from_envelope(harness::parse_envelope(b, "/beta"));
    }
    if (kind == "chain") return bounds::beta_from_chain(harness::parse_chain(b, "/beta"));
    throw ConfigError("/beta/kind: expected zero, polynomial, geometric or chain");
}

json bound_json(const bounds::BoundResult& r, long long T, long long n) {
    return json{{"T", T},
                {"n", n},
                {"threshold", r.threshold},
                {"compact_threshold", r.compact_threshold},
                {"terms", {{"blocked_sum", r.terms[0]}, {"chaining", r.terms[1]}, {"coupling", r.terms[2]}}},
                {"failure_prob", r.failure_prob},
                {"raw_prob", r.raw_prob},
                {"vacuous", r.vacuous}};
}

json oracle_json(const bounds::OracleBound& b, long long T) {
    return json{{"T", T}, {"n", b.n}, {"bound", b.bound}, {"prob", b.prob}, {"vacuous", b.vacuous}};
}

void cmd_bound(const GlobalOptions& g, std::ostream& out) {
    const json doc = read_json(g.config);
    const auto form = get_or<std::string>(doc, "form", "theorem");
    const auto T = get_required<long long>(doc, "T");
    json result;

    if (form == "oracle" || form == "nn") {
        const double zeta = get_required<double>(doc, "zeta");
        const double C = get_or<double>(doc, "C", 1.0);
        if (form == "oracle") {
            result = oracle_json(bounds::oracle_inequality_bound(T, zeta, get_required<double>(doc, "gamma2"),
                                                                 get_required<double>(doc, "gamma1"), C,
                                                                 get_required<double>(doc, "C_Z")),
                                 T);
        } else {
            result = oracle_json(bounds::nn_bound(T, zeta, get_required<long long>(doc, "d"), C), T);
        }
    } else if (form == "theorem" || form == "simplified") {
        bounds::BoundInputs in;
        in.alpha = get_or<double>(doc, "alpha", in.alpha);
        in.C_Theta = get_or<double>(doc, "C_Theta", in.C_Theta);
        in.C_Z = get_or<double>(doc, "C_Z", in.C_Z);
        in.r = get_or<double>(doc, "r", in.r);
        in.s = get_or<double>(doc, "s", in.s);
        in.gamma2 = get_or<double>(doc, "gamma2", in.gamma2);
        in.gamma_alpha = get_or<double>(doc, "gamma_alpha", in.gamma_alpha);
        in.T = T;
        if (doc.contains("n")) {
            in.n = get_required<long long>(doc, "n");
        } else if (doc.contains("zeta")) {
            in.n = bounds::effective_sample_size(T, get_required<double>(doc, "zeta")).n;
        } else {
            throw ConfigError("/n: give either n or zeta");
        }
        in.beta = beta_from(doc);
        if (form == "theorem") {
            in.eps1 = get_required<double>(doc, "eps1");
            in.eps2 = get_required<double>(doc, "eps2");
            result = bound_json(bounds::theorem_bound(in), in.T, in.n);
        } else {
            result = bound_json(bounds::simplified_bound(in.T, in.n, get_required<double>(doc, "eps"), in), in.T, in.n);
        }
    } else {
        throw ConfigError("/form: expected theorem, simplified, oracle or nn");
    }

    const auto format = resolve_format(g, harness::OutputFormat::Json);
    emit(g.out, out, [&](std::ostream& os) { write_pairs(result, format, os); });
}

void cmd_experiment(const GlobalOptions& g, const std::string& kind, std::ostream& out) {
    json doc = read_json(g.config);
    if (doc.is_object()) doc["experiment"] = kind;
    auto config = harness::parse_config(doc);
    if (g.seed) config.seed = *g.seed;
    if (g.threads) config.threads = *g.threads;
    if (g.format) config.format = resolve_format(g, config.format);
    const std::string path = g.out.empty() ? config.output : g.out;

    const auto records = harness::run_experiment(config);
    emit(path, out, [&](std::ostream& os) { harness::write_results(records, config.format, os); });
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Concentration bounds for beta-mixing processes", "conc"};
    app.require_subcommand(1);
    app.fallthrough();

    GlobalOptions g;
    app.add_option("--config", g.config, "JSON configuration file");
    app.add_option("--out", g.out, "output path (default stdout)");
    app.add_option("--seed", g.seed, "master seed, overrides the configuration");
    app.add_option("--threads", g.threads, "worker threads, overrides the configuration")
        ->check(CLI::PositiveNumber);
    app.add_option("--format", g.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));

    auto* simulate = app.add_subcommand("simulate", "simulate a Markov chain or AR(1) trajectory");
    auto* beta = app.add_subcommand("beta", "exact beta-mixing coefficients of a finite chain");
    beta->add_option("--max-lag", g.max_lag, "largest lag l");
    auto* gamma = app.add_subcommand("gamma", "gamma functional estimates for a finite metric space");
    auto* bound = app.add_subcommand("bound", "evaluate a concentration or oracle bound");
    auto* erm_cmd = app.add_subcommand("erm", "run the ERM oracle-inequality experiment");
    auto* conc_cmd = app.add_subcommand("concentration", "run the concentration dominance experiment");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kOk : kConfigError;
    }

    try {
        if (simulate->parsed()) cmd_simulate(g, out);
        else if (beta->parsed()) cmd_beta(g, out);
        else if (gamma->parsed()) cmd_gamma(g, out);
        else if (bound->parsed()) cmd_bound(g, out);
        else if (erm_cmd->parsed()) cmd_experiment(g, "erm-oracle", out);
        else if (conc_cmd->parsed()) cmd_experiment(g, "concentration", out);
        return kOk;
    } catch (const BlockingInfeasible& e) {
        err << "infeasible: " << e.what() << '\n';
        return kInfeasible;
    } catch (const IoError& e) {
        err << "i/o error: " << e.what() << '\n';
        return kIoError;
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << '\n';
        return kConfigError;
    } catch (const InvalidArgument& e) {
        err << "invalid input: " << e.what() << '\n';
        return kConfigError;
    } catch (const DomainError& e) {
        err << "invalid input: " << e.what() << '\n';
        return kConfigError;
    } catch (const nlohmann::json::exception& e) {
        err << "config error: " << e.what() << '\n';
        return kConfigError;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kFailure;
    }
}

}  // namespace conc::cli
