#include <cerrno>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <iostream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "conc/errors.hpp"
#include "conc/harness.hpp"

namespace conc::harness {

namespace {

std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

}  // namespace

void write_results(const std::vector<ResultRecord>& records, OutputFormat format, std::ostream& out) {
    if (format == OutputFormat::Csv) {
        out << "experiment,T,n,replication,seed,observed,threshold,exceeded,wall_ms\n";
        for (const auto& r : records) {
            out << csv_field(r.experiment) << ',' << r.T << ',' << r.n << ',' << r.replication << ',' << r.seed << ','
                << num(r.observed) << ',' << num(r.threshold) << ',' << (r.exceeded ? 1 : 0) << ',' << num(r.wall_ms)
                << '\n';
        }
        return;
    }
    out << "[";
    for (std::size_t i = 0; i < records.size(); ++i) {
        const auto& r = records[i];
        out << (i ? ",\n " : "\n ") << "{\"experiment\": " << nlohmann::json(r.experiment).dump() << ", \"T\": " << r.T
            << ", \"n\": " << r.n << ", \"replication\": " << r.replication << ", \"seed\": " << r.seed
            << ", \"observed\": " << num(r.observed) << ", \"threshold\": " << num(r.threshold)
            << ", \"exceeded\": " << (r.exceeded ? "true" : "false") << ", \"wall_ms\": " << num(r.wall_ms) << "}";
    }
    out << (records.empty() ? "]\n" : "\n]\n");
}

void emit_results(const std::vector<ResultRecord>& records, OutputFormat format, const std::string& path) {
    if (path.empty() || path == "-") {
        write_results(records, format, std::cout);
        std::cout.flush();
        if (!std::cout) throw IoError("failed writing results to standard output");
        return;
    }
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw IoError("cannot open '" + path + "' for writing: " + std::strerror(errno));
    write_results(records, format, f);
    f.close();
    if (!f) throw IoError("failed writing results to '" + path + "'");
}

std::vector<ResultRecord> parse_results_json(const std::string& text) {
    const auto doc = nlohmann::json::parse(text);
    std::vector<ResultRecord> out;
    for (const auto& j : doc) {
        ResultRecord r;
        r.experiment = j.at("experiment").get<std::string>();
        r.T = j.at("T").get<long long>();
        r.n = j.at("n").get<long long>();
        r.replication = j.at("replication").get<std::size_t>();
        r.seed = j.at("seed").get<std::uint64_t>();
        r.observed = j.at("observed").get<double>();
        r.threshold = j.at("threshold").get<double>();
        r.exceeded = j.at("exceeded").get<bool>();
        r.wall_ms = j.at("wall_ms").get<double>();
        out.push_back(std::move(r));
    }
    return out;
}

}  // namespace conc::harness
