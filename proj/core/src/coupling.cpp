#include "conc/coupling.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "conc/errors.hpp"

namespace conc::coupling {

namespace {

void require_distribution(std::span<const double> p, const char* name) {
    if (p.empty()) throw InvalidArgument(std::string(name) + ": empty distribution");
    double total = 0.0;
    for (double v : p) {
        if (!(v >= 0.0) || !std::isfinite(v)) throw InvalidArgument(std::string(name) + ": negative or non-finite mass");
        total += v;
    }
    if (std::abs(total - 1.0) > 1e-9) throw InvalidArgument(std::string(name) + ": masses do not sum to 1");
}

// Draws from the unnormalized weights w (total mass given).
std::size_t draw_weighted(const std::vector<double>& w, double total, Rng& rng) {
    const double u = uniform01(rng) * total;
    double acc = 0.0;
    std::size_t last = 0;
    for (std::size_t i = 0; i < w.size(); ++i) {
        if (w[i] <= 0.0) continue;
        acc += w[i];
        last = i;
        if (u < acc) return i;
    }
    return last;
}

}  // namespace

BlockLayout block_layout(long long T, long long n) {
    if (n < 1 || T < n) {
        throw InvalidArgument("block_layout: need 1 <= n <= T, got T=" + std::to_string(T) + ", n=" + std::to_string(n));
    }
    const long long M = T / n;
    if (M * (n + 1) <= T) throw BlockingInfeasible(T, n);
    return {T, n, M};
}

std::vector<std::optional<std::size_t>> block_positions(const BlockLayout& layout, long long j) {
    if (j < 0 || j >= layout.M) throw InvalidArgument("block column out of range");
    std::vector<std::optional<std::size_t>> out;
    out.reserve(static_cast<std::size_t>(layout.n + 1));
    for (long long i = 0; i <= layout.n; ++i) {
        if (layout.is_pad(i, j)) {
            out.push_back(std::nullopt);
        } else {
            out.push_back(static_cast<std::size_t>(layout.extended_index(i, j) - 1));
        }
    }
    return out;
}

double total_variation(std::span<const double> p, std::span<const double> q) {
    if (p.size() != q.size()) throw InvalidArgument("total_variation: supports differ in size");
    double s = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) s += std::abs(p[i] - q[i]);
    return 0.5 * s;
}

CoupledPair maximal_coupling(std::span<const double> p, std::span<const double> q, Rng& rng) {
    require_distribution(p, "maximal_coupling p");
    require_distribution(q, "maximal_coupling q");
    if (p.size() != q.size()) throw InvalidArgument("maximal_coupling: supports differ in size");
    const std::size_t m = p.size();
    std::vector<double> overlap(m), rest_p(m), rest_q(m);
    double w = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        overlap[i] = std::min(p[i], q[i]);
        rest_p[i] = p[i] - overlap[i];
        rest_q[i] = q[i] - overlap[i];
        w += overlap[i];
    }
    if (uniform01(rng) < w) {
        const std::size_t x = draw_weighted(overlap, w, rng);
        return {x, x, true};
    }
    const double residual = std::max(1.0 - w, std::numeric_limits<double>::min());
    const std::size_t x = draw_weighted(rest_p, residual, rng);
    const std::size_t y = draw_weighted(rest_q, residual, rng);
    return {x, y, x == y};
}

CoupledPair maximal_coupling(std::span<const double> p, std::span<const double> q, std::uint64_t seed) {
    Rng rng(seed);
    return maximal_coupling(p, q, rng);
}

std::size_t CoupledColumn::mismatches() const noexcept {
    std::size_t k = 0;
    for (std::size_t i = 0; i < original.size(); ++i) k += original[i] != copy[i];
    return k;
}

CoupledColumn sample_coupled_blocks(const mixing::MarkovChainSpec& spec, const BlockLayout& layout, long long j,
                                    std::uint64_t seed) {
    mixing::validate(spec);
    const auto positions = block_positions(layout, j);
    const auto PM = mixing::transition_power(spec, static_cast<std::size_t>(layout.M));
    Rng rng(seed);

    CoupledColumn col;
    const std::size_t rows = positions.size();
    col.original.resize(rows);
    col.copy.resize(rows);
    col.tv.assign(rows, 0.0);
    std::optional<std::size_t> prev;
    for (std::size_t i = 0; i < rows; ++i) {
        if (!positions[i]) {
            prev.reset();
            continue;
        }
        std::span<const double> law = prev ? std::span<const double>(PM.data() + *prev * spec.m, spec.m)
                                           : std::span<const double>(spec.pi);
        col.tv[i] = total_variation(law, spec.pi);
        const auto pair = maximal_coupling(law, spec.pi, rng);
        col.original[i] = pair.original;
        col.copy[i] = pair.copy;
        prev = pair.original;
    }
    return col;
}

double coupling_discrepancy(const StateFunction& g, const CoupledColumn& column, std::span<const double> theta_grid) {
    if (theta_grid.empty()) throw InvalidArgument("coupling_discrepancy: empty theta grid");
    if (column.original.size() != column.copy.size()) {
        throw InvalidArgument("coupling_discrepancy: sequences differ in length");
    }
    if (column.original.size() < 2) throw InvalidArgument("coupling_discrepancy: need at least two rows");
    const double n = static_cast<double>(column.original.size() - 1);
    double sup = 0.0;
    for (double theta : theta_grid) {
        double s = 0.0;
        for (std::size_t i = 0; i < column.original.size(); ++i) {
            if (column.original[i] == column.copy[i]) continue;
            const double a = column.original[i] ? g(*column.original[i], theta) : 0.0;
            const double b = column.copy[i] ? g(*column.copy[i], theta) : 0.0;
            s += a - b;
        }
        sup = std::max(sup, std::abs(s) / n);
    }
    return sup;
}

double coupling_discrepancy(const StateFunction& g, std::span<const CoupledColumn> columns,
                            std::span<const double> theta_grid) {
    if (columns.empty()) throw InvalidArgument("coupling_discrepancy: no replications");
    double total = 0.0;
    for (const auto& c : columns) total += coupling_discrepancy(g, c, theta_grid);
    return total / static_cast<double>(columns.size());
}

}  // namespace conc::coupling
