#pragma once

// Blocking of a length-T sample into n+1 rows of interleaved columns, and
// independent block copies built by maximal coupling.
//
// With M the block length, the extended sequence is Z_0, Z_1, ..., Z_{(n+1)M-1}
// where index 0 and every index beyond T hold the padding point. Column j is
// W_{i,j} = Z_{iM+j} for i = 0..n.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "conc/errors.hpp"
#include "conc/mixing.hpp"
#include "conc/rng.hpp"

namespace conc::coupling {

struct BlockLayout {
    long long T = 0;
    long long n = 0;
    long long M = 0;

    long long extended_index(long long i, long long j) const noexcept { return i * M + j; }
    bool is_pad(long long i, long long j) const noexcept {
        const long long t = extended_index(i, j);
        return t == 0 || t > T;
    }
};

// M = floor(T/n); throws BlockingInfeasible when T/(n+1) < M fails.
BlockLayout block_layout(long long T, long long n);

// 0-based trajectory positions for column j (Z_t sits at position t-1), with
// nullopt at pad positions.
std::vector<std::optional<std::size_t>> block_positions(const BlockLayout& layout, long long j);

// All M columns of a trajectory Z_1..Z_T; pad entries are nullopt.
template <class Z>
std::vector<std::vector<std::optional<Z>>> extract_block_sequences(const std::vector<Z>& traj,
                                                                    const BlockLayout& layout);

double total_variation(std::span<const double> p, std::span<const double> q);

struct CoupledPair {
    std::size_t original = 0;
    std::size_t copy = 0;
    bool matched = false;
};

// original ~ p, copy ~ q, P(original != copy) = TV(p, q).
CoupledPair maximal_coupling(std::span<const double> p, std::span<const double> q, Rng& rng);
CoupledPair maximal_coupling(std::span<const double> p, std::span<const double> q, std::uint64_t seed);

// One block column and its coupled copy. tv[i] is the total variation between
// the conditional law of W_i given the realized past of the column and pi.
struct CoupledColumn {
    std::vector<std::optional<std::size_t>> original;
    std::vector<std::optional<std::size_t>> copy;
    std::vector<double> tv;

    std::size_t mismatches() const noexcept;
};

// Simulates column j of a chain started from pi and couples every entry with
// an independent pi draw. Pad entries stay pad in both sequences.
CoupledColumn sample_coupled_blocks(const mixing::MarkovChainSpec& spec, const BlockLayout& layout, long long j,
                                    std::uint64_t seed);

using StateFunction = std::function<double(std::size_t state, double theta)>;

// sup_theta |(1/n) sum_i g(W_i, theta) - g(W*_i, theta)| for one column, with
// g = 0 at the pad and n the number of rows minus one.
double coupling_discrepancy(const StateFunction& g, const CoupledColumn& column, std::span<const double> theta_grid);

// Average of the single-column discrepancy over replications.
double coupling_discrepancy(const StateFunction& g, std::span<const CoupledColumn> columns,
                            std::span<const double> theta_grid);

template <class Z>
std::vector<std::vector<std::optional<Z>>> extract_block_sequences(const std::vector<Z>& traj,
                                                                    const BlockLayout& layout) {
    if (static_cast<long long>(traj.size()) != layout.T) {
        throw InvalidArgument("extract_block_sequences: trajectory length differs from layout T");
    }
    std::vector<std::vector<std::optional<Z>>> out;
    out.reserve(static_cast<std::size_t>(layout.M));
    for (long long j = 0; j < layout.M; ++j) {
        std::vector<std::optional<Z>> col;
        for (const auto& pos : block_positions(layout, j)) {
            col.push_back(pos ? std::optional<Z>(traj[*pos]) : std::nullopt);
        }
        out.push_back(std::move(col));
    }
    return out;
}

}  // namespace conc::coupling
