#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace conc {

using Rng = std::mt19937_64;

// SplitMix64 finalizer; used to decorrelate derived seeds.
std::uint64_t mix64(std::uint64_t x) noexcept;

// Derives an independent stream seed from a master seed and a path of stream
// identifiers, e.g. {experiment id, T index, replication}. The result depends
// only on the inputs, so replications can run in any order or in parallel.
std::uint64_t derive_seed(std::uint64_t master, std::initializer_list<std::uint64_t> path) noexcept;

inline Rng make_rng(std::uint64_t master, std::initializer_list<std::uint64_t> path) {
    return Rng(derive_seed(master, path));
}

// Uniform draw on [0, 1).
inline double uniform01(Rng& rng) {
    return std::generate_canonical<double, 53>(rng);
}

}  // namespace conc
