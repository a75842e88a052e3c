#pragma once

#include <cstdint>
#include <vector>

#include "cfof/dataset.hpp"
#include "cfof/score_set.hpp"

namespace cfof {

// Full n x n neighbor rank table: rank(y, x) is the position (1-based) of x
// in y's nearest neighbor ordering, with rank(y, y) = 1. Quadratic memory,
// intended for oracle-scale datasets.
struct RankMatrix {
    std::size_t n = 0;
    std::vector<std::uint32_t> rank; // rank[y * n + x]

    std::uint32_t at(std::size_t y, std::size_t x) const { return rank[y * n + x]; }
};

RankMatrix neighbor_ranks(const Dataset& ds, unsigned threads = 0);

// Reverse k-occurrence counts N_k(x) = |{y : rank(y, x) <= k}|.
std::vector<std::uint32_t> rnn_counts(const RankMatrix& ranks, std::size_t k);

struct HardCfofOptions {
    unsigned threads = 0;        // 0 -> hardware concurrency
    std::size_t coarse_bins = 512; // first-pass bins of the streaming path
    enum class Path { Auto, Matrix, Streaming } path = Path::Auto;
};

// Exact hard-CFOF: score(x, rho) = min k'/n such that N_k'(x) >= n rho.
// Dispatches between the rank-matrix path (small n) and a two-pass streaming
// path that never materializes the rank matrix; both agree exactly.
ScoreSet hard_cfof(const Dataset& ds, const std::vector<double>& rho_list,
                   const HardCfofOptions& opts = {});

// Probabilistic soft-CFOF evaluated with the exact binomial cdf over the
// empirical neighbor fractions. O(n^2 log n) with O(n) binocdf terms per
// evaluation; oracle use only.
ScoreSet soft_cfof_oracle(const Dataset& ds, double rho, unsigned threads = 0);

} // namespace cfof
