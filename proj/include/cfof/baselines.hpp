#pragma once

#include <cstdint>
#include <vector>

#include "cfof/dataset.hpp"
#include "cfof/score_set.hpp"

namespace cfof {

// Reverse k-occurrence counts computed without materializing the rank matrix.
// Counts follow the self-inclusive neighbor convention (every point is its
// own first neighbor), so 1 <= N_k(x) <= n and the counts sum to n k.
std::vector<std::uint32_t> reverse_counts(const Dataset& ds, std::size_t k,
                                          unsigned threads = 0);

// ODIN: score = -N_k(x), negated so larger means more outlying.
ScoreSet odin(const Dataset& ds, std::size_t k, unsigned threads = 0);

// AntiHub2: blends N_k(x) with the summed N_k of x's k nearest neighbors,
// sweeping the blend weight over {0, 0.05, ..., 1} and keeping the weight
// that maximizes score discrimination among the smallest 5% of candidates.
ScoreSet antihub2(const Dataset& ds, std::size_t k, unsigned threads = 0);

// Average distance from the k nearest neighbors, self excluded.
ScoreSet aknn(const Dataset& ds, std::size_t k, unsigned threads = 0);

// Local outlier factor built from reachability distances over the k real
// neighbors; duplicate-only neighborhoods score 1.
ScoreSet lof(const Dataset& ds, std::size_t k, unsigned threads = 0);

} // namespace cfof
