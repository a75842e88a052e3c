#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace cfof {

// Squared Euclidean distances from a block of origin points to every point in
// a column-major matrix (ld = rows per column). out is row-major, one row of
// `count` floats per origin. Accumulation runs in attribute order for every
// (origin, point) pair, so results do not depend on blocking or threading.
void sqdist_block(const float* data, std::size_t ld, std::size_t count, std::size_t d,
                  const std::uint32_t* origins, std::size_t n_origins, float* out);

// Per-row scratch buffers reused across origins.
struct RowWorkspace {
    std::vector<std::uint64_t> keys;
    std::vector<std::uint64_t> tmp;
    std::vector<std::uint32_t> order;
    void resize(std::size_t count);
};

// Sorts point ids 0..count-1 by (squared distance, self first among ties,
// ascending id). dst[self] must be exactly 0. The same total order backs the
// exact oracle, the sampling estimator, and every baseline.
const std::uint32_t* rank_order(const float* dst, std::size_t count, std::uint32_t self,
                                RowWorkspace& ws);

} // namespace cfof
