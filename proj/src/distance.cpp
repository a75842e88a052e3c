#include "cfof/distance.hpp"

#include <algorithm>
#include <cstring>

namespace cfof {

namespace {
constexpr std::size_t kPointBlock = 4096; // keeps one accumulator stripe in L2
constexpr std::size_t kSortCutoff = 1536; // below this std::sort beats radix
} // namespace

void sqdist_block(const float* data, std::size_t ld, std::size_t count, std::size_t d,
                  const std::uint32_t* origins, std::size_t n_origins, float* out) {
    std::memset(out, 0, n_origins * count * sizeof(float));
    for (std::size_t j0 = 0; j0 < count; j0 += kPointBlock) {
        const std::size_t j1 = std::min(count, j0 + kPointBlock);
        for (std::size_t c = 0; c < d; ++c) {
            const float* col = data + c * ld;
            for (std::size_t oi = 0; oi < n_origins; ++oi) {
                const float v = col[origins[oi]];
                float* acc = out + oi * count;
                for (std::size_t j = j0; j < j1; ++j) {
                    const float t = col[j] - v;
                    acc[j] += t * t;
                }
            }
        }
    }
}

void RowWorkspace::resize(std::size_t count) {
    keys.resize(count);
    tmp.resize(count);
    order.resize(count);
}

namespace {

inline std::uint32_t float_bits(float f) {
    std::uint32_t u;
    std::memcpy(&u, &f, 4);
    return u; // monotone for non-negative floats
}

// LSD radix sort; returns the buffer holding the sorted keys.
std::uint64_t* radix_sort_u64(std::uint64_t* a, std::uint64_t* b, std::size_t count) {
    std::size_t hist[8][256] = {};
    for (std::size_t i = 0; i < count; ++i) {
        const std::uint64_t k = a[i];
        for (int p = 0; p < 8; ++p) ++hist[p][(k >> (8 * p)) & 0xff];
    }
    for (int p = 0; p < 8; ++p) {
        // skip passes where every key shares the same byte
        std::size_t nonzero = 0;
        for (std::size_t v = 0; v < 256 && nonzero <= 1; ++v)
            if (hist[p][v]) ++nonzero;
        if (nonzero <= 1) continue;
        std::size_t pos = 0;
        std::size_t offs[256];
        for (std::size_t v = 0; v < 256; ++v) {
            offs[v] = pos;
            pos += hist[p][v];
        }
        for (std::size_t i = 0; i < count; ++i) b[offs[(a[i] >> (8 * p)) & 0xff]++] = a[i];
        std::swap(a, b);
    }
    return a;
}

} // namespace

const std::uint32_t* rank_order(const float* dst, std::size_t count, std::uint32_t self,
                                RowWorkspace& ws) {
    ws.resize(count);
    std::uint64_t* keys = ws.keys.data();
    // Ids are biased by +1 and the self id mapped to 0, so equal distances
    // order as (self, then ascending id) straight from the integer sort.
    for (std::size_t j = 0; j < count; ++j)
        keys[j] = (static_cast<std::uint64_t>(float_bits(dst[j])) << 32) |
                  (j == self ? 0u : static_cast<std::uint32_t>(j + 1));

    if (count <= kSortCutoff) {
        std::sort(keys, keys + count);
    } else {
        keys = radix_sort_u64(keys, ws.tmp.data(), count);
    }

    std::uint32_t* order = ws.order.data();
    for (std::size_t j = 0; j < count; ++j) {
        const std::uint32_t low = static_cast<std::uint32_t>(keys[j] & 0xffffffffu);
        order[j] = (low == 0) ? self : low - 1;
    }
    return order;
}

} // namespace cfof
