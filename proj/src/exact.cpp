#include "cfof/exact.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <stdexcept>

#include "cfof/distance.hpp"
#include "cfof/fast_cfof.hpp"
#include "cfof/parallel.hpp"

namespace cfof {

namespace {

constexpr std::size_t kOriginBlock = 16;
constexpr std::size_t kMatrixPathLimit = 4096;

void check_rho_list(const std::vector<double>& rho_list) {
    if (rho_list.empty()) throw std::invalid_argument("hard-cfof: rho list is empty");
    for (double r : rho_list)
        if (!(r > 0.0 && r <= 1.0))
            throw std::invalid_argument("hard-cfof: rho values must lie in (0,1]");
    for (std::size_t i = 1; i < rho_list.size(); ++i)
        if (rho_list[i] <= rho_list[i - 1])
            throw std::invalid_argument("hard-cfof: rho list must be strictly increasing");
}

// Visits every origin row: computes distances, ranks, and hands the sorted
// order to `consume(origin, ord)`.
template <typename Consume>
void for_each_rank_row(const Dataset& ds, unsigned threads, Consume&& consume) {
    const std::size_t n = ds.n;
    const std::size_t n_blocks = (n + kOriginBlock - 1) / kOriginBlock;
    parallel_for(0, n_blocks, threads ? threads : default_threads(), [&](std::size_t blk) {
        thread_local RowWorkspace ws;
        thread_local std::vector<float> dst;
        const std::size_t o0 = blk * kOriginBlock;
        const std::size_t o1 = std::min(n, o0 + kOriginBlock);
        const std::size_t nb = o1 - o0;
        std::uint32_t origins[kOriginBlock];
        for (std::size_t i = 0; i < nb; ++i) origins[i] = static_cast<std::uint32_t>(o0 + i);
        dst.resize(nb * n);
        sqdist_block(ds.values.data(), n, n, ds.d, origins, nb, dst.data());
        for (std::size_t i = 0; i < nb; ++i) {
            const std::uint32_t* ord = rank_order(dst.data() + i * n, n, origins[i], ws);
            consume(static_cast<std::size_t>(origins[i]), ord);
        }
    });
}

} // namespace

RankMatrix neighbor_ranks(const Dataset& ds, unsigned threads) {
    ds.validate();
    RankMatrix rm;
    rm.n = ds.n;
    rm.rank.assign(ds.n * ds.n, 0u);
    for_each_rank_row(ds, threads, [&](std::size_t y, const std::uint32_t* ord) {
        std::uint32_t* row = rm.rank.data() + y * ds.n;
        for (std::size_t j = 0; j < ds.n; ++j) row[ord[j]] = static_cast<std::uint32_t>(j + 1);
    });
    return rm;
}

std::vector<std::uint32_t> rnn_counts(const RankMatrix& ranks, std::size_t k) {
    if (k < 1 || k > ranks.n) throw std::out_of_range("rnn_counts: k out of range");
    std::vector<std::uint32_t> counts(ranks.n, 0u);
    for (std::size_t y = 0; y < ranks.n; ++y) {
        const std::uint32_t* row = ranks.rank.data() + y * ranks.n;
        for (std::size_t x = 0; x < ranks.n; ++x)
            if (row[x] <= k) ++counts[x];
    }
    return counts;
}

namespace {

ScoreSet hard_cfof_matrix(const Dataset& ds, const std::vector<double>& rho_list,
                          unsigned threads) {
    const std::size_t n = ds.n;
    const std::size_t L = rho_list.size();

    // cnt[x][k-1] = number of observers ranking x at position exactly k
    std::vector<std::uint32_t> cnt(n * n, 0u);
    for_each_rank_row(ds, threads, [&](std::size_t, const std::uint32_t* ord) {
        for (std::size_t j = 0; j < n; ++j) {
            std::atomic_ref<std::uint32_t> cell(cnt[static_cast<std::size_t>(ord[j]) * n + j]);
            cell.fetch_add(1u, std::memory_order_relaxed);
        }
    });

    ScoreSet ss;
    ss.method = "cfof";
    ss.param_name = "rho";
    ss.params = rho_list;
    ss.n = n;
    ss.scores.assign(L, std::vector<double>(n, 0.0));
    std::vector<std::uint64_t> need(L);
    for (std::size_t l = 0; l < L; ++l) need[l] = min_count(n, rho_list[l]);

    parallel_for(0, n, threads ? threads : default_threads(), [&](std::size_t x) {
        const std::uint32_t* row = cnt.data() + x * n;
        std::uint64_t acc = 0;
        std::size_t k = 0;
        for (std::size_t l = 0; l < L; ++l) {
            while (acc < need[l]) {
                ++k;
                acc += row[k - 1];
            }
            ss.scores[l][x] = static_cast<double>(k) / static_cast<double>(n);
        }
    });
    return ss;
}

// Streaming path: pass 1 bins observer ranks into log-spaced buckets to
// bracket each point's crossing width, pass 2 recomputes ranks and counts
// exact positions only inside the bracketed ranges.
ScoreSet hard_cfof_streaming(const Dataset& ds, const std::vector<double>& rho_list,
                             unsigned threads, std::size_t coarse_bins) {
    const std::size_t n = ds.n;
    const std::size_t L = rho_list.size();
    const unsigned T = threads ? threads : default_threads();
    const KBinMapper mapper(n, std::min(coarse_bins, n));
    const std::size_t B = mapper.bins();

    std::vector<std::uint32_t> bin_at_rank(n);
    for (std::size_t k = 1; k <= n; ++k)
        bin_at_rank[k - 1] = static_cast<std::uint32_t>(mapper.bin_of(k) - 1);

    std::vector<std::uint32_t> cnt(n * B, 0u);
    for_each_rank_row(ds, T, [&](std::size_t, const std::uint32_t* ord) {
        for (std::size_t j = 0; j < n; ++j) {
            std::atomic_ref<std::uint32_t> cell(
                cnt[static_cast<std::size_t>(ord[j]) * B + bin_at_rank[j]]);
            cell.fetch_add(1u, std::memory_order_relaxed);
        }
    });

    std::vector<std::uint64_t> need(L);
    for (std::size_t l = 0; l < L; ++l) need[l] = min_count(n, rho_list[l]);

    // Bracket: per (x, l) the bin whose cumulative count crosses the
    // threshold, plus the cumulative count before that bin.
    std::vector<std::uint32_t> cross_bin(n * L);
    std::vector<std::uint64_t> cum_before(n * L);
    parallel_for(0, n, T, [&](std::size_t x) {
        const std::uint32_t* row = cnt.data() + x * B;
        std::uint64_t acc = 0;
        std::size_t b = 0;
        for (std::size_t l = 0; l < L; ++l) {
            while (acc < need[l]) {
                ++b;
                acc += row[b - 1];
            }
            cross_bin[x * L + l] = static_cast<std::uint32_t>(b);
            std::uint64_t before = acc - row[b - 1];
            cum_before[x * L + l] = before;
        }
    });

    // Deduplicate refinement ranges per point; distinct rho values often land
    // in the same bin.
    std::vector<std::uint32_t> range_lo(n * L), range_hi(n * L); // inclusive k ranges
    std::vector<std::uint8_t> range_count(n, 0);
    std::vector<std::uint64_t> range_width(n, 0);
    for (std::size_t x = 0; x < n; ++x) {
        std::uint8_t m = 0;
        for (std::size_t l = 0; l < L; ++l) {
            const std::size_t b = cross_bin[x * L + l];
            const auto lo = static_cast<std::uint32_t>(mapper.lower(b));
            const auto hi = static_cast<std::uint32_t>(mapper.upper(b));
            bool seen = false;
            for (std::uint8_t q = 0; q < m && !seen; ++q)
                seen = range_lo[x * L + q] == lo;
            if (!seen) {
                range_lo[x * L + m] = lo;
                range_hi[x * L + m] = hi;
                ++m;
            }
        }
        range_count[x] = m;
        std::uint64_t w = 0;
        for (std::uint8_t q = 0; q < m; ++q) w += range_hi[x * L + q] - range_lo[x * L + q] + 1;
        range_width[x] = w;
    }

    std::vector<std::uint64_t> offset(n + 1, 0);
    for (std::size_t x = 0; x < n; ++x) offset[x + 1] = offset[x] + range_width[x];
    const std::uint64_t total = offset[n];
    if (total > (std::uint64_t{1} << 33))
        throw std::runtime_error("hard-cfof streaming: refinement ranges too large; "
                                 "raise coarse_bins");

    // Pass 2: exact per-k counts inside each bracketed range.
    std::vector<std::uint32_t> fine(total, 0u);
    std::vector<std::uint32_t> lo_min(n), hi_max(n);
    for (std::size_t x = 0; x < n; ++x) {
        std::uint32_t lo = ~0u, hi = 0;
        for (std::uint8_t q = 0; q < range_count[x]; ++q) {
            lo = std::min(lo, range_lo[x * L + q]);
            hi = std::max(hi, range_hi[x * L + q]);
        }
        lo_min[x] = lo;
        hi_max[x] = hi;
    }
    for_each_rank_row(ds, T, [&](std::size_t, const std::uint32_t* ord) {
        for (std::size_t j = 0; j < n; ++j) {
            const std::size_t x = ord[j];
            const auto k = static_cast<std::uint32_t>(j + 1);
            if (k < lo_min[x] || k > hi_max[x]) continue;
            std::uint64_t off = offset[x];
            for (std::uint8_t q = 0; q < range_count[x]; ++q) {
                const std::uint32_t lo = range_lo[x * L + q];
                const std::uint32_t hi = range_hi[x * L + q];
                if (k >= lo && k <= hi) {
                    std::atomic_ref<std::uint32_t> cell(fine[off + (k - lo)]);
                    cell.fetch_add(1u, std::memory_order_relaxed);
                    break;
                }
                off += hi - lo + 1;
            }
        }
    });

    ScoreSet ss;
    ss.method = "cfof";
    ss.param_name = "rho";
    ss.params = rho_list;
    ss.n = n;
    ss.scores.assign(L, std::vector<double>(n, 0.0));
    parallel_for(0, n, T, [&](std::size_t x) {
        for (std::size_t l = 0; l < L; ++l) {
            const std::size_t b = cross_bin[x * L + l];
            const auto lo = static_cast<std::uint32_t>(mapper.lower(b));
            std::uint64_t off = offset[x];
            for (std::uint8_t q = 0; q < range_count[x]; ++q) {
                if (range_lo[x * L + q] == lo) break;
                off += range_hi[x * L + q] - range_lo[x * L + q] + 1;
            }
            std::uint64_t acc = cum_before[x * L + l];
            std::uint32_t k = lo - 1;
            while (acc < need[l]) {
                ++k;
                acc += fine[off + (k - lo)];
            }
            ss.scores[l][x] = static_cast<double>(k) / static_cast<double>(n);
        }
    });
    return ss;
}

} // namespace

ScoreSet hard_cfof(const Dataset& ds, const std::vector<double>& rho_list,
                   const HardCfofOptions& opts) {
    ds.validate();
    check_rho_list(rho_list);
    const bool matrix = opts.path == HardCfofOptions::Path::Matrix ||
                        (opts.path == HardCfofOptions::Path::Auto && ds.n <= kMatrixPathLimit);
    return matrix ? hard_cfof_matrix(ds, rho_list, opts.threads)
                  : hard_cfof_streaming(ds, rho_list, opts.threads, opts.coarse_bins);
}

namespace {

// Stable log-space binomial cdf, adequate for oracle-scale n.
double binom_cdf(std::size_t k, double p, std::size_t n) {
    if (p <= 0.0) return 1.0;
    if (p >= 1.0) return k >= n ? 1.0 : 0.0;
    if (k >= n) return 1.0;
    const double logp = std::log(p), logq = std::log1p(-p);
    const double lgn = std::lgamma(static_cast<double>(n) + 1.0);
    double sum = 0.0;
    for (std::size_t i = 0; i <= k; ++i) {
        const double lg = lgn - std::lgamma(static_cast<double>(i) + 1.0) -
                          std::lgamma(static_cast<double>(n - i) + 1.0) +
                          static_cast<double>(i) * logp + static_cast<double>(n - i) * logq;
        sum += std::exp(lg);
    }
    return std::min(sum, 1.0);
}

} // namespace

ScoreSet soft_cfof_oracle(const Dataset& ds, double rho, unsigned threads) {
    ds.validate();
    if (!(rho > 0.0 && rho <= 1.0))
        throw std::invalid_argument("soft-cfof: rho must lie in (0,1]");
    const std::size_t n = ds.n;

    // p(x, y): fraction of points at distance from y not greater than
    // dist(x, y), derived from exact squared distances per observer row.
    std::vector<double> pmat(n * n); // pmat[x * n + y]
    const unsigned T = threads ? threads : default_threads();
    parallel_for(0, n, T, [&](std::size_t y) {
        std::vector<float> dst(n);
        std::uint32_t origin[1] = {static_cast<std::uint32_t>(y)};
        sqdist_block(ds.values.data(), n, n, ds.d, origin, 1, dst.data());
        std::vector<float> sorted(dst);
        std::sort(sorted.begin(), sorted.end());
        for (std::size_t x = 0; x < n; ++x) {
            const auto it = std::upper_bound(sorted.begin(), sorted.end(), dst[x]);
            pmat[x * n + y] =
                static_cast<double>(it - sorted.begin()) / static_cast<double>(n);
        }
    });

    ScoreSet ss;
    ss.method = "soft-cfof-oracle";
    ss.param_name = "rho";
    ss.params = {rho};
    ss.n = n;
    ss.scores.assign(1, std::vector<double>(n, 0.0));

    parallel_for(0, n, T, [&](std::size_t x) {
        const double* px = pmat.data() + x * n;
        auto prob_at = [&](std::size_t k) {
            double acc = 0.0;
            for (std::size_t y = 0; y < n; ++y) acc += binom_cdf(k, px[y], n);
            return acc / static_cast<double>(n);
        };
        // Pr[x in NN_k(X)] is non-decreasing in k; binary search the smallest
        // k whose probability reaches rho.
        std::size_t lo = 1, hi = n;
        while (lo < hi) {
            const std::size_t mid = lo + (hi - lo) / 2;
            if (prob_at(mid) >= rho)
                hi = mid;
            else
                lo = mid + 1;
        }
        ss.scores[0][x] = static_cast<double>(lo) / static_cast<double>(n);
    });
    return ss;
}

} // namespace cfof
