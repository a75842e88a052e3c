#include "cfof/baselines.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "cfof/distance.hpp"
#include "cfof/parallel.hpp"

namespace cfof {

namespace {

constexpr std::size_t kOriginBlock = 16;

void check_k(std::size_t k, std::size_t lo, std::size_t hi, const char* what) {
    if (k < lo || k > hi)
        throw std::out_of_range(std::string(what) + ": k out of range [" + std::to_string(lo) +
                                "," + std::to_string(hi) + "]");
}

// Calls consume(origin, ord) with the full sorted order of every origin row.
template <typename Consume>
void scan_rows(const Dataset& ds, unsigned threads, Consume&& consume) {
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
        for (std::size_t i = 0; i < nb; ++i)
            consume(static_cast<std::size_t>(origins[i]), dst.data() + i * n, ws);
    });
}

ScoreSet make_scoreset(const char* method, std::size_t k, std::size_t n,
                       std::vector<double> scores) {
    ScoreSet ss;
    ss.method = method;
    ss.param_name = "k";
    ss.params = {static_cast<double>(k)};
    ss.n = n;
    ss.scores.push_back(std::move(scores));
    return ss;
}

} // namespace

std::vector<std::uint32_t> reverse_counts(const Dataset& ds, std::size_t k, unsigned threads) {
    ds.validate();
    check_k(k, 1, ds.n, "reverse_counts");
    std::vector<std::uint32_t> counts(ds.n, 0u);
    scan_rows(ds, threads, [&](std::size_t y, const float* dst, RowWorkspace& ws) {
        const std::uint32_t* ord = rank_order(dst, ds.n, static_cast<std::uint32_t>(y), ws);
        for (std::size_t j = 0; j < k; ++j) {
            std::atomic_ref<std::uint32_t> cell(counts[ord[j]]);
            cell.fetch_add(1u, std::memory_order_relaxed);
        }
    });
    return counts;
}

ScoreSet odin(const Dataset& ds, std::size_t k, unsigned threads) {
    const auto counts = reverse_counts(ds, k, threads);
    std::vector<double> scores(ds.n);
    for (std::size_t i = 0; i < ds.n; ++i) scores[i] = -static_cast<double>(counts[i]);
    return make_scoreset("odin", k, ds.n, std::move(scores));
}

ScoreSet antihub2(const Dataset& ds, std::size_t k, unsigned threads) {
    ds.validate();
    check_k(k, 1, ds.n, "antihub2");
    const std::size_t n = ds.n;
    const auto counts = reverse_counts(ds, k, threads);

    // Summed reverse counts over each point's k nearest neighbors (NN_k is
    // self-inclusive, matching the count definition).
    std::vector<double> neighbor_sum(n, 0.0);
    scan_rows(ds, threads, [&](std::size_t y, const float* dst, RowWorkspace& ws) {
        const std::uint32_t* ord = rank_order(dst, n, static_cast<std::uint32_t>(y), ws);
        double acc = 0.0;
        for (std::size_t j = 0; j < k; ++j) acc += counts[ord[j]];
        neighbor_sum[y] = acc;
    });

    const auto m = std::max<std::size_t>(
        1, static_cast<std::size_t>(std::ceil(0.05 * static_cast<double>(n))));
    double best_disc = -1.0;
    std::vector<double> best(n), cand(n), smallest(m);
    for (int step = 0; step <= 20; ++step) {
        const double w = static_cast<double>(step) / 20.0;
        for (std::size_t i = 0; i < n; ++i)
            cand[i] = (1.0 - w) * static_cast<double>(counts[i]) + w * neighbor_sum[i];
        std::partial_sort_copy(cand.begin(), cand.end(), smallest.begin(), smallest.end());
        std::size_t distinct = 1;
        for (std::size_t i = 1; i < m; ++i)
            if (smallest[i] != smallest[i - 1]) ++distinct;
        const double disc = static_cast<double>(distinct) / static_cast<double>(m);
        if (disc > best_disc) {
            best_disc = disc;
            best = cand;
        }
    }
    for (double& v : best) v = -v;
    return make_scoreset("antihub2", k, n, std::move(best));
}

ScoreSet aknn(const Dataset& ds, std::size_t k, unsigned threads) {
    ds.validate();
    check_k(k, 1, ds.n - 1, "aknn");
    std::vector<double> scores(ds.n, 0.0);
    scan_rows(ds, threads, [&](std::size_t y, const float* dst, RowWorkspace& ws) {
        const std::uint32_t* ord = rank_order(dst, ds.n, static_cast<std::uint32_t>(y), ws);
        double acc = 0.0;
        for (std::size_t j = 1; j <= k; ++j) // ord[0] is the point itself
            acc += std::sqrt(static_cast<double>(dst[ord[j]]));
        scores[y] = acc / static_cast<double>(k);
    });
    return make_scoreset("aknn", k, ds.n, std::move(scores));
}

ScoreSet lof(const Dataset& ds, std::size_t k, unsigned threads) {
    ds.validate();
    if (ds.n < 3) throw std::invalid_argument("lof: need at least 3 points");
    check_k(k, 2, ds.n - 1, "lof");
    const std::size_t n = ds.n;

    // Pass 1: neighbor lists (self excluded), their distances, and k-dist.
    std::vector<std::uint32_t> nbrs(n * k);
    std::vector<double> nbr_dist(n * k);
    std::vector<double> k_dist(n);
    scan_rows(ds, threads, [&](std::size_t y, const float* dst, RowWorkspace& ws) {
        const std::uint32_t* ord = rank_order(dst, n, static_cast<std::uint32_t>(y), ws);
        for (std::size_t j = 0; j < k; ++j) {
            nbrs[y * k + j] = ord[j + 1];
            nbr_dist[y * k + j] = std::sqrt(static_cast<double>(dst[ord[j + 1]]));
        }
        k_dist[y] = nbr_dist[y * k + (k - 1)];
    });

    // Local reachability distance: sum of reach distances to the k neighbors.
    std::vector<double> lr(n, 0.0);
    for (std::size_t x = 0; x < n; ++x) {
        double acc = 0.0;
        for (std::size_t j = 0; j < k; ++j)
            acc += std::max(nbr_dist[x * k + j], k_dist[nbrs[x * k + j]]);
        lr[x] = acc;
    }

    std::vector<double> scores(n, 1.0);
    for (std::size_t x = 0; x < n; ++x) {
        double denom = 0.0;
        for (std::size_t j = 0; j < k; ++j) denom += lr[nbrs[x * k + j]];
        denom /= static_cast<double>(k);
        if (lr[x] == 0.0)
            scores[x] = 1.0; // all-duplicate neighborhood
        else if (denom == 0.0)
            scores[x] = std::numeric_limits<double>::infinity();
        else
            scores[x] = lr[x] / denom;
    }
    return make_scoreset("lof", k, n, std::move(scores));
}

} // namespace cfof
