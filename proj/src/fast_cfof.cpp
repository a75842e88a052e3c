#include "cfof/fast_cfof.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstring>
#include <fstream>
#include <functional>
#include <stdexcept>

#include "cfof/distance.hpp"
#include "cfof/parallel.hpp"

namespace cfof {

std::size_t sample_size(double epsilon, double delta) {
    if (!(epsilon > 0.0 && epsilon < 1.0) || !(delta > 0.0 && delta < 1.0))
        throw std::invalid_argument("sample_size: epsilon and delta must lie in (0,1)");
    const double raw = std::ceil(std::log(2.0 / delta) / (2.0 * epsilon * epsilon));
    const auto s = static_cast<std::size_t>(raw);
    return ((s + 511) / 512) * 512;
}

std::size_t k_up(std::size_t j, std::size_t s, std::size_t n, double c) {
    const double p = static_cast<double>(j) / static_cast<double>(s);
    const double v = std::floor(static_cast<double>(n) * p +
                                c * std::sqrt(static_cast<double>(n) * p * (1.0 - p)) + 0.5);
    if (v < 1.0) return 1;
    if (v >= static_cast<double>(n)) return n;
    return static_cast<std::size_t>(v);
}

std::uint64_t min_count(std::size_t m, double fraction) {
    const double t = static_cast<double>(m) * fraction;
    auto v = static_cast<std::uint64_t>(std::ceil(t - 1e-9));
    return v < 1 ? 1 : v;
}

KBinMapper::KBinMapper(std::size_t n, std::size_t bins) : n_(n) {
    if (n < 1) throw std::invalid_argument("KBinMapper: n must be >= 1");
    if (bins < 1) throw std::invalid_argument("KBinMapper: bins must be >= 1");
    const std::size_t B = std::min(bins, n);
    upper_.resize(B);
    const double ln_n = std::log(static_cast<double>(n));
    std::uint64_t prev = 0;
    for (std::size_t b = 1; b <= B; ++b) {
        const double edge = std::exp(ln_n * static_cast<double>(b) / static_cast<double>(B));
        auto u = static_cast<std::uint64_t>(std::llround(edge));
        u = std::max<std::uint64_t>(u, b);
        u = std::min<std::uint64_t>(u, n);
        u = std::max(u, prev); // duplicate edges give empty bins, never regressions
        upper_[b - 1] = u;
        prev = u;
    }
    upper_[B - 1] = n;
}

std::size_t KBinMapper::bin_of(std::size_t k) const {
    if (k < 1 || k > n_) throw std::out_of_range("KBinMapper::bin_of: k out of range");
    const auto it = std::lower_bound(upper_.begin(), upper_.end(), static_cast<std::uint64_t>(k));
    return static_cast<std::size_t>(it - upper_.begin()) + 1;
}

std::size_t KBinMapper::midpoint(std::size_t bin) const {
    if (bin < 1 || bin > upper_.size())
        throw std::out_of_range("KBinMapper::midpoint: bin out of range");
    const std::size_t lo = lower(bin);
    const std::size_t hi = upper(bin);
    if (lo >= hi) return hi;
    auto g = static_cast<std::size_t>(
        std::llround(std::sqrt(static_cast<double>(lo) * static_cast<double>(hi))));
    return std::clamp(g, lo, hi);
}

void FastParams::validate() const {
    if (rho_list.empty()) throw std::invalid_argument("fast-cfof: rho list is empty");
    for (double r : rho_list)
        if (!(r > 0.0 && r < 1.0))
            throw std::invalid_argument("fast-cfof: rho values must lie in (0,1)");
    for (std::size_t i = 1; i < rho_list.size(); ++i)
        if (rho_list[i] <= rho_list[i - 1])
            throw std::invalid_argument("fast-cfof: rho list must be strictly increasing");
    if (!(epsilon > 0.0 && epsilon < 1.0) || !(delta > 0.0 && delta < 1.0))
        throw std::invalid_argument("fast-cfof: epsilon and delta must lie in (0,1)");
    if (bins < 2) throw std::invalid_argument("fast-cfof: bins must be >= 2");
    if (!(c >= 0.0 && c <= 3.0)) throw std::invalid_argument("fast-cfof: c must lie in [0,3]");
}

void process_partition(const float* sample, std::size_t s, std::size_t d, std::size_t n,
                       const FastParams& params, const KBinMapper& mapper,
                       std::vector<std::vector<double>>& out) {
    const std::size_t B = mapper.bins();
    const std::size_t L = params.rho_list.size();
    const unsigned threads = params.threads ? params.threads : default_threads();

    // k_up and its bin depend only on the rank position j, not on the origin.
    std::vector<std::uint32_t> bin_at_rank(s);
    for (std::size_t j = 1; j <= s; ++j)
        bin_at_rank[j - 1] =
            static_cast<std::uint32_t>(mapper.bin_of(k_up(j, s, n, params.c)) - 1);

    std::vector<std::uint32_t> hst(s * B, 0u);

    // Nearest neighbor count estimation. Each origin contributes exactly one
    // increment per sample point; increments are merged with atomic integer
    // adds, so the histogram is identical for any thread count.
    constexpr std::size_t kOriginBlock = 16;
    const std::size_t n_blocks = (s + kOriginBlock - 1) / kOriginBlock;
    parallel_for(0, n_blocks, threads, [&](std::size_t blk) {
        thread_local RowWorkspace ws;
        thread_local std::vector<float> dst;
        const std::size_t o0 = blk * kOriginBlock;
        const std::size_t o1 = std::min(s, o0 + kOriginBlock);
        const std::size_t nb = o1 - o0;
        std::uint32_t origins[kOriginBlock];
        for (std::size_t i = 0; i < nb; ++i) origins[i] = static_cast<std::uint32_t>(o0 + i);
        dst.resize(nb * s);
        sqdist_block(sample, s, s, d, origins, nb, dst.data());
        for (std::size_t i = 0; i < nb; ++i) {
            const std::uint32_t* ord = rank_order(dst.data() + i * s, s, origins[i], ws);
            for (std::size_t j = 0; j < s; ++j) {
                std::atomic_ref<std::uint32_t> cell(hst[static_cast<std::size_t>(ord[j]) * B +
                                                        bin_at_rank[j]]);
                cell.fetch_add(1u, std::memory_order_relaxed);
            }
        }
    });

    // Scores computation: accumulate counts until they cover a fraction rho_l
    // of the sample, then read the neighborhood width off the bin midpoint.
    out.assign(L, std::vector<double>(s, 0.0));
    std::vector<std::uint64_t> need(L);
    for (std::size_t l = 0; l < L; ++l) need[l] = min_count(s, params.rho_list[l]);

    parallel_for(0, s, threads, [&](std::size_t i) {
        const std::uint32_t* row = hst.data() + i * B;
        std::uint64_t count = 0;
        std::size_t k_pos = 0;
        for (std::size_t l = 0; l < L; ++l) {
            while (count < need[l]) {
                ++k_pos;
                count += row[k_pos - 1];
            }
            out[l][i] =
                static_cast<double>(mapper.midpoint(k_pos)) / static_cast<double>(n);
        }
    });
}

namespace {

struct PartitionPlan {
    std::size_t start; // first point of the partition
    std::size_t size;
};

std::vector<PartitionPlan> plan_partitions(std::size_t n, std::size_t s) {
    std::vector<PartitionPlan> plan;
    if (s >= n) {
        plan.push_back({0, n});
        return plan;
    }
    std::size_t i = 0;
    while (i < n) {
        const std::size_t a = (i + s < n) ? i : n - s; // final window slides back
        plan.push_back({a, s});
        i += s;
    }
    return plan;
}

ScoreSet run_partitions(std::size_t n, std::size_t d, const FastParams& params,
                        const std::function<void(std::size_t start, std::size_t size,
                                                 float* block)>& fetch) {
    params.validate();
    const std::size_t s = std::min(sample_size(params.epsilon, params.delta), n);
    const KBinMapper mapper(n, std::min(params.bins, n));
    const auto plan = plan_partitions(n, s);

    ScoreSet ss;
    ss.method = "fast-cfof";
    ss.param_name = "rho";
    ss.params = params.rho_list;
    ss.n = n;
    ss.scores.assign(params.rho_list.size(), std::vector<double>(n, 0.0));

    std::vector<float> block;
    std::vector<std::vector<double>> part_scores;
    for (const auto& p : plan) {
        block.resize(p.size * d);
        fetch(p.start, p.size, block.data());
        process_partition(block.data(), p.size, d, n, params, mapper, part_scores);
        for (std::size_t l = 0; l < part_scores.size(); ++l)
            std::copy(part_scores[l].begin(), part_scores[l].end(),
                      ss.scores[l].begin() + static_cast<std::ptrdiff_t>(p.start));
    }
    return ss;
}

} // namespace

ScoreSet fast_cfof(const Dataset& ds, const FastParams& params) {
    const Dataset* src = &ds;
    Dataset shuffled;
    std::vector<std::size_t> perm;
    if (params.pre_shuffle) {
        perm = random_permutation(ds.n, CounterRng(params.seed));
        shuffled = make_dataset(ds.n, ds.d, ds.name);
        for (std::size_t c = 0; c < ds.d; ++c) {
            const float* in = ds.column(c);
            float* out = shuffled.values.data() + c * ds.n;
            for (std::size_t r = 0; r < ds.n; ++r) out[r] = in[perm[r]];
        }
        src = &shuffled;
    }

    ScoreSet ss = run_partitions(
        src->n, src->d, params,
        [&](std::size_t start, std::size_t size, float* block) {
            for (std::size_t c = 0; c < src->d; ++c)
                std::memcpy(block + c * size, src->column(c) + start, size * sizeof(float));
        });

    if (params.pre_shuffle) {
        for (auto& col : ss.scores) {
            std::vector<double> unshuffled(ss.n);
            for (std::size_t r = 0; r < ss.n; ++r) unshuffled[perm[r]] = col[r];
            col = std::move(unshuffled);
        }
    }
    return ss;
}

ScoreSet fast_cfof_file(const std::string& path, const FastParams& params) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    char magic[4];
    in.read(magic, 4);
    if (!in || std::memcmp(magic, "CFOF", 4) != 0)
        throw std::runtime_error(path + ": bad magic bytes");
    unsigned char hdr[20];
    in.read(reinterpret_cast<char*>(hdr), 20);
    if (!in) throw std::runtime_error(path + ": truncated header");
    std::uint32_t version = 0;
    std::uint64_t n = 0, d = 0;
    for (int i = 0; i < 4; ++i) version |= static_cast<std::uint32_t>(hdr[i]) << (8 * i);
    for (int i = 0; i < 8; ++i) n |= static_cast<std::uint64_t>(hdr[4 + i]) << (8 * i);
    for (int i = 0; i < 8; ++i) d |= static_cast<std::uint64_t>(hdr[12 + i]) << (8 * i);
    if (version != 1) throw std::runtime_error(path + ": unsupported version");
    if (n < 1 || d < 1) throw std::runtime_error(path + ": empty dataset");
    constexpr std::size_t header_bytes = 4 + 4 + 8 + 8;

    return run_partitions(n, d, params, [&](std::size_t start, std::size_t size, float* block) {
        // column-major on disk: one contiguous read per attribute
        for (std::size_t c = 0; c < d; ++c) {
            in.seekg(static_cast<std::streamoff>(header_bytes + (c * n + start) * 4));
            in.read(reinterpret_cast<char*>(block + c * size),
                    static_cast<std::streamsize>(size * 4));
            if (!in)
                throw std::runtime_error(path + ": read failure mid-stream at attribute " +
                                         std::to_string(c));
        }
    });
}

} // namespace cfof
