#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "cfof/dataset.hpp"
#include "cfof/score_set.hpp"

namespace cfof {

// Hoeffding sample size ceil(ln(2/delta) / (2 eps^2)), rounded up to the next
// multiple of 512. The rounding reproduces every sample size reported with
// the algorithm (512, 3584, 15360, 26624, 120320) and aligns buffers to
// vector width.
std::size_t sample_size(double epsilon, double delta);

// Transition rank of the step function approximating binocdf(k; p, n) at
// p = j/s: floor(n p + c sqrt(n p (1-p)) + 0.5), clamped to [1, n].
std::size_t k_up(std::size_t j, std::size_t s, std::size_t n, double c);

// Smallest integer count satisfying "count >= m * fraction". Values within
// 1e-9 of an integer are treated as that integer so thresholds like
// 0.05 * 100000 land on 5000 despite binary rounding.
std::uint64_t min_count(std::size_t m, double fraction);

// Maps neighborhood widths 1..n onto B log-spaced bins with integer edges.
// Upper edges follow u_b = min(n, max(b, round(n^(b/B)))), which keeps every
// leading bin a singleton until the geometric spacing exceeds one; with
// B = n the mapping degenerates to the identity, making the estimator
// coincide with the exact score when the sample is the whole dataset.
class KBinMapper {
public:
    KBinMapper(std::size_t n, std::size_t bins);

    std::size_t n() const { return n_; }
    std::size_t bins() const { return upper_.size(); }

    // 1-based bin index; monotone, bin_of(1) = 1, bin_of(n) = bins().
    std::size_t bin_of(std::size_t k) const;

    // Geometric midpoint of the bin's integer range, clamped into the range.
    std::size_t midpoint(std::size_t bin) const;

    std::size_t lower(std::size_t bin) const { return bin == 1 ? 1 : upper_[bin - 2] + 1; }
    std::size_t upper(std::size_t bin) const { return upper_[bin - 1]; }

private:
    std::size_t n_;
    std::vector<std::uint64_t> upper_;
};

struct FastParams {
    std::vector<double> rho_list{0.001, 0.005, 0.01, 0.05, 0.1};
    double epsilon = 0.01;
    double delta = 0.01;
    std::size_t bins = 1000;
    double c = 0.0;
    std::uint64_t seed = 0;
    unsigned threads = 0;     // 0 -> hardware concurrency
    bool pre_shuffle = false; // randomize row order first, map scores back

    void validate() const;
};

// One partition of Procedure fast-CFOF_part: sample is an s x d column-major
// block (leading dimension s), n the full dataset size. Emits one score per
// (sample point, rho), non-decreasing across ascending rho.
void process_partition(const float* sample, std::size_t s, std::size_t d, std::size_t n,
                       const FastParams& params, const KBinMapper& mapper,
                       std::vector<std::vector<double>>& out);

// Sampling estimator of soft-CFOF over consecutive partitions; linear in
// n * d, embarrassingly parallel within a partition, deterministic for a
// given seed independent of thread count.
ScoreSet fast_cfof(const Dataset& ds, const FastParams& params);

// Same computation streaming partitions straight from a binary dataset file,
// never holding more than one partition in memory.
ScoreSet fast_cfof_file(const std::string& path, const FastParams& params);

} // namespace cfof
