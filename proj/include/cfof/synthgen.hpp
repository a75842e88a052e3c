#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "cfof/dataset.hpp"

namespace cfof {

// Marginal families for mixture clusters, named by kurtosis target:
// uniform 1.8, normal 3, heavy-tailed "exponential-like" 9.
enum class MarginalFamily { Uniform, Normal, ExponentialLike };

MarginalFamily parse_family(const std::string& name);

struct ClusterSpec {
    double weight = 1.0;
    std::vector<double> mean;  // scalar broadcast when size() == 1
    double stdev = 1.0;
    MarginalFamily family = MarginalFamily::Normal;
};

struct MixtureSpec {
    std::vector<ClusterSpec> clusters;
    std::size_t n = 0;
    std::size_t d = 0;
    std::uint64_t seed = 0;
};

// i.i.d. standard normal points.
Dataset gen_unimodal(std::size_t n, std::size_t d, std::uint64_t seed);

// Two normal clusters: N(0,1)^d and N(4,0.5^2)^d, half the points each,
// row order randomized.
Dataset gen_clust2(std::size_t n, std::size_t d, std::uint64_t seed);

struct MultimodalData {
    Dataset data;                          // labels mark the planted outliers
    std::vector<std::uint8_t> cluster_of;  // 0 or 1 per point
    std::vector<std::vector<double>> centers;
};

// Two equally sized clusters (mean -1 sd 0.1, mean +1 sd 1); per cluster the
// alpha/2 fraction farthest from its center is labeled outlier.
MultimodalData gen_multimodal(std::size_t n, std::size_t d, std::uint64_t seed, double alpha);

// Pushes every labeled point away from its cluster center by `factor` of its
// current distance (x -> c + (1+factor)(x-c)); unlabeled points unchanged.
Dataset make_artificial(const Dataset& ds, const std::vector<std::uint8_t>& cluster_of,
                        const std::vector<std::vector<double>>& centers, double factor = 0.2);

// General mixture generator; cluster sizes are allocated deterministically by
// largest remainder, points ordered cluster by cluster.
std::pair<Dataset, std::vector<std::uint8_t>> gen_mixture(const MixtureSpec& spec);

} // namespace cfof
