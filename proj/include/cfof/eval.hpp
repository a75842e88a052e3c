#pragma once

#include <cstdint>
#include <vector>

namespace cfof {

// Rank-based AUC with tie correction (Mann-Whitney form). Labels need at
// least one positive and one negative.
double auc(const std::vector<double>& scores, const std::vector<std::uint8_t>& labels);

// Fraction of true outliers among the ceil(alpha n) highest scores; ties at
// the cutoff resolve by point index.
double prec_at(const std::vector<double>& scores, const std::vector<std::uint8_t>& labels,
               double alpha);

// Spearman rank correlation: Pearson correlation of tie-averaged ranks.
double spearman(const std::vector<double>& a, const std::vector<double>& b);

// Pairwise strict-win fractions over a shared parameter grid.
// metric_table[m][g] is the metric of method m at grid position g;
// out[a][b] = fraction of grid cells where a beats b.
std::vector<std::vector<double>> p_win(const std::vector<std::vector<double>>& metric_table);

struct ScoreDistribution {
    std::vector<double> sorted_desc;   // scores, largest first
    std::vector<double> rank_fraction; // (i+1)/n per row
    std::vector<double> cum_score;     // normalized scores ascending
    std::vector<double> cum_fraction;  // dataset fraction at or below
};

enum class ScoreNormalization {
    ScoreOverMax,   // score / max score
    OneMinusOverMax // 1 - score / max score (reverse-count convention)
};

ScoreDistribution score_distribution(const std::vector<double>& scores,
                                     ScoreNormalization norm = ScoreNormalization::ScoreOverMax);

// Experiment grid for the neighborhood parameter: 20 values from 2 to n/2,
// log-spaced when n > 100 and linearly spaced otherwise, deduplicated.
std::vector<std::size_t> k_grid(std::size_t n);

} // namespace cfof
