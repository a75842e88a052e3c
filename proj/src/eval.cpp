#include "cfof/eval.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <stdexcept>

namespace cfof {

namespace {

// Tie-averaged ranks, 1-based.
std::vector<double> average_ranks(const std::vector<double>& v) {
    const std::size_t n = v.size();
    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), 0);
    std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
    std::vector<double> ranks(n);
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j + 1 < n && v[idx[j + 1]] == v[idx[i]]) ++j;
        const double avg = 0.5 * (static_cast<double>(i + 1) + static_cast<double>(j + 1));
        for (std::size_t t = i; t <= j; ++t) ranks[idx[t]] = avg;
        i = j + 1;
    }
    return ranks;
}

void check_labels(const std::vector<double>& scores, const std::vector<std::uint8_t>& labels) {
    if (scores.size() != labels.size())
        throw std::invalid_argument("eval: score/label size mismatch");
    std::size_t pos = 0;
    for (auto l : labels) pos += l;
    if (pos == 0 || pos == labels.size())
        throw std::invalid_argument("eval: labels need at least one positive and one negative");
}

} // namespace

double auc(const std::vector<double>& scores, const std::vector<std::uint8_t>& labels) {
    check_labels(scores, labels);
    const auto ranks = average_ranks(scores);
    double rank_sum = 0;
    std::size_t n_pos = 0;
    for (std::size_t i = 0; i < scores.size(); ++i)
        if (labels[i]) {
            rank_sum += ranks[i];
            ++n_pos;
        }
    const std::size_t n_neg = scores.size() - n_pos;
    const double u = rank_sum - 0.5 * static_cast<double>(n_pos) *
                                    static_cast<double>(n_pos + 1);
    return u / (static_cast<double>(n_pos) * static_cast<double>(n_neg));
}

double prec_at(const std::vector<double>& scores, const std::vector<std::uint8_t>& labels,
               double alpha) {
    check_labels(scores, labels);
    if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("prec_at: alpha out of range");
    const std::size_t n = scores.size();
    const auto m = std::min<std::size_t>(
        n, static_cast<std::size_t>(std::ceil(alpha * static_cast<double>(n))));
    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), 0);
    std::partial_sort(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(m), idx.end(),
                      [&](std::size_t a, std::size_t b) {
                          if (scores[a] != scores[b]) return scores[a] > scores[b];
                          return a < b;
                      });
    std::size_t hits = 0;
    for (std::size_t i = 0; i < m; ++i) hits += labels[idx[i]];
    return static_cast<double>(hits) / static_cast<double>(m);
}

double spearman(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() != b.size() || a.size() < 2)
        throw std::invalid_argument("spearman: need two equal-length vectors of size >= 2");
    const auto ra = average_ranks(a);
    const auto rb = average_ranks(b);
    const double n = static_cast<double>(a.size());
    double ma = 0, mb = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        ma += ra[i];
        mb += rb[i];
    }
    ma /= n;
    mb /= n;
    double cov = 0, va = 0, vb = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double da = ra[i] - ma, db = rb[i] - mb;
        cov += da * db;
        va += da * da;
        vb += db * db;
    }
    if (va == 0.0 || vb == 0.0)
        throw std::invalid_argument("spearman: constant input has undefined correlation");
    return cov / std::sqrt(va * vb);
}

std::vector<std::vector<double>> p_win(const std::vector<std::vector<double>>& metric_table) {
    const std::size_t m = metric_table.size();
    if (m == 0) throw std::invalid_argument("p_win: empty table");
    const std::size_t g = metric_table.front().size();
    if (g == 0) throw std::invalid_argument("p_win: empty grid");
    for (const auto& row : metric_table)
        if (row.size() != g) throw std::invalid_argument("p_win: mismatched grids");
    std::vector<std::vector<double>> out(m, std::vector<double>(m, 0.0));
    for (std::size_t a = 0; a < m; ++a)
        for (std::size_t b = 0; b < m; ++b) {
            if (a == b) continue;
            std::size_t wins = 0;
            for (std::size_t i = 0; i < g; ++i)
                if (metric_table[a][i] > metric_table[b][i]) ++wins;
            out[a][b] = static_cast<double>(wins) / static_cast<double>(g);
        }
    return out;
}

ScoreDistribution score_distribution(const std::vector<double>& scores,
                                     ScoreNormalization norm) {
    if (scores.empty()) throw std::invalid_argument("score_distribution: empty scores");
    const std::size_t n = scores.size();
    ScoreDistribution sd;
    sd.sorted_desc = scores;
    std::sort(sd.sorted_desc.begin(), sd.sorted_desc.end(), std::greater<>());
    sd.rank_fraction.resize(n);
    for (std::size_t i = 0; i < n; ++i)
        sd.rank_fraction[i] = static_cast<double>(i + 1) / static_cast<double>(n);

    const double mx = sd.sorted_desc.front();
    sd.cum_score.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double s = sd.sorted_desc[n - 1 - i]; // ascending
        double v = mx != 0.0 ? s / mx : 0.0;
        if (norm == ScoreNormalization::OneMinusOverMax) v = 1.0 - v;
        sd.cum_score[i] = v;
    }
    if (norm == ScoreNormalization::OneMinusOverMax)
        std::sort(sd.cum_score.begin(), sd.cum_score.end());
    sd.cum_fraction.resize(n);
    for (std::size_t i = 0; i < n; ++i)
        sd.cum_fraction[i] = static_cast<double>(i + 1) / static_cast<double>(n);
    return sd;
}

std::vector<std::size_t> k_grid(std::size_t n) {
    if (n < 4) throw std::invalid_argument("k_grid: n too small");
    const std::size_t lo = 2;
    const std::size_t hi = std::max<std::size_t>(lo + 1, n / 2);
    constexpr int kPoints = 20;
    std::vector<std::size_t> grid;
    for (int i = 0; i < kPoints; ++i) {
        const double t = static_cast<double>(i) / (kPoints - 1);
        double v;
        if (n > 100) {
            v = std::exp(std::log(static_cast<double>(lo)) +
                         t * (std::log(static_cast<double>(hi)) -
                              std::log(static_cast<double>(lo))));
        } else {
            v = static_cast<double>(lo) + t * static_cast<double>(hi - lo);
        }
        auto k = static_cast<std::size_t>(std::llround(v));
        k = std::clamp(k, lo, hi);
        if (grid.empty() || grid.back() != k) grid.push_back(k);
    }
    return grid;
}

} // namespace cfof
