#pragma once

#include <string>
#include <vector>

namespace cfof {

// Per-point outlier scores keyed by (point id, parameter value). The
// parameter is rho for CFOF-family methods and k for the baselines.
struct ScoreSet {
    std::string method;
    std::string param_name = "rho";
    std::vector<double> params;               // ascending
    std::size_t n = 0;
    std::vector<std::vector<double>> scores;  // scores[param_index][point_id]

    const std::vector<double>& at_param(double value) const;
    void validate() const;
};

// CSV layout `point_id,<param_name>,score`, grouped by parameter then point.
// Identical inputs produce byte-identical files.
void write_scoreset_csv(const ScoreSet& ss, const std::string& path);
ScoreSet read_scoreset_csv(const std::string& path);

} // namespace cfof
