#include "cfof/score_set.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <stdexcept>
#include <utility>

namespace cfof {

const std::vector<double>& ScoreSet::at_param(double value) const {
    for (std::size_t i = 0; i < params.size(); ++i)
        if (params[i] == value) return scores[i];
    throw std::runtime_error("ScoreSet: no scores for parameter " + std::to_string(value));
}

void ScoreSet::validate() const {
    if (params.size() != scores.size())
        throw std::runtime_error("ScoreSet: parameter/score arity mismatch");
    for (const auto& col : scores)
        if (col.size() != n) throw std::runtime_error("ScoreSet: score vector size != n");
    for (std::size_t i = 1; i < params.size(); ++i)
        if (params[i] <= params[i - 1])
            throw std::runtime_error("ScoreSet: parameters must be ascending");
}

void write_scoreset_csv(const ScoreSet& ss, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << "point_id," << ss.param_name << ",score\n";
    char buf[128];
    for (std::size_t p = 0; p < ss.params.size(); ++p) {
        for (std::size_t i = 0; i < ss.n; ++i) {
            std::snprintf(buf, sizeof buf, "%zu,%.17g,%.17g", i, ss.params[p],
                          ss.scores[p][i]);
            out << buf << '\n';
        }
    }
    if (!out) throw std::runtime_error("write failure on " + path);
}

ScoreSet read_scoreset_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::string header;
    if (!std::getline(in, header)) throw std::runtime_error(path + ": empty score file");
    ScoreSet ss;
    const auto c1 = header.find(',');
    const auto c2 = header.find(',', c1 + 1);
    if (c1 == std::string::npos || c2 == std::string::npos)
        throw std::runtime_error(path + ": bad score header");
    ss.param_name = header.substr(c1 + 1, c2 - c1 - 1);

    std::string line;
    std::size_t max_id = 0;
    std::vector<std::pair<double, std::pair<std::size_t, double>>> rows;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::size_t id;
        double param, score;
        if (std::sscanf(line.c_str(), "%zu,%lf,%lf", &id, &param, &score) != 3)
            throw std::runtime_error(path + ": bad score row '" + line + "'");
        rows.push_back({param, {id, score}});
        max_id = std::max(max_id, id);
    }
    if (rows.empty()) throw std::runtime_error(path + ": no score rows");
    ss.n = max_id + 1;
    for (const auto& r : rows) {
        std::size_t pi = ss.params.size();
        for (std::size_t i = 0; i < ss.params.size(); ++i)
            if (ss.params[i] == r.first) pi = i;
        if (pi == ss.params.size()) {
            ss.params.push_back(r.first);
            ss.scores.emplace_back(ss.n, std::nan(""));
        }
        ss.scores[pi].resize(ss.n, std::nan(""));
        ss.scores[pi][r.second.first] = r.second.second;
    }
    std::vector<std::size_t> idx(ss.params.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::sort(idx.begin(), idx.end(),
              [&](std::size_t a, std::size_t b) { return ss.params[a] < ss.params[b]; });
    ScoreSet sorted;
    sorted.method = ss.method;
    sorted.param_name = ss.param_name;
    sorted.n = ss.n;
    for (std::size_t i : idx) {
        sorted.params.push_back(ss.params[i]);
        sorted.scores.push_back(std::move(ss.scores[i]));
    }
    return sorted;
}

} // namespace cfof
