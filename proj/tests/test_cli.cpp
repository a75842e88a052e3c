#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include "cfof/dataset.hpp"
#include "cfof/score_set.hpp"

using namespace cfof;

namespace {

int run(const std::string& args) {
    const std::string cmd = std::string(CFOF_BIN) + " " + args + " 2>/tmp/cfof_cli_err.txt";
    return std::system(cmd.c_str());
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

} // namespace

TEST_CASE("gen writes binary datasets with the advertised header") {
    REQUIRE(run("gen --kind clust2 --n 2000 --d 10 --seed 7 --out /tmp/cli_c2.bin") == 0);
    const Dataset ds = load_binary("/tmp/cli_c2.bin");
    CHECK(ds.n == 2000);
    CHECK(ds.d == 10);
}

TEST_CASE("gen multimodal produces the requested label count") {
    REQUIRE(run("gen --kind multimodal --alpha 0.05 --n 1000 --d 20 --seed 1 "
                "--out /tmp/cli_mm.csv --labels /tmp/cli_mm.lab") == 0);
    const auto labels = load_labels("/tmp/cli_mm.lab");
    std::size_t pos = 0;
    for (auto l : labels) pos += l;
    CHECK(labels.size() == 1000);
    CHECK(pos == 50);
}

TEST_CASE("gen rejects unknown kinds") { CHECK(run("gen --kind nope --out /tmp/x.csv") != 0); }

TEST_CASE("score cfof emits one row per point and rho") {
    REQUIRE(run("score --input /tmp/cli_c2.bin --method cfof --rho 0.01,0.1 "
                "--out /tmp/cli_c2_scores.csv") == 0);
    const ScoreSet ss = read_scoreset_csv("/tmp/cli_c2_scores.csv");
    CHECK(ss.n == 2000);
    CHECK(ss.params == std::vector<double>{0.01, 0.1});
}

TEST_CASE("score validates method/parameter combinations") {
    CHECK(run("score --input /tmp/cli_c2.bin --method aknn --out /tmp/x.csv") != 0);
    CHECK(run("score --input /tmp/cli_c2.bin --method cfof --k 5 --out /tmp/x.csv") != 0);
    CHECK(run("score --input /tmp/missing.bin --method cfof --out /tmp/x.csv") != 0);
}

TEST_CASE("identical invocations produce byte-identical outputs") {
    REQUIRE(run("score --input /tmp/cli_c2.bin --method fast-cfof --epsilon 0.1 --delta 0.1 "
                "--seed 3 --threads 2 --out /tmp/cli_fast_a.csv") == 0);
    REQUIRE(run("score --input /tmp/cli_c2.bin --method fast-cfof --epsilon 0.1 --delta 0.1 "
                "--seed 3 --threads 1 --out /tmp/cli_fast_b.csv") == 0);
    CHECK(slurp("/tmp/cli_fast_a.csv") == slurp("/tmp/cli_fast_b.csv"));
}

TEST_CASE("eval computes auc for labeled scores") {
    REQUIRE(run("score --input /tmp/cli_mm.csv --method aknn --k 20 "
                "--out /tmp/cli_mm_aknn.csv") == 0);
    REQUIRE(run("eval --scores /tmp/cli_mm_aknn.csv --labels /tmp/cli_mm.lab --alpha 0.05 "
                "--metric auc --out /tmp/cli_mm_eval.csv") == 0);
    const std::string report = slurp("/tmp/cli_mm_eval.csv");
    CHECK(report.find("method,param,metric,value") == 0);
    CHECK(report.find("auc") != std::string::npos);
}

TEST_CASE("eval emits score-distribution tables") {
    REQUIRE(run("eval --scores /tmp/cli_mm_aknn.csv --metric dist --out /tmp/cli_dist.csv") == 0);
    std::ifstream in("/tmp/cli_dist.csv");
    std::string line;
    std::getline(in, line);
    CHECK(line == "param,rank_fraction,sorted_score,cum_score,cum_fraction");
    double prev_sorted = 1e300, last_cum = 0;
    std::size_t rows = 0;
    while (std::getline(in, line)) {
        double param, rf, sorted, cs, cf;
        REQUIRE(std::sscanf(line.c_str(), "%lf,%lf,%lf,%lf,%lf", &param, &rf, &sorted, &cs,
                            &cf) == 5);
        CHECK(sorted <= prev_sorted);
        prev_sorted = sorted;
        last_cum = cf;
        ++rows;
    }
    CHECK(rows == 1000);
    CHECK(last_cum == 1.0);
}

TEST_CASE("theory dist table is monotone in s") {
    REQUIRE(run("theory --what dist --kappa 3 --rho 0.01 --steps 50 --out /tmp/cli_th.csv") == 0);
    std::ifstream in("/tmp/cli_th.csv");
    std::string line;
    std::getline(in, line);
    CHECK(line == "s,cdf,pdf");
    double prev = -1;
    while (std::getline(in, line)) {
        double s, cdf, pdf;
        REQUIRE(std::sscanf(line.c_str(), "%lf,%lf,%lf", &s, &cdf, &pdf) == 3);
        CHECK(cdf >= prev);
        CHECK(pdf >= 0.0);
        prev = cdf;
    }
    CHECK(prev > 0.9);
}

TEST_CASE("theory rejects out-of-domain kurtosis") {
    CHECK(run("theory --what dist --kappa 0.5 --rho 0.01 --out /tmp/x.csv") != 0);
}

TEST_CASE("mixture generation from a JSON spec") {
    {
        std::ofstream spec("/tmp/cli_mix.json");
        spec << R"({"n":500,"d":3,"seed":2,"clusters":[)"
             << R"({"weight":0.3,"mean":0.0,"stdev":1.0,"family":"normal"},)"
             << R"({"weight":0.7,"mean":[4,4,4],"stdev":0.5,"family":"uniform"}]})";
    }
    REQUIRE(run("gen --kind mixture --spec /tmp/cli_mix.json --out /tmp/cli_mix.bin") == 0);
    const Dataset ds = load_binary("/tmp/cli_mix.bin");
    CHECK(ds.n == 500);
    CHECK(ds.d == 3);
}
