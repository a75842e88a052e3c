#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "cfof/baselines.hpp"
#include "cfof/dataset.hpp"
#include "cfof/exact.hpp"
#include "cfof/synthgen.hpp"

using namespace cfof;

namespace {

Dataset one_d(const std::vector<float>& vals) {
    Dataset ds = make_dataset(vals.size(), 1, "1d");
    for (std::size_t i = 0; i < vals.size(); ++i) ds.at(i, 0) = vals[i];
    return ds;
}

std::size_t argmax(const std::vector<double>& v) {
    return static_cast<std::size_t>(std::max_element(v.begin(), v.end()) - v.begin());
}

Dataset uniform_cube(std::size_t n, std::size_t d, std::uint64_t seed) {
    Dataset ds = make_dataset(n, d, "unif");
    CounterRng rng(seed);
    for (std::size_t c = 0; c < d; ++c) {
        const CounterRng col = rng.substream(c);
        float* dst = ds.values.data() + c * n;
        for (std::size_t r = 0; r < n; ++r) dst[r] = static_cast<float>(col.uniform(r));
    }
    return ds;
}

double sigma_over_mu(const std::vector<double>& v) {
    double mean = 0;
    for (double x : v) mean += x;
    mean /= static_cast<double>(v.size());
    double var = 0;
    for (double x : v) var += (x - mean) * (x - mean);
    var /= static_cast<double>(v.size());
    return std::sqrt(var) / mean;
}

} // namespace

TEST_CASE("odin on the 4-point line") {
    const Dataset ds = one_d({0, 1, 3, 10});
    const auto ss = odin(ds, 3);
    CHECK(ss.scores[0] == std::vector<double>{-3, -4, -4, -1});
    CHECK(argmax(ss.scores[0]) == 3);

    const auto all = odin(ds, 4);
    for (double s : all.scores[0]) CHECK(s == -4.0);

    double sum = 0;
    for (double s : ss.scores[0]) sum += s;
    CHECK(sum == -4.0 * 3.0);
    CHECK_THROWS(odin(ds, 0));
    CHECK_THROWS(odin(ds, 5));
}

TEST_CASE("antihub2 degenerates to odin ranking at w=0 and keeps the outlier on top") {
    const Dataset ds = one_d({0, 1, 3, 10});
    const auto ah = antihub2(ds, 2);
    CHECK(argmax(ah.scores[0]) == 3);

    // k = n makes every reverse count equal n, so every weight yields a flat
    // candidate field
    Dataset square = make_dataset(4, 2, "square");
    const float pts[4][2] = {{0, 0}, {0, 1}, {1, 0}, {1, 1}};
    for (std::size_t r = 0; r < 4; ++r)
        for (std::size_t c = 0; c < 2; ++c) square.at(r, c) = pts[r][c];
    const auto flat = antihub2(square, 4);
    for (double s : flat.scores[0]) CHECK(s == flat.scores[0][0]);
}

TEST_CASE("aknn hand values, duplicates, and homogeneity") {
    const Dataset ds = one_d({0, 1, 3, 10});
    const auto ss = aknn(ds, 2);
    CHECK(ss.scores[0][0] == doctest::Approx(2.0));
    CHECK(ss.scores[0][1] == doctest::Approx(1.5));
    CHECK(ss.scores[0][2] == doctest::Approx(2.5));
    CHECK(ss.scores[0][3] == doctest::Approx(8.0));
    CHECK(argmax(ss.scores[0]) == 3);
    CHECK_THROWS(aknn(ds, 4)); // k <= n-1

    const Dataset dup = one_d({5, 5, 5, 9});
    const auto dd = aknn(dup, 2);
    CHECK(dd.scores[0][0] == 0.0);
    CHECK(dd.scores[0][1] == 0.0);

    Dataset scaled = ds;
    for (auto& v : scaled.values) v *= 3.0f;
    const auto sc = aknn(scaled, 2);
    std::vector<std::size_t> o1(4), o2(4);
    std::iota(o1.begin(), o1.end(), 0);
    o2 = o1;
    std::sort(o1.begin(), o1.end(),
              [&](auto a, auto b) { return ss.scores[0][a] < ss.scores[0][b]; });
    std::sort(o2.begin(), o2.end(),
              [&](auto a, auto b) { return sc.scores[0][a] < sc.scores[0][b]; });
    CHECK(o1 == o2); // ranking is scale-invariant
    for (std::size_t i = 0; i < 4; ++i)
        CHECK(sc.scores[0][i] == doctest::Approx(3.0 * ss.scores[0][i]).epsilon(1e-6));
}

TEST_CASE("lof: interior points near 1, planted outlier on top, duplicates at 1") {
    Dataset grid = make_dataset(50, 1, "grid");
    for (std::size_t r = 0; r < 50; ++r) grid.at(r, 0) = static_cast<float>(r);
    const auto gl = lof(grid, 3);
    for (std::size_t r = 5; r < 45; ++r) {
        CHECK(gl.scores[0][r] >= 0.9);
        CHECK(gl.scores[0][r] <= 1.1);
    }

    // tight gaussian cluster plus one far point
    Dataset far = make_dataset(11, 2, "far");
    CounterRng rng(2);
    for (std::size_t r = 0; r < 10; ++r) {
        far.at(r, 0) = static_cast<float>(0.01 * rng.uniform(2 * r));
        far.at(r, 1) = static_cast<float>(0.01 * rng.uniform(2 * r + 1));
    }
    far.at(10, 0) = 6.0f;
    far.at(10, 1) = -3.0f;
    const auto fl = lof(far, 3);
    for (std::size_t r = 0; r < 10; ++r) CHECK(fl.scores[0][10] > fl.scores[0][r]);

    const Dataset dup = one_d({2, 2, 2, 2, 2, 7, 8});
    const auto dl = lof(dup, 3);
    for (std::size_t r = 0; r < 5; ++r) CHECK(dl.scores[0][r] == 1.0);
}

TEST_CASE("baselines are permutation-equivariant") {
    const Dataset ds = gen_clust2(120, 3, 8);
    const auto perm = random_permutation(ds.n, CounterRng(31));
    Dataset shuffled = make_dataset(ds.n, ds.d, "perm");
    for (std::size_t c = 0; c < ds.d; ++c)
        for (std::size_t r = 0; r < ds.n; ++r) shuffled.at(r, c) = ds.at(perm[r], c);

    auto check_equivariant = [&](auto&& fn) {
        const auto a = fn(ds);
        const auto b = fn(shuffled);
        for (std::size_t r = 0; r < ds.n; ++r)
            CHECK(b.scores[0][r] == doctest::Approx(a.scores[0][perm[r]]).epsilon(1e-12));
    };
    check_equivariant([](const Dataset& d) { return odin(d, 7); });
    check_equivariant([](const Dataset& d) { return aknn(d, 7); });
    check_equivariant([](const Dataset& d) { return lof(d, 7); });
    check_equivariant([](const Dataset& d) { return antihub2(d, 7); });
}

TEST_CASE("odin ranking is translation and scale invariant") {
    const Dataset ds = gen_clust2(90, 4, 44);
    Dataset moved = ds;
    for (auto& v : moved.values) v = -2.5f * v + 7.0f;
    const auto a = odin(ds, 9);
    const auto b = odin(moved, 9);
    CHECK(a.scores[0] == b.scores[0]); // counts are rank-based, exactly equal
}

TEST_CASE("distance-based scores concentrate with dimension, reverse counts do not") {
    const std::size_t n = 300, k = 20;
    double prev_aknn = 1e9, prev_lof = 1e9;
    for (std::size_t d : {10u, 100u, 1000u}) {
        const Dataset ds = uniform_cube(n, d, 5000 + d);
        const double ra = sigma_over_mu(aknn(ds, k).scores[0]);
        const double rl = sigma_over_mu(lof(ds, k).scores[0]);
        CHECK(ra < prev_aknn);
        CHECK(rl < prev_lof);
        prev_aknn = ra;
        prev_lof = rl;
    }
}
