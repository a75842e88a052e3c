#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <string>

#include "cfof/dataset.hpp"
#include "cfof/exact.hpp"
#include "cfof/synthgen.hpp"
#include "cfof/theory.hpp"

using namespace cfof;

namespace {

std::string tmp_path(const std::string& name) { return "/tmp/cfof_test_" + name; }

void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    out << text;
}

} // namespace

TEST_CASE("load_csv parses plain numeric files") {
    const auto p = tmp_path("plain.csv");
    write_file(p, "1,2\n3,4\n5,6\n");
    const Dataset ds = load_csv(p);
    CHECK(ds.n == 3);
    CHECK(ds.d == 2);
    CHECK(ds.at(0, 0) == 1.0f);
    CHECK(ds.at(2, 1) == 6.0f);
    CHECK_FALSE(ds.has_labels());
}

TEST_CASE("load_csv with header and label column") {
    const auto p = tmp_path("labeled.csv");
    write_file(p, "x,y,lab\n0,0,0\n9,9,1\n");
    const Dataset ds = load_csv(p, true, std::string("lab"));
    CHECK(ds.n == 2);
    CHECK(ds.d == 2);
    REQUIRE(ds.has_labels());
    CHECK(ds.labels[0] == 0);
    CHECK(ds.labels[1] == 1);
}

TEST_CASE("load_csv reports parse failures with position") {
    const auto p = tmp_path("bad.csv");
    write_file(p, "a,b\n");
    CHECK_THROWS_WITH_AS(load_csv(p), doctest::Contains("line 1"), std::runtime_error);

    const auto p2 = tmp_path("ragged.csv");
    write_file(p2, "1,2\n3\n");
    CHECK_THROWS_WITH_AS(load_csv(p2), doctest::Contains("ragged"), std::runtime_error);

    const auto p3 = tmp_path("empty.csv");
    write_file(p3, "");
    CHECK_THROWS(load_csv(p3));
}

TEST_CASE("binary round trip is bit exact") {
    Dataset ds = make_dataset(2, 3, "rt");
    float v = 0.1f;
    for (auto& x : ds.values) {
        x = v;
        v = v * -1.7f + 0.3f;
    }
    ds.labels = {1, 0};
    const auto p = tmp_path("rt.bin");
    save_binary(ds, p);
    const Dataset back = load_binary(p);
    CHECK(back.n == ds.n);
    CHECK(back.d == ds.d);
    CHECK(back.values == ds.values);
    CHECK(back.labels == ds.labels);
}

TEST_CASE("binary format rejects corrupt files") {
    const auto p = tmp_path("badmagic.bin");
    write_file(p, "XXXX-not-a-dataset");
    CHECK_THROWS_WITH_AS(load_binary(p), doctest::Contains("magic"), std::runtime_error);

    // truncate a valid file mid-payload
    Dataset ds = make_dataset(4, 4, "t");
    const auto p2 = tmp_path("trunc.bin");
    save_binary(ds, p2);
    {
        std::ifstream in(p2, std::ios::binary);
        std::string bytes((std::istreambuf_iterator<char>(in)), {});
        std::ofstream out(p2, std::ios::binary);
        out.write(bytes.data(), static_cast<std::streamsize>(bytes.size() / 2));
    }
    CHECK_THROWS_WITH_AS(load_binary(p2), doctest::Contains("truncated"), std::runtime_error);
}

TEST_CASE("csv -> binary -> csv preserves values") {
    const Dataset ds = gen_unimodal(50, 4, 9);
    const auto pc = tmp_path("chain.csv");
    const auto pb = tmp_path("chain.bin");
    save_csv(ds, pc, false);
    const Dataset from_csv = load_csv(pc);
    save_binary(from_csv, pb);
    const Dataset from_bin = load_binary(pb);
    CHECK(from_bin.values == ds.values); // %.9g keeps f32 exact
}

TEST_CASE("normalize: two-point column and null-variance drop") {
    Dataset ds = make_dataset(2, 1, "two");
    ds.at(0, 0) = 1.0f;
    ds.at(1, 0) = 3.0f;
    const Dataset norm = normalize(ds);
    CHECK(norm.at(0, 0) == doctest::Approx(-1.0));
    CHECK(norm.at(1, 0) == doctest::Approx(1.0));

    Dataset con = make_dataset(5, 3, "const-col");
    for (std::size_t r = 0; r < 5; ++r) {
        con.at(r, 0) = static_cast<float>(r);
        con.at(r, 1) = 7.0f; // constant
        con.at(r, 2) = static_cast<float>(r * r);
    }
    const Dataset out = normalize(con);
    CHECK(out.d == 2);

    Dataset allconst = make_dataset(4, 2, "allconst");
    for (auto& x : allconst.values) x = 3.0f;
    CHECK_THROWS(normalize(allconst));
}

TEST_CASE("normalize: large-sample statistics and idempotence") {
    const Dataset ds = gen_unimodal(100000, 3, 123);
    const Dataset norm = normalize(ds);
    for (std::size_t c = 0; c < norm.d; ++c) {
        double sum = 0, ss = 0;
        for (std::size_t r = 0; r < norm.n; ++r) sum += norm.at(r, c);
        const double mean = sum / static_cast<double>(norm.n);
        for (std::size_t r = 0; r < norm.n; ++r) {
            const double t = norm.at(r, c) - mean;
            ss += t * t;
        }
        const double sd = std::sqrt(ss / static_cast<double>(norm.n));
        CHECK(std::fabs(mean) < 0.01);
        CHECK(sd == doctest::Approx(1.0).epsilon(0.01));
    }
    const Dataset twice = normalize(norm);
    for (std::size_t i = 0; i < norm.values.size(); ++i)
        CHECK(std::fabs(twice.values[i] - norm.values[i]) < 1e-6);
}

TEST_CASE("shuffle_attributes keeps per-column multisets and moments") {
    const Dataset ds = gen_unimodal(500, 4, 77);
    const Dataset sh = shuffle_attributes(ds, 42);
    REQUIRE(sh.n == ds.n);
    REQUIRE(sh.d == ds.d);
    bool any_moved = false;
    for (std::size_t c = 0; c < ds.d; ++c) {
        std::vector<float> a(ds.column(c), ds.column(c) + ds.n);
        std::vector<float> b(sh.column(c), sh.column(c) + sh.n);
        if (a != b) any_moved = true;
        std::sort(a.begin(), a.end());
        std::sort(b.begin(), b.end());
        CHECK(a == b);
    }
    CHECK(any_moved);

    // moment estimates accumulate in sorted order, so they are bit-identical
    const MomentSummary m0 = estimate_moments(ds);
    const MomentSummary m1 = estimate_moments(sh);
    CHECK(m0.kappa_orig == m1.kappa_orig);
    CHECK(m0.kappa_norm == m1.kappa_norm);

    const Dataset sh2 = shuffle_attributes(ds, 42);
    CHECK(sh2.values == sh.values);
}

TEST_CASE("randomize_rows permutes rows with labels attached") {
    Dataset ds = gen_unimodal(64, 3, 5);
    ds.labels.assign(ds.n, 0);
    for (std::size_t r = 0; r < ds.n; r += 7) ds.labels[r] = 1;
    const Dataset rr = randomize_rows(ds, 99);

    auto row_key = [](const Dataset& d, std::size_t r) {
        std::string key;
        char buf[32];
        for (std::size_t c = 0; c < d.d; ++c) {
            std::snprintf(buf, sizeof buf, "%.9g|", static_cast<double>(d.at(r, c)));
            key += buf;
        }
        return key;
    };
    std::multiset<std::string> before, after;
    std::map<std::string, int> label_before, label_after;
    for (std::size_t r = 0; r < ds.n; ++r) {
        before.insert(row_key(ds, r));
        after.insert(row_key(rr, r));
        label_before[row_key(ds, r)] = ds.labels[r];
        label_after[row_key(rr, r)] = rr.labels[r];
    }
    CHECK(before == after);
    CHECK(label_before == label_after);
}

TEST_CASE("hard-CFOF scores are invariant under row permutation") {
    const Dataset ds = gen_unimodal(80, 3, 11);
    const Dataset rr = randomize_rows(ds, 4);
    const auto s0 = hard_cfof(ds, {0.1});
    const auto s1 = hard_cfof(rr, {0.1});
    // recover the permutation by matching rows
    const auto perm = random_permutation(ds.n, CounterRng(4));
    for (std::size_t r = 0; r < ds.n; ++r)
        CHECK(s1.scores[0][r] == s0.scores[0][perm[r]]);
}
