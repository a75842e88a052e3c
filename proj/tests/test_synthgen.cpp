#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "cfof/dataset.hpp"
#include "cfof/synthgen.hpp"
#include "cfof/theory.hpp"

using namespace cfof;

namespace {

double column_mean(const Dataset& ds, std::size_t c) {
    double sum = 0;
    for (std::size_t r = 0; r < ds.n; ++r) sum += ds.at(r, c);
    return sum / static_cast<double>(ds.n);
}

} // namespace

TEST_CASE("unimodal generator: moments and determinism") {
    const Dataset ds = gen_unimodal(10000, 5, 42);
    for (std::size_t c = 0; c < ds.d; ++c) {
        const double m = column_mean(ds, c);
        CHECK(m > -0.1);
        CHECK(m < 0.1);
    }
    const MomentSummary ms = estimate_moments(ds);
    CHECK(ms.kappa_orig == doctest::Approx(3.0).epsilon(0.2 / 3.0));

    const Dataset again = gen_unimodal(10000, 5, 42);
    CHECK(again.values == ds.values);
    const Dataset other = gen_unimodal(10000, 5, 43);
    CHECK(other.values != ds.values);
}

TEST_CASE("clust2 generator: per-cluster statistics") {
    const std::size_t n = 20000, d = 4;
    const Dataset ds = gen_clust2(n, d, 7);
    // membership by coordinate sum (cluster means 0 and 4d are far apart)
    std::vector<std::size_t> c0, c1;
    for (std::size_t r = 0; r < n; ++r) {
        double sum = 0;
        for (std::size_t c = 0; c < d; ++c) sum += ds.at(r, c);
        (sum < 2.0 * static_cast<double>(d) ? c0 : c1).push_back(r);
    }
    CHECK(c0.size() == doctest::Approx(n / 2.0).epsilon(0.02));
    for (std::size_t c = 0; c < d; ++c) {
        double m0 = 0, m1 = 0;
        for (auto r : c0) m0 += ds.at(r, c);
        for (auto r : c1) m1 += ds.at(r, c);
        m0 /= static_cast<double>(c0.size());
        m1 /= static_cast<double>(c1.size());
        double v0 = 0, v1 = 0;
        for (auto r : c0) v0 += (ds.at(r, c) - m0) * (ds.at(r, c) - m0);
        for (auto r : c1) v1 += (ds.at(r, c) - m1) * (ds.at(r, c) - m1);
        v0 /= static_cast<double>(c0.size());
        v1 /= static_cast<double>(c1.size());
        CHECK(std::fabs(m0) < 0.05);
        CHECK(m1 == doctest::Approx(4.0).epsilon(0.01));
        CHECK(std::sqrt(v0) == doctest::Approx(1.0).epsilon(0.05));
        CHECK(std::sqrt(v1) == doctest::Approx(0.5).epsilon(0.05));
    }
    CHECK(gen_clust2(n, d, 7).values == ds.values);
}

TEST_CASE("multimodal generator: label protocol") {
    const auto md = gen_multimodal(1000, 100, 3, 0.05);
    std::size_t positives = 0;
    for (auto l : md.data.labels) positives += l;
    CHECK(positives == 50);

    std::size_t half0 = 0;
    for (auto c : md.cluster_of) half0 += c == 0;
    CHECK(half0 == 500);

    // every labeled point lies at least as far from its center as every
    // unlabeled point of the same cluster
    std::vector<double> dist2(md.data.n, 0.0);
    for (std::size_t c = 0; c < md.data.d; ++c)
        for (std::size_t r = 0; r < md.data.n; ++r) {
            const double t = md.data.at(r, c) - md.centers[md.cluster_of[r]][c];
            dist2[r] += t * t;
        }
    for (int cl = 0; cl < 2; ++cl) {
        double min_labeled = 1e300, max_unlabeled = -1;
        for (std::size_t r = 0; r < md.data.n; ++r) {
            if (md.cluster_of[r] != cl) continue;
            if (md.data.labels[r])
                min_labeled = std::min(min_labeled, dist2[r]);
            else
                max_unlabeled = std::max(max_unlabeled, dist2[r]);
        }
        CHECK(min_labeled >= max_unlabeled);
    }
}

TEST_CASE("make_artificial pushes labeled points out radially") {
    const auto md = gen_multimodal(600, 20, 9, 0.05);
    const Dataset art = make_artificial(md.data, md.cluster_of, md.centers, 0.2);
    for (std::size_t r = 0; r < md.data.n; ++r) {
        double d_before = 0, d_after = 0, dot = 0;
        for (std::size_t c = 0; c < md.data.d; ++c) {
            const double b = md.data.at(r, c) - md.centers[md.cluster_of[r]][c];
            const double a = art.at(r, c) - md.centers[md.cluster_of[r]][c];
            d_before += b * b;
            d_after += a * a;
            dot += a * b;
        }
        if (md.data.labels[r]) {
            CHECK(std::sqrt(d_after) ==
                  doctest::Approx(1.2 * std::sqrt(d_before)).epsilon(1e-5));
            CHECK(dot / std::sqrt(d_before * d_after) == doctest::Approx(1.0).epsilon(1e-9));
        } else {
            for (std::size_t c = 0; c < md.data.d; ++c)
                CHECK(art.at(r, c) == md.data.at(r, c));
        }
    }

    // labeled tails end up strictly separated from the bulk
    std::vector<double> dist2(art.n, 0.0);
    for (std::size_t c = 0; c < art.d; ++c)
        for (std::size_t r = 0; r < art.n; ++r) {
            const double t = art.at(r, c) - md.centers[md.cluster_of[r]][c];
            dist2[r] += t * t;
        }
    for (int cl = 0; cl < 2; ++cl) {
        double min_labeled = 1e300;
        std::vector<double> rest;
        for (std::size_t r = 0; r < art.n; ++r) {
            if (md.cluster_of[r] != cl) continue;
            if (art.labels[r])
                min_labeled = std::min(min_labeled, std::sqrt(dist2[r]));
            else
                rest.push_back(std::sqrt(dist2[r]));
        }
        std::sort(rest.begin(), rest.end());
        const double q = rest[static_cast<std::size_t>(0.975 * rest.size())];
        CHECK(min_labeled >= 1.2 * q * (1.0 - 1e-9));
    }
}

TEST_CASE("mixture generator: family kurtoses and deterministic sizes") {
    MixtureSpec spec;
    spec.n = 100000;
    spec.d = 2;
    spec.seed = 5;
    spec.clusters = {{1.0, {0.0}, 1.0, MarginalFamily::Uniform}};
    const MomentSummary mu = estimate_moments(gen_mixture(spec).first);
    CHECK(mu.kappa_norm == doctest::Approx(1.8).epsilon(0.05 / 1.8));

    spec.clusters = {{1.0, {0.0}, 1.0, MarginalFamily::ExponentialLike}};
    const auto heavy = gen_mixture(spec).first;
    const MomentSummary mh = estimate_moments(heavy);
    CHECK(mh.kappa_norm == doctest::Approx(9.0).epsilon(0.5 / 9.0));
    // symmetric, unit variance
    CHECK(std::fabs(column_mean(heavy, 0)) < 0.02);
    CHECK(mh.mu2 == doctest::Approx(1.0).epsilon(0.03));

    spec.n = 1000;
    spec.clusters = {{0.3, {0.0}, 1.0, MarginalFamily::Normal},
                     {0.7, {5.0}, 1.0, MarginalFamily::Normal}};
    const auto [ds, assign] = gen_mixture(spec);
    std::size_t n0 = 0;
    for (auto a : assign) n0 += a == 0;
    CHECK(n0 == 300);

    spec.clusters[0].weight = 0.5;
    CHECK_THROWS(gen_mixture(spec)); // weights no longer sum to 1
}

TEST_CASE("generators are pure functions of spec and seed") {
    const auto a = gen_multimodal(500, 10, 77, 0.05);
    const auto b = gen_multimodal(500, 10, 77, 0.05);
    CHECK(a.data.values == b.data.values);
    CHECK(a.data.labels == b.data.labels);

    MixtureSpec spec;
    spec.n = 2000;
    spec.d = 3;
    spec.seed = 11;
    spec.clusters = {{0.5, {0.0}, 1.0, MarginalFamily::Normal},
                     {0.5, {2.0}, 0.5, MarginalFamily::ExponentialLike}};
    CHECK(gen_mixture(spec).first.values == gen_mixture(spec).first.values);
}
