#include "cfof/synthgen.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "cfof/theory.hpp"

namespace cfof {

namespace {

constexpr double kSqrt12 = 3.4641016151377544;

// Marsaglia-Tsang gamma draw for shape > 1; rejection steps walk an indexed
// substream, so the result stays a pure function of (seed, stream, index).
double gamma_draw(const CounterRng& rng, std::uint64_t base, double shape) {
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    for (std::uint64_t t = 0; t < 34; ++t) {
        const double z = normal_quantile(rng.uniform(base + 2 * t));
        const double w = 1.0 + c * z;
        if (w <= 0.0) continue;
        const double v = w * w * w;
        const double u = rng.uniform(base + 2 * t + 1);
        if (std::log(u) < 0.5 * z * z + d - d * v + d * std::log(v)) return d * v;
    }
    throw std::runtime_error("gamma_draw: rejection budget exhausted");
}

// Unit-variance draw from the requested family, as a pure function of the
// draw coordinates. The heavy-tailed family is a symmetrized gamma whose
// shape solves (a+2)(a+3) = 9 a(a+1): kurtosis exactly 9 with every higher
// moment finite, so the sample kurtosis settles quickly.
double unit_draw(MarginalFamily family, const CounterRng& rng, std::uint64_t index) {
    switch (family) {
        case MarginalFamily::Uniform:
            return (rng.uniform(index) - 0.5) * kSqrt12;
        case MarginalFamily::Normal:
            return normal_quantile(rng.uniform(index));
        case MarginalFamily::ExponentialLike: {
            const double a = (std::sqrt(13.0) - 1.0) / 4.0; // ~0.6514
            const std::uint64_t base = index * 72;
            const double boosted = gamma_draw(rng, base, a + 1.0);
            const double g = boosted * std::pow(rng.uniform(base + 68), 1.0 / a);
            const double sign = rng.uniform(base + 69) < 0.5 ? -1.0 : 1.0;
            return sign * g / std::sqrt(a * (a + 1.0));
        }
    }
    throw std::invalid_argument("unit_draw: bad family");
}

} // namespace

MarginalFamily parse_family(const std::string& name) {
    if (name == "uniform") return MarginalFamily::Uniform;
    if (name == "normal") return MarginalFamily::Normal;
    if (name == "exponential-like" || name == "exponential") return MarginalFamily::ExponentialLike;
    throw std::invalid_argument("unknown marginal family '" + name + "'");
}

Dataset gen_unimodal(std::size_t n, std::size_t d, std::uint64_t seed) {
    if (n < 1 || d < 1) throw std::invalid_argument("gen_unimodal: n,d must be >= 1");
    Dataset ds = make_dataset(n, d, "unimodal");
    CounterRng rng(seed);
    for (std::size_t c = 0; c < d; ++c) {
        const CounterRng col = rng.substream(c);
        float* dst = ds.values.data() + c * n;
        for (std::size_t r = 0; r < n; ++r)
            dst[r] = static_cast<float>(normal_quantile(col.uniform(r)));
    }
    return ds;
}

Dataset gen_clust2(std::size_t n, std::size_t d, std::uint64_t seed) {
    if (n < 2 || d < 1) throw std::invalid_argument("gen_clust2: need n >= 2, d >= 1");
    Dataset ds = make_dataset(n, d, "clust2");
    const std::size_t n1 = n / 2;
    CounterRng rng(seed);
    for (std::size_t c = 0; c < d; ++c) {
        const CounterRng col = rng.substream(c);
        float* dst = ds.values.data() + c * n;
        for (std::size_t r = 0; r < n; ++r) {
            const double g = normal_quantile(col.uniform(r));
            dst[r] = static_cast<float>(r < n1 ? g : 4.0 + 0.5 * g);
        }
    }
    return randomize_rows(ds, seed ^ 0x636c32ULL);
}

MultimodalData gen_multimodal(std::size_t n, std::size_t d, std::uint64_t seed, double alpha) {
    if (n < 2 || d < 1) throw std::invalid_argument("gen_multimodal: need n >= 2, d >= 1");
    if (!(alpha > 0.0 && alpha < 1.0))
        throw std::invalid_argument("gen_multimodal: alpha must lie in (0,1)");
    MultimodalData md;
    md.data = make_dataset(n, d, "multimodal");
    const std::size_t n1 = n / 2;
    md.cluster_of.resize(n);
    for (std::size_t r = 0; r < n; ++r) md.cluster_of[r] = r < n1 ? 0 : 1;
    md.centers = {std::vector<double>(d, -1.0), std::vector<double>(d, 1.0)};

    CounterRng rng(seed);
    for (std::size_t c = 0; c < d; ++c) {
        const CounterRng col = rng.substream(c);
        float* dst = md.data.values.data() + c * n;
        for (std::size_t r = 0; r < n; ++r) {
            const double g = normal_quantile(col.uniform(r));
            dst[r] = static_cast<float>(r < n1 ? -1.0 + 0.1 * g : 1.0 + 1.0 * g);
        }
    }

    // Outliers: per cluster, the points farthest from the cluster center;
    // round(alpha n) in total, split evenly. Ties resolve by point index.
    const auto total = static_cast<std::size_t>(std::llround(alpha * static_cast<double>(n)));
    const std::size_t want0 = total / 2;
    const std::size_t want1 = total - want0;
    std::vector<double> dist2(n, 0.0);
    for (std::size_t c = 0; c < d; ++c) {
        const float* col = md.data.column(c);
        for (std::size_t r = 0; r < n; ++r) {
            const double t = col[r] - md.centers[md.cluster_of[r]][c];
            dist2[r] += t * t;
        }
    }
    md.data.labels.assign(n, 0);
    for (int cl = 0; cl < 2; ++cl) {
        std::vector<std::size_t> members;
        for (std::size_t r = 0; r < n; ++r)
            if (md.cluster_of[r] == cl) members.push_back(r);
        std::sort(members.begin(), members.end(), [&](std::size_t a, std::size_t b) {
            if (dist2[a] != dist2[b]) return dist2[a] > dist2[b];
            return a < b;
        });
        const std::size_t want = cl == 0 ? want0 : want1;
        for (std::size_t i = 0; i < std::min(want, members.size()); ++i)
            md.data.labels[members[i]] = 1;
    }
    return md;
}

Dataset make_artificial(const Dataset& ds, const std::vector<std::uint8_t>& cluster_of,
                        const std::vector<std::vector<double>>& centers, double factor) {
    ds.validate();
    if (!ds.has_labels()) throw std::invalid_argument("make_artificial: labels required");
    if (cluster_of.size() != ds.n)
        throw std::invalid_argument("make_artificial: cluster assignment size mismatch");
    Dataset out = ds;
    const double scale = 1.0 + factor;
    for (std::size_t r = 0; r < ds.n; ++r) {
        if (!ds.labels[r]) continue;
        const auto& c = centers.at(cluster_of[r]);
        for (std::size_t col = 0; col < ds.d; ++col) {
            const double v = ds.at(r, col);
            out.at(r, col) = static_cast<float>(c[col] + scale * (v - c[col]));
        }
    }
    return out;
}

std::pair<Dataset, std::vector<std::uint8_t>> gen_mixture(const MixtureSpec& spec) {
    if (spec.clusters.empty()) throw std::invalid_argument("gen_mixture: no clusters");
    if (spec.n < 1 || spec.d < 1) throw std::invalid_argument("gen_mixture: n,d must be >= 1");
    double total = 0;
    for (const auto& c : spec.clusters) {
        if (!(c.weight > 0.0)) throw std::invalid_argument("gen_mixture: weights must be > 0");
        if (!(c.stdev > 0.0)) throw std::invalid_argument("gen_mixture: stdevs must be > 0");
        if (c.mean.size() != 1 && c.mean.size() != spec.d)
            throw std::invalid_argument("gen_mixture: mean must be scalar or d-dimensional");
        total += c.weight;
    }
    if (std::fabs(total - 1.0) > 1e-9)
        throw std::invalid_argument("gen_mixture: weights must sum to 1");

    // Largest-remainder allocation of round(pi_i n) points per cluster.
    const std::size_t K = spec.clusters.size();
    std::vector<std::size_t> sizes(K);
    std::vector<std::pair<double, std::size_t>> rema(K);
    std::size_t assigned = 0;
    for (std::size_t i = 0; i < K; ++i) {
        const double exact = spec.clusters[i].weight * static_cast<double>(spec.n);
        sizes[i] = static_cast<std::size_t>(std::floor(exact));
        rema[i] = {exact - std::floor(exact), i};
        assigned += sizes[i];
    }
    std::sort(rema.begin(), rema.end(), [](const auto& a, const auto& b) {
        if (a.first != b.first) return a.first > b.first;
        return a.second < b.second;
    });
    for (std::size_t i = 0; assigned < spec.n; ++i, ++assigned) ++sizes[rema[i % K].second];

    Dataset ds = make_dataset(spec.n, spec.d, "mixture");
    std::vector<std::uint8_t> assignment(spec.n);
    CounterRng rng(spec.seed);
    std::size_t row0 = 0;
    for (std::size_t i = 0; i < K; ++i) {
        const auto& cl = spec.clusters[i];
        for (std::size_t r = 0; r < sizes[i]; ++r) assignment[row0 + r] = static_cast<std::uint8_t>(i);
        for (std::size_t c = 0; c < spec.d; ++c) {
            const CounterRng col = rng.substream(i * spec.d + c);
            const double mean = cl.mean.size() == 1 ? cl.mean[0] : cl.mean[c];
            float* dst = ds.values.data() + c * spec.n;
            for (std::size_t r = 0; r < sizes[i]; ++r)
                dst[row0 + r] = static_cast<float>(
                    mean + cl.stdev * unit_draw(cl.family, col, r));
        }
        row0 += sizes[i];
    }
    return {std::move(ds), std::move(assignment)};
}

} // namespace cfof
