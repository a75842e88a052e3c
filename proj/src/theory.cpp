#include "cfof/theory.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <limits>
#include <stdexcept>

namespace cfof {

namespace {
constexpr double kSqrt2 = 1.4142135623730951;
constexpr double kSqrt2Pi = 2.5066282746310002;
} // namespace

double normal_cdf(double z) { return 0.5 * std::erfc(-z / kSqrt2); }

double normal_pdf(double z) { return std::exp(-0.5 * z * z) / kSqrt2Pi; }

double normal_quantile(double p) {
    if (!(p > 0.0 && p < 1.0)) {
        if (p == 0.0) return -std::numeric_limits<double>::infinity();
        if (p == 1.0) return std::numeric_limits<double>::infinity();
        throw std::domain_error("normal_quantile: p must lie in [0,1]");
    }
    // Acklam's rational approximation (~1e-9), then one Halley refinement.
    static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                               -2.759285104469687e+02, 1.383577518672690e+02,
                               -3.066479806614716e+01, 2.506628277459239e+00};
    static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                               -1.556989798598866e+02, 6.680131188771972e+01,
                               -1.328068155288572e+01};
    static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                               -2.400758277161838e+00, -2.549732539343734e+00,
                               4.374664141464968e+00,  2.938163982698783e+00};
    static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                               2.445134137142996e+00, 3.754408661907416e+00};
    const double plow = 0.02425;
    double x;
    if (p < plow) {
        const double q = std::sqrt(-2.0 * std::log(p));
        x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    } else if (p <= 1.0 - plow) {
        const double q = p - 0.5, r = q * q;
        x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
            (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
    } else {
        const double q = std::sqrt(-2.0 * std::log1p(-p));
        x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }
    const double e = normal_cdf(x) - p;
    const double u = e * kSqrt2Pi * std::exp(0.5 * x * x);
    x -= u / (1.0 + 0.5 * x * u);
    return x;
}

MomentSummary estimate_moments(const Dataset& ds) {
    ds.validate();
    if (ds.n < 4) throw std::invalid_argument("estimate_moments: need n >= 4");
    MomentSummary m;
    m.mean_vector.resize(ds.d);
    double sum_m2 = 0, sum_m4 = 0, sum_m2sq = 0, sum_kurt = 0;
    std::size_t kurt_terms = 0;
    std::vector<double> col(ds.n);
    for (std::size_t c = 0; c < ds.d; ++c) {
        const float* src = ds.column(c);
        for (std::size_t r = 0; r < ds.n; ++r) col[r] = src[r];
        std::sort(col.begin(), col.end());
        double sum = 0;
        for (double v : col) sum += v;
        const double mean = sum / static_cast<double>(ds.n);
        m.mean_vector[c] = mean;
        double m2 = 0, m4 = 0;
        for (double v : col) {
            const double t = v - mean;
            const double t2 = t * t;
            m2 += t2;
            m4 += t2 * t2;
        }
        m2 /= static_cast<double>(ds.n);
        m4 /= static_cast<double>(ds.n);
        sum_m2 += m2;
        sum_m4 += m4;
        sum_m2sq += m2 * m2;
        if (m2 > 0.0) {
            sum_kurt += m4 / (m2 * m2);
            ++kurt_terms;
        } else {
            std::cerr << "estimate_moments: attribute " << c
                      << " has null variance, excluded from kappa_norm\n";
        }
    }
    const double d = static_cast<double>(ds.d);
    m.mu2 = sum_m2 / d;
    m.mu4 = sum_m4 / d;
    m.mu2_sq = sum_m2sq / d;
    if (m.mu2_sq <= 0.0) throw std::runtime_error("estimate_moments: degenerate data");
    m.kappa_orig = m.mu4 / m.mu2_sq;
    if (kurt_terms == 0) throw std::runtime_error("estimate_moments: all attributes constant");
    m.kappa_norm = sum_kurt / static_cast<double>(kurt_terms);
    return m;
}

std::vector<double> z_scores(const Dataset& ds) {
    ds.validate();
    if (ds.n < 2) throw std::invalid_argument("z_scores: need n >= 2");
    std::vector<double> mean(ds.d, 0.0);
    for (std::size_t c = 0; c < ds.d; ++c) {
        const float* col = ds.column(c);
        double sum = 0;
        for (std::size_t r = 0; r < ds.n; ++r) sum += col[r];
        mean[c] = sum / static_cast<double>(ds.n);
    }
    std::vector<double> sq(ds.n, 0.0);
    for (std::size_t c = 0; c < ds.d; ++c) {
        const float* col = ds.column(c);
        const double mu = mean[c];
        for (std::size_t r = 0; r < ds.n; ++r) {
            const double t = col[r] - mu;
            sq[r] += t * t;
        }
    }
    double sum = 0;
    for (double v : sq) sum += v;
    const double mu_sq = sum / static_cast<double>(ds.n);
    double var = 0;
    for (double v : sq) {
        const double t = v - mu_sq;
        var += t * t;
    }
    var /= static_cast<double>(ds.n);
    if (var <= 0.0) throw std::runtime_error("z_scores: all points at equal squared norm");
    const double sd = std::sqrt(var);
    std::vector<double> z(ds.n);
    for (std::size_t r = 0; r < ds.n; ++r) z[r] = (sq[r] - mu_sq) / sd;
    return z;
}

double cfof_expected(double kappa, double rho, double z) {
    if (!(rho > 0.0 && rho < 1.0))
        throw std::domain_error("cfof_expected: rho must lie in (0,1)");
    if (kappa < 1.0) throw std::domain_error("cfof_expected: kappa must be >= 1");
    if (kappa == 1.0) return rho;
    return normal_cdf((z * std::sqrt(kappa - 1.0) + 2.0 * normal_quantile(rho)) /
                      std::sqrt(kappa + 3.0));
}

double cfof_cdf(double s, double kappa, double rho) {
    if (!(rho > 0.0 && rho < 1.0)) throw std::domain_error("cfof_cdf: rho must lie in (0,1)");
    if (!(kappa > 1.0)) throw std::domain_error("cfof_cdf: kappa must exceed 1");
    if (s <= 0.0) return 0.0;
    if (s >= 1.0) return 1.0;
    return normal_cdf((normal_quantile(s) * std::sqrt(kappa + 3.0) -
                       2.0 * normal_quantile(rho)) /
                      std::sqrt(kappa - 1.0));
}

double cfof_pdf(double s, double kappa, double rho) {
    if (!(rho > 0.0 && rho < 1.0)) throw std::domain_error("cfof_pdf: rho must lie in (0,1)");
    if (!(kappa > 1.0)) throw std::domain_error("cfof_pdf: kappa must exceed 1");
    if (s <= 0.0 || s >= 1.0) return 0.0;
    const double ratio = std::sqrt((kappa + 3.0) / (kappa - 1.0));
    const double q = normal_quantile(s);
    return ratio / normal_pdf(q) *
           normal_pdf((q * std::sqrt(kappa + 3.0) - 2.0 * normal_quantile(rho)) /
                      std::sqrt(kappa - 1.0));
}

double nk_expected(double z, double k_frac, double mu2, double mu4, double n) {
    if (!(k_frac > 0.0 && k_frac < 1.0))
        throw std::domain_error("nk_expected: k/n must lie in (0,1)");
    if (!(mu2 > 0.0)) throw std::domain_error("nk_expected: mu2 must be positive");
    if (mu4 < mu2 * mu2) throw std::domain_error("nk_expected: mu4 must be >= mu2^2");
    return n * normal_cdf((normal_quantile(k_frac) * std::sqrt(mu4 + 3.0 * mu2 * mu2) -
                           z * std::sqrt(mu4 - mu2 * mu2)) /
                          (2.0 * mu2));
}

double concentration_ratio(const std::vector<double>& scores, double alpha) {
    if (scores.empty()) throw std::invalid_argument("concentration_ratio: empty scores");
    if (!(alpha > 0.0 && alpha < 1.0))
        throw std::invalid_argument("concentration_ratio: alpha must lie in (0,1)");
    std::vector<double> sorted(scores);
    std::sort(sorted.begin(), sorted.end());
    const std::size_t n = sorted.size();
    const auto m = static_cast<std::size_t>(
        std::min<double>(static_cast<double>(n), std::ceil(alpha * static_cast<double>(n))));
    double mean = 0;
    for (std::size_t i = n - m; i < n; ++i) mean += sorted[i];
    mean /= static_cast<double>(m);
    double var = 0;
    for (std::size_t i = n - m; i < n; ++i) {
        const double t = sorted[i] - mean;
        var += t * t;
    }
    var /= static_cast<double>(m); // population stdev
    const double median = (n % 2 == 1) ? sorted[n / 2]
                                       : 0.5 * (sorted[n / 2 - 1] + sorted[n / 2]);
    if (median == 0.0) {
        std::cerr << "concentration_ratio: zero median score\n";
        return std::numeric_limits<double>::infinity();
    }
    return std::sqrt(var) / median;
}

namespace {

template <typename F>
double adaptive_simpson(const F& f, double a, double b, double fa, double fm, double fb,
                        double whole, double tol, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = f(lm), frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;
    if (depth <= 0 || std::fabs(delta) <= 15.0 * tol)
        return left + right + delta / 15.0;
    return adaptive_simpson(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           adaptive_simpson(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

template <typename F>
double integrate(const F& f, double a, double b, double tol) {
    const double m = 0.5 * (a + b);
    const double fa = f(a), fm = f(m), fb = f(b);
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return adaptive_simpson(f, a, b, fa, fm, fb, whole, tol, 48);
}

} // namespace

double tail_variability(const std::function<double(double)>& score_curve, double z0) {
    const double zhi = z0 + 14.0; // phi mass beyond is < 1e-43
    const double tol = 1e-9;
    // conditional on the tail, so a constant score curve has zero variability
    const double mass = 1.0 - normal_cdf(z0);
    const double mu =
        integrate([&](double z) { return score_curve(z) * normal_pdf(z); }, z0, zhi, tol) /
        mass;
    return integrate(
               [&](double z) {
                   const double t = score_curve(z) - mu;
                   return t * t * normal_pdf(z);
               },
               z0, zhi, tol) /
           mass;
}

double separation(double kappa, double rho, double z0) {
    if (!(kappa > 1.0)) throw std::domain_error("separation: kappa must exceed 1");
    if (!(rho > 0.0 && rho < 1.0)) throw std::domain_error("separation: rho must lie in (0,1)");

    const double var_cfof =
        tail_variability([&](double z) { return cfof_expected(kappa, rho, z); }, z0);
    // expected reverse-count curve over n, in kurtosis terms (mu2 = 1)
    const double var_odin = tail_variability(
        [&](double z) {
            return normal_cdf((normal_quantile(rho) * std::sqrt(kappa + 3.0) -
                               z * std::sqrt(kappa - 1.0)) /
                              2.0);
        },
        z0);
    if (!(var_odin > 0.0)) throw std::runtime_error("separation: degenerate reference curve");
    return std::sqrt(var_cfof / var_odin);
}

std::vector<double> cluster_allocation(const std::vector<double>& pis,
                                       const std::vector<double>& kappas, double rho,
                                       double alpha) {
    if (pis.empty() || pis.size() != kappas.size())
        throw std::invalid_argument("cluster_allocation: weight/kurtosis arity mismatch");
    double total = 0;
    double min_pi = 1.0;
    for (double p : pis) {
        if (!(p > 0.0)) throw std::invalid_argument("cluster_allocation: weights must be > 0");
        total += p;
        min_pi = std::min(min_pi, p);
    }
    if (std::fabs(total - 1.0) > 1e-9)
        throw std::invalid_argument("cluster_allocation: weights must sum to 1");
    if (!(rho > 0.0 && rho < min_pi))
        throw std::invalid_argument("cluster_allocation: need 0 < rho < min weight");
    for (double k : kappas)
        if (!(k > 1.0)) throw std::invalid_argument("cluster_allocation: kurtoses must exceed 1");
    if (!(alpha > 0.0 && alpha < 1.0))
        throw std::invalid_argument("cluster_allocation: alpha must lie in (0,1)");

    auto mixture_cdf = [&](double s) {
        double acc = 0;
        for (std::size_t i = 0; i < pis.size(); ++i)
            acc += pis[i] * cfof_cdf(s / pis[i], kappas[i], rho / pis[i]);
        return acc;
    };

    const double target = 1.0 - alpha;
    double lo = 1e-15, hi = 1.0 - 1e-15;
    if (mixture_cdf(lo) > target || mixture_cdf(hi) < target)
        throw std::runtime_error("cluster_allocation: no score threshold in (0,1)");
    for (int it = 0; it < 200 && hi - lo > 1e-13; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mixture_cdf(mid) < target)
            lo = mid;
        else
            hi = mid;
    }
    const double s_star = 0.5 * (lo + hi);

    std::vector<double> out(pis.size());
    for (std::size_t i = 0; i < pis.size(); ++i)
        out[i] = pis[i] * (1.0 - cfof_cdf(s_star / pis[i], kappas[i], rho / pis[i]));
    return out;
}

} // namespace cfof
