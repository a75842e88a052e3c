#pragma once

#include <functional>
#include <vector>

#include "cfof/dataset.hpp"

namespace cfof {

// Standard normal cdf/quantile/pdf. The quantile is a rational approximation
// refined with one Halley step against the erfc-based cdf; both are accurate
// well past 1e-12 absolute.
double normal_cdf(double z);
double normal_pdf(double z);
double normal_quantile(double p);

// Averaged central moments and the two kurtosis estimators used to feed the
// closed-form score distribution: kappa_orig = E[mu4(X_i)] / E[mu2(X_i)^2],
// kappa_norm = E[kappa_{X_i}]. Population normalization throughout; column
// values are accumulated in sorted order, so estimates are invariant under
// any within-attribute permutation.
struct MomentSummary {
    double mu2 = 0;     // average second central moment
    double mu4 = 0;     // average fourth central moment
    double mu2_sq = 0;  // average squared second central moment
    double kappa_orig = 0;
    double kappa_norm = 0;
    std::vector<double> mean_vector;
};

MomentSummary estimate_moments(const Dataset& ds);

// Squared norm standard score of every point: standardized squared distance
// from the attribute-mean vector. Output has population mean 0 and stdev 1.
std::vector<double> z_scores(const Dataset& ds);

// Expected CFOF score of a point with squared norm standard score z under
// kurtosis kappa: Phi((z sqrt(k-1) + 2 PhiInv(rho)) / sqrt(k+3)). kappa = 1
// returns rho (the degenerate no-outlier limit).
double cfof_expected(double kappa, double rho, double z);

// cdf and pdf of the CFOF score for kappa > 1. The cdf saturates to 0/1
// outside (0,1).
double cfof_cdf(double s, double kappa, double rho);
double cfof_pdf(double s, double kappa, double rho);

// Expected k-occurrences n Phi((PhiInv(k/n) sqrt(mu4+3 mu2^2) - z sqrt(mu4-mu2^2)) / (2 mu2)).
double nk_expected(double z, double k_frac, double mu2, double mu4, double n);

// stdev of the top-alpha scores over the median score.
double concentration_ratio(const std::vector<double>& scores, double alpha);

// phi-weighted variability of a score curve over the tail [z0, inf):
// integral of (sc(z) - mu)^2 phi(z) dz with mu = integral of sc(z) phi(z) dz,
// evaluated by adaptive quadrature.
double tail_variability(const std::function<double(double)>& score_curve, double z0);

// sqrt of the ratio between the phi-weighted score variability of CFOF and of
// the normalized reverse-count curve, integrated over [z0, inf).
double separation(double kappa, double rho, double z0);

// Per-cluster outlier fractions alpha_i for a mixture of i.i.d. clusters:
// solves F(s*) = 1 - alpha on the mixture cdf
// F(s) = sum pi_i F(s/pi_i; rho/pi_i, kappa_i), then
// alpha_i = pi_i (1 - F(s*/pi_i; rho/pi_i, kappa_i)). Sum(alpha_i) = alpha.
std::vector<double> cluster_allocation(const std::vector<double>& pis,
                                       const std::vector<double>& kappas, double rho,
                                       double alpha);

} // namespace cfof
