#pragma once

#include <vector>

#include "osid/core.hpp"

namespace osid {

/// A two-parameter Weibull fitted to a distance tail.
struct WeibullFit {
    double shape = 0.0;       // kappa > 0
    double scale = 0.0;       // lambda > 0, in distance units
    int tail_size_used = 0;   // number of samples behind the fit
    bool tail_clamped = false;  // tail was shorter than the requested size
};

/// The low tail of a distance sample: the smallest values, ascending.
struct Tail {
    std::vector<double> values;
    bool clamped = false;  // fewer than tail_size values were available
};

/// Returns the `tail_size` smallest values of `distances` in ascending
/// order. When fewer values exist, all of them are returned and the clamp
/// flag is set. Requires tail_size >= 2 and a non-empty sample.
Tail extract_tail(const std::vector<double>& distances, int tail_size);

/// Lifts values below `floor` up to `floor`. Zero distances (duplicate
/// features across identities) would otherwise poison the log-likelihood.
std::vector<double> apply_distance_floor(std::vector<double> values,
                                         double floor = 1e-12);

/// Maximum-likelihood Weibull fit.
///
/// The shape is found with the profile-likelihood fixed point
///     kappa <- 1 / (A(kappa) - mean(log x)),
/// where A(kappa) is the x^kappa-weighted mean of log x, started from the
/// method-of-moments guess on log-data and safeguarded by bisection on the
/// (monotone) score function whenever an iterate leaves the root bracket.
/// Converges to |d kappa / kappa| < 1e-9 within 200 iterations; the scale
/// is then lambda = (sum x_i^kappa / n)^(1/kappa).
///
/// Requires at least 2 strictly positive values, not all equal.
WeibullFit fit_weibull_mle(const std::vector<double>& tail);

/// Weibull log-likelihood of `data` under the fit (diagnostic).
double weibull_log_likelihood(const WeibullFit& fit, const std::vector<double>& data);

/// Probability of inclusion: the Weibull survival function
/// exp(-(d / scale)^shape). Equals 1 at d = 0 and decreases strictly in d.
double psi(const WeibullFit& fit, double distance);

}  // namespace osid
