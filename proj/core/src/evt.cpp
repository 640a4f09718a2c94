#include "osid/evt.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace osid {

Tail extract_tail(const std::vector<double>& distances, int tail_size) {
    if (tail_size < 2) {
        throw InvalidInputError("tail size must be at least 2, got " +
                                std::to_string(tail_size));
    }
    if (distances.empty()) {
        throw InvalidInputError("cannot extract a tail from an empty sample");
    }
    Tail tail;
    tail.values = distances;
    std::sort(tail.values.begin(), tail.values.end());
    if (tail.values.size() > static_cast<std::size_t>(tail_size)) {
        tail.values.resize(static_cast<std::size_t>(tail_size));
    } else {
        tail.clamped = tail.values.size() < static_cast<std::size_t>(tail_size);
    }
    return tail;
}

std::vector<double> apply_distance_floor(std::vector<double> values, double floor) {
    for (double& v : values) v = std::max(v, floor);
    return values;
}

namespace {

// Profile-likelihood quantities at a given shape. Weights are computed as
// exp(kappa * (log x_i - max log x)) so they never overflow.
struct ProfileScore {
    double weighted_mean_log;  // A(kappa)
    double score;              // A(kappa) - 1/kappa - mean(log x)
};

ProfileScore profile_score(const std::vector<double>& log_x, double max_log,
                           double mean_log, double kappa) {
    double sum_w = 0.0;
    double sum_wl = 0.0;
    for (double lx : log_x) {
        const double w = std::exp(kappa * (lx - max_log));
        sum_w += w;
        sum_wl += w * lx;
    }
    const double a = sum_wl / sum_w;
    return {a, a - 1.0 / kappa - mean_log};
}

}  // namespace

WeibullFit fit_weibull_mle(const std::vector<double>& tail) {
    const std::size_t n = tail.size();
    if (n < 2) {
        throw InvalidInputError("Weibull fit needs at least 2 samples, got " +
                                std::to_string(n));
    }
    std::vector<double> log_x(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (!(tail[i] > 0.0)) {
            throw InvalidInputError("Weibull fit requires strictly positive samples");
        }
        log_x[i] = std::log(tail[i]);
    }
    const auto [min_it, max_it] = std::minmax_element(tail.begin(), tail.end());
    if (*min_it == *max_it) {
        throw DataError("degenerate sample: all values equal, Weibull shape diverges");
    }

    const double max_log = *std::max_element(log_x.begin(), log_x.end());
    double mean_log = 0.0;
    for (double lx : log_x) mean_log += lx;
    mean_log /= static_cast<double>(n);

    // Method-of-moments start: Var(log X) = pi^2 / (6 kappa^2).
    double var_log = 0.0;
    for (double lx : log_x) var_log += (lx - mean_log) * (lx - mean_log);
    var_log /= static_cast<double>(n - 1);
    double kappa = std::clamp(std::numbers::pi / std::sqrt(6.0 * var_log), 1e-3, 1e3);

    // Bracket the root of the monotone increasing score function.
    double lo = kappa;
    double hi = kappa;
    constexpr int kMaxIterations = 200;
    int budget = kMaxIterations;
    if (profile_score(log_x, max_log, mean_log, lo).score > 0.0) {
        do {
            hi = lo;
            lo *= 0.5;
            if (--budget == 0) throw NumericError("Weibull fit: failed to bracket shape");
        } while (profile_score(log_x, max_log, mean_log, lo).score > 0.0);
    } else {
        do {
            lo = hi;
            hi *= 2.0;
            if (--budget == 0) throw NumericError("Weibull fit: failed to bracket shape");
        } while (profile_score(log_x, max_log, mean_log, hi).score < 0.0);
    }

    kappa = std::clamp(kappa, lo, hi);
    bool converged = false;
    double previous_step = 0.0;
    for (int iter = 0; iter < kMaxIterations; ++iter) {
        const ProfileScore ps = profile_score(log_x, max_log, mean_log, kappa);
        if (ps.score < 0.0) {
            lo = kappa;
        } else {
            hi = kappa;
        }
        if (hi - lo <= 1e-9 * hi) {  // root pinched to the target tolerance
            kappa = 0.5 * (lo + hi);
            converged = true;
            break;
        }
        double next = 1.0 / (ps.weighted_mean_log - mean_log);
        // Bisect when the proposal leaves the bracket or starts to
        // oscillate; the bracket then keeps shrinking geometrically.
        const bool outside = !(next > lo && next < hi);
        const bool oscillating = previous_step != 0.0 &&
                                 (next - kappa) * previous_step < 0.0;
        if (outside || oscillating) next = 0.5 * (lo + hi);
        previous_step = next - kappa;
        const double delta = std::abs(next - kappa) / next;
        kappa = next;
        if (delta < 1e-9) {
            converged = true;
            break;
        }
    }
    if (!converged) {
        std::ostringstream msg;
        msg << "Weibull fit did not converge after " << kMaxIterations
            << " iterations (n=" << n << ", kappa=" << kappa << ", bracket=[" << lo
            << ", " << hi << "])";
        throw NumericError(msg.str());
    }

    // lambda = (sum x^kappa / n)^(1/kappa), via logs for stability.
    double sum_w = 0.0;
    for (double lx : log_x) sum_w += std::exp(kappa * (lx - max_log));
    const double log_lambda =
        max_log + std::log(sum_w / static_cast<double>(n)) / kappa;

    WeibullFit fit;
    fit.shape = kappa;
    fit.scale = std::exp(log_lambda);
    fit.tail_size_used = static_cast<int>(n);
    return fit;
}

double weibull_log_likelihood(const WeibullFit& fit, const std::vector<double>& data) {
    const double k = fit.shape;
    const double lambda = fit.scale;
    double ll = 0.0;
    for (double x : data) {
        const double z = x / lambda;
        ll += std::log(k / lambda) + (k - 1.0) * std::log(z) - std::pow(z, k);
    }
    return ll;
}

double psi(const WeibullFit& fit, double distance) {
    if (distance < 0.0) {
        throw InvalidInputError("probability of inclusion needs a nonnegative distance");
    }
    return std::exp(-std::pow(distance / fit.scale, fit.shape));
}

}  // namespace osid
