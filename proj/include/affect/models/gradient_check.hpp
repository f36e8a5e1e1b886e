#pragma once

#include <cmath>
#include <vector>

#include "affect/linalg.hpp"

namespace affect {

// Central-difference gradient audit: perturbs every entry of theta by +/-eps,
// compares (f(t+eps) - f(t-eps)) / 2eps against the analytic gradient and
// returns the maximum relative error, where
//   rel = |a - n| / max(|a| + |n|, 1e-6).
// Run in 64-bit arithmetic; float rounding swamps the signal.
template <typename T, typename LossFn>
double gradient_check(std::vector<T>& theta, std::span<const T> analytic_grad, LossFn loss,
                      double eps = 1e-5) {
    double max_rel = 0.0;
    for (std::size_t i = 0; i < theta.size(); ++i) {
        const T saved = theta[i];
        theta[i] = saved + static_cast<T>(eps);
        const double up = static_cast<double>(loss());
        theta[i] = saved - static_cast<T>(eps);
        const double down = static_cast<double>(loss());
        theta[i] = saved;
        const double numeric = (up - down) / (2.0 * eps);
        const double analytic = static_cast<double>(analytic_grad[i]);
        const double denom = std::max(std::abs(analytic) + std::abs(numeric), 1e-6);
        max_rel = std::max(max_rel, std::abs(analytic - numeric) / denom);
    }
    return max_rel;
}

} // namespace affect
