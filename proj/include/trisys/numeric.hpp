// SPDX-License-Identifier: Apache-2.0
//
// Small numerical toolkit shared by the data-generating process and the
// tests: normal and chi-square distribution functions, Gauss-Legendre rules,
// and a deterministic parallel-for.
#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace trisys::numeric {

double normal_cdf(double x);
double normal_pdf(double x);

/// CDF of the chi-square distribution with `dof` degrees of freedom.
double chi2_cdf(double x, double dof);

/// Density of the chi-square distribution; 0 for x < 0.
double chi2_pdf(double x, double dof);

/// Gauss-Legendre rule on [-1, 1].
struct GaussLegendre {
    std::vector<double> nodes;
    std::vector<double> weights;
};

/// Returns the n-point rule. Rules are computed once per n and cached.
const GaussLegendre& gauss_legendre(std::size_t n);

/// Integrates f over [a, b] with the n-point Gauss-Legendre rule.
template <typename F>
double integrate(F&& f, double a, double b, std::size_t n) {
    const GaussLegendre& rule = gauss_legendre(n);
    const double half = 0.5 * (b - a);
    const double mid = 0.5 * (b + a);
    double sum = 0.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
        sum += rule.weights[i] * f(mid + half * rule.nodes[i]);
    }
    return sum * half;
}

/// Number of worker threads: hardware concurrency, capped by the
/// TRISYS_THREADS environment variable when set.
unsigned worker_count();

/// Runs body(i) for i in [0, n). Each index is processed by exactly one
/// worker; results must be written to per-index slots, so output does not
/// depend on the thread count.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace trisys::numeric
