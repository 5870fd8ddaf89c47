// SPDX-License-Identifier: Apache-2.0
//
// Fixed-marginal machinery: Frechet-Hoeffding, Makarov, point-constrained
// copula bounds, joint and DTE bounds under monotone treatment response, and
// the Williamson-Downs form of the Makarov bounds.
//
// The kernels in `kernel::` work on arbitrary nondecreasing step functions
// sharing one grid, so they apply both to full CDFs and to the
// sub-distribution bands of one treatment arm. Under KernelDomain::Extended
// the functions are 0 below the grid and keep their last value above it;
// under KernelDomain::GridOnly every argument must stay inside the grid.
#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "trisys/grid.hpp"

namespace trisys {

struct Interval {
    double lower = 0.0;
    double upper = 0.0;
};

/// Marginal CDFs of Y0 and Y1 on a shared grid.
struct MarginalPair {
    MarginalPair(StepCdf f0, StepCdf f1);
    StepCdf f0;
    StepCdf f1;
};

/// Bounds on the DTE F_delta(d) = P(Y1 - Y0 <= d) over a delta grid.
/// `lower` / `upper` are enveloped and clamped; `raw_lower` / `raw_upper`
/// are the values before either step.
struct DteBound {
    GridPtr delta_grid;
    std::vector<double> lower;
    std::vector<double> upper;
    std::vector<double> raw_lower;
    std::vector<double> raw_upper;
};

Interval frechet_hoeffding(const MarginalPair& m, double y0, double y1);

/// Makarov bounds on the DTE at every point of `delta_grid`.
DteBound makarov_dte(const MarginalPair& m, const GridPtr& delta_grid);

/// Bounds on F(y0, y1) given F(a0, a1) = theta. Throws ConfigError when
/// theta is outside the Frechet-Hoeffding interval at (a0, a1).
Interval nelsen_constrained(const MarginalPair& m, double a0, double a1, double theta, double y0, double y1);

struct MtrJoint {
    Interval bounds;
    /// F1(y) > F0(y) somewhere on the grid, so the marginals are not
    /// compatible with monotone treatment response.
    bool dominance_violated = false;
};

/// Joint CDF bounds when P(Y1 >= Y0) = 1.
MtrJoint mtr_joint_bounds(const MarginalPair& m, double y0, double y1);

/// Sharp lower bound on the DTE at `delta` when P(Y1 >= Y0) = 1.
double mtr_dte_lower(const MarginalPair& m, double delta);

struct DualityReport {
    std::vector<double> lower_gap;
    std::vector<double> upper_gap;
    double max_discrepancy = 0.0;
    bool passed = false;
};

/// Recomputes the Makarov bounds as sup/inf over x + y = delta of the lower
/// Frechet copula and its dual, with X = Y1 and Y = -Y0, and compares them to
/// makarov_dte. Passes when every gap is below 1e-9.
DualityReport williamson_downs_check(const MarginalPair& m, const GridPtr& delta_grid);

enum class KernelDomain {
    /// sup/inf over the real line, extrapolating past the grid ends.
    Extended,
    /// sup/inf restricted to arguments inside [grid.front(), grid.back()].
    GridOnly,
};

namespace kernel {

/// sup_y max(A(y) - B(y - delta), 0).
double makarov_sup(const ValueGrid& grid, std::span<const double> a, std::span<const double> b, double delta,
                   KernelDomain domain = KernelDomain::Extended);

/// inf_y min(A(y) - B(y - delta), 0).
double makarov_inf(const ValueGrid& grid, std::span<const double> a, std::span<const double> b, double delta,
                   KernelDomain domain = KernelDomain::Extended);

/// sup over chains ... <= c_k <= c_{k+1} <= ... with c_{k+1} - c_k <= delta of
/// sum_k max(A(c_{k+1}) - B(c_k), 0). Chains are strictly increasing except
/// for at most one repeated point, so that delta = 0 gives
/// sup_y max(A(y) - B(y), 0). Returns 0 for delta < 0.
///
/// Linear-time dynamic program over the grid, padded by one point on each
/// side under KernelDomain::Extended.
double chain_sup(const ValueGrid& grid, std::span<const double> a, std::span<const double> b, double delta,
                 KernelDomain domain = KernelDomain::Extended);

/// Exhaustive enumeration of the same chain set; exponential in the grid
/// size, intended for grids of at most ~25 points.
double chain_sup_enumerate(const ValueGrid& grid, std::span<const double> a, std::span<const double> b,
                           double delta, KernelDomain domain = KernelDomain::Extended);

}  // namespace kernel

}  // namespace trisys
