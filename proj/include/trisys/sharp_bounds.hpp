// SPDX-License-Identifier: Apache-2.0
//
// Population bounds on F0, F1, the joint CDF F(y0, y1) and the DTE under each
// restriction regime. Each z contributes a bound built from its observed
// sub-distributions and counterfactual bands; the bounds are intersected over
// the instrument grid (sup of lowers, inf of uppers).
#pragma once

#include <cstddef>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include "trisys/copula.hpp"
#include "trisys/counterfactual.hpp"
#include "trisys/grid.hpp"

namespace trisys {

enum class Target { F0, F1, Joint, Dte };

std::string_view to_string(Target target);

/// Margin by which the propensity must stay inside (0, 1) for regimes that
/// impose conditional positive quadrant dependence.
inline constexpr double kCpqdMargin = 1e-6;

struct MarginalBound {
    Target target = Target::F0;
    Regime regime = Regime::Worst;
    GridPtr grid;
    std::vector<double> lower;
    std::vector<double> upper;
};

using YPair = std::pair<double, double>;

struct JointBound {
    Regime regime = Regime::Worst;
    std::vector<YPair> pairs;
    std::vector<double> lower;
    std::vector<double> upper;
};

struct QuantileBound {
    Target target = Target::F0;
    double q = 0.5;
    /// Either end may be +infinity when the corresponding CDF bound never
    /// reaches q on its grid.
    double lower = 0.0;
    double upper = 0.0;
};

/// Throws ConfigError when `regime` imposes CPQD and the propensity range
/// is not inside [kCpqdMargin, 1 - kCpqdMargin].
void check_regime_preconditions(const ObservedLaw& law, Regime regime);

/// target must be F0 or F1.
MarginalBound marginal_bounds(const ObservedLaw& law, Regime regime, Target target);

JointBound joint_bounds(const ObservedLaw& law, Regime regime, std::span<const YPair> pairs);

/// `domain` selects how the per-arm kernels treat arguments past the ends of
/// the outcome grid.
DteBound dte_bounds(const ObservedLaw& law, Regime regime, const GridPtr& delta_grid,
                    KernelDomain domain = KernelDomain::Extended);

/// [inf{y : upper(y) >= q}, inf{y : lower(y) >= q}] on the bound's grid.
QuantileBound quantile_bounds(const MarginalBound& bound, double q);
QuantileBound quantile_bounds(const DteBound& bound, double q);

}  // namespace trisys
