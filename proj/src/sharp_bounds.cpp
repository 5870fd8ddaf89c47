// SPDX-License-Identifier: Apache-2.0
#include "trisys/sharp_bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "trisys/errors.hpp"
#include "trisys/numeric.hpp"

namespace trisys {

std::string_view to_string(Target target) {
    switch (target) {
        case Target::F0: return "F0";
        case Target::F1: return "F1";
        case Target::Joint: return "JOINT";
        case Target::Dte: return "DTE";
    }
    return "?";
}

namespace {

constexpr double kQuantileSlack = 1e-12;

// Everything one instrument value contributes.
struct ZSlice {
    double p = 0.0;
    std::vector<double> s0;  // P(y, 0 | z)
    std::vector<double> s1;  // P(y, 1 | z)
    RegimeBands bands;
};

std::vector<ZSlice> build_slices(const ObservedLaw& law, Regime regime) {
    check_regime_preconditions(law, regime);
    std::vector<ZSlice> slices(law.z_count());
    numeric::parallel_for(law.z_count(), [&](std::size_t zi) {
        slices[zi] = ZSlice{law.propensity(zi), observed_subdist(law, 0, zi), observed_subdist(law, 1, zi),
                            regime_bands(law, regime, zi)};
    });
    return slices;
}

double at(const ValueGrid& grid, const std::vector<double>& v, double y) {
    const std::ptrdiff_t i = grid.floor_index(y);
    return i < 0 ? 0.0 : v[static_cast<std::size_t>(i)];
}

MarginalBound assemble_marginal(const ObservedLaw& law, Regime regime, Target target,
                                const std::vector<ZSlice>& slices) {
    const std::size_t n = law.y_grid().size();
    std::vector<double> lo(n, -std::numeric_limits<double>::infinity());
    std::vector<double> hi(n, std::numeric_limits<double>::infinity());
    for (const ZSlice& s : slices) {
        const std::vector<double>& obs = target == Target::F0 ? s.s0 : s.s1;
        const std::vector<double>& l = target == Target::F0 ? s.bands.l01 : s.bands.l10;
        const std::vector<double>& u = target == Target::F0 ? s.bands.u01 : s.bands.u10;
        for (std::size_t i = 0; i < n; ++i) {
            lo[i] = std::max(lo[i], obs[i] + l[i]);
            hi[i] = std::min(hi[i], obs[i] + u[i]);
        }
    }
    MarginalBound out;
    out.target = target;
    out.regime = regime;
    out.grid = law.y_grid_ptr();
    out.lower = monotone_envelope(lo, EnvelopeDirection::Lower);
    out.upper = monotone_envelope(hi, EnvelopeDirection::Upper);
    return out;
}

// Sup over y in [y0, y1] of f(y) for a step function given pointwise on the
// grid: the value at y0 and at every grid point in (y0, y1].
template <typename F>
double window_sup(const ValueGrid& grid, double y0, double y1, F f) {
    const std::ptrdiff_t start = grid.floor_index(y0);
    double best = f(start);
    for (std::size_t i = static_cast<std::size_t>(start + 1); i < grid.size(); ++i) {
        if (grid[i] > y1 + 1e-9 * grid.step()) break;
        best = std::max(best, f(static_cast<std::ptrdiff_t>(i)));
    }
    return best;
}

Interval joint_at_z(const ValueGrid& grid, Regime regime, const ZSlice& s, double y0, double y1) {
    const double p = s.p;
    const double s0y0 = at(grid, s.s0, y0);
    const double s1y1 = at(grid, s.s1, y1);
    const double l01y0 = at(grid, s.bands.l01, y0);
    const double u01y0 = at(grid, s.bands.u01, y0);
    const double l10y1 = at(grid, s.bands.l10, y1);
    const double u10y1 = at(grid, s.bands.u10, y1);

    // D = 0 arm: Y0 observed with mass 1 - p, Y1 counterfactual.
    // D = 1 arm: Y1 observed with mass p, Y0 counterfactual.
    double arm0_lo = std::max(s0y0 + l10y1 - (1.0 - p), 0.0);
    double arm1_lo = std::max(l01y0 + s1y1 - p, 0.0);
    const double arm0_hi = std::min(s0y0, u10y1);
    const double arm1_hi = std::min(u01y0, s1y1);

    if (imposes_cpqd(regime)) {
        const double c0y0 = p < 1.0 ? s0y0 / (1.0 - p) : 0.0;
        const double c1y1 = p > 0.0 ? s1y1 / p : 0.0;
        arm0_lo = std::max(arm0_lo, c0y0 * l10y1);
        arm1_lo = std::max(arm1_lo, l01y0 * c1y1);
    } else if (imposes_mtr(regime)) {
        const auto value = [](const std::vector<double>& v, std::ptrdiff_t i) {
            return i < 0 ? 0.0 : v[static_cast<std::size_t>(i)];
        };
        const double sup0 = window_sup(grid, y0, y1, [&](std::ptrdiff_t i) {
            return s0y0 - value(s.s0, i) + value(s.bands.l10, i);
        });
        const double sup1 = window_sup(grid, y0, y1, [&](std::ptrdiff_t i) {
            return l01y0 - value(s.bands.u01, i) + value(s.s1, i);
        });
        arm0_lo = std::max(arm0_lo, std::max(sup0, 0.0));
        arm1_lo = std::max(arm1_lo, std::max(sup1, 0.0));
    }
    return {arm0_lo + arm1_lo, arm0_hi + arm1_hi};
}

}  // namespace

void check_regime_preconditions(const ObservedLaw& law, Regime regime) {
    if (!imposes_cpqd(regime)) return;
    if (law.p_low() < kCpqdMargin || law.p_bar() > 1.0 - kCpqdMargin) {
        std::ostringstream msg;
        msg << to_string(regime) << " needs the propensity bounded away from 0 and 1 (margin " << kCpqdMargin
            << "); got p_low = " << law.p_low() << ", p_bar = " << law.p_bar();
        throw ConfigError(msg.str());
    }
}

MarginalBound marginal_bounds(const ObservedLaw& law, Regime regime, Target target) {
    if (target != Target::F0 && target != Target::F1) throw ConfigError("marginal_bounds target must be F0 or F1");
    return assemble_marginal(law, regime, target, build_slices(law, regime));
}

JointBound joint_bounds(const ObservedLaw& law, Regime regime, std::span<const YPair> pairs) {
    const std::vector<ZSlice> slices = build_slices(law, regime);
    const ValueGrid& grid = law.y_grid();
    JointBound out;
    out.regime = regime;
    out.pairs.assign(pairs.begin(), pairs.end());
    out.lower.assign(pairs.size(), 0.0);
    out.upper.assign(pairs.size(), 1.0);

    MarginalBound f1;
    if (imposes_mtr(regime)) f1 = assemble_marginal(law, regime, Target::F1, slices);

    numeric::parallel_for(pairs.size(), [&](std::size_t k) {
        const auto [y0, y1] = pairs[k];
        if (imposes_mtr(regime) && y0 >= y1) {
            out.lower[k] = at(grid, f1.lower, y1);
            out.upper[k] = at(grid, f1.upper, y1);
            return;
        }
        double lo = -std::numeric_limits<double>::infinity();
        double hi = std::numeric_limits<double>::infinity();
        for (const ZSlice& s : slices) {
            const Interval iv = joint_at_z(grid, regime, s, y0, y1);
            lo = std::max(lo, iv.lower);
            hi = std::min(hi, iv.upper);
        }
        out.lower[k] = std::clamp(lo, 0.0, 1.0);
        out.upper[k] = std::clamp(hi, 0.0, 1.0);
    });
    return out;
}

DteBound dte_bounds(const ObservedLaw& law, Regime regime, const GridPtr& delta_grid, KernelDomain domain) {
    if (!delta_grid) throw ConfigError("dte_bounds needs a delta grid");
    const std::vector<ZSlice> slices = build_slices(law, regime);
    const ValueGrid& grid = law.y_grid();
    const bool mtr = imposes_mtr(regime);
    DteBound out;
    out.delta_grid = delta_grid;
    const std::size_t nd = delta_grid->size();
    out.raw_lower.assign(nd, 0.0);
    out.raw_upper.assign(nd, 0.0);

    numeric::parallel_for(nd, [&](std::size_t k) {
        const double d = (*delta_grid)[k];
        if (mtr && d < 0.0) return;
        double lo = -std::numeric_limits<double>::infinity();
        double hi = std::numeric_limits<double>::infinity();
        for (const ZSlice& s : slices) {
            double arm1_lo = 0.0;
            double arm0_lo = 0.0;
            if (mtr) {
                arm1_lo = kernel::chain_sup(grid, s.s1, s.bands.u01, d, domain);
                arm0_lo = kernel::chain_sup(grid, s.bands.l10, s.s0, d, domain);
            } else {
                arm1_lo = kernel::makarov_sup(grid, s.s1, s.bands.u01, d, domain);
                arm0_lo = kernel::makarov_sup(grid, s.bands.l10, s.s0, d, domain);
            }
            const double arm1_hi = kernel::makarov_inf(grid, s.s1, s.bands.l01, d, domain);
            const double arm0_hi = kernel::makarov_inf(grid, s.bands.u10, s.s0, d, domain);
            lo = std::max(lo, arm1_lo + arm0_lo);
            hi = std::min(hi, 1.0 + arm1_hi + arm0_hi);
        }
        out.raw_lower[k] = lo;
        out.raw_upper[k] = hi;
    });
    out.lower = monotone_envelope(out.raw_lower, EnvelopeDirection::Lower);
    out.upper = monotone_envelope(out.raw_upper, EnvelopeDirection::Upper);
    return out;
}

namespace {

QuantileBound invert(Target target, const ValueGrid& grid, std::span<const double> lower,
                     std::span<const double> upper, double q) {
    if (!(q > 0.0 && q < 1.0)) throw ConfigError("quantile level must lie in (0, 1)");
    const double inf = std::numeric_limits<double>::infinity();
    const auto first_reaching = [&](std::span<const double> cdf) {
        for (std::size_t i = 0; i < cdf.size(); ++i) {
            if (cdf[i] >= q - kQuantileSlack) return grid[i];
        }
        return inf;
    };
    return {target, q, first_reaching(upper), first_reaching(lower)};
}

}  // namespace

QuantileBound quantile_bounds(const MarginalBound& bound, double q) {
    return invert(bound.target, *bound.grid, bound.lower, bound.upper, q);
}

QuantileBound quantile_bounds(const DteBound& bound, double q) {
    return invert(Target::Dte, *bound.delta_grid, bound.lower, bound.upper, q);
}

}  // namespace trisys
