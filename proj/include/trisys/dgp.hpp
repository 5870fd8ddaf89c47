// SPDX-License-Identifier: Apache-2.0
//
// The simulation design used for the reference tables:
//
//   Y0 = rho * U + eps,   Y1 = Y0 + s * eta,   D = 1(Z >= U),
//   (U, eps) iid N(0, 1),  eta ~ chi2(k) independent,  Z on [-zbar, zbar].
//
// s = +1 is the design proper. s = -1 and rho > 0 exist only to build laws
// that violate the restrictions, for exercising the diagnostics.
#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "trisys/grid.hpp"
#include "trisys/sharp_bounds.hpp"

namespace trisys {

struct DgpSpec {
    double rho = -0.75;
    double z_half_width = 1.0;
    double dof = 2.0;
    int effect_sign = 1;
    /// Allows rho > 0 and effect_sign = -1.
    bool misspecified = false;
    GridPtr y_grid;
    GridPtr delta_grid;
    std::size_t z_grid_size = 41;
    std::size_t quadrature_nodes = 256;

    /// Defaults with the standard grids: y on [-6, 16] and delta on [-1, 16],
    /// both with step 0.05.
    static DgpSpec standard(double rho, double z_half_width, double dof = 2.0);

    /// Throws ConfigError on an invalid field.
    void validate() const;

    /// Instrument grid: z_grid_size equally spaced points on [-zbar, zbar]
    /// (the single point 0 when z_grid_size is 1).
    std::vector<double> z_points() const;
};

GridPtr standard_y_grid();
GridPtr standard_delta_grid();

struct DgpTruth {
    StepCdf f0;
    StepCdf f1;
    std::vector<YPair> pairs;
    std::vector<double> joint;
    StepCdf dte;
};

/// Conditional CDFs P(y | d, z) and p(z) = Phi(z) by Gauss-Legendre
/// quadrature over U. Throws NumericalError when a rerun with doubled node
/// counts moves any probe value by more than 1e-6 (relative).
ObservedLaw build_observed_law(const DgpSpec& spec);

/// True marginals, joint CDF at `pairs` and DTE.
DgpTruth build_truth(const DgpSpec& spec, std::span<const YPair> pairs);

struct MonteCarloResult {
    ObservedLaw law;
    DgpTruth truth;
};

/// Empirical law and truths from `draws` simulated units. Bitwise
/// reproducible for a fixed seed, independent of the thread count.
MonteCarloResult monte_carlo_law(const DgpSpec& spec, std::size_t draws, std::uint64_t seed,
                                 std::span<const YPair> pairs = {});

/// Label used for an instrument value in laws built from a DgpSpec.
std::string z_label(double z);

}  // namespace trisys
