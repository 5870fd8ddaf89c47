// SPDX-License-Identifier: Apache-2.0
//
// Brute-force checks used by the test suite and the `validate` command:
// truth containment, chain DP against enumeration, attainability of the
// Frechet-Hoeffding bounds by explicit couplings, and agreement between two
// observable laws.
#pragma once

#include <string>

#include "trisys/copula.hpp"
#include "trisys/dgp.hpp"
#include "trisys/sharp_bounds.hpp"

namespace trisys {

inline constexpr double kContainmentTolerance = 0.015;

struct OracleVerdict {
    std::string check;
    bool passed = false;
    /// Signed distance to the nearest (or most violated) boundary.
    double worst_margin = 0.0;
    std::string coordinates;
    double tolerance = 0.0;
};

/// Truth inside [lower - tol, upper + tol] everywhere. The marginal overload
/// picks f0 or f1 by the bound's target. Throws ConfigError on a grid or
/// pair-list mismatch.
OracleVerdict check_containment(const MarginalBound& bound, const DgpTruth& truth,
                                double tol = kContainmentTolerance);
OracleVerdict check_containment(const JointBound& bound, const DgpTruth& truth, double tol = kContainmentTolerance);
OracleVerdict check_containment(const DteBound& bound, const DgpTruth& truth, double tol = kContainmentTolerance);

/// kernel::chain_sup against kernel::chain_sup_enumerate with the marginals
/// as (A, B) = (F1, F0). Grids above 25 points throw ConfigError.
OracleVerdict exhaustive_chain_check(const MarginalPair& m, double delta);

/// Builds the comonotone and antitone couplings of the two marginals on the
/// grid (plus an atom at +infinity for any missing mass) and checks that they
/// attain the Frechet-Hoeffding bounds at (y0, y1) to 1e-9. Grids above 50
/// points throw ConfigError.
OracleVerdict discrete_copula_sharpness_probe(const MarginalPair& m, double y0, double y1);

/// Largest absolute difference in propensities and conditional CDFs; passes
/// when it is at most tol. Laws must share the outcome grid and labels.
OracleVerdict compare_laws(const ObservedLaw& reference, const ObservedLaw& other, double tol);

}  // namespace trisys
