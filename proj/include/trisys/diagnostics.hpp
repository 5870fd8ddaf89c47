// SPDX-License-Identifier: Apache-2.0
//
// Testable implications of the restrictions, checked on population
// quantities: the NSM inequalities across instrument values, stochastic
// dominance implied by MTR, and crossing of the DTE bounds.
#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "trisys/copula.hpp"
#include "trisys/grid.hpp"
#include "trisys/sharp_bounds.hpp"

namespace trisys {

enum class DiagnosticTest { NsmInequality, MtrDominance, DteCrossing };

std::string_view to_string(DiagnosticTest test);

inline constexpr double kDefaultDiagnosticTolerance = 0.01;

struct DiagnosticViolation {
    /// Human-readable coordinates, e.g. "d=1 z=0.5 z'=1 y=0.25".
    std::string where;
    double y = 0.0;
    double magnitude = 0.0;
};

struct DiagnosticReport {
    DiagnosticTest test = DiagnosticTest::NsmInequality;
    double tolerance = kDefaultDiagnosticTolerance;
    std::vector<DiagnosticViolation> violations;
    /// Largest excess over zero seen anywhere, flagged or not.
    double max_violation = 0.0;

    bool passed() const { return violations.empty(); }
};

/// For every pair with p(z') >= p(z): P(y | d, z) <= P(y | d, z') for d = 0, 1.
DiagnosticReport test_nsm(const ObservedLaw& law, double tol = kDefaultDiagnosticTolerance);

/// Flags y with F1 lower bound > F0 upper bound + tol. Throws ConfigError when
/// the bounds live on different grids.
DiagnosticReport test_mtr_dominance(const MarginalBound& bound0, const MarginalBound& bound1,
                                    double tol = kDefaultDiagnosticTolerance);

/// Flags delta with raw lower > raw upper + tol or raw lower > 1 + tol.
DiagnosticReport test_dte_crossing(const DteBound& dte, double tol = kDefaultDiagnosticTolerance);

}  // namespace trisys
