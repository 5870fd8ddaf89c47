// SPDX-License-Identifier: Apache-2.0
//
// Bounds on the counterfactual sub-distributions P0(y, 1 | z) = P(Y0 <= y, D = 1 | z)
// and P1(y, 0 | z) = P(Y1 <= y, D = 0 | z).
#pragma once

#include <array>
#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "trisys/grid.hpp"

namespace trisys {

enum class BandKind { L01Wst, U01Wst, L10Wst, U10Wst, L10Sm, U01Sm, L01Mtr, U10Mtr };

std::string_view to_string(BandKind kind);

/// One bound function over the outcome grid at a single instrument value.
/// `values` is clamped to the feasible range ([0, p(z)] for the 01 bands,
/// [0, 1 - p(z)] for the 10 bands); `raw` keeps the formula output.
struct CounterfactualBand {
    std::string z;
    BandKind kind = BandKind::L01Wst;
    std::vector<double> values;
    std::vector<double> raw;
};

/// Below this distance from the extreme propensities the NSM bands use their
/// degenerate branch.
inline constexpr double kDegenerateGap = 1e-12;

/// Observed sub-distribution P(y, d | z) on the outcome grid.
std::vector<double> observed_subdist(const ObservedLaw& law, int d, std::size_t zi);

/// L01_WST, U01_WST, L10_WST, U10_WST in that order.
std::array<CounterfactualBand, 4> worst_bands(const ObservedLaw& law, std::size_t zi);

/// L10_SM, U01_SM in that order.
std::array<CounterfactualBand, 2> nsm_bands(const ObservedLaw& law, std::size_t zi);

/// L01_MTR, U10_MTR in that order.
std::array<CounterfactualBand, 2> mtr_bands(const ObservedLaw& law, std::size_t zi);

/// The four bands a regime plugs into the marginal, joint and DTE formulas
/// (clamped values).
///
///   regime     l01       u01       l10       u10
///   WORST      L01_WST   U01_WST   L10_WST   U10_WST
///   NSM        L01_WST   U01_SM    L10_SM    U10_WST
///   MTR        L01_MTR   U01_WST   L10_WST   U10_MTR
///   NSM_MTR    L01_MTR   U01_SM    L10_SM    U10_MTR
///
/// CPQD and NSM_CPQD share the bands of WORST and NSM.
struct RegimeBands {
    std::vector<double> l01;
    std::vector<double> u01;
    std::vector<double> l10;
    std::vector<double> u10;
};

RegimeBands regime_bands(const ObservedLaw& law, Regime regime, std::size_t zi);

}  // namespace trisys
