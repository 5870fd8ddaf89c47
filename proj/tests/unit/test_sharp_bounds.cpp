// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cmath>

#include "support.hpp"
#include "trisys/dgp.hpp"
#include "trisys/errors.hpp"
#include "trisys/sharp_bounds.hpp"
#include "trisys/tables.hpp"

using namespace trisys;
using namespace trisys::testing;

namespace {

// The discretization the reference tables use.
DgpSpec reference_design(double rho, double zbar) {
    const TableSettings s = TableSettings::reference();
    DgpSpec spec = DgpSpec::standard(rho, zbar);
    spec.z_grid_size = s.z_grid_size;
    spec.y_grid = s.y_grid;
    spec.delta_grid = s.delta_grid;
    return spec;
}

double at(const MarginalBound& b, double y, bool upper) {
    const auto i = static_cast<std::size_t>(b.grid->floor_index(y));
    return upper ? b.upper[i] : b.lower[i];
}

double at(const DteBound& b, double d, bool upper) {
    const auto i = static_cast<std::size_t>(b.delta_grid->floor_index(d));
    return upper ? b.upper[i] : b.lower[i];
}

constexpr double kTableTol = 0.02;

}  // namespace

TEST_CASE("marginal bounds on the reference design") {
    const ObservedLaw law = build_observed_law(reference_design(-0.75, 1.0));
    const MarginalBound f0 = marginal_bounds(law, Regime::NsmMtr, Target::F0);
    CHECK(std::abs(at(f0, 0.0, false) - 0.48) <= kTableTol);
    CHECK(std::abs(at(f0, 0.0, true) - 0.56) <= kTableTol);
    const MarginalBound f1 = marginal_bounds(law, Regime::NsmMtr, Target::F1);
    CHECK(std::abs(at(f1, 0.0, false) - 0.14) <= kTableTol);
    CHECK(std::abs(at(f1, 0.0, true) - 0.25) <= kTableTol);

    const MarginalBound w0 = marginal_bounds(law, Regime::Worst, Target::F0);
    CHECK(at(w0, 0.0, true) - at(w0, 0.0, false) > at(f0, 0.0, true) - at(f0, 0.0, false));
}

TEST_CASE("joint bounds on the reference design") {
    const TableSettings s = TableSettings::reference();
    DgpSpec spec = reference_design(-0.75, 1.0);
    spec.y_grid = s.joint_y_grid;
    const ObservedLaw law = build_observed_law(spec);
    const std::vector<YPair> pairs{{1.0, 3.0}};
    const JointBound nsm = joint_bounds(law, Regime::Nsm, pairs);
    CHECK(std::abs(nsm.lower[0] - 0.50) <= kTableTol);
    CHECK(std::abs(nsm.upper[0] - 0.75) <= kTableTol);
    const JointBound cpqd = joint_bounds(law, Regime::Cpqd, pairs);
    CHECK(std::abs(cpqd.lower[0] - 0.43) <= kTableTol);
    CHECK(std::abs(cpqd.upper[0] - 0.75) <= kTableTol);
}

TEST_CASE("mtr joint bounds above the diagonal equal the F1 bound") {
    const ObservedLaw law = build_observed_law(small_design());
    const MarginalBound f1 = marginal_bounds(law, Regime::Mtr, Target::F1);
    const std::vector<YPair> pairs{{3.0, 1.0}, {2.0, 2.0}, {5.0, -1.0}};
    const JointBound j = joint_bounds(law, Regime::Mtr, pairs);
    for (std::size_t k = 0; k < pairs.size(); ++k) {
        CHECK(j.lower[k] == doctest::Approx(at(f1, pairs[k].second, false)));
        CHECK(j.upper[k] == doctest::Approx(at(f1, pairs[k].second, true)));
    }
}

TEST_CASE("dte bounds on the reference design") {
    const TableSettings s = TableSettings::reference();
    const ObservedLaw a = build_observed_law(reference_design(-0.75, 1.0));
    const DteBound d = dte_bounds(a, Regime::NsmMtr, s.delta_grid, s.domain);
    CHECK(std::abs(at(d, 3.0, false) - 0.33) <= kTableTol);
    CHECK(std::abs(at(d, 3.0, true) - 0.96) <= kTableTol);

    const ObservedLaw b = build_observed_law(reference_design(-0.5, 1.0));
    const DteBound e = dte_bounds(b, Regime::NsmMtr, s.delta_grid, s.domain);
    CHECK(std::abs(at(e, 5.0, false) - 0.60) <= kTableTol);
    CHECK(std::abs(at(e, 5.0, true) - 0.99) <= kTableTol);
}

TEST_CASE("cpqd needs interior propensities") {
    const GridPtr g = grid_of({0.0, 1.0});
    const ObservedLaw law = independent_law(g, {0.5, 1.0}, {0.2, 1.0}, {0.0, 0.5});
    CHECK_THROWS_AS(marginal_bounds(law, Regime::Cpqd, Target::F0), ConfigError);
    CHECK_THROWS_AS(joint_bounds(law, Regime::NsmCpqd, std::vector<YPair>{{0.0, 1.0}}), ConfigError);
    CHECK_NOTHROW(marginal_bounds(law, Regime::Nsm, Target::F0));
    CHECK_THROWS_AS(marginal_bounds(law, Regime::Worst, Target::Joint), ConfigError);
}

TEST_CASE("full propensity range point-identifies the marginals") {
    const GridPtr g = grid_of({-1.0, 0.0, 1.0, 2.0});
    const std::vector<double> f0{0.1, 0.4, 0.8, 1.0};
    const std::vector<double> f1{0.0, 0.2, 0.6, 1.0};
    const ObservedLaw law = independent_law(g, f0, f1, {0.0, 0.3, 0.7, 1.0});
    for (Regime r : {Regime::Worst, Regime::Nsm, Regime::Mtr, Regime::NsmMtr}) {
        const MarginalBound b0 = marginal_bounds(law, r, Target::F0);
        const MarginalBound b1 = marginal_bounds(law, r, Target::F1);
        for (std::size_t i = 0; i < f0.size(); ++i) {
            CHECK(b0.lower[i] == doctest::Approx(f0[i]).epsilon(1e-12));
            CHECK(b0.upper[i] == doctest::Approx(f0[i]).epsilon(1e-12));
            CHECK(b1.lower[i] == doctest::Approx(f1[i]).epsilon(1e-12));
            CHECK(b1.upper[i] == doctest::Approx(f1[i]).epsilon(1e-12));
        }
    }
}

TEST_CASE("regimes nest") {
    const DgpSpec spec = small_design(-0.5, 1.5);
    const ObservedLaw law = build_observed_law(spec);
    auto inside = [](const std::vector<double>& lo_in, const std::vector<double>& hi_in,
                     const std::vector<double>& lo_out, const std::vector<double>& hi_out) {
        for (std::size_t i = 0; i < lo_in.size(); ++i) {
            if (lo_in[i] < lo_out[i] - 1e-9 || hi_in[i] > hi_out[i] + 1e-9) return false;
        }
        return true;
    };
    const std::pair<Regime, Regime> chains[] = {{Regime::Nsm, Regime::Worst},   {Regime::Mtr, Regime::Worst},
                                                {Regime::Cpqd, Regime::Worst},  {Regime::NsmMtr, Regime::Nsm},
                                                {Regime::NsmMtr, Regime::Mtr},  {Regime::NsmCpqd, Regime::Nsm},
                                                {Regime::NsmCpqd, Regime::Cpqd}};
    for (auto [inner, outer] : chains) {
        CAPTURE(to_string(inner));
        CAPTURE(to_string(outer));
        for (Target t : {Target::F0, Target::F1}) {
            const MarginalBound a = marginal_bounds(law, inner, t);
            const MarginalBound b = marginal_bounds(law, outer, t);
            CHECK(inside(a.lower, a.upper, b.lower, b.upper));
        }
        const DteBound a = dte_bounds(law, inner, spec.delta_grid);
        const DteBound b = dte_bounds(law, outer, spec.delta_grid);
        CHECK(inside(a.lower, a.upper, b.lower, b.upper));
        const std::vector<YPair> pairs{{-1.0, 1.0}, {1.0, 3.0}, {3.0, 5.0}, {0.0, 0.0}, {2.0, 1.0}};
        const JointBound ja = joint_bounds(law, inner, pairs);
        const JointBound jb = joint_bounds(law, outer, pairs);
        CHECK(inside(ja.lower, ja.upper, jb.lower, jb.upper));
    }
}

TEST_CASE("quantile inversion") {
    const ObservedLaw law = build_observed_law(small_design());
    const MarginalBound b = marginal_bounds(law, Regime::Nsm, Target::F1);
    double prev_lo = -INFINITY, prev_hi = -INFINITY;
    for (double q : {0.1, 0.25, 0.5, 0.75, 0.9}) {
        const QuantileBound qb = quantile_bounds(b, q);
        CHECK(qb.lower <= qb.upper);
        CHECK(qb.lower >= prev_lo);
        CHECK(qb.upper >= prev_hi);
        prev_lo = qb.lower;
        prev_hi = qb.upper;
    }
    CHECK_THROWS_AS(quantile_bounds(b, 1.0), ConfigError);

    MarginalBound flat = b;
    std::fill(flat.lower.begin(), flat.lower.end(), 0.3);
    CHECK(std::isinf(quantile_bounds(flat, 0.5).upper));
}
