// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include "support.hpp"
#include "trisys/dgp.hpp"
#include "trisys/errors.hpp"
#include "trisys/oracle.hpp"

using namespace trisys;
using namespace trisys::testing;

TEST_CASE("bounds contain the truth on the design") {
    const DgpSpec spec = small_design(-0.75, 1.0);
    const std::vector<YPair> pairs{{-1.0, 1.0}, {1.0, 3.0}, {3.0, 1.0}, {2.0, 7.0}};
    const ObservedLaw law = build_observed_law(spec);
    const DgpTruth truth = build_truth(spec, pairs);
    for (Regime r : kAllRegimes) {
        CAPTURE(to_string(r));
        CHECK(check_containment(marginal_bounds(law, r, Target::F0), truth).passed);
        CHECK(check_containment(marginal_bounds(law, r, Target::F1), truth).passed);
        CHECK(check_containment(joint_bounds(law, r, pairs), truth).passed);
        CHECK(check_containment(dte_bounds(law, r, spec.delta_grid), truth).passed);
    }
}

TEST_CASE("containment reports the failing coordinate") {
    const DgpSpec spec = small_design(-0.75, 1.0);
    const ObservedLaw law = build_observed_law(spec);
    const DgpTruth truth = build_truth(spec, {});
    MarginalBound b = marginal_bounds(law, Regime::Worst, Target::F1);
    const auto i = static_cast<std::size_t>(b.grid->floor_index(2.0));
    b.upper[i] = truth.f1[i] - 0.05;
    const OracleVerdict v = check_containment(b, truth);
    CHECK_FALSE(v.passed);
    CHECK(v.worst_margin == doctest::Approx(-0.05).epsilon(1e-9));
    CHECK(v.coordinates.find("y=2") != std::string::npos);

    const std::vector<YPair> pairs{{0.0, 1.0}};
    CHECK_THROWS_AS(check_containment(joint_bounds(law, Regime::Worst, pairs), truth), ConfigError);
}

TEST_CASE("oracle size limits") {
    const GridPtr big = make_grid(ValueGrid::uniform(0.0, 1.0, 0.01));
    std::vector<double> v(big->size(), 1.0);
    const MarginalPair m(StepCdf(big, v), StepCdf(big, v));
    CHECK_THROWS_AS(exhaustive_chain_check(m, 0.5), ConfigError);
    CHECK_THROWS_AS(discrete_copula_sharpness_probe(m, 0.5, 0.5), ConfigError);
}

TEST_CASE("law comparison") {
    const DgpSpec spec = small_design(-0.5, 1.0, 3);
    const ObservedLaw a = build_observed_law(spec);
    CHECK(compare_laws(a, a, 0.0).passed);
    const ObservedLaw b = build_observed_law(small_design(-0.25, 1.0, 3));
    const OracleVerdict v = compare_laws(a, b, 0.01);
    CHECK_FALSE(v.passed);
    CHECK(v.worst_margin < 0.0);
    const ObservedLaw c = build_observed_law(small_design(-0.5, 1.0, 5));
    CHECK_THROWS_AS(compare_laws(a, c, 0.1), ConfigError);
}
