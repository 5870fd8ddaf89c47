// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include "support.hpp"
#include "trisys/diagnostics.hpp"
#include "trisys/dgp.hpp"
#include "trisys/errors.hpp"

using namespace trisys;
using namespace trisys::testing;

namespace {

std::vector<DiagnosticReport> run_all(const DgpSpec& spec) {
    const ObservedLaw law = build_observed_law(spec);
    const MarginalBound b0 = marginal_bounds(law, Regime::Worst, Target::F0);
    const MarginalBound b1 = marginal_bounds(law, Regime::Worst, Target::F1);
    return {test_nsm(law), test_mtr_dominance(b0, b1),
            test_dte_crossing(dte_bounds(law, Regime::Mtr, spec.delta_grid))};
}

}  // namespace

TEST_CASE("design laws pass every diagnostic") {
    for (double rho : {-0.25, -0.75}) {
        for (const auto& r : run_all(small_design(rho, 1.0))) {
            CAPTURE(to_string(r.test));
            CHECK(r.passed());
        }
    }
}

TEST_CASE("a sign-flipped design is flagged") {
    DgpSpec spec = small_design(0.75, 1.0);
    spec.misspecified = true;
    spec.effect_sign = -1;
    const auto reports = run_all(spec);
    CHECK_FALSE(reports[0].passed());
    bool any_mtr = !reports[1].passed() || !reports[2].passed();
    CHECK(any_mtr);
    for (const auto& r : reports) {
        for (const auto& v : r.violations) {
            CHECK(v.magnitude > r.tolerance);
            CHECK_FALSE(v.where.empty());
        }
    }
}

TEST_CASE("nsm test on hand-made laws") {
    const GridPtr g = grid_of({0.0, 1.0});
    const StepCdf low(g, {0.2, 1.0});
    const StepCdf high(g, {0.6, 1.0});
    SUBCASE("single instrument value gives an empty report") {
        const ObservedLaw law(g, {"0"}, {0.5}, {low}, {low});
        const DiagnosticReport r = test_nsm(law);
        CHECK(r.passed());
        CHECK(r.max_violation == 0.0);
    }
    SUBCASE("conditional law falling with the propensity is flagged") {
        const ObservedLaw law(g, {"0", "1"}, {0.3, 0.7}, {high, low}, {low, low});
        const DiagnosticReport r = test_nsm(law);
        REQUIRE(r.violations.size() == 1);
        CHECK(r.violations[0].magnitude == doctest::Approx(0.4));
        CHECK(r.violations[0].where.find("d=0") != std::string::npos);
        CHECK(to_string(r.test) == "NSM_INEQ");
    }
    SUBCASE("tolerance absorbs small reversals") {
        const StepCdf nudged(g, {0.205, 1.0});
        const ObservedLaw law(g, {"0", "1"}, {0.3, 0.7}, {nudged, low}, {low, low});
        const DiagnosticReport r = test_nsm(law);
        CHECK(r.passed());
        CHECK(r.max_violation == doctest::Approx(0.005));
    }
}

TEST_CASE("dominance and crossing tests") {
    const GridPtr g = grid_of({0.0, 1.0, 2.0});
    MarginalBound b0{Target::F0, Regime::Worst, g, {0.1, 0.3, 1.0}, {0.2, 0.5, 1.0}};
    MarginalBound b1{Target::F1, Regime::Worst, g, {0.0, 0.6, 1.0}, {0.1, 0.7, 1.0}};
    const DiagnosticReport r = test_mtr_dominance(b0, b1);
    REQUIRE(r.violations.size() == 1);
    CHECK(r.violations[0].y == 1.0);
    CHECK(r.violations[0].magnitude == doctest::Approx(0.1));

    MarginalBound other = b1;
    other.grid = grid_of({0.0, 1.0, 3.0});
    CHECK_THROWS_AS(test_mtr_dominance(b0, other), ConfigError);

    DteBound d{g, {0.0, 0.5, 1.0}, {0.4, 0.5, 1.0}, {0.0, 0.55, 1.02}, {0.4, 0.5, 1.0}};
    const DiagnosticReport c = test_dte_crossing(d);
    REQUIRE(c.violations.size() == 2);
    CHECK(c.violations[0].magnitude == doctest::Approx(0.05));
    CHECK(c.violations[1].magnitude == doctest::Approx(0.02));
    CHECK(test_dte_crossing(d, 0.1).passed());
}
