// SPDX-License-Identifier: Apache-2.0
#include "trisys/diagnostics.hpp"

#include <algorithm>
#include <sstream>

#include "trisys/errors.hpp"

namespace trisys {

std::string_view to_string(DiagnosticTest test) {
    switch (test) {
        case DiagnosticTest::NsmInequality: return "NSM_INEQ";
        case DiagnosticTest::MtrDominance: return "MTR_DOMINANCE";
        case DiagnosticTest::DteCrossing: return "DTE_CROSSING";
    }
    return "?";
}

namespace {

void record(DiagnosticReport& report, double excess, double y, const std::string& where) {
    report.max_violation = std::max(report.max_violation, excess);
    if (excess > report.tolerance) report.violations.push_back({where, y, excess});
}

}  // namespace

DiagnosticReport test_nsm(const ObservedLaw& law, double tol) {
    DiagnosticReport report{DiagnosticTest::NsmInequality, tol, {}, 0.0};
    const ValueGrid& grid = law.y_grid();
    for (std::size_t a = 0; a < law.z_count(); ++a) {
        for (std::size_t b = 0; b < law.z_count(); ++b) {
            if (a == b || law.propensity(b) < law.propensity(a)) continue;
            for (int d = 0; d <= 1; ++d) {
                const StepCdf& lo = law.cond_cdf(d, a);
                const StepCdf& hi = law.cond_cdf(d, b);
                double worst = 0.0;
                std::size_t at = 0;
                for (std::size_t i = 0; i < grid.size(); ++i) {
                    const double excess = lo[i] - hi[i];
                    if (excess > worst) {
                        worst = excess;
                        at = i;
                    }
                }
                if (worst <= 0.0) continue;
                std::ostringstream where;
                where << "d=" << d << " z=" << law.z_label(a) << " z'=" << law.z_label(b) << " y=" << grid[at];
                record(report, worst, grid[at], where.str());
            }
        }
    }
    return report;
}

DiagnosticReport test_mtr_dominance(const MarginalBound& bound0, const MarginalBound& bound1, double tol) {
    if (!bound0.grid || !bound1.grid || !(*bound0.grid == *bound1.grid)) {
        throw ConfigError("dominance test needs both bounds on one grid");
    }
    DiagnosticReport report{DiagnosticTest::MtrDominance, tol, {}, 0.0};
    const ValueGrid& grid = *bound0.grid;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double excess = bound1.lower[i] - bound0.upper[i];
        if (excess <= 0.0) continue;
        std::ostringstream where;
        where << "y=" << grid[i];
        record(report, excess, grid[i], where.str());
    }
    return report;
}

DiagnosticReport test_dte_crossing(const DteBound& dte, double tol) {
    DiagnosticReport report{DiagnosticTest::DteCrossing, tol, {}, 0.0};
    const ValueGrid& grid = *dte.delta_grid;
    for (std::size_t k = 0; k < grid.size(); ++k) {
        const double cross = dte.raw_lower[k] - dte.raw_upper[k];
        const double above = dte.raw_lower[k] - 1.0;
        const double excess = std::max(cross, above);
        if (excess <= 0.0) continue;
        std::ostringstream where;
        where << "delta=" << grid[k] << (cross >= above ? " lower>upper" : " lower>1");
        record(report, excess, grid[k], where.str());
    }
    return report;
}

}  // namespace trisys
