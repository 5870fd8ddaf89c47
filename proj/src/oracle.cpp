// SPDX-License-Identifier: Apache-2.0
#include "trisys/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "trisys/errors.hpp"

namespace trisys {

namespace {

constexpr double kAttainTolerance = 1e-9;
constexpr double kChainTolerance = 1e-12;

struct Tracker {
    double margin = std::numeric_limits<double>::infinity();
    std::string where;

    void update(double m, const std::string& at) {
        if (m < margin) {
            margin = m;
            where = at;
        }
    }
};

OracleVerdict verdict(std::string check, const Tracker& t, double tol) {
    const double margin = std::isfinite(t.margin) ? t.margin : 0.0;
    return {std::move(check), margin >= -tol, margin, t.where, tol};
}

OracleVerdict containment_on_grid(std::string check, const ValueGrid& grid, std::span<const double> lower,
                                  std::span<const double> upper, const StepCdf& truth, double tol,
                                  const char* axis) {
    if (!(truth.grid() == grid)) throw ConfigError(check + ": bound and truth grids differ");
    Tracker t;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        std::ostringstream at;
        at << axis << "=" << grid[i];
        t.update(std::min(truth[i] - lower[i], upper[i] - truth[i]), at.str());
    }
    return verdict(std::move(check), t, tol);
}

}  // namespace

OracleVerdict check_containment(const MarginalBound& bound, const DgpTruth& truth, double tol) {
    const StepCdf& f = bound.target == Target::F0 ? truth.f0 : truth.f1;
    std::string name = "containment ";
    name += to_string(bound.target);
    name += " ";
    name += to_string(bound.regime);
    return containment_on_grid(std::move(name), *bound.grid, bound.lower, bound.upper, f, tol, "y");
}

OracleVerdict check_containment(const JointBound& bound, const DgpTruth& truth, double tol) {
    std::string name = "containment JOINT ";
    name += to_string(bound.regime);
    if (bound.pairs != truth.pairs) throw ConfigError(name + ": bound and truth pair lists differ");
    Tracker t;
    for (std::size_t k = 0; k < bound.pairs.size(); ++k) {
        std::ostringstream at;
        at << "(y0,y1)=(" << bound.pairs[k].first << "," << bound.pairs[k].second << ")";
        t.update(std::min(truth.joint[k] - bound.lower[k], bound.upper[k] - truth.joint[k]), at.str());
    }
    return verdict(std::move(name), t, tol);
}

OracleVerdict check_containment(const DteBound& bound, const DgpTruth& truth, double tol) {
    return containment_on_grid("containment DTE", *bound.delta_grid, bound.lower, bound.upper, truth.dte, tol,
                               "delta");
}

OracleVerdict exhaustive_chain_check(const MarginalPair& m, double delta) {
    const ValueGrid& grid = m.f0.grid();
    if (grid.size() > 25) throw ConfigError("exhaustive_chain_check is limited to 25 grid points");
    const double dp = kernel::chain_sup(grid, m.f1.values(), m.f0.values(), delta);
    const double brute = kernel::chain_sup_enumerate(grid, m.f1.values(), m.f0.values(), delta);
    std::ostringstream at;
    at << "delta=" << delta << " dp=" << dp << " enumeration=" << brute;
    Tracker t;
    t.update(-std::abs(dp - brute), at.str());
    return verdict("exhaustive chain", t, kChainTolerance);
}

namespace {

// Point masses of a step CDF on its grid, with the deficit placed at the end.
std::vector<double> masses(const StepCdf& f) {
    std::vector<double> out(f.size() + 1);
    double prev = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) {
        out[i] = std::max(f[i] - prev, 0.0);
        prev = f[i];
    }
    out.back() = std::max(1.0 - prev, 0.0);
    return out;
}

// Transport plan filling the cells in the order of the two index sequences
// (north-west corner rule). Increasing/increasing gives the comonotone
// coupling; increasing/decreasing the antitone one.
std::vector<std::vector<double>> corner_rule(const std::vector<double>& mu, const std::vector<double>& nu,
                                             bool reverse_second) {
    const std::size_t n0 = mu.size();
    const std::size_t n1 = nu.size();
    std::vector<std::vector<double>> plan(n0, std::vector<double>(n1, 0.0));
    std::vector<double> a = mu;
    std::vector<double> b = nu;
    std::size_t i = 0;
    std::size_t k = 0;
    while (i < n0 && k < n1) {
        const std::size_t j = reverse_second ? n1 - 1 - k : k;
        const double x = std::min(a[i], b[j]);
        plan[i][j] += x;
        a[i] -= x;
        b[j] -= x;
        if (a[i] <= 0.0) ++i;
        if (b[j] <= 0.0) ++k;
    }
    return plan;
}

double plan_cdf(const std::vector<std::vector<double>>& plan, std::ptrdiff_t i0, std::ptrdiff_t i1) {
    double s = 0.0;
    for (std::ptrdiff_t i = 0; i <= i0; ++i) {
        for (std::ptrdiff_t j = 0; j <= i1; ++j) s += plan[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
    }
    return s;
}

}  // namespace

OracleVerdict discrete_copula_sharpness_probe(const MarginalPair& m, double y0, double y1) {
    const ValueGrid& grid = m.f0.grid();
    if (grid.size() > 50) throw ConfigError("discrete_copula_sharpness_probe is limited to 50 grid points");
    const std::vector<double> mu = masses(m.f0);
    const std::vector<double> nu = masses(m.f1);
    const std::ptrdiff_t i0 = grid.floor_index(y0);
    const std::ptrdiff_t i1 = grid.floor_index(y1);
    const Interval fh = frechet_hoeffding(m, y0, y1);
    const double co = i0 < 0 || i1 < 0 ? 0.0 : plan_cdf(corner_rule(mu, nu, false), i0, i1);
    const double anti = i0 < 0 || i1 < 0 ? 0.0 : plan_cdf(corner_rule(mu, nu, true), i0, i1);
    std::ostringstream at;
    at << "(y0,y1)=(" << y0 << "," << y1 << ") comonotone=" << co << " upper=" << fh.upper << " antitone=" << anti
       << " lower=" << fh.lower;
    Tracker t;
    t.update(-std::max(std::abs(co - fh.upper), std::abs(anti - fh.lower)), at.str());
    return verdict("copula sharpness", t, kAttainTolerance);
}

OracleVerdict compare_laws(const ObservedLaw& reference, const ObservedLaw& other, double tol) {
    if (!(reference.y_grid() == other.y_grid()) || reference.z_count() != other.z_count()) {
        throw ConfigError("compare_laws needs laws on one outcome and instrument grid");
    }
    Tracker t;
    for (std::size_t zi = 0; zi < reference.z_count(); ++zi) {
        if (reference.z_label(zi) != other.z_label(zi)) throw ConfigError("compare_laws: instrument labels differ");
        t.update(-std::abs(reference.propensity(zi) - other.propensity(zi)), "p z=" + reference.z_label(zi));
        for (int d = 0; d <= 1; ++d) {
            const StepCdf& a = reference.cond_cdf(d, zi);
            const StepCdf& b = other.cond_cdf(d, zi);
            for (std::size_t i = 0; i < a.size(); ++i) {
                std::ostringstream at;
                at << "d=" << d << " z=" << reference.z_label(zi) << " y=" << reference.y_grid()[i];
                t.update(-std::abs(a[i] - b[i]), at.str());
            }
        }
    }
    return verdict("law agreement", t, tol);
}

}  // namespace trisys
