// SPDX-License-Identifier: Apache-2.0
#include "trisys/copula.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <functional>
#include <limits>
#include <sstream>

#include "trisys/errors.hpp"

namespace trisys {

namespace {

constexpr double kWindowSlack = 1e-12;
constexpr double kProbSlack = 1e-12;

// Scans A(y) - B(y - delta) over every point where either term can jump.
// The difference is right-continuous and piecewise constant, so these points
// (plus the value 0 at -infinity carried in `init`) realize its sup and inf.
// Under GridOnly, points whose partner y - delta (or y + delta) falls outside
// the grid are skipped.
template <typename Reduce>
double scan_shift_diff(const ValueGrid& grid, std::span<const double> a, std::span<const double> b, double delta,
                       KernelDomain domain, double init, Reduce reduce) {
    const double snap = 1e-9 * grid.step();
    const auto inside = [&](double y) {
        return domain == KernelDomain::Extended || (y >= grid.front() - snap && y <= grid.back() + snap);
    };
    // The shifted points increase with the index, so a forward cursor gives
    // the same lookup as grid.floor_index.
    const double gsnap = 1e-9 * grid.step();
    const auto points = grid.points();
    auto lookup = [&](std::size_t& cur, std::span<const double> v, double y) {
        const double t = y + gsnap;
        while (cur < points.size() && points[cur] <= t) ++cur;
        return cur == 0 ? 0.0 : v[cur - 1];
    };
    double acc = init;
    std::size_t cur = 0;
    for (std::size_t j = 0; j < grid.size(); ++j) {
        const double y = grid[j] - delta;
        const double bv = lookup(cur, b, y);
        if (inside(y)) acc = reduce(acc, a[j] - bv);
    }
    cur = 0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double y = grid[i] + delta;
        const double av = lookup(cur, a, y);
        if (inside(y)) acc = reduce(acc, av - b[i]);
    }
    return acc;
}

struct Padded {
    std::vector<double> x;
    std::vector<double> a;
    std::vector<double> b;
};

// Under Extended: one point below the grid where both functions are 0 and
// one above where both take their last value.
Padded pad(const ValueGrid& grid, std::span<const double> a, std::span<const double> b, KernelDomain domain) {
    const std::size_t n = grid.size();
    const bool extend = domain == KernelDomain::Extended;
    Padded p;
    p.x.reserve(n + 2);
    p.a.reserve(n + 2);
    p.b.reserve(n + 2);
    if (extend) {
        p.x.push_back(grid.front() - grid.step());
        p.a.push_back(0.0);
        p.b.push_back(0.0);
    }
    for (std::size_t i = 0; i < n; ++i) {
        p.x.push_back(grid[i]);
        p.a.push_back(a[i]);
        p.b.push_back(b[i]);
    }
    if (extend) {
        p.x.push_back(grid.back() + grid.step());
        p.a.push_back(a[n - 1]);
        p.b.push_back(b[n - 1]);
    }
    return p;
}

void check_sizes(const ValueGrid& grid, std::span<const double> a, std::span<const double> b) {
    if (a.size() != grid.size() || b.size() != grid.size()) {
        throw ConfigError("kernel inputs do not match the grid");
    }
}

// Monotone deque giving the max of key(i) over a sliding index window.
class WindowMax {
public:
    void push(std::size_t i, double key) {
        while (!items_.empty() && items_.back().second <= key) items_.pop_back();
        items_.emplace_back(i, key);
    }
    void drop_before(std::size_t lo) {
        while (!items_.empty() && items_.front().first < lo) items_.pop_front();
    }
    bool empty() const { return items_.empty(); }
    double max() const { return items_.front().second; }

private:
    std::deque<std::pair<std::size_t, double>> items_;
};

}  // namespace

MarginalPair::MarginalPair(StepCdf f0_, StepCdf f1_) : f0(std::move(f0_)), f1(std::move(f1_)) {
    if (!(f0.grid() == f1.grid())) throw ConfigError("marginal CDFs must share one grid");
}

Interval frechet_hoeffding(const MarginalPair& m, double y0, double y1) {
    const double u = m.f0(y0);
    const double v = m.f1(y1);
    return {std::max(u + v - 1.0, 0.0), std::min(u, v)};
}

namespace kernel {

double makarov_sup(const ValueGrid& grid, std::span<const double> a, std::span<const double> b, double delta,
                   KernelDomain domain) {
    check_sizes(grid, a, b);
    return scan_shift_diff(grid, a, b, delta, domain, 0.0, [](double acc, double d) { return std::max(acc, d); });
}

double makarov_inf(const ValueGrid& grid, std::span<const double> a, std::span<const double> b, double delta,
                   KernelDomain domain) {
    check_sizes(grid, a, b);
    return scan_shift_diff(grid, a, b, delta, domain, 0.0, [](double acc, double d) { return std::min(acc, d); });
}

double chain_sup(const ValueGrid& grid, std::span<const double> a, std::span<const double> b, double delta,
                 KernelDomain domain) {
    check_sizes(grid, a, b);
    if (delta < 0.0) return 0.0;
    const Padded p = pad(grid, a, b, domain);
    const std::size_t n = p.x.size();

    // free_[j]: best chain ending at j that has not used its repeated point;
    // used_[j]: best chain ending at j that has.
    std::vector<double> free_(n, 0.0);
    std::vector<double> used_(n, 0.0);
    WindowMax free_best, free_slope, used_best, used_slope;
    std::size_t lo = 0;
    double answer = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        if (j > 0) {
            const std::size_t i = j - 1;
            free_best.push(i, free_[i]);
            free_slope.push(i, free_[i] - p.b[i]);
            used_best.push(i, used_[i]);
            used_slope.push(i, used_[i] - p.b[i]);
        }
        while (lo < j && p.x[j] - p.x[lo] > delta + kWindowSlack) ++lo;
        free_best.drop_before(lo);
        free_slope.drop_before(lo);
        used_best.drop_before(lo);
        used_slope.drop_before(lo);

        double f = 0.0;
        double u = -std::numeric_limits<double>::infinity();
        if (!free_best.empty()) {
            f = std::max({f, free_best.max(), free_slope.max() + p.a[j]});
            u = std::max(used_best.max(), used_slope.max() + p.a[j]);
        }
        u = std::max(u, f + std::max(p.a[j] - p.b[j], 0.0));
        free_[j] = f;
        used_[j] = u;
        answer = std::max({answer, f, u});
    }
    return answer;
}

double chain_sup_enumerate(const ValueGrid& grid, std::span<const double> a, std::span<const double> b,
                           double delta, KernelDomain domain) {
    check_sizes(grid, a, b);
    if (delta < 0.0) return 0.0;
    const Padded p = pad(grid, a, b, domain);
    const std::size_t n = p.x.size();
    double best = 0.0;
    std::function<void(std::size_t, double, bool)> extend = [&](std::size_t cur, double sum, bool repeated) {
        best = std::max(best, sum);
        if (!repeated) extend(cur, sum + std::max(p.a[cur] - p.b[cur], 0.0), true);
        for (std::size_t k = cur + 1; k < n && p.x[k] - p.x[cur] <= delta + kWindowSlack; ++k) {
            extend(k, sum + std::max(p.a[k] - p.b[cur], 0.0), repeated);
        }
    };
    for (std::size_t s = 0; s < n; ++s) extend(s, 0.0, false);
    return best;
}

}  // namespace kernel

DteBound makarov_dte(const MarginalPair& m, const GridPtr& delta_grid) {
    if (!delta_grid) throw ConfigError("makarov_dte needs a delta grid");
    const ValueGrid& grid = m.f0.grid();
    DteBound out;
    out.delta_grid = delta_grid;
    const std::size_t nd = delta_grid->size();
    out.raw_lower.resize(nd);
    out.raw_upper.resize(nd);
    for (std::size_t k = 0; k < nd; ++k) {
        const double d = (*delta_grid)[k];
        out.raw_lower[k] = kernel::makarov_sup(grid, m.f1.values(), m.f0.values(), d);
        out.raw_upper[k] = 1.0 + kernel::makarov_inf(grid, m.f1.values(), m.f0.values(), d);
    }
    out.lower = monotone_envelope(out.raw_lower, EnvelopeDirection::Lower);
    out.upper = monotone_envelope(out.raw_upper, EnvelopeDirection::Upper);
    return out;
}

Interval nelsen_constrained(const MarginalPair& m, double a0, double a1, double theta, double y0, double y1) {
    const double fa0 = m.f0(a0);
    const double fa1 = m.f1(a1);
    const double lo = std::max(fa0 + fa1 - 1.0, 0.0);
    const double hi = std::min(fa0, fa1);
    if (theta < lo - kProbSlack) {
        std::ostringstream msg;
        msg << "theta = " << theta << " is below max(F0(a0) + F1(a1) - 1, 0) = " << lo;
        throw ConfigError(msg.str());
    }
    if (theta > hi + kProbSlack) {
        std::ostringstream msg;
        msg << "theta = " << theta << " is above min(F0(a0), F1(a1)) = " << hi;
        throw ConfigError(msg.str());
    }
    const double f0 = m.f0(y0);
    const double f1 = m.f1(y1);
    const auto pos = [](double x) { return std::max(x, 0.0); };
    // The Frechet term is taken at the query point, as in the copula form.
    const double lower = std::max({0.0, f0 + f1 - 1.0, theta - pos(fa0 - f0) - pos(fa1 - f1)});
    const double upper = std::min({f0, f1, theta + pos(f0 - fa0) + pos(f1 - fa1)});
    return {lower, upper};
}

MtrJoint mtr_joint_bounds(const MarginalPair& m, double y0, double y1) {
    const ValueGrid& grid = m.f0.grid();
    MtrJoint out;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (m.f1[i] > m.f0[i] + kProbSlack) {
            out.dominance_violated = true;
            break;
        }
    }
    if (y0 >= y1) {
        const double v = m.f1(y1);
        out.bounds = {v, v};
        return out;
    }
    const double f0y0 = m.f0(y0);
    double lower = std::max(0.0, f0y0 + m.f1(y1) - 1.0);
    lower = std::max(lower, m.f1(y0) - f0y0 + f0y0);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (grid[i] <= y0) continue;
        if (grid[i] > y1) break;
        lower = std::max(lower, m.f1[i] - m.f0[i] + f0y0);
    }
    out.bounds = {lower, std::min(f0y0, m.f1(y1))};
    return out;
}

double mtr_dte_lower(const MarginalPair& m, double delta) {
    if (delta < 0.0) return 0.0;
    return kernel::chain_sup(m.f0.grid(), m.f1.values(), m.f0.values(), delta);
}

namespace {

// Right-continuous step evaluation by linear scan, with the same snapping
// convention as ValueGrid::floor_index.
double scan_eval(std::span<const double> x, std::span<const double> v, double t, double snap) {
    double out = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (x[i] <= t + snap) {
            out = v[i];
        } else {
            break;
        }
    }
    return out;
}

}  // namespace

DualityReport williamson_downs_check(const MarginalPair& m, const GridPtr& delta_grid) {
    if (!delta_grid) throw ConfigError("williamson_downs_check needs a delta grid");
    const DteBound mk = makarov_dte(m, delta_grid);
    const ValueGrid& grid = m.f0.grid();
    const double snap = 1e-9 * grid.step();
    const auto xs = grid.points();

    // F_X for X = Y1; F_Y for Y = -Y0 under the continuous convention
    // F_Y(t) = 1 - F0(-t).
    const auto f_x = [&](double t) { return scan_eval(xs, m.f1.values(), t, snap); };
    const auto f_y = [&](double t) { return 1.0 - scan_eval(xs, m.f0.values(), -t, snap); };
    const auto c_low = [](double u, double v) { return std::max(u + v - 1.0, 0.0); };
    const auto c_low_dual = [](double u, double v) { return std::min(u + v, 1.0); };

    DualityReport report;
    const std::size_t nd = delta_grid->size();
    report.lower_gap.resize(nd);
    report.upper_gap.resize(nd);
    for (std::size_t k = 0; k < nd; ++k) {
        const double d = (*delta_grid)[k];
        std::vector<double> candidates(xs.begin(), xs.end());
        for (double y : xs) candidates.push_back(y + d);
        double sup_w = 0.0;
        double inf_w = 1.0;
        for (double x : candidates) {
            const double u = f_x(x);
            const double v = f_y(d - x);
            sup_w = std::max(sup_w, c_low(u, v));
            inf_w = std::min(inf_w, c_low_dual(u, v));
        }
        report.lower_gap[k] = std::abs(sup_w - mk.raw_lower[k]);
        report.upper_gap[k] = std::abs(inf_w - mk.raw_upper[k]);
        report.max_discrepancy = std::max({report.max_discrepancy, report.lower_gap[k], report.upper_gap[k]});
    }
    report.passed = report.max_discrepancy < 1e-9;
    return report;
}

}  // namespace trisys
