// SPDX-License-Identifier: Apache-2.0
//
// Discretized probability objects consumed by every other module: value
// grids, right-continuous step CDFs, and the identified observable law of a
// binary-selection triangular system.
#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace trisys {

/// Probabilities within this distance outside [0, 1] are clamped; anything
/// further out fails validation.
inline constexpr double kProbTolerance = 1e-12;

/// Strictly increasing finite sequence of reals (outcome or effect units).
class ValueGrid {
public:
    /// Throws ConfigError unless `points` is strictly increasing, finite and
    /// has at least two entries.
    explicit ValueGrid(std::vector<double> points);

    /// Equally spaced points lo, lo+step, ..., up to the first point >= hi.
    static ValueGrid uniform(double lo, double hi, double step);

    std::span<const double> points() const { return points_; }
    std::size_t size() const { return points_.size(); }
    double operator[](std::size_t i) const { return points_[i]; }
    double front() const { return points_.front(); }
    double back() const { return points_.back(); }

    /// Smallest spacing between consecutive points.
    double step() const { return step_; }

    /// Index of the largest point <= y, or -1 when y is below the grid.
    /// Queries within 1e-9 * step() of a point snap onto it so that shifted
    /// lookups (y - delta on aligned grids) are not lost to rounding.
    std::ptrdiff_t floor_index(double y) const;

    /// True iff the first point <= lo and the last point >= hi.
    bool spans(double lo, double hi) const { return front() <= lo && back() >= hi; }

    bool operator==(const ValueGrid& other) const { return points_ == other.points_; }

private:
    std::vector<double> points_;
    double step_ = 0.0;
};

using GridPtr = std::shared_ptr<const ValueGrid>;

inline GridPtr make_grid(ValueGrid grid) { return std::make_shared<const ValueGrid>(std::move(grid)); }

/// Right-continuous step function on a grid. Evaluation returns the value at
/// the largest grid point <= y, 0 below the grid and the last value above it.
///
/// Construction only checks that the sizes agree; `is_valid` checks the CDF
/// invariants. Sub-distribution functions (mass below 1) use the same type.
class StepCdf {
public:
    StepCdf(GridPtr grid, std::vector<double> values);

    const ValueGrid& grid() const { return *grid_; }
    const GridPtr& grid_ptr() const { return grid_; }
    std::span<const double> values() const { return values_; }
    double operator[](std::size_t i) const { return values_[i]; }
    std::size_t size() const { return values_.size(); }

    double operator()(double y) const;

    /// Values in [0, 1] and nondecreasing, each up to kProbTolerance.
    bool is_valid() const;

private:
    GridPtr grid_;
    std::vector<double> values_;
};

/// Convenience for `cdf(y)`.
inline double eval_cdf(const StepCdf& cdf, double y) { return cdf(y); }

enum class EnvelopeDirection { Lower, Upper };

/// Rearranges a pointwise bound into a valid CDF bound. Lower: smallest
/// nondecreasing sequence >= the clamped input (running max, left to right).
/// Upper: largest nondecreasing sequence <= the clamped input (running min,
/// right to left). Output lies in [0, 1].
std::vector<double> monotone_envelope(std::span<const double> values, EnvelopeDirection direction);

/// Restriction regimes layered on top of the maintained model assumptions.
enum class Regime { Worst, Nsm, Cpqd, Mtr, NsmCpqd, NsmMtr };

inline constexpr Regime kAllRegimes[] = {Regime::Worst, Regime::Nsm,     Regime::Cpqd,
                                         Regime::Mtr,   Regime::NsmCpqd, Regime::NsmMtr};

std::string_view to_string(Regime regime);

/// Accepts the canonical tags (WORST, NSM, CPQD, MTR, NSM_CPQD, NSM_MTR),
/// case-insensitively, also with '+' in place of '_'. Throws InputError.
Regime parse_regime(std::string_view text);

bool imposes_nsm(Regime regime);
bool imposes_cpqd(Regime regime);
bool imposes_mtr(Regime regime);

/// The identified data: instrument grid, propensity scores and the
/// conditional outcome CDFs P(y | d, z) for each arm and instrument value.
///
/// Limits of P(y | d, z) as p(z) tends to sup p or inf p are realized by the
/// conditional CDFs at the instrument value attaining the max / min
/// propensity (ties go to the smallest label).
class ObservedLaw {
public:
    /// Sizes must agree (throws ConfigError); the probability invariants are
    /// checked by validate_observed_law, not here.
    ObservedLaw(GridPtr y_grid, std::vector<std::string> z_labels, std::vector<double> propensity,
                std::vector<StepCdf> cdf0, std::vector<StepCdf> cdf1);

    const ValueGrid& y_grid() const { return *y_grid_; }
    const GridPtr& y_grid_ptr() const { return y_grid_; }
    std::size_t z_count() const { return z_labels_.size(); }
    const std::string& z_label(std::size_t zi) const { return z_labels_[zi]; }
    std::span<const std::string> z_labels() const { return z_labels_; }

    double propensity(std::size_t zi) const { return propensity_[zi]; }
    std::span<const double> propensities() const { return propensity_; }

    /// P(y | d, z) at instrument index zi.
    const StepCdf& cond_cdf(int d, std::size_t zi) const { return d == 0 ? cdf0_[zi] : cdf1_[zi]; }

    double p_bar() const { return propensity_[arg_bar_]; }
    double p_low() const { return propensity_[arg_low_]; }
    std::size_t argmax_index() const { return arg_bar_; }
    std::size_t argmin_index() const { return arg_low_; }

    const StepCdf& limit_cdf_at_pbar(int d) const { return cond_cdf(d, arg_bar_); }
    const StepCdf& limit_cdf_at_plow(int d) const { return cond_cdf(d, arg_low_); }

    /// Index of an instrument label, or throws ConfigError.
    std::size_t z_index(std::string_view label) const;

private:
    GridPtr y_grid_;
    std::vector<std::string> z_labels_;
    std::vector<double> propensity_;
    std::vector<StepCdf> cdf0_;
    std::vector<StepCdf> cdf1_;
    std::size_t arg_bar_ = 0;
    std::size_t arg_low_ = 0;
};

/// One failed invariant. Coordinates not applicable to the check are -1 / "".
struct Violation {
    std::string invariant;
    int d = -1;
    std::string z;
    std::ptrdiff_t y_index = -1;
    std::string detail;
};

using ValidationReport = std::vector<Violation>;

/// Empty iff every ObservedLaw invariant holds.
ValidationReport validate_observed_law(const ObservedLaw& law);

/// Label ordering used for tie-breaking: numeric when both labels parse as
/// numbers, lexicographic otherwise.
bool label_less(std::string_view a, std::string_view b);

}  // namespace trisys
