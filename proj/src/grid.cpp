// SPDX-License-Identifier: Apache-2.0
#include "trisys/grid.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <optional>
#include <sstream>

#include "trisys/errors.hpp"

namespace trisys {

ValueGrid::ValueGrid(std::vector<double> points) : points_(std::move(points)) {
    if (points_.size() < 2) throw ConfigError("value grid needs at least two points");
    step_ = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < points_.size(); ++i) {
        if (!std::isfinite(points_[i])) throw ConfigError("value grid contains a non-finite point");
        if (i > 0) {
            const double gap = points_[i] - points_[i - 1];
            if (!(gap > 0.0)) throw ConfigError("value grid must be strictly increasing");
            step_ = std::min(step_, gap);
        }
    }
}

ValueGrid ValueGrid::uniform(double lo, double hi, double step) {
    if (!(step > 0.0) || !(hi > lo)) throw ConfigError("uniform grid needs lo < hi and step > 0");
    const auto n = static_cast<std::size_t>(std::ceil((hi - lo) / step - 1e-9)) + 1;
    std::vector<double> points(n);
    for (std::size_t i = 0; i < n; ++i) points[i] = lo + static_cast<double>(i) * step;
    return ValueGrid(std::move(points));
}

std::ptrdiff_t ValueGrid::floor_index(double y) const {
    const double snapped = y + 1e-9 * step_;
    auto it = std::upper_bound(points_.begin(), points_.end(), snapped);
    return static_cast<std::ptrdiff_t>(it - points_.begin()) - 1;
}

StepCdf::StepCdf(GridPtr grid, std::vector<double> values) : grid_(std::move(grid)), values_(std::move(values)) {
    if (!grid_) throw ConfigError("step function needs a grid");
    if (values_.size() != grid_->size()) throw ConfigError("step function values do not match its grid");
}

double StepCdf::operator()(double y) const {
    const std::ptrdiff_t i = grid_->floor_index(y);
    if (i < 0) return 0.0;
    return values_[static_cast<std::size_t>(i)];
}

bool StepCdf::is_valid() const {
    for (std::size_t i = 0; i < values_.size(); ++i) {
        const double v = values_[i];
        if (!(v >= -kProbTolerance && v <= 1.0 + kProbTolerance)) return false;
        if (i > 0 && v < values_[i - 1] - kProbTolerance) return false;
    }
    return true;
}

std::vector<double> monotone_envelope(std::span<const double> values, EnvelopeDirection direction) {
    std::vector<double> out(values.begin(), values.end());
    for (double& v : out) v = std::clamp(v, 0.0, 1.0);
    if (out.empty()) return out;
    if (direction == EnvelopeDirection::Lower) {
        for (std::size_t i = 1; i < out.size(); ++i) out[i] = std::max(out[i], out[i - 1]);
    } else {
        for (std::size_t i = out.size() - 1; i-- > 0;) out[i] = std::min(out[i], out[i + 1]);
    }
    return out;
}

std::string_view to_string(Regime regime) {
    switch (regime) {
        case Regime::Worst: return "WORST";
        case Regime::Nsm: return "NSM";
        case Regime::Cpqd: return "CPQD";
        case Regime::Mtr: return "MTR";
        case Regime::NsmCpqd: return "NSM_CPQD";
        case Regime::NsmMtr: return "NSM_MTR";
    }
    return "?";
}

Regime parse_regime(std::string_view text) {
    std::string norm;
    for (char c : text) {
        if (std::isspace(static_cast<unsigned char>(c))) continue;
        norm.push_back(c == '+' ? '_' : static_cast<char>(std::toupper(static_cast<unsigned char>(c))));
    }
    for (Regime r : kAllRegimes) {
        if (norm == to_string(r)) return r;
    }
    throw InputError("unknown regime '" + std::string(text) + "'");
}

bool imposes_nsm(Regime regime) {
    return regime == Regime::Nsm || regime == Regime::NsmCpqd || regime == Regime::NsmMtr;
}
bool imposes_cpqd(Regime regime) { return regime == Regime::Cpqd || regime == Regime::NsmCpqd; }
bool imposes_mtr(Regime regime) { return regime == Regime::Mtr || regime == Regime::NsmMtr; }

namespace {

std::optional<double> parse_number(std::string_view s) {
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
    return v;
}

}  // namespace

bool label_less(std::string_view a, std::string_view b) {
    const auto na = parse_number(a);
    const auto nb = parse_number(b);
    if (na && nb) return *na < *nb;
    return a < b;
}

ObservedLaw::ObservedLaw(GridPtr y_grid, std::vector<std::string> z_labels, std::vector<double> propensity,
                         std::vector<StepCdf> cdf0, std::vector<StepCdf> cdf1)
    : y_grid_(std::move(y_grid)),
      z_labels_(std::move(z_labels)),
      propensity_(std::move(propensity)),
      cdf0_(std::move(cdf0)),
      cdf1_(std::move(cdf1)) {
    if (!y_grid_) throw ConfigError("observed law needs an outcome grid");
    const std::size_t nz = z_labels_.size();
    if (nz == 0) throw ConfigError("observed law needs at least one instrument value");
    if (propensity_.size() != nz || cdf0_.size() != nz || cdf1_.size() != nz) {
        throw ConfigError("observed law: instrument arrays have different lengths");
    }
    for (std::size_t zi = 0; zi < nz; ++zi) {
        if (!(cdf0_[zi].grid() == *y_grid_) || !(cdf1_[zi].grid() == *y_grid_)) {
            throw ConfigError("observed law: conditional CDF at z=" + z_labels_[zi] + " is not on the outcome grid");
        }
    }
    for (std::size_t zi = 1; zi < nz; ++zi) {
        const double p = propensity_[zi];
        const double pb = propensity_[arg_bar_];
        const double pl = propensity_[arg_low_];
        if (p > pb || (p == pb && label_less(z_labels_[zi], z_labels_[arg_bar_]))) arg_bar_ = zi;
        if (p < pl || (p == pl && label_less(z_labels_[zi], z_labels_[arg_low_]))) arg_low_ = zi;
    }
}

std::size_t ObservedLaw::z_index(std::string_view label) const {
    for (std::size_t zi = 0; zi < z_labels_.size(); ++zi) {
        if (z_labels_[zi] == label) return zi;
    }
    throw ConfigError("unknown instrument label '" + std::string(label) + "'");
}

ValidationReport validate_observed_law(const ObservedLaw& law) {
    ValidationReport report;
    for (std::size_t zi = 0; zi < law.z_count(); ++zi) {
        const double p = law.propensity(zi);
        if (!(p >= -kProbTolerance && p <= 1.0 + kProbTolerance)) {
            std::ostringstream msg;
            msg << "p(z) = " << p << " outside [0, 1]";
            report.push_back({"propensity-range", -1, law.z_label(zi), -1, msg.str()});
        }
        for (int d = 0; d <= 1; ++d) {
            const auto values = law.cond_cdf(d, zi).values();
            for (std::size_t i = 0; i < values.size(); ++i) {
                const double v = values[i];
                if (!(v >= -kProbTolerance && v <= 1.0 + kProbTolerance)) {
                    std::ostringstream msg;
                    msg << "value " << v << " outside [0, 1]";
                    report.push_back({"cdf-range", d, law.z_label(zi), static_cast<std::ptrdiff_t>(i), msg.str()});
                }
                if (i > 0 && v < values[i - 1] - kProbTolerance) {
                    std::ostringstream msg;
                    msg << "value " << v << " below previous " << values[i - 1];
                    report.push_back({"nondecreasing", d, law.z_label(zi), static_cast<std::ptrdiff_t>(i), msg.str()});
                }
            }
        }
    }
    return report;
}

}  // namespace trisys
