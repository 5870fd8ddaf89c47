// SPDX-License-Identifier: Apache-2.0
#include "trisys/dgp.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <numbers>
#include <numeric>
#include <random>
#include <sstream>

#include "trisys/errors.hpp"
#include "trisys/numeric.hpp"

namespace trisys {

using numeric::chi2_cdf;
using numeric::normal_cdf;
using numeric::normal_pdf;

namespace {

constexpr double kUTail = 9.0;         // U integrals run over [-9, 9]
constexpr double kTableStep = 0.005;   // spacing of the tabulated convolution
constexpr double kConvergenceTol = 1e-6;

// Density of eta = w^2 expressed in w, i.e. f_k(w^2) * 2w. Smooth on [0, inf)
// for every k >= 1.
double eta_density_in_w(double w, double dof) {
    if (w <= 0.0) return dof == 1.0 ? 2.0 * normal_pdf(0.0) : 0.0;
    const double k2 = 0.5 * dof;
    return 2.0 * std::exp((dof - 1.0) * std::log(w) - 0.5 * w * w - k2 * std::numbers::ln2 - std::lgamma(k2));
}

double eta_w_max(double dof) { return std::sqrt(dof + 12.0 * std::sqrt(2.0 * dof) + 50.0); }

// G(t) = P(sigma * N(0,1) + s * eta <= t) and its derivative.
double conv_cdf(double t, double sigma, int sign, double dof, std::size_t nodes) {
    return numeric::integrate(
        [&](double w) { return normal_cdf((t - sign * w * w) / sigma) * eta_density_in_w(w, dof); }, 0.0,
        eta_w_max(dof), nodes);
}

double conv_pdf(double t, double sigma, int sign, double dof, std::size_t nodes) {
    return numeric::integrate(
        [&](double w) { return normal_pdf((t - sign * w * w) / sigma) / sigma * eta_density_in_w(w, dof); }, 0.0,
        eta_w_max(dof), nodes);
}

// Cubic Hermite table of G on a uniform grid; exact evaluation outside it.
class ConvTable {
public:
    ConvTable(double lo, double hi, int sign, double dof, std::size_t nodes)
        : lo_(lo), sign_(sign), dof_(dof), nodes_(nodes) {
        const auto n = static_cast<std::size_t>(std::ceil((hi - lo) / kTableStep)) + 1;
        value_.resize(n);
        slope_.resize(n);
        numeric::parallel_for(n, [&](std::size_t i) {
            const double t = lo_ + static_cast<double>(i) * kTableStep;
            value_[i] = conv_cdf(t, 1.0, sign_, dof_, nodes_);
            slope_[i] = conv_pdf(t, 1.0, sign_, dof_, nodes_);
        });
    }

    double operator()(double t) const {
        const double x = (t - lo_) / kTableStep;
        if (x < 0.0 || x >= static_cast<double>(value_.size() - 1)) return conv_cdf(t, 1.0, sign_, dof_, nodes_);
        const auto i = static_cast<std::size_t>(x);
        const double s = x - static_cast<double>(i);
        const double s2 = s * s;
        const double s3 = s2 * s;
        return (2 * s3 - 3 * s2 + 1) * value_[i] + (s3 - 2 * s2 + s) * kTableStep * slope_[i] +
               (-2 * s3 + 3 * s2) * value_[i + 1] + (s3 - s2) * kTableStep * slope_[i + 1];
    }

private:
    double lo_;
    int sign_;
    double dof_;
    std::size_t nodes_;
    std::vector<double> value_;
    std::vector<double> slope_;
};

struct Panel {
    double a;
    double b;
    std::size_t nodes;
};

// Panels covering [-kUTail, z_k] for each k, built incrementally: panel 0 is
// the tail, panel k the segment (z_{k-1}, z_k]. The upper side mirrors this.
std::vector<Panel> lower_panels(const std::vector<double>& z, std::size_t tail_nodes, std::size_t seg_nodes) {
    std::vector<Panel> out;
    out.push_back({-kUTail, z.front(), tail_nodes});
    for (std::size_t k = 1; k < z.size(); ++k) out.push_back({z[k - 1], z[k], seg_nodes});
    return out;
}

std::vector<Panel> upper_panels(const std::vector<double>& z, std::size_t tail_nodes, std::size_t seg_nodes) {
    // out[k] covers (z_k, z_{k+1}] for k < last, out[last] is the tail.
    std::vector<Panel> out;
    for (std::size_t k = 0; k + 1 < z.size(); ++k) out.push_back({z[k], z[k + 1], seg_nodes});
    out.push_back({z.back(), kUTail, tail_nodes});
    return out;
}

template <typename F>
double integrate_panel(const Panel& p, F&& f) {
    if (!(p.b > p.a)) return 0.0;
    return numeric::integrate(f, p.a, p.b, p.nodes);
}

// P(Y_d <= y, D = d | z) for every z in the grid, at one y.
struct SubdistColumn {
    std::vector<double> d1;
    std::vector<double> d0;
};

template <typename G1>
SubdistColumn subdist_column(double y, double rho, const std::vector<double>& z, const std::vector<Panel>& lo,
                             const std::vector<Panel>& hi, const G1& g1) {
    const std::size_t nz = z.size();
    SubdistColumn col{std::vector<double>(nz), std::vector<double>(nz)};
    double acc = 0.0;
    for (std::size_t k = 0; k < nz; ++k) {
        acc += integrate_panel(lo[k], [&](double u) { return g1(y - rho * u) * normal_pdf(u); });
        col.d1[k] = acc;
    }
    acc = 0.0;
    for (std::size_t k = nz; k-- > 0;) {
        acc += integrate_panel(hi[k], [&](double u) { return normal_cdf(y - rho * u) * normal_pdf(u); });
        col.d0[k] = acc;
    }
    return col;
}

double rel_change(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-3); }

void require_y_grid(const DgpSpec& spec) {
    if (!spec.y_grid || !spec.delta_grid) throw ConfigError("DgpSpec needs y and delta grids");
}

}  // namespace

GridPtr standard_y_grid() {
    static const GridPtr grid = make_grid(ValueGrid::uniform(-6.0, 16.0, 0.05));
    return grid;
}

GridPtr standard_delta_grid() {
    static const GridPtr grid = make_grid(ValueGrid::uniform(-1.0, 16.0, 0.05));
    return grid;
}

DgpSpec DgpSpec::standard(double rho, double z_half_width, double dof) {
    DgpSpec spec;
    spec.rho = rho;
    spec.z_half_width = z_half_width;
    spec.dof = dof;
    spec.y_grid = standard_y_grid();
    spec.delta_grid = standard_delta_grid();
    return spec;
}

void DgpSpec::validate() const {
    require_y_grid(*this);
    const double rho_hi = misspecified ? 1.0 : 0.0;
    if (!(rho >= -1.0 && rho <= rho_hi)) {
        throw ConfigError(misspecified ? "rho must lie in [-1, 1]" : "rho must lie in [-1, 0]");
    }
    if (!(z_half_width > 0.0) || !std::isfinite(z_half_width)) throw ConfigError("zbar must be positive");
    if (z_half_width >= kUTail) throw ConfigError("zbar must be below 9");
    if (!(dof >= 1.0) || !std::isfinite(dof)) throw ConfigError("dof must be at least 1");
    if (effect_sign != 1 && effect_sign != -1) throw ConfigError("effect_sign must be +1 or -1");
    if (effect_sign == -1 && !misspecified) throw ConfigError("effect_sign = -1 requires misspecified = true");
    if (z_grid_size < 1) throw ConfigError("z_grid_size must be positive");
    if (quadrature_nodes < 8) throw ConfigError("quadrature_nodes must be at least 8");
}

std::vector<double> DgpSpec::z_points() const {
    if (z_grid_size == 1) return {0.0};
    std::vector<double> z(z_grid_size);
    const double step = 2.0 * z_half_width / static_cast<double>(z_grid_size - 1);
    for (std::size_t k = 0; k < z_grid_size; ++k) z[k] = -z_half_width + static_cast<double>(k) * step;
    z.back() = z_half_width;
    return z;
}

std::string z_label(double z) {
    if (std::abs(z) < 1e-12) z = 0.0;
    std::ostringstream out;
    out << std::setprecision(10) << z;
    return out.str();
}

ObservedLaw build_observed_law(const DgpSpec& spec) {
    spec.validate();
    const ValueGrid& yg = *spec.y_grid;
    const std::vector<double> z = spec.z_points();
    const std::size_t nz = z.size();
    const std::size_t ny = yg.size();
    const std::size_t n = spec.quadrature_nodes;
    const std::size_t seg = std::max<std::size_t>(16, n / 16);

    const double reach = std::abs(spec.rho) * kUTail + 1.0;
    const ConvTable table(yg.front() - reach, yg.back() + reach, spec.effect_sign, spec.dof, n);

    const auto lo = lower_panels(z, n, seg);
    const auto hi = upper_panels(z, n, seg);
    std::vector<SubdistColumn> cols(ny);
    numeric::parallel_for(ny, [&](std::size_t i) { cols[i] = subdist_column(yg[i], spec.rho, z, lo, hi, table); });

    // Convergence probe: doubled nodes everywhere and the convolution
    // evaluated directly instead of through the table.
    {
        const auto lo2 = lower_panels(z, 2 * n, 2 * seg);
        const auto hi2 = upper_panels(z, 2 * n, 2 * seg);
        const auto direct = [&](double t) { return conv_cdf(t, 1.0, spec.effect_sign, spec.dof, 2 * n); };
        for (double frac : {0.25, 0.4, 0.6}) {
            const auto i = static_cast<std::size_t>(frac * static_cast<double>(ny - 1));
            const SubdistColumn ref = subdist_column(yg[i], spec.rho, z, lo2, hi2, direct);
            for (std::size_t k : {std::size_t{0}, nz / 2, nz - 1}) {
                const double c1 = rel_change(cols[i].d1[k], ref.d1[k]);
                const double c0 = rel_change(cols[i].d0[k], ref.d0[k]);
                if (c1 > kConvergenceTol || c0 > kConvergenceTol) {
                    std::ostringstream msg;
                    msg << "quadrature did not converge at y = " << yg[i] << ", z = " << z[k]
                        << ": relative change " << std::max(c0, c1) << " with doubled nodes";
                    throw NumericalError(msg.str());
                }
            }
        }
    }

    GridPtr grid = spec.y_grid;
    std::vector<std::string> labels(nz);
    std::vector<double> prop(nz);
    std::vector<StepCdf> cdf0;
    std::vector<StepCdf> cdf1;
    cdf0.reserve(nz);
    cdf1.reserve(nz);
    for (std::size_t k = 0; k < nz; ++k) {
        labels[k] = z_label(z[k]);
        prop[k] = normal_cdf(z[k]);
        const double m1 = prop[k];
        const double m0 = 1.0 - prop[k];
        std::vector<double> v0(ny);
        std::vector<double> v1(ny);
        for (std::size_t i = 0; i < ny; ++i) {
            v0[i] = std::clamp(cols[i].d0[k] / m0, 0.0, 1.0);
            v1[i] = std::clamp(cols[i].d1[k] / m1, 0.0, 1.0);
            if (!std::isfinite(v0[i]) || !std::isfinite(v1[i])) throw NumericalError("non-finite conditional CDF");
        }
        cdf0.emplace_back(grid, std::move(v0));
        cdf1.emplace_back(grid, std::move(v1));
    }
    return ObservedLaw(grid, std::move(labels), std::move(prop), std::move(cdf0), std::move(cdf1));
}

DgpTruth build_truth(const DgpSpec& spec, std::span<const YPair> pairs) {
    spec.validate();
    const ValueGrid& yg = *spec.y_grid;
    const ValueGrid& dg = *spec.delta_grid;
    const double sigma = std::sqrt(1.0 + spec.rho * spec.rho);
    const int s = spec.effect_sign;
    const double k = spec.dof;
    const std::size_t n = spec.quadrature_nodes;

    std::vector<double> f0(yg.size());
    std::vector<double> f1(yg.size());
    numeric::parallel_for(yg.size(), [&](std::size_t i) {
        f0[i] = normal_cdf(yg[i] / sigma);
        f1[i] = std::clamp(conv_cdf(yg[i], sigma, s, k, n), 0.0, 1.0);
    });

    std::vector<double> dte(dg.size());
    for (std::size_t i = 0; i < dg.size(); ++i) {
        const double d = dg[i];
        dte[i] = s == 1 ? chi2_cdf(d, k) : (d >= 0.0 ? 1.0 : 1.0 - chi2_cdf(-d, k));
    }

    const auto phi_sigma = [&](double x) { return normal_pdf(x / sigma) / sigma; };
    std::vector<double> joint(pairs.size());
    numeric::parallel_for(pairs.size(), [&](std::size_t j) {
        const auto [y0, y1] = pairs[j];
        const double lower_end = -12.0 * sigma;
        if (s == 1) {
            // P(Y0 <= y0, eta <= y1 - Y0), substituting Y0 = m - v^2 so the
            // chi-square CDF is smooth at the upper end.
            const double m = std::min(y0, y1);
            if (m <= lower_end) {
                joint[j] = 0.0;
                return;
            }
            joint[j] = numeric::integrate(
                [&](double v) { return phi_sigma(m - v * v) * chi2_cdf(y1 - m + v * v, k) * 2.0 * v; }, 0.0,
                std::sqrt(m - lower_end), n);
        } else {
            double val = normal_cdf(std::min(y0, y1) / sigma);
            if (y0 > y1) {
                val += numeric::integrate(
                    [&](double v) { return phi_sigma(y1 + v * v) * (1.0 - chi2_cdf(v * v, k)) * 2.0 * v; }, 0.0,
                    std::sqrt(y0 - y1), n);
            }
            joint[j] = val;
        }
        joint[j] = std::clamp(joint[j], 0.0, 1.0);
    });

    return DgpTruth{StepCdf(spec.y_grid, std::move(f0)), StepCdf(spec.y_grid, std::move(f1)),
                    std::vector<YPair>(pairs.begin(), pairs.end()), std::move(joint),
                    StepCdf(spec.delta_grid, std::move(dte))};
}

namespace {

constexpr std::size_t kChunk = 1u << 16;

struct Draw {
    double u;
    double y0;
    double y1;
};

std::size_t bin_of(const ValueGrid& g, double v) {
    const auto pts = g.points();
    return static_cast<std::size_t>(std::lower_bound(pts.begin(), pts.end(), v) - pts.begin());
}

std::vector<double> cumulative(const std::vector<std::uint64_t>& hist, std::size_t n, double total) {
    std::vector<double> out(n);
    std::uint64_t acc = 0;
    for (std::size_t i = 0; i < n; ++i) {
        acc += hist[i];
        out[i] = total > 0.0 ? static_cast<double>(acc) / total : 0.0;
    }
    return out;
}

}  // namespace

MonteCarloResult monte_carlo_law(const DgpSpec& spec, std::size_t draws, std::uint64_t seed,
                                 std::span<const YPair> pairs) {
    spec.validate();
    if (draws == 0) throw ConfigError("monte_carlo_law needs at least one draw");
    const ValueGrid& yg = *spec.y_grid;
    const ValueGrid& dg = *spec.delta_grid;
    const std::size_t ny = yg.size();

    std::vector<Draw> sample(draws);
    const std::size_t chunks = (draws + kChunk - 1) / kChunk;
    numeric::parallel_for(chunks, [&](std::size_t c) {
        std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                          static_cast<std::uint32_t>(c)};
        std::mt19937_64 eng(seq);
        std::normal_distribution<double> normal(0.0, 1.0);
        std::chi_squared_distribution<double> chi2(spec.dof);
        const std::size_t end = std::min(draws, (c + 1) * kChunk);
        for (std::size_t i = c * kChunk; i < end; ++i) {
            const double u = normal(eng);
            const double eps = normal(eng);
            const double eta = chi2(eng);
            const double y0 = spec.rho * u + eps;
            sample[i] = {u, y0, y0 + spec.effect_sign * eta};
        }
    });

    // Truths from the full sample.
    std::vector<std::uint64_t> h0(ny + 1, 0), h1(ny + 1, 0), hd(dg.size() + 1, 0);
    for (const Draw& d : sample) {
        ++h0[bin_of(yg, d.y0)];
        ++h1[bin_of(yg, d.y1)];
        ++hd[bin_of(dg, d.y1 - d.y0)];
    }
    const double total = static_cast<double>(draws);
    std::vector<double> joint(pairs.size(), 0.0);
    for (std::size_t j = 0; j < pairs.size(); ++j) {
        std::uint64_t c = 0;
        for (const Draw& d : sample) c += (d.y0 <= pairs[j].first && d.y1 <= pairs[j].second) ? 1 : 0;
        joint[j] = static_cast<double>(c) / total;
    }
    DgpTruth truth{StepCdf(spec.y_grid, cumulative(h0, ny, total)), StepCdf(spec.y_grid, cumulative(h1, ny, total)),
                   std::vector<YPair>(pairs.begin(), pairs.end()), std::move(joint),
                   StepCdf(spec.delta_grid, cumulative(hd, dg.size(), total))};

    // Conditional laws: sort by U; the treated at z form a prefix.
    std::vector<std::size_t> order(draws);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return sample[a].u < sample[b].u; });

    const std::vector<double> z = spec.z_points();
    std::vector<std::uint64_t> treated1(ny + 1, 0), treated0(ny + 1, 0);
    std::size_t pos = 0;
    std::vector<std::string> labels;
    std::vector<double> prop;
    std::vector<StepCdf> cdf0, cdf1;
    for (double zk : z) {
        while (pos < draws && sample[order[pos]].u <= zk) {
            const Draw& d = sample[order[pos]];
            ++treated1[bin_of(yg, d.y1)];
            ++treated0[bin_of(yg, d.y0)];
            ++pos;
        }
        std::vector<std::uint64_t> untreated0(ny + 1);
        for (std::size_t i = 0; i <= ny; ++i) untreated0[i] = h0[i] - treated0[i];
        const double n1 = static_cast<double>(pos);
        const double n0 = total - n1;
        labels.push_back(z_label(zk));
        prop.push_back(n1 / total);
        cdf1.emplace_back(spec.y_grid, cumulative(treated1, ny, n1));
        cdf0.emplace_back(spec.y_grid, cumulative(untreated0, ny, n0));
    }
    return {ObservedLaw(spec.y_grid, std::move(labels), std::move(prop), std::move(cdf0), std::move(cdf1)),
            std::move(truth)};
}

}  // namespace trisys
