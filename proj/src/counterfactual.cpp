// SPDX-License-Identifier: Apache-2.0
#include "trisys/counterfactual.hpp"

#include <algorithm>

namespace trisys {

std::string_view to_string(BandKind kind) {
    switch (kind) {
        case BandKind::L01Wst: return "L01_WST";
        case BandKind::U01Wst: return "U01_WST";
        case BandKind::L10Wst: return "L10_WST";
        case BandKind::U10Wst: return "U10_WST";
        case BandKind::L10Sm: return "L10_SM";
        case BandKind::U01Sm: return "U01_SM";
        case BandKind::L01Mtr: return "L01_MTR";
        case BandKind::U10Mtr: return "U10_MTR";
    }
    return "?";
}

namespace {

bool is_01(BandKind kind) {
    return kind == BandKind::L01Wst || kind == BandKind::U01Wst || kind == BandKind::U01Sm ||
           kind == BandKind::L01Mtr;
}

CounterfactualBand make_band(const ObservedLaw& law, std::size_t zi, BandKind kind, std::vector<double> raw) {
    const double p = law.propensity(zi);
    const double cap = is_01(kind) ? p : 1.0 - p;
    CounterfactualBand band{law.z_label(zi), kind, raw, std::move(raw)};
    for (double& v : band.values) v = std::clamp(v, 0.0, std::max(cap, 0.0));
    return band;
}

// Raw L01_WST and L10_WST; the other worst bands are fixed offsets of these.
std::vector<double> raw_l01_wst(const ObservedLaw& law, std::size_t zi) {
    const StepCdf& lim0 = law.limit_cdf_at_plow(0);
    const StepCdf& c0 = law.cond_cdf(0, zi);
    const double pl = law.p_low();
    const double p = law.propensity(zi);
    std::vector<double> out(c0.size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = lim0[i] * (1.0 - pl) - c0[i] * (1.0 - p);
    return out;
}

std::vector<double> raw_l10_wst(const ObservedLaw& law, std::size_t zi) {
    const StepCdf& lim1 = law.limit_cdf_at_pbar(1);
    const StepCdf& c1 = law.cond_cdf(1, zi);
    const double pb = law.p_bar();
    const double p = law.propensity(zi);
    std::vector<double> out(c1.size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = lim1[i] * pb - c1[i] * p;
    return out;
}

}  // namespace

std::vector<double> observed_subdist(const ObservedLaw& law, int d, std::size_t zi) {
    const StepCdf& c = law.cond_cdf(d, zi);
    const double mass = d == 1 ? law.propensity(zi) : 1.0 - law.propensity(zi);
    std::vector<double> out(c.size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = c[i] * mass;
    return out;
}

std::array<CounterfactualBand, 4> worst_bands(const ObservedLaw& law, std::size_t zi) {
    std::vector<double> l01 = raw_l01_wst(law, zi);
    std::vector<double> l10 = raw_l10_wst(law, zi);
    std::vector<double> u01(l01);
    std::vector<double> u10(l10);
    for (double& v : u01) v += law.p_low();
    for (double& v : u10) v += 1.0 - law.p_bar();
    return {make_band(law, zi, BandKind::L01Wst, std::move(l01)), make_band(law, zi, BandKind::U01Wst, std::move(u01)),
            make_band(law, zi, BandKind::L10Wst, std::move(l10)), make_band(law, zi, BandKind::U10Wst, std::move(u10))};
}

std::array<CounterfactualBand, 2> nsm_bands(const ObservedLaw& law, std::size_t zi) {
    const double p = law.propensity(zi);
    const double pb = law.p_bar();
    const double pl = law.p_low();
    const std::size_t n = law.y_grid().size();

    // L10_SM: slope of P(y, 1 | .) between z and the top of the propensity
    // range, scaled by the mass of D = 0 at z.
    std::vector<double> l10(n, 0.0);
    if (pb - p >= kDegenerateGap) {
        const StepCdf& lim1 = law.limit_cdf_at_pbar(1);
        const StepCdf& c1 = law.cond_cdf(1, zi);
        for (std::size_t i = 0; i < n; ++i) l10[i] = (lim1[i] * pb - c1[i] * p) / (pb - p) * (1.0 - p);
    }

    // U01_SM: slope of P(y, 0 | .) between the bottom of the propensity range
    // and z, scaled by the mass of D = 1 at z.
    std::vector<double> u01(n, p);
    if (p - pl >= kDegenerateGap) {
        const StepCdf& lim0 = law.limit_cdf_at_plow(0);
        const StepCdf& c0 = law.cond_cdf(0, zi);
        for (std::size_t i = 0; i < n; ++i) u01[i] = (lim0[i] * (1.0 - pl) - c0[i] * (1.0 - p)) / (p - pl) * p;
    }
    return {make_band(law, zi, BandKind::L10Sm, std::move(l10)), make_band(law, zi, BandKind::U01Sm, std::move(u01))};
}

std::array<CounterfactualBand, 2> mtr_bands(const ObservedLaw& law, std::size_t zi) {
    std::vector<double> l01 = raw_l01_wst(law, zi);
    std::vector<double> u10 = raw_l10_wst(law, zi);
    const StepCdf& lim1_low = law.limit_cdf_at_plow(1);
    const StepCdf& lim0_bar = law.limit_cdf_at_pbar(0);
    for (std::size_t i = 0; i < l01.size(); ++i) {
        l01[i] += lim1_low[i] * law.p_low();
        u10[i] += lim0_bar[i] * (1.0 - law.p_bar());
    }
    return {make_band(law, zi, BandKind::L01Mtr, std::move(l01)), make_band(law, zi, BandKind::U10Mtr, std::move(u10))};
}

RegimeBands regime_bands(const ObservedLaw& law, Regime regime, std::size_t zi) {
    auto worst = worst_bands(law, zi);
    RegimeBands out{std::move(worst[0].values), std::move(worst[1].values), std::move(worst[2].values),
                    std::move(worst[3].values)};
    if (imposes_nsm(regime)) {
        auto sm = nsm_bands(law, zi);
        out.l10 = std::move(sm[0].values);
        out.u01 = std::move(sm[1].values);
    }
    if (imposes_mtr(regime)) {
        auto mtr = mtr_bands(law, zi);
        out.l01 = std::move(mtr[0].values);
        out.u10 = std::move(mtr[1].values);
    }
    return out;
}

}  // namespace trisys
