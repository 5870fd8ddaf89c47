// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <vector>

#include "trisys/dgp.hpp"
#include "trisys/grid.hpp"

namespace trisys::testing {

inline GridPtr grid_of(std::vector<double> pts) { return make_grid(ValueGrid(std::move(pts))); }

inline StepCdf cdf_of(const GridPtr& g, std::vector<double> v) { return StepCdf(g, std::move(v)); }

// Outcomes independent of selection: P(y | d, z) = F_d(y) at every z.
inline ObservedLaw independent_law(const GridPtr& g, const std::vector<double>& f0, const std::vector<double>& f1,
                                   const std::vector<double>& p) {
    std::vector<std::string> labels;
    std::vector<StepCdf> c0, c1;
    for (std::size_t i = 0; i < p.size(); ++i) {
        labels.push_back(std::to_string(i));
        c0.emplace_back(g, f0);
        c1.emplace_back(g, f1);
    }
    return ObservedLaw(g, labels, p, c0, c1);
}

// The reference design with its standard grids.
inline DgpSpec design(double rho = -0.75, double zbar = 1.0, std::size_t nz = 41) {
    DgpSpec spec = DgpSpec::standard(rho, zbar);
    spec.z_grid_size = nz;
    return spec;
}

// Coarser grids for tests that only need the shape of the design.
inline DgpSpec small_design(double rho = -0.75, double zbar = 1.0, std::size_t nz = 9) {
    DgpSpec spec = DgpSpec::standard(rho, zbar);
    spec.z_grid_size = nz;
    spec.y_grid = make_grid(ValueGrid::uniform(-6.0, 16.0, 0.1));
    spec.delta_grid = make_grid(ValueGrid::uniform(-1.0, 12.0, 0.1));
    return spec;
}

}  // namespace trisys::testing
