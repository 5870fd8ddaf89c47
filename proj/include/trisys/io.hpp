// SPDX-License-Identifier: Apache-2.0
//
// Serialization: the observables JSON schema, DgpSpec JSON, bound records in
// CSV / JSON, diagnostic reports and oracle verdicts, and atomic file output.
//
// Observables schema:
//   {"y_grid": [numbers], "z_grid": [labels],
//    "propensity": {z: number}, "cdf0": {z: [numbers]}, "cdf1": {z: [numbers]}}
// Labels may be strings or numbers; map keys are matched to labels exactly
// or, failing that, numerically.
#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "trisys/diagnostics.hpp"
#include "trisys/dgp.hpp"
#include "trisys/oracle.hpp"
#include "trisys/sharp_bounds.hpp"

namespace trisys::io {

/// Throws InputError naming the offending field. Probability invariants are
/// left to validate_observed_law.
ObservedLaw parse_observables(std::string_view text);
std::string observables_to_json(const ObservedLaw& law);

/// Fields: rho, z_half_width, dof, effect_sign, misspecified, z_grid_size,
/// quadrature_nodes, y_grid, delta_grid. Grids are either arrays of points
/// or {"lo", "hi", "step"}. Missing fields keep their defaults (standard
/// grids included). Throws InputError, or ConfigError from validate().
DgpSpec parse_dgp_spec(std::string_view text);
std::string dgp_spec_to_json(const DgpSpec& spec);

/// One bound at one coordinate. `x1` is used by joint records only.
struct BoundRecord {
    Target target = Target::F0;
    Regime regime = Regime::Worst;
    double x0 = 0.0;
    double x1 = 0.0;
    double lower = 0.0;
    double upper = 0.0;
};

void append_records(std::vector<BoundRecord>& out, const MarginalBound& bound);
void append_records(std::vector<BoundRecord>& out, const JointBound& bound);
void append_records(std::vector<BoundRecord>& out, Regime regime, const DteBound& bound);

/// Columns: target,regime,x0,x1,lower,upper. x1 is empty except for JOINT.
/// Numbers use the shortest round-trip representation.
std::string records_to_csv(std::span<const BoundRecord> records);
std::string records_to_json(std::span<const BoundRecord> records);

std::string validation_report_to_text(const ValidationReport& report);
std::string reports_to_json(std::span<const DiagnosticReport> reports);
std::string verdicts_to_json(std::span<const OracleVerdict> verdicts);

/// Shortest decimal that parses back to exactly `x`; "inf" / "-inf" / "nan"
/// for non-finite values.
std::string format_number(double x);

/// Writes to a temporary sibling and renames it over `path`.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);

std::string read_file(const std::filesystem::path& path);

}  // namespace trisys::io
