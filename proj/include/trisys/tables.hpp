// SPDX-License-Identifier: Apache-2.0
//
// The six reference tables of the simulation design:
//
//   table0  quantile bounds for F0, F1 and the DTE, q in {.25, .5, .75}
//   table1  joint CDF bounds on a 5 x 7 panel of (y0, y1), all regimes
//   table2  F0 bounds under NSM_MTR across instrument widths
//   table3  F1 bounds under NSM_MTR across instrument widths
//   table4  DTE bounds under NSM_MTR across instrument widths
//   table5  DTE bounds under NSM_MTR across rho
//
// TableSettings::reference() fixes the discretization the reference values
// were computed with (see the README): the two instrument values -zbar and
// zbar, outcomes on [-4, 8] with kernels restricted to that range, and a
// wider outcome grid for the joint panel, whose columns reach y1 = 9.
#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "trisys/copula.hpp"
#include "trisys/grid.hpp"

namespace trisys {

struct TableSettings {
    double rho = -0.75;
    double z_half_width = 1.0;
    double dof = 2.0;
    std::vector<double> z_half_widths{2.0, 1.5, 1.0, 0.5};
    std::vector<double> rhos{-0.25, -0.5, -0.75};
    /// Rows of tables 0 and 1 (the truth row is always present).
    std::vector<Regime> regimes{kAllRegimes, kAllRegimes + 6};
    std::size_t z_grid_size = 2;
    std::size_t quadrature_nodes = 256;
    GridPtr y_grid;
    GridPtr joint_y_grid;
    GridPtr delta_grid;
    /// Grid the DTE bounds are inverted on for table 0.
    GridPtr quantile_delta_grid;
    KernelDomain domain = KernelDomain::GridOnly;

    static TableSettings reference();
};

struct TableCell {
    double lower = 0.0;
    double upper = 0.0;
    /// A single value (truth) rather than an interval.
    bool point = false;
};

struct TableRow {
    std::vector<std::string> keys;
    std::vector<TableCell> cells;
};

struct Table {
    std::string name;
    std::string caption;
    std::vector<std::string> key_columns;
    std::vector<std::string> value_columns;
    std::vector<TableRow> rows;

    /// Cell at the row whose keys equal `keys` and the named column; throws
    /// ConfigError when absent.
    const TableCell& at(const std::vector<std::string>& keys, const std::string& column) const;
};

Table table0(const TableSettings& s);
Table table1(const TableSettings& s);
Table table2(const TableSettings& s);
Table table3(const TableSettings& s);
Table table4(const TableSettings& s);
Table table5(const TableSettings& s);

std::vector<Table> all_tables(const TableSettings& s);

/// Rounded rendering: two decimals, "[a, b]" intervals, "inf)" for a
/// right-infinite end.
std::string format_cell_rounded(const TableCell& cell);

/// Wide CSV with rounded cells.
std::string table_to_csv(const Table& table);
/// Long CSV (keys..., column, lower, upper) at full precision.
std::string table_to_full_csv(const Table& table);
/// Both renderings in one JSON document.
std::string table_to_json(const Table& table);

/// Label used for a numeric key or column ("0.25", "-1", "1.5").
std::string key_label(double x);

}  // namespace trisys
