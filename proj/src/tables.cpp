// SPDX-License-Identifier: Apache-2.0
#include "trisys/tables.hpp"

#include <cmath>
#include <cstdio>
#include <limits>

#include <json.hpp>

#include "trisys/dgp.hpp"
#include "trisys/errors.hpp"
#include "trisys/io.hpp"
#include "trisys/sharp_bounds.hpp"

namespace trisys {

namespace {

const double kQuantiles[] = {0.25, 0.5, 0.75};
const double kJointY0[] = {-1, 1, 3, 5, 7};
const double kJointY1[] = {-3, -1, 1, 3, 5, 7, 9};
const double kMarginalY[] = {-4, -2, 0, 2, 4, 6, 8};
const double kDeltas[] = {1, 3, 5, 7, 9};

// Row label used by the reference tables.
std::string regime_label(Regime r) {
    switch (r) {
        case Regime::Worst: return "Worst";
        case Regime::Nsm: return "NSM";
        case Regime::Cpqd: return "CPQD";
        case Regime::Mtr: return "MTR";
        case Regime::NsmCpqd: return "NSM+CPQD";
        case Regime::NsmMtr: return "NSM+MTR";
    }
    return "?";
}

DgpSpec make_spec(const TableSettings& s, double rho, double zbar, const GridPtr& y_grid, const GridPtr& delta_grid) {
    DgpSpec spec = DgpSpec::standard(rho, zbar, s.dof);
    spec.z_grid_size = s.z_grid_size;
    spec.quadrature_nodes = s.quadrature_nodes;
    spec.y_grid = y_grid;
    spec.delta_grid = delta_grid;
    spec.validate();
    return spec;
}

double at_point(const ValueGrid& grid, std::span<const double> v, double x) {
    const std::ptrdiff_t i = grid.floor_index(x);
    return i < 0 ? 0.0 : v[static_cast<std::size_t>(i)];
}

TableCell point(double v) { return {v, v, true}; }

TableCell true_quantile(const StepCdf& f, double q) {
    const std::vector<double> v(f.values().begin(), f.values().end());
    MarginalBound b{Target::F0, Regime::Worst, f.grid_ptr(), v, v};
    return point(quantile_bounds(b, q).lower);
}

TableCell interval(const QuantileBound& q) { return {q.lower, q.upper, false}; }

bool has_regime(const TableSettings& s, Regime r) {
    for (Regime x : s.regimes) {
        if (x == r) return true;
    }
    return false;
}

// Marginal and DTE rows shared by tables 2-5: one NSM_MTR column per design.
struct Column {
    std::string label;
    MarginalBound f0;
    MarginalBound f1;
    DteBound dte;
    DgpTruth truth;
};

Column nsm_mtr_column(const TableSettings& s, double rho, double zbar, std::string label) {
    const DgpSpec spec = make_spec(s, rho, zbar, s.y_grid, s.delta_grid);
    const ObservedLaw law = build_observed_law(spec);
    return Column{std::move(label), marginal_bounds(law, Regime::NsmMtr, Target::F0),
                  marginal_bounds(law, Regime::NsmMtr, Target::F1),
                  dte_bounds(law, Regime::NsmMtr, s.delta_grid, s.domain), build_truth(spec, {})};
}

enum class Series { F0, F1, Dte };

Table series_table(std::string name, std::string caption, std::string key, const std::vector<Column>& cols,
                   Series series, std::span<const double> xs) {
    Table t;
    t.name = std::move(name);
    t.caption = std::move(caption);
    t.key_columns = {std::move(key)};
    t.value_columns.push_back("True");
    for (const Column& c : cols) t.value_columns.push_back(c.label);
    for (double x : xs) {
        TableRow row;
        row.keys = {key_label(x)};
        const Column& first = cols.front();
        const StepCdf& truth = series == Series::F0 ? first.truth.f0 : series == Series::F1 ? first.truth.f1 : first.truth.dte;
        row.cells.push_back(point(truth(x)));
        for (const Column& c : cols) {
            if (series == Series::Dte) {
                row.cells.push_back({at_point(*c.dte.delta_grid, c.dte.lower, x),
                                     at_point(*c.dte.delta_grid, c.dte.upper, x), false});
            } else {
                const MarginalBound& b = series == Series::F0 ? c.f0 : c.f1;
                row.cells.push_back({at_point(*b.grid, b.lower, x), at_point(*b.grid, b.upper, x), false});
            }
        }
        t.rows.push_back(std::move(row));
    }
    return t;
}

std::vector<Column> zbar_columns(const TableSettings& s) {
    std::vector<Column> cols;
    for (double zbar : s.z_half_widths) cols.push_back(nsm_mtr_column(s, s.rho, zbar, "z=" + key_label(zbar)));
    return cols;
}

std::vector<Column> rho_columns(const TableSettings& s) {
    std::vector<Column> cols;
    for (double rho : s.rhos) cols.push_back(nsm_mtr_column(s, rho, s.z_half_width, "rho=" + key_label(rho)));
    return cols;
}

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

std::string fixed2(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", x);
    std::string s = buf;
    if (s == "-0.00") s = "0.00";
    return s;
}

}  // namespace

TableSettings TableSettings::reference() {
    TableSettings s;
    s.y_grid = make_grid(ValueGrid::uniform(-4.0, 8.0, 0.05));
    s.joint_y_grid = standard_y_grid();
    s.delta_grid = standard_delta_grid();
    s.quantile_delta_grid = make_grid(ValueGrid::uniform(0.0, 16.0, 0.05));
    return s;
}

const TableCell& Table::at(const std::vector<std::string>& keys, const std::string& column) const {
    std::size_t col = value_columns.size();
    for (std::size_t j = 0; j < value_columns.size(); ++j) {
        if (value_columns[j] == column) col = j;
    }
    if (col == value_columns.size()) throw ConfigError(name + " has no column " + column);
    for (const TableRow& row : rows) {
        if (row.keys == keys) return row.cells[col];
    }
    throw ConfigError(name + " has no such row");
}

std::string key_label(double x) { return io::format_number(x); }

Table table0(const TableSettings& s) {
    const DgpSpec spec = make_spec(s, s.rho, s.z_half_width, s.y_grid, s.quantile_delta_grid);
    const ObservedLaw law = build_observed_law(spec);
    const DgpTruth truth = build_truth(spec, {});

    Table t;
    t.name = "table0";
    t.caption = "True quantiles and bounds on the quantiles of Y0, Y1 and the DTE";
    t.key_columns = {"q", "regime"};
    t.value_columns = {"F0^-1(q)", "F1^-1(q)", "FD^-1(q)"};

    struct Bounds {
        Regime regime;
        MarginalBound f0;
        MarginalBound f1;
        DteBound dte;
    };
    std::vector<Bounds> bounds;
    for (Regime r : {Regime::Worst, Regime::Nsm, Regime::Mtr, Regime::NsmMtr}) {
        if (!has_regime(s, r)) continue;
        bounds.push_back({r, marginal_bounds(law, r, Target::F0), marginal_bounds(law, r, Target::F1),
                          dte_bounds(law, r, s.quantile_delta_grid, s.domain)});
    }
    for (double q : kQuantiles) {
        t.rows.push_back({{key_label(q), "True"},
                          {true_quantile(truth.f0, q), true_quantile(truth.f1, q), true_quantile(truth.dte, q)}});
        for (const Bounds& b : bounds) {
            t.rows.push_back({{key_label(q), regime_label(b.regime)},
                              {interval(quantile_bounds(b.f0, q)), interval(quantile_bounds(b.f1, q)),
                               interval(quantile_bounds(b.dte, q))}});
        }
    }
    return t;
}

Table table1(const TableSettings& s) {
    const DgpSpec spec = make_spec(s, s.rho, s.z_half_width, s.joint_y_grid, s.delta_grid);
    const ObservedLaw law = build_observed_law(spec);
    std::vector<YPair> pairs;
    for (double y0 : kJointY0) {
        for (double y1 : kJointY1) pairs.emplace_back(y0, y1);
    }
    const DgpTruth truth = build_truth(spec, pairs);

    Table t;
    t.name = "table1";
    t.caption = "True joint distribution F(y0, y1) and its bounds";
    t.key_columns = {"y0", "regime"};
    for (double y1 : kJointY1) t.value_columns.push_back("y1=" + key_label(y1));

    std::vector<std::pair<Regime, JointBound>> bounds;
    for (Regime r : kAllRegimes) {
        if (has_regime(s, r)) bounds.emplace_back(r, joint_bounds(law, r, pairs));
    }
    const std::size_t n1 = std::size(kJointY1);
    for (std::size_t a = 0; a < std::size(kJointY0); ++a) {
        TableRow truth_row{{key_label(kJointY0[a]), "True"}, {}};
        for (std::size_t b = 0; b < n1; ++b) truth_row.cells.push_back(point(truth.joint[a * n1 + b]));
        t.rows.push_back(std::move(truth_row));
        for (const auto& [r, jb] : bounds) {
            TableRow row{{key_label(kJointY0[a]), regime_label(r)}, {}};
            for (std::size_t b = 0; b < n1; ++b) {
                row.cells.push_back({jb.lower[a * n1 + b], jb.upper[a * n1 + b], false});
            }
            t.rows.push_back(std::move(row));
        }
    }
    return t;
}

Table table2(const TableSettings& s) {
    return series_table("table2", "Identification regions of F0(y) under NSM+MTR", "y", zbar_columns(s), Series::F0,
                        kMarginalY);
}

Table table3(const TableSettings& s) {
    return series_table("table3", "Identification regions of F1(y) under NSM+MTR", "y", zbar_columns(s), Series::F1,
                        kMarginalY);
}

Table table4(const TableSettings& s) {
    return series_table("table4", "Identification regions of the DTE under NSM+MTR for different zbar", "delta",
                        zbar_columns(s), Series::Dte, kDeltas);
}

Table table5(const TableSettings& s) {
    return series_table("table5", "Identification regions of the DTE under NSM+MTR for different rho", "delta",
                        rho_columns(s), Series::Dte, kDeltas);
}

std::vector<Table> all_tables(const TableSettings& s) {
    std::vector<Table> out;
    out.push_back(table0(s));
    out.push_back(table1(s));
    // Tables 2-4 share their columns.
    const std::vector<Column> cols = zbar_columns(s);
    out.push_back(series_table("table2", "Identification regions of F0(y) under NSM+MTR", "y", cols, Series::F0,
                               kMarginalY));
    out.push_back(series_table("table3", "Identification regions of F1(y) under NSM+MTR", "y", cols, Series::F1,
                               kMarginalY));
    out.push_back(series_table("table4", "Identification regions of the DTE under NSM+MTR for different zbar",
                               "delta", cols, Series::Dte, kDeltas));
    out.push_back(table5(s));
    return out;
}

std::string format_cell_rounded(const TableCell& cell) {
    if (cell.point) return fixed2(cell.lower);
    const auto end = [](double x) { return std::isinf(x) ? std::string("inf") : fixed2(x); };
    return "[" + end(cell.lower) + ", " + end(cell.upper) + (std::isinf(cell.upper) ? ")" : "]");
}

std::string table_to_csv(const Table& table) {
    std::string out;
    bool first = true;
    for (const auto& name : table.key_columns) {
        out += (first ? "" : ",") + csv_field(name);
        first = false;
    }
    for (const auto& name : table.value_columns) out += "," + csv_field(name);
    out += '\n';
    for (const TableRow& row : table.rows) {
        first = true;
        for (const auto& k : row.keys) {
            out += (first ? "" : ",") + csv_field(k);
            first = false;
        }
        for (const TableCell& c : row.cells) out += "," + csv_field(format_cell_rounded(c));
        out += '\n';
    }
    return out;
}

std::string table_to_full_csv(const Table& table) {
    std::string out;
    for (const auto& name : table.key_columns) out += csv_field(name) + ",";
    out += "column,lower,upper\n";
    for (const TableRow& row : table.rows) {
        for (std::size_t j = 0; j < row.cells.size(); ++j) {
            for (const auto& k : row.keys) out += csv_field(k) + ",";
            out += csv_field(table.value_columns[j]) + "," + io::format_number(row.cells[j].lower) + "," +
                   io::format_number(row.cells[j].upper) + "\n";
        }
    }
    return out;
}

std::string table_to_json(const Table& table) {
    nlohmann::json doc;
    doc["name"] = table.name;
    doc["caption"] = table.caption;
    doc["key_columns"] = table.key_columns;
    doc["value_columns"] = table.value_columns;
    doc["rows"] = nlohmann::json::array();
    for (const TableRow& row : table.rows) {
        nlohmann::json r;
        r["keys"] = row.keys;
        r["cells"] = nlohmann::json::array();
        for (const TableCell& c : row.cells) {
            // JSON has no infinity; the end is written as a string then.
            const auto num = [](double x) {
                return std::isfinite(x) ? nlohmann::json(x) : nlohmann::json(io::format_number(x));
            };
            r["cells"].push_back(
                {{"lower", num(c.lower)}, {"upper", num(c.upper)}, {"text", format_cell_rounded(c)}});
        }
        doc["rows"].push_back(std::move(r));
    }
    return doc.dump(2) + "\n";
}

}  // namespace trisys
