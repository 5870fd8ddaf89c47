// SPDX-License-Identifier: Apache-2.0
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "trisys/diagnostics.hpp"
#include "trisys/dgp.hpp"
#include "trisys/errors.hpp"
#include "trisys/io.hpp"
#include "trisys/oracle.hpp"
#include "trisys/sharp_bounds.hpp"
#include "trisys/tables.hpp"

namespace py = pybind11;
using namespace trisys;

namespace {

GridPtr uniform_grid(const std::tuple<double, double, double>& g) {
    return make_grid(ValueGrid::uniform(std::get<0>(g), std::get<1>(g), std::get<2>(g)));
}

std::vector<double> to_vector(std::span<const double> s) { return {s.begin(), s.end()}; }

py::dict marginal_dict(const MarginalBound& b) {
    py::dict d;
    d["target"] = std::string(to_string(b.target));
    d["regime"] = std::string(to_string(b.regime));
    d["grid"] = to_vector(b.grid->points());
    d["lower"] = b.lower;
    d["upper"] = b.upper;
    return d;
}

py::dict dte_dict(Regime regime, const DteBound& b) {
    py::dict d;
    d["regime"] = std::string(to_string(regime));
    d["grid"] = to_vector(b.delta_grid->points());
    d["lower"] = b.lower;
    d["upper"] = b.upper;
    d["raw_lower"] = b.raw_lower;
    d["raw_upper"] = b.raw_upper;
    return d;
}

py::dict report_dict(const DiagnosticReport& r) {
    py::list violations;
    for (const auto& v : r.violations) {
        py::dict item;
        item["where"] = v.where;
        item["y"] = v.y;
        item["magnitude"] = v.magnitude;
        violations.append(item);
    }
    py::dict d;
    d["test"] = std::string(to_string(r.test));
    d["tolerance"] = r.tolerance;
    d["max_violation"] = r.max_violation;
    d["violations"] = violations;
    d["passed"] = r.passed();
    return d;
}

py::dict table_dict(const Table& t) {
    py::list rows;
    for (const TableRow& row : t.rows) {
        py::list cells;
        for (const TableCell& c : row.cells) cells.append(py::make_tuple(c.lower, c.upper));
        py::dict r;
        r["keys"] = row.keys;
        r["cells"] = cells;
        rows.append(r);
    }
    py::dict d;
    d["name"] = t.name;
    d["caption"] = t.caption;
    d["key_columns"] = t.key_columns;
    d["value_columns"] = t.value_columns;
    d["rows"] = rows;
    return d;
}

}  // namespace

PYBIND11_MODULE(_trisys, m) {
    m.doc() = "Bounds on potential-outcome distributions in a binary-selection triangular system";

    py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
    py::register_exception<InputError>(m, "InputError", PyExc_ValueError);
    py::register_exception<NumericalError>(m, "NumericalError", PyExc_ArithmeticError);

    py::enum_<Regime>(m, "Regime")
        .value("WORST", Regime::Worst)
        .value("NSM", Regime::Nsm)
        .value("CPQD", Regime::Cpqd)
        .value("MTR", Regime::Mtr)
        .value("NSM_CPQD", Regime::NsmCpqd)
        .value("NSM_MTR", Regime::NsmMtr);
    m.def("parse_regime", [](const std::string& s) { return parse_regime(s); });

    py::enum_<Target>(m, "Target").value("F0", Target::F0).value("F1", Target::F1);

    py::class_<DgpSpec>(m, "DgpSpec")
        .def(py::init([](double rho, double zbar, double dof, std::size_t z_grid_size,
                         std::optional<std::tuple<double, double, double>> y_grid,
                         std::optional<std::tuple<double, double, double>> delta_grid, int effect_sign,
                         bool misspecified) {
                 DgpSpec s = DgpSpec::standard(rho, zbar, dof);
                 s.z_grid_size = z_grid_size;
                 if (y_grid) s.y_grid = uniform_grid(*y_grid);
                 if (delta_grid) s.delta_grid = uniform_grid(*delta_grid);
                 s.effect_sign = effect_sign;
                 s.misspecified = misspecified;
                 s.validate();
                 return s;
             }),
             py::arg("rho") = -0.75, py::arg("zbar") = 1.0, py::arg("dof") = 2.0, py::arg("z_grid_size") = 41,
             py::arg("y_grid") = py::none(), py::arg("delta_grid") = py::none(), py::arg("effect_sign") = 1,
             py::arg("misspecified") = false)
        .def_readonly("rho", &DgpSpec::rho)
        .def_readonly("zbar", &DgpSpec::z_half_width)
        .def_readonly("dof", &DgpSpec::dof)
        .def_readonly("z_grid_size", &DgpSpec::z_grid_size)
        .def("to_json", [](const DgpSpec& s) { return io::dgp_spec_to_json(s); })
        .def_static("from_json", [](const std::string& text) { return io::parse_dgp_spec(text); });

    py::class_<ObservedLaw>(m, "ObservedLaw")
        .def_property_readonly("y_grid", [](const ObservedLaw& l) { return to_vector(l.y_grid().points()); })
        .def_property_readonly("z_labels",
                               [](const ObservedLaw& l) { return std::vector<std::string>(l.z_labels().begin(), l.z_labels().end()); })
        .def_property_readonly("propensity", [](const ObservedLaw& l) { return to_vector(l.propensities()); })
        .def_property_readonly("p_bar", &ObservedLaw::p_bar)
        .def_property_readonly("p_low", &ObservedLaw::p_low)
        .def("cond_cdf", [](const ObservedLaw& l, int d, std::size_t zi) {
            if (d != 0 && d != 1) throw ConfigError("d must be 0 or 1");
            if (zi >= l.z_count()) throw ConfigError("instrument index out of range");
            return to_vector(l.cond_cdf(d, zi).values());
        })
        .def("to_json", [](const ObservedLaw& l) { return io::observables_to_json(l); })
        .def_static("from_json", [](const std::string& text) { return io::parse_observables(text); })
        .def("validate", [](const ObservedLaw& l) {
            py::list out;
            for (const Violation& v : validate_observed_law(l)) {
                py::dict d;
                d["invariant"] = v.invariant;
                d["d"] = v.d;
                d["z"] = v.z;
                d["y_index"] = v.y_index;
                d["detail"] = v.detail;
                out.append(d);
            }
            return out;
        });

    m.def("build_observed_law", &build_observed_law, py::arg("spec"), py::call_guard<py::gil_scoped_release>());

    m.def(
        "truth",
        [](const DgpSpec& spec, const std::vector<YPair>& pairs) {
            const DgpTruth t = build_truth(spec, pairs);
            py::dict d;
            d["y_grid"] = to_vector(t.f0.grid().points());
            d["f0"] = to_vector(t.f0.values());
            d["f1"] = to_vector(t.f1.values());
            d["joint"] = t.joint;
            d["delta_grid"] = to_vector(t.dte.grid().points());
            d["dte"] = to_vector(t.dte.values());
            return d;
        },
        py::arg("spec"), py::arg("pairs") = std::vector<YPair>{});

    m.def(
        "marginal_bounds",
        [](const ObservedLaw& law, Regime regime, Target target) {
            MarginalBound b;
            {
                py::gil_scoped_release release;
                b = marginal_bounds(law, regime, target);
            }
            return marginal_dict(b);
        },
        py::arg("law"), py::arg("regime"), py::arg("target"));

    m.def(
        "joint_bounds",
        [](const ObservedLaw& law, Regime regime, const std::vector<YPair>& pairs) {
            const JointBound b = joint_bounds(law, regime, pairs);
            py::dict d;
            d["regime"] = std::string(to_string(regime));
            d["pairs"] = b.pairs;
            d["lower"] = b.lower;
            d["upper"] = b.upper;
            return d;
        },
        py::arg("law"), py::arg("regime"), py::arg("pairs"));

    m.def(
        "dte_bounds",
        [](const ObservedLaw& law, Regime regime, std::tuple<double, double, double> delta_grid, bool grid_only) {
            DteBound b;
            {
                py::gil_scoped_release release;
                b = dte_bounds(law, regime, uniform_grid(delta_grid),
                               grid_only ? KernelDomain::GridOnly : KernelDomain::Extended);
            }
            return dte_dict(regime, b);
        },
        py::arg("law"), py::arg("regime"), py::arg("delta_grid") = std::make_tuple(-1.0, 16.0, 0.05),
        py::arg("grid_only") = false);

    m.def(
        "diagnose",
        [](const ObservedLaw& law, double tol, std::tuple<double, double, double> delta_grid) {
            const MarginalBound b0 = marginal_bounds(law, Regime::Worst, Target::F0);
            const MarginalBound b1 = marginal_bounds(law, Regime::Worst, Target::F1);
            const DteBound dte = dte_bounds(law, Regime::Mtr, uniform_grid(delta_grid));
            py::list out;
            out.append(report_dict(test_nsm(law, tol)));
            out.append(report_dict(test_mtr_dominance(b0, b1, tol)));
            out.append(report_dict(test_dte_crossing(dte, tol)));
            return out;
        },
        py::arg("law"), py::arg("tol") = kDefaultDiagnosticTolerance,
        py::arg("delta_grid") = std::make_tuple(-1.0, 16.0, 0.05));

    m.def(
        "tables",
        [](std::optional<double> rho, std::optional<double> zbar) {
            TableSettings s = TableSettings::reference();
            if (rho) s.rho = *rho;
            if (zbar) s.z_half_width = *zbar;
            std::vector<Table> tables;
            {
                py::gil_scoped_release release;
                tables = all_tables(s);
            }
            py::list out;
            for (const Table& t : tables) out.append(table_dict(t));
            return out;
        },
        py::arg("rho") = py::none(), py::arg("zbar") = py::none());

    m.def("format_cell", [](double lower, double upper) { return format_cell_rounded({lower, upper, lower == upper}); });
}
