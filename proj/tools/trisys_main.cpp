// SPDX-License-Identifier: Apache-2.0
//
// trisys: bounds on potential-outcome distributions in a binary-selection
// triangular system.
//
//   trisys tables   [--out DIR] [--rho R] [--zbar W] [--dof K] [--regimes L] [--format csv|json]
//   trisys bounds   --config OBS.json [--regimes L] [--out FILE] [--format csv|json] [--dense-joint]
//   trisys diagnose --config OBS_OR_SPEC.json [--tol X] [--out FILE]
//   trisys validate [--config SPEC.json] [--seed N] [--tol X] [--out FILE]
//   trisys simulate [--config SPEC.json] [--rho R] [--zbar W] [--dof K] --out FILE
//
// Exit codes: 0 ok, 2 invalid input, 3 diagnostics or oracle checks
// flagged, 4 numerical failure.
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "trisys/diagnostics.hpp"
#include "trisys/dgp.hpp"
#include "trisys/errors.hpp"
#include "trisys/io.hpp"
#include "trisys/oracle.hpp"
#include "trisys/sharp_bounds.hpp"
#include "trisys/tables.hpp"

namespace fs = std::filesystem;
using namespace trisys;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInput = 2;
constexpr int kExitFlagged = 3;
constexpr int kExitNumerical = 4;

struct RunConfig {
    std::string config;
    std::optional<double> rho;
    std::optional<double> zbar;
    std::optional<double> dof;
    std::string regimes;
    std::string out;
    std::string format = "csv";
    std::uint64_t seed = 20240601;
    bool dense_joint = false;
    bool grid_only = false;
    std::string delta_grid;
    std::optional<double> tol;
    std::size_t draws = 400000;
};

// Raised to leave a command with a specific exit code after reporting.
struct ExitWith {
    int code;
};

std::vector<Regime> parse_regimes(const std::string& list) {
    if (list.empty()) return {std::begin(kAllRegimes), std::end(kAllRegimes)};
    std::vector<Regime> out;
    std::stringstream ss(list);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (!item.empty()) out.push_back(parse_regime(item));
    }
    if (out.empty()) throw InputError("--regimes lists no regime");
    return out;
}

void emit(const RunConfig& cfg, const std::string& content) {
    if (cfg.out.empty() || cfg.out == "-") {
        std::cout << content;
    } else {
        io::write_file_atomic(cfg.out, content);
    }
}

DgpSpec spec_from(const RunConfig& cfg) {
    DgpSpec spec = cfg.config.empty() ? DgpSpec::standard(-0.75, 1.0) : io::parse_dgp_spec(io::read_file(cfg.config));
    if (cfg.rho) spec.rho = *cfg.rho;
    if (cfg.zbar) spec.z_half_width = *cfg.zbar;
    if (cfg.dof) spec.dof = *cfg.dof;
    spec.validate();
    return spec;
}

GridPtr parse_delta_grid(const std::string& text, const ValueGrid& y) {
    if (text.empty()) {
        const double w = y.back() - y.front();
        return make_grid(ValueGrid::uniform(-w, w, y.step()));
    }
    double lo = 0.0, hi = 0.0, step = 0.0;
    char c1 = 0, c2 = 0;
    std::istringstream in(text);
    if (!(in >> lo >> c1 >> hi >> c2 >> step) || c1 != ':' || c2 != ':') {
        throw InputError("--delta-grid expects lo:hi:step");
    }
    try {
        return make_grid(ValueGrid::uniform(lo, hi, step));
    } catch (const ConfigError& e) {
        throw InputError(std::string("--delta-grid: ") + e.what());
    }
}

void apply_table_config(TableSettings& s, const std::string& path) {
    const nlohmann::json doc = nlohmann::json::parse(io::read_file(path), nullptr, false);
    if (doc.is_discarded() || !doc.is_object()) throw InputError("table config must be a JSON object");
    const DgpSpec spec = io::parse_dgp_spec(doc.dump());
    s.rho = spec.rho;
    s.z_half_width = spec.z_half_width;
    s.dof = spec.dof;
    if (doc.contains("z_grid_size")) s.z_grid_size = spec.z_grid_size;
    if (doc.contains("quadrature_nodes")) s.quadrature_nodes = spec.quadrature_nodes;
    if (doc.contains("y_grid")) s.y_grid = spec.y_grid;
    if (doc.contains("delta_grid")) s.delta_grid = spec.delta_grid;
}

// Truth containment for the base design before any table is written.
std::vector<OracleVerdict> preflight(const TableSettings& s) {
    DgpSpec spec = DgpSpec::standard(s.rho, s.z_half_width, s.dof);
    spec.z_grid_size = s.z_grid_size;
    spec.quadrature_nodes = s.quadrature_nodes;
    spec.y_grid = s.y_grid;
    spec.delta_grid = s.delta_grid;
    const ObservedLaw law = build_observed_law(spec);
    const DgpTruth truth = build_truth(spec, {});
    std::vector<OracleVerdict> out;
    for (Regime r : kAllRegimes) {
        out.push_back(check_containment(marginal_bounds(law, r, Target::F0), truth));
        out.push_back(check_containment(marginal_bounds(law, r, Target::F1), truth));
        OracleVerdict v = check_containment(dte_bounds(law, r, s.delta_grid, s.domain), truth);
        v.check += " ";
        v.check += to_string(r);
        out.push_back(std::move(v));
    }
    return out;
}

int cmd_tables(const RunConfig& cfg) {
    TableSettings s = TableSettings::reference();
    if (!cfg.config.empty()) apply_table_config(s, cfg.config);
    if (cfg.rho) {
        s.rho = *cfg.rho;
        s.rhos = {*cfg.rho};
    }
    if (cfg.zbar) {
        s.z_half_width = *cfg.zbar;
        s.z_half_widths = {*cfg.zbar};
    }
    if (cfg.dof) s.dof = *cfg.dof;
    if (!cfg.regimes.empty()) s.regimes = parse_regimes(cfg.regimes);
    if (cfg.format != "csv" && cfg.format != "json") throw InputError("--format must be csv or json");

    const std::vector<OracleVerdict> checks = preflight(s);
    for (const OracleVerdict& v : checks) {
        if (!v.passed) {
            std::cerr << "pre-flight containment failed\n" << io::verdicts_to_json(checks);
            throw ExitWith{kExitNumerical};
        }
    }

    const fs::path dir = cfg.out.empty() ? fs::path(".") : fs::path(cfg.out);
    fs::create_directories(dir);
    for (const Table& t : all_tables(s)) {
        if (cfg.format == "csv") {
            io::write_file_atomic(dir / (t.name + ".csv"), table_to_csv(t));
            io::write_file_atomic(dir / (t.name + "_full.csv"), table_to_full_csv(t));
        } else {
            io::write_file_atomic(dir / (t.name + ".json"), table_to_json(t));
        }
    }
    return kExitOk;
}

ObservedLaw load_valid_law(const std::string& path) {
    const ObservedLaw law = io::parse_observables(io::read_file(path));
    const ValidationReport report = validate_observed_law(law);
    if (!report.empty()) {
        std::cerr << "observables failed validation:\n" << io::validation_report_to_text(report);
        throw ExitWith{kExitInput};
    }
    return law;
}

int cmd_bounds(const RunConfig& cfg) {
    if (cfg.config.empty()) throw InputError("bounds needs --config with an observables JSON file");
    if (cfg.format != "csv" && cfg.format != "json") throw InputError("--format must be csv or json");
    const ObservedLaw law = load_valid_law(cfg.config);
    const std::vector<Regime> regimes = parse_regimes(cfg.regimes);
    const ValueGrid& y = law.y_grid();
    const GridPtr delta = parse_delta_grid(cfg.delta_grid, y);
    const KernelDomain domain = cfg.grid_only ? KernelDomain::GridOnly : KernelDomain::Extended;

    std::vector<YPair> pairs;
    if (cfg.dense_joint) {
        for (double a : y.points()) {
            for (double b : y.points()) pairs.emplace_back(a, b);
        }
    } else {
        for (double a : {-1.0, 1.0, 3.0, 5.0, 7.0}) {
            for (double b : {-3.0, -1.0, 1.0, 3.0, 5.0, 7.0, 9.0}) pairs.emplace_back(a, b);
        }
    }

    std::vector<io::BoundRecord> records;
    for (Regime r : regimes) {
        io::append_records(records, marginal_bounds(law, r, Target::F0));
        io::append_records(records, marginal_bounds(law, r, Target::F1));
        io::append_records(records, joint_bounds(law, r, pairs));
        io::append_records(records, r, dte_bounds(law, r, delta, domain));
    }
    emit(cfg, cfg.format == "csv" ? io::records_to_csv(records) : io::records_to_json(records));
    return kExitOk;
}

bool looks_like_observables(const std::string& text) {
    const nlohmann::json doc = nlohmann::json::parse(text, nullptr, false);
    return doc.is_object() && doc.contains("cdf0");
}

int cmd_diagnose(const RunConfig& cfg) {
    const double tol = cfg.tol.value_or(kDefaultDiagnosticTolerance);
    std::optional<ObservedLaw> law;
    GridPtr delta;
    if (!cfg.config.empty() && looks_like_observables(io::read_file(cfg.config))) {
        law.emplace(load_valid_law(cfg.config));
        delta = parse_delta_grid(cfg.delta_grid, law->y_grid());
    } else {
        const DgpSpec spec = spec_from(cfg);
        law.emplace(build_observed_law(spec));
        delta = cfg.delta_grid.empty() ? spec.delta_grid : parse_delta_grid(cfg.delta_grid, law->y_grid());
    }
    std::vector<DiagnosticReport> reports;
    reports.push_back(test_nsm(*law, tol));
    reports.push_back(test_mtr_dominance(marginal_bounds(*law, Regime::Worst, Target::F0),
                                         marginal_bounds(*law, Regime::Worst, Target::F1), tol));
    reports.push_back(test_dte_crossing(dte_bounds(*law, Regime::Mtr, delta), tol));
    emit(cfg, io::reports_to_json(reports));
    for (const DiagnosticReport& r : reports) {
        if (!r.passed()) return kExitFlagged;
    }
    return kExitOk;
}

void validate_spec(const DgpSpec& spec, const RunConfig& cfg, std::vector<OracleVerdict>& out) {
    const double tol = cfg.tol.value_or(kContainmentTolerance);
    std::vector<YPair> pairs;
    for (double a : {-1.0, 1.0, 3.0, 5.0, 7.0}) {
        for (double b : {-3.0, -1.0, 1.0, 3.0, 5.0, 7.0, 9.0}) pairs.emplace_back(a, b);
    }
    const ObservedLaw law = build_observed_law(spec);
    const DgpTruth truth = build_truth(spec, pairs);
    std::ostringstream tag;
    tag << " [rho=" << spec.rho << " zbar=" << spec.z_half_width << "]";
    const auto push = [&](OracleVerdict v, std::string_view extra = {}) {
        v.check += extra;
        v.check += tag.str();
        out.push_back(std::move(v));
    };
    for (Regime r : kAllRegimes) {
        push(check_containment(marginal_bounds(law, r, Target::F0), truth, tol));
        push(check_containment(marginal_bounds(law, r, Target::F1), truth, tol));
        push(check_containment(joint_bounds(law, r, pairs), truth, tol));
        push(check_containment(dte_bounds(law, r, spec.delta_grid), truth, tol), std::string(" ") + std::string(to_string(r)));
    }
    // Analytic observables against a simulated sample of the same design.
    const MonteCarloResult mc = monte_carlo_law(spec, cfg.draws, cfg.seed);
    push(compare_laws(law, mc.law, 0.02));
}

int cmd_validate(const RunConfig& cfg) {
    std::vector<OracleVerdict> verdicts;
    if (!cfg.config.empty() || cfg.rho || cfg.zbar || cfg.dof) {
        validate_spec(spec_from(cfg), cfg, verdicts);
    } else {
        for (double rho : {-0.25, -0.5, -0.75}) {
            for (double zbar : {2.0, 1.5, 1.0, 0.5}) validate_spec(DgpSpec::standard(rho, zbar), cfg, verdicts);
        }
    }
    emit(cfg, io::verdicts_to_json(verdicts));
    for (const OracleVerdict& v : verdicts) {
        if (!v.passed) return kExitFlagged;
    }
    return kExitOk;
}

int cmd_simulate(const RunConfig& cfg) {
    DgpSpec spec = spec_from(cfg);
    emit(cfg, io::observables_to_json(build_observed_law(spec)));
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Bounds on potential-outcome distributions in a binary-selection triangular system"};
    app.require_subcommand(1);
    RunConfig cfg;

    const auto common = [&cfg](CLI::App* sub) {
        sub->add_option("--config", cfg.config, "Input JSON (observables or DgpSpec)");
        sub->add_option("--out", cfg.out, "Output file or directory");
        sub->add_option("--tol", cfg.tol, "Tolerance override");
    };
    const auto design = [&cfg](CLI::App* sub) {
        sub->add_option("--rho", cfg.rho, "Outcome-selection loading");
        sub->add_option("--zbar", cfg.zbar, "Instrument half-width");
        sub->add_option("--dof", cfg.dof, "Chi-square degrees of freedom of the effect");
    };

    CLI::App* tables = app.add_subcommand("tables", "Write table0.csv ... table5.csv");
    common(tables);
    design(tables);
    tables->add_option("--regimes", cfg.regimes, "Comma-separated rows for tables 0 and 1");
    tables->add_option("--format", cfg.format, "csv or json");
    tables->add_option("--seed", cfg.seed, "Seed (tables are analytic; recorded for reproducibility)");

    CLI::App* bounds = app.add_subcommand("bounds", "Bounds for an observables JSON file");
    common(bounds);
    bounds->add_option("--regimes", cfg.regimes, "Comma-separated regimes (default all)");
    bounds->add_option("--format", cfg.format, "csv or json");
    bounds->add_option("--delta-grid", cfg.delta_grid, "lo:hi:step for the DTE");
    bounds->add_flag("--dense-joint", cfg.dense_joint, "Joint bounds on the full outcome cross grid");
    bounds->add_flag("--grid-only", cfg.grid_only, "Restrict the DTE kernels to the outcome grid range");

    CLI::App* diagnose = app.add_subcommand("diagnose", "Testable implications of NSM and MTR");
    common(diagnose);
    design(diagnose);
    diagnose->add_option("--delta-grid", cfg.delta_grid, "lo:hi:step for the DTE crossing test");

    CLI::App* validate = app.add_subcommand("validate", "Oracle checks on simulation designs");
    common(validate);
    design(validate);
    validate->add_option("--seed", cfg.seed, "Monte Carlo seed");
    validate->add_option("--draws", cfg.draws, "Monte Carlo draws");

    CLI::App* simulate = app.add_subcommand("simulate", "Write the observables JSON of a simulation design");
    common(simulate);
    design(simulate);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitInput;
    }

    try {
        if (tables->parsed()) return cmd_tables(cfg);
        if (bounds->parsed()) return cmd_bounds(cfg);
        if (diagnose->parsed()) return cmd_diagnose(cfg);
        if (validate->parsed()) return cmd_validate(cfg);
        if (simulate->parsed()) return cmd_simulate(cfg);
    } catch (const ExitWith& e) {
        return e.code;
    } catch (const InputError& e) {
        std::cerr << "input error: " << e.what() << '\n';
        return kExitInput;
    } catch (const ConfigError& e) {
        std::cerr << "configuration error: " << e.what() << '\n';
        return kExitInput;
    } catch (const NumericalError& e) {
        std::cerr << "numerical error: " << e.what() << '\n';
        return kExitNumerical;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return kExitOk;
}
