// SPDX-License-Identifier: Apache-2.0
#include "trisys/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "trisys/errors.hpp"

namespace trisys::io {

using nlohmann::json;

namespace {

json parse_json(std::string_view text) {
    try {
        return json::parse(text.begin(), text.end());
    } catch (const json::parse_error& e) {
        throw InputError(std::string("malformed JSON: ") + e.what());
    }
}

const json& field(const json& obj, const char* name) {
    if (!obj.is_object()) throw InputError("expected a JSON object");
    const auto it = obj.find(name);
    if (it == obj.end()) throw InputError(std::string("missing field \"") + name + "\"");
    return *it;
}

double number(const json& v, const std::string& where) {
    if (!v.is_number()) throw InputError("field \"" + where + "\" must be a number");
    const double x = v.get<double>();
    if (!std::isfinite(x)) throw InputError("field \"" + where + "\" must be finite");
    return x;
}

std::vector<double> numbers(const json& v, const std::string& where) {
    if (!v.is_array()) throw InputError("field \"" + where + "\" must be an array of numbers");
    std::vector<double> out;
    out.reserve(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) out.push_back(number(v[i], where + "[" + std::to_string(i) + "]"));
    return out;
}

std::string label_of(const json& v) {
    if (v.is_string()) return v.get<std::string>();
    if (v.is_number()) return format_number(v.get<double>());
    throw InputError("field \"z_grid\" entries must be strings or numbers");
}

bool parse_double(std::string_view s, double& out) {
    const char* end = s.data() + s.size();
    const auto res = std::from_chars(s.data(), end, out);
    return res.ec == std::errc() && res.ptr == end;
}

const json& keyed(const json& obj, const std::string& map_name, const std::string& label) {
    if (!obj.is_object()) throw InputError("field \"" + map_name + "\" must be an object keyed by z label");
    if (const auto it = obj.find(label); it != obj.end()) return *it;
    double want = 0.0;
    if (parse_double(label, want)) {
        for (auto it = obj.begin(); it != obj.end(); ++it) {
            double have = 0.0;
            if (parse_double(it.key(), have) && have == want) return it.value();
        }
    }
    throw InputError("field \"" + map_name + "\" has no entry for z label \"" + label + "\"");
}

GridPtr grid_from(const json& v, const std::string& where) {
    try {
        if (v.is_array()) return make_grid(ValueGrid(numbers(v, where)));
        if (v.is_object()) {
            return make_grid(ValueGrid::uniform(number(field(v, "lo"), where + ".lo"),
                                                number(field(v, "hi"), where + ".hi"),
                                                number(field(v, "step"), where + ".step")));
        }
    } catch (const ConfigError& e) {
        throw InputError("field \"" + where + "\": " + e.what());
    }
    throw InputError("field \"" + where + "\" must be an array or {lo, hi, step}");
}

json grid_json(const ValueGrid& grid) {
    json arr = json::array();
    for (double y : grid.points()) arr.push_back(y);
    return arr;
}

}  // namespace

std::string format_number(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    if (x == 0.0) x = 0.0;  // drop the sign of -0
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, res.ptr);
}

ObservedLaw parse_observables(std::string_view text) {
    const json doc = parse_json(text);
    GridPtr grid;
    try {
        grid = make_grid(ValueGrid(numbers(field(doc, "y_grid"), "y_grid")));
    } catch (const ConfigError& e) {
        throw InputError(std::string("field \"y_grid\": ") + e.what());
    }
    const json& zs = field(doc, "z_grid");
    if (!zs.is_array() || zs.empty()) throw InputError("field \"z_grid\" must be a non-empty array");
    std::vector<std::string> labels;
    for (const json& z : zs) labels.push_back(label_of(z));
    for (std::size_t i = 0; i < labels.size(); ++i) {
        for (std::size_t j = 0; j < i; ++j) {
            if (labels[i] == labels[j]) throw InputError("field \"z_grid\" repeats label \"" + labels[i] + "\"");
        }
    }
    const json& prop = field(doc, "propensity");
    const json& c0 = field(doc, "cdf0");
    const json& c1 = field(doc, "cdf1");
    std::vector<double> p;
    std::vector<StepCdf> cdf0;
    std::vector<StepCdf> cdf1;
    for (const std::string& z : labels) {
        p.push_back(number(keyed(prop, "propensity", z), "propensity." + z));
        for (int d = 0; d <= 1; ++d) {
            const std::string name = d == 0 ? "cdf0" : "cdf1";
            std::vector<double> v = numbers(keyed(d == 0 ? c0 : c1, name, z), name + "." + z);
            if (v.size() != grid->size()) {
                throw InputError("field \"" + name + "." + z + "\" has " + std::to_string(v.size()) +
                                 " values for a y_grid of " + std::to_string(grid->size()));
            }
            (d == 0 ? cdf0 : cdf1).emplace_back(grid, std::move(v));
        }
    }
    return ObservedLaw(grid, std::move(labels), std::move(p), std::move(cdf0), std::move(cdf1));
}

std::string observables_to_json(const ObservedLaw& law) {
    json doc;
    doc["y_grid"] = grid_json(law.y_grid());
    doc["z_grid"] = json::array();
    doc["propensity"] = json::object();
    doc["cdf0"] = json::object();
    doc["cdf1"] = json::object();
    for (std::size_t zi = 0; zi < law.z_count(); ++zi) {
        const std::string& z = law.z_label(zi);
        doc["z_grid"].push_back(z);
        doc["propensity"][z] = law.propensity(zi);
        for (int d = 0; d <= 1; ++d) {
            const auto v = law.cond_cdf(d, zi).values();
            doc[d == 0 ? "cdf0" : "cdf1"][z] = std::vector<double>(v.begin(), v.end());
        }
    }
    return doc.dump() + "\n";
}

DgpSpec parse_dgp_spec(std::string_view text) {
    const json doc = parse_json(text);
    if (!doc.is_object()) throw InputError("DgpSpec JSON must be an object");
    DgpSpec spec = DgpSpec::standard(-0.75, 1.0);
    for (auto it = doc.begin(); it != doc.end(); ++it) {
        const std::string& key = it.key();
        const json& v = it.value();
        if (key == "rho") {
            spec.rho = number(v, key);
        } else if (key == "z_half_width" || key == "zbar") {
            spec.z_half_width = number(v, key);
        } else if (key == "dof") {
            spec.dof = number(v, key);
        } else if (key == "effect_sign") {
            spec.effect_sign = static_cast<int>(number(v, key));
        } else if (key == "misspecified") {
            if (!v.is_boolean()) throw InputError("field \"misspecified\" must be a boolean");
            spec.misspecified = v.get<bool>();
        } else if (key == "z_grid_size" || key == "quadrature_nodes") {
            const double x = number(v, key);
            if (x < 1 || x != std::floor(x)) throw InputError("field \"" + key + "\" must be a positive integer");
            (key == "z_grid_size" ? spec.z_grid_size : spec.quadrature_nodes) = static_cast<std::size_t>(x);
        } else if (key == "y_grid") {
            spec.y_grid = grid_from(v, key);
        } else if (key == "delta_grid") {
            spec.delta_grid = grid_from(v, key);
        } else {
            throw InputError("unknown DgpSpec field \"" + key + "\"");
        }
    }
    spec.validate();
    return spec;
}

std::string dgp_spec_to_json(const DgpSpec& spec) {
    json doc;
    doc["rho"] = spec.rho;
    doc["z_half_width"] = spec.z_half_width;
    doc["dof"] = spec.dof;
    doc["effect_sign"] = spec.effect_sign;
    doc["misspecified"] = spec.misspecified;
    doc["z_grid_size"] = spec.z_grid_size;
    doc["quadrature_nodes"] = spec.quadrature_nodes;
    doc["y_grid"] = grid_json(*spec.y_grid);
    doc["delta_grid"] = grid_json(*spec.delta_grid);
    return doc.dump(2) + "\n";
}

void append_records(std::vector<BoundRecord>& out, const MarginalBound& bound) {
    for (std::size_t i = 0; i < bound.grid->size(); ++i) {
        out.push_back({bound.target, bound.regime, (*bound.grid)[i], 0.0, bound.lower[i], bound.upper[i]});
    }
}

void append_records(std::vector<BoundRecord>& out, const JointBound& bound) {
    for (std::size_t k = 0; k < bound.pairs.size(); ++k) {
        out.push_back({Target::Joint, bound.regime, bound.pairs[k].first, bound.pairs[k].second, bound.lower[k],
                       bound.upper[k]});
    }
}

void append_records(std::vector<BoundRecord>& out, Regime regime, const DteBound& bound) {
    for (std::size_t k = 0; k < bound.delta_grid->size(); ++k) {
        out.push_back({Target::Dte, regime, (*bound.delta_grid)[k], 0.0, bound.lower[k], bound.upper[k]});
    }
}

std::string records_to_csv(std::span<const BoundRecord> records) {
    std::string out = "target,regime,x0,x1,lower,upper\n";
    for (const BoundRecord& r : records) {
        out += to_string(r.target);
        out += ',';
        out += to_string(r.regime);
        out += ',';
        out += format_number(r.x0);
        out += ',';
        if (r.target == Target::Joint) out += format_number(r.x1);
        out += ',';
        out += format_number(r.lower);
        out += ',';
        out += format_number(r.upper);
        out += '\n';
    }
    return out;
}

std::string records_to_json(std::span<const BoundRecord> records) {
    json arr = json::array();
    for (const BoundRecord& r : records) {
        json rec;
        rec["target"] = std::string(to_string(r.target));
        rec["regime"] = std::string(to_string(r.regime));
        if (r.target == Target::Joint) {
            rec["y0"] = r.x0;
            rec["y1"] = r.x1;
        } else if (r.target == Target::Dte) {
            rec["delta"] = r.x0;
        } else {
            rec["y"] = r.x0;
        }
        rec["lower"] = r.lower;
        rec["upper"] = r.upper;
        arr.push_back(std::move(rec));
    }
    return arr.dump(1) + "\n";
}

std::string validation_report_to_text(const ValidationReport& report) {
    std::ostringstream out;
    for (const Violation& v : report) {
        out << v.invariant;
        if (v.d >= 0) out << " d=" << v.d;
        if (!v.z.empty()) out << " z=" << v.z;
        if (v.y_index >= 0) out << " y_index=" << v.y_index;
        if (!v.detail.empty()) out << ": " << v.detail;
        out << '\n';
    }
    return out.str();
}

std::string reports_to_json(std::span<const DiagnosticReport> reports) {
    json arr = json::array();
    for (const DiagnosticReport& r : reports) {
        json rec;
        rec["test"] = std::string(to_string(r.test));
        rec["tolerance"] = r.tolerance;
        rec["max_violation"] = r.max_violation;
        rec["passed"] = r.passed();
        rec["violations"] = json::array();
        for (const DiagnosticViolation& v : r.violations) {
            rec["violations"].push_back({{"where", v.where}, {"magnitude", v.magnitude}});
        }
        arr.push_back(std::move(rec));
    }
    return arr.dump(2) + "\n";
}

std::string verdicts_to_json(std::span<const OracleVerdict> verdicts) {
    json arr = json::array();
    for (const OracleVerdict& v : verdicts) {
        arr.push_back({{"check", v.check},
                       {"passed", v.passed},
                       {"worst_margin", v.worst_margin},
                       {"coordinates", v.coordinates},
                       {"tolerance", v.tolerance}});
    }
    return arr.dump(2) + "\n";
}

void write_file_atomic(const std::filesystem::path& path, std::string_view content) {
    std::filesystem::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
        if (!f) throw Error("cannot open " + tmp.string() + " for writing");
        f.write(content.data(), static_cast<std::streamsize>(content.size()));
        if (!f) throw Error("failed writing " + tmp.string());
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) throw Error("cannot rename " + tmp.string() + " to " + path.string() + ": " + ec.message());
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw InputError("cannot read " + path.string());
    std::ostringstream buf;
    buf << f.rdbuf();
    return buf.str();
}

}  // namespace trisys::io
