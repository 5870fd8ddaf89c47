// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <filesystem>

#include "support.hpp"
#include "trisys/errors.hpp"
#include "trisys/io.hpp"

using namespace trisys;
using namespace trisys::testing;

namespace {

const char* kLaw = R"({
  "y_grid": [0, 1, 2],
  "z_grid": ["a", "b"],
  "propensity": {"a": 0.3, "b": 0.6},
  "cdf0": {"a": [0.1, 0.5, 1.0], "b": [0.2, 0.6, 1.0]},
  "cdf1": {"a": [0.0, 0.4, 1.0], "b": [0.1, 0.5, 1.0]}
})";

template <class F>
std::string input_error(F&& f) {
    try {
        f();
    } catch (const InputError& e) {
        return e.what();
    }
    return "";
}

}  // namespace

TEST_CASE("observables round trip") {
    const ObservedLaw law = io::parse_observables(kLaw);
    CHECK(law.z_count() == 2);
    CHECK(law.propensity(law.z_index("b")) == 0.6);
    CHECK(law.cond_cdf(1, 0)(1.5) == 0.4);
    const ObservedLaw again = io::parse_observables(io::observables_to_json(law));
    CHECK(io::observables_to_json(again) == io::observables_to_json(law));

    const ObservedLaw design_law = build_observed_law(small_design(-0.75, 1.0, 3));
    const ObservedLaw copy = io::parse_observables(io::observables_to_json(design_law));
    for (std::size_t zi = 0; zi < copy.z_count(); ++zi) {
        CHECK(copy.propensity(zi) == design_law.propensity(zi));
        const auto a = copy.cond_cdf(0, zi).values();
        const auto b = design_law.cond_cdf(0, zi).values();
        CHECK(std::equal(a.begin(), a.end(), b.begin(), b.end()));
    }
}

TEST_CASE("malformed observables name the field") {
    CHECK(input_error([] { io::parse_observables("{"); }).find("JSON") != std::string::npos);
    CHECK(input_error([] { io::parse_observables(R"({"z_grid": ["a"]})"); }).find("y_grid") != std::string::npos);
    std::string bad = kLaw;
    bad.replace(bad.find("[0.2, 0.6, 1.0]"), 15, "[0.2, 0.6]");
    CHECK(input_error([&] { io::parse_observables(bad); }).find("cdf0") != std::string::npos);
    std::string missing = kLaw;
    missing.replace(missing.find("\"b\": 0.6"), 8, "\"c\": 0.6");
    CHECK(input_error([&] { io::parse_observables(missing); }).find("propensity") != std::string::npos);
}

TEST_CASE("dgp spec parsing") {
    const DgpSpec s = io::parse_dgp_spec(R"({"rho": -0.5, "zbar": 1.5, "y_grid": {"lo": -2, "hi": 2, "step": 0.5}})");
    CHECK(s.rho == -0.5);
    CHECK(s.z_half_width == 1.5);
    CHECK(s.y_grid->size() == 9);
    const DgpSpec back = io::parse_dgp_spec(io::dgp_spec_to_json(s));
    CHECK(back.rho == s.rho);
    CHECK(*back.y_grid == *s.y_grid);
    CHECK(input_error([] { io::parse_dgp_spec(R"({"rhoo": 1})"); }).find("rhoo") != std::string::npos);
    CHECK(input_error([] { io::parse_dgp_spec(R"({"rho": "x"})"); }).find("rho") != std::string::npos);
    CHECK_THROWS_AS(io::parse_dgp_spec(R"({"rho": 0.5})"), ConfigError);
}

TEST_CASE("records and numbers") {
    CHECK(io::format_number(0.1) == "0.1");
    CHECK(io::format_number(-0.0) == "0");
    CHECK(io::format_number(1.0 / 0.0) == "inf");
    CHECK(io::format_number(2.0) == "2");

    const GridPtr g = grid_of({0.0, 0.5});
    MarginalBound b{Target::F1, Regime::NsmMtr, g, {0.1, 0.2}, {0.3, 0.4}};
    std::vector<io::BoundRecord> recs;
    io::append_records(recs, b);
    JointBound j{Regime::Cpqd, {{1.0, 3.0}}, {0.43}, {0.75}};
    io::append_records(recs, j);
    const std::string csv = io::records_to_csv(recs);
    CHECK(csv ==
          "target,regime,x0,x1,lower,upper\n"
          "F1,NSM_MTR,0,,0.1,0.3\n"
          "F1,NSM_MTR,0.5,,0.2,0.4\n"
          "JOINT,CPQD,1,3,0.43,0.75\n");
    CHECK(io::records_to_json(recs).find("\"NSM_MTR\"") != std::string::npos);
}

TEST_CASE("atomic write") {
    const auto dir = std::filesystem::temp_directory_path() / "trisys_io_test";
    std::filesystem::create_directories(dir);
    const auto path = dir / "out.txt";
    io::write_file_atomic(path, "first");
    io::write_file_atomic(path, "second");
    CHECK(io::read_file(path) == "second");
    CHECK_FALSE(std::filesystem::exists(dir / "out.txt.tmp"));
    std::filesystem::remove_all(dir);
    CHECK_THROWS_AS(io::read_file(dir / "missing"), InputError);
}
