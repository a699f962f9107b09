#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "../common/synthetic.hpp"
#include "txh/cli.hpp"
#include "txh/error.hpp"

using namespace txh;
using namespace txh::cli;

namespace {

struct RunOutput {
  int code;
  std::string out;
  std::string err;
};

RunOutput run_cli(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

std::filesystem::path temp_file(const std::string& name, const std::string& contents) {
  const auto path = std::filesystem::temp_directory_path() / ("txh_test_" + name);
  std::ofstream(path) << contents;
  return path;
}

std::string error_kind(const std::string& err) { return Json::parse(err).at("error").at("kind").get<std::string>(); }

template <typename Fn>
std::string parse_error_message(Fn&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::ParseError);
    return e.what();
  }
  FAIL("no error thrown");
  return {};
}

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("orientations listing") {
    const auto all = run_cli({"orientations"});
    REQUIRE(all.code == 0);
    const Json doc = Json::parse(all.out);
    CHECK(doc.at("count") == 24);
    CHECK(run_cli({"orientations", "--unprimed"}).out.find("\"count\": 12") != std::string::npos);

    const auto frames = orientations_from_json(doc);
    REQUIRE(frames.size() == 24);
    for (int i = 0; i < 24; ++i) {
      CHECK(frames[i].label == orientations()[i].label);
      CHECK(frames[i].rotation == orientations()[i].rotation);
      CHECK(frames[i].inverted == orientations()[i].inverted);
    }

    const auto csv = run_cli({"orientations", "--format", "csv"});
    CHECK(csv.code == 0);
    CHECK(std::count(csv.out.begin(), csv.out.end(), '\n') == 25);
  }

  TEST_CASE("dataset CSV round trip keeps full precision") {
    SpectralDataset ds = test::zeeman_dataset(3);
    synthesize(ds, ModelParams{});
    ds.points[5].observed += 1.0 / 3.0 * 1e-9;
    std::stringstream buf;
    write_dataset_csv(buf, ds);
    const SpectralDataset back = read_dataset_csv(buf, "zeeman");
    REQUIRE(back.points.size() == ds.points.size());
    CHECK(back.kind == DatasetKind::ZeemanRotation);
    for (std::size_t i = 0; i < ds.points.size(); ++i) {
      CHECK(back.points[i].control == ds.points[i].control);
      CHECK(back.points[i].observed == ds.points[i].observed);
      CHECK(back.points[i].sigma == ds.points[i].sigma);
      CHECK(back.points[i].orientation == ds.points[i].orientation);
      CHECK(back.points[i].line == ds.points[i].line);
    }
  }

  TEST_CASE("malformed CSV names row and column") {
    std::istringstream in("e_v_per_m,shift_hz,sigma_hz,orientation\n1e5,2e8,1e6,z0\n2e5,abc,1e6,z1\n");
    const std::string msg = parse_error_message([&] { read_dataset_csv(in, "data.csv"); });
    CHECK(msg.find("row 3") != std::string::npos);
    CHECK(msg.find("shift_hz") != std::string::npos);

    std::istringstream unknown_label("e_v_per_m,shift_hz,sigma_hz,orientation\n1e5,2e8,1e6,q9\n");
    CHECK(parse_error_message([&] { read_dataset_csv(unknown_label, "d"); }).find("orientation") != std::string::npos);

    std::istringstream unknown_column("e_v_per_m,shift_hz,sigma_hz,colour\n1e5,2e8,1e6,red\n");
    CHECK(parse_error_message([&] { read_dataset_csv(unknown_column, "d"); }).find("colour") != std::string::npos);

    std::istringstream short_row("stress_pa,value_ev,sigma_ev\n-1e6,0.9\n");
    CHECK(parse_error_message([&] { read_dataset_csv(short_row, "d"); }).find("row 2") != std::string::npos);
  }

  TEST_CASE("fit config validation happens before evaluation") {
    const Json base = Json::parse(R"({"free": [{"name": "g1", "start": 1.2}],
                                      "datasets": [{"kind": "zeeman_rotation", "file": "none.csv"}]})");
    Json bad_key = base;
    bad_key["colour"] = "red";
    CHECK_THROWS_AS(fit_problem_from_json(bad_key, {}), Error);
    Json bad_param = base;
    bad_param["free"][0]["name"] = "g7";
    try {
      fit_problem_from_json(bad_param, {});
      FAIL("accepted unknown parameter");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::ConfigError);
      CHECK(std::string(e.what()).find("g7") != std::string::npos);
    }
    Json bad_override = base;
    bad_override["params"] = {{"nope", 1.0}};
    CHECK_THROWS_AS(fit_problem_from_json(bad_override, {}), Error);
  }

  TEST_CASE("config file values yield to command-line flags") {
    const auto cfg = temp_file("stark.json", R"({"e-max": 5e4, "steps": 3, "params": {"a_x": 0.0}})");
    const auto from_config = run_cli({"stark", "--config", cfg.string()});
    REQUIRE(from_config.code == 0);
    CHECK(from_config.out.find("50000") != std::string::npos);
    CHECK(std::count(from_config.out.begin(), from_config.out.end(), '\n') == 1 + 3 * 24);

    const auto overridden = run_cli({"stark", "--config", cfg.string(), "--steps", "2"});
    REQUIRE(overridden.code == 0);
    CHECK(std::count(overridden.out.begin(), overridden.out.end(), '\n') == 1 + 2 * 24);

    const auto bad = temp_file("bad.json", R"({"e-maximum": 5e4})");
    const auto rejected = run_cli({"stark", "--config", bad.string()});
    CHECK(rejected.code == 2);
    CHECK(error_kind(rejected.err) == "ConfigError");
  }

  TEST_CASE("errors are structured with distinct exit codes") {
    const auto degenerate = run_cli({"zeeman", "--from-axis", "0,0,1", "--to-axis", "0,0,3"});
    CHECK(degenerate.code == 2);
    CHECK(error_kind(degenerate.err) == "DegenerateAxes");

    const auto usage = run_cli({"zeeman", "--no-such-flag"});
    CHECK(usage.code != 0);
    CHECK(usage.code != 2);
    CHECK(error_kind(usage.err) == "UsageError");

    const auto unknown_param = run_cli({"strain", "--set", "qq=1"});
    CHECK(unknown_param.code == 2);
    CHECK(error_kind(unknown_param.err) == "ConfigError");

    const auto zero_field = run_cli({"rbr", "--b-mT", "0", "--grid", "3"});
    CHECK(zero_field.code == 2);
    CHECK(error_kind(zero_field.err) == "ZeroField");
  }

  TEST_CASE("synth then fit through the command line") {
    const auto dir = std::filesystem::temp_directory_path();
    const auto data = dir / "txh_test_synth.csv";
    const auto synth = run_cli({"synth", "--kind", "zeeman_rotation", "--steps", "4", "--sigma", "2.48e-7",
                                "--noise", "--seed", "3", "-o", data.string()});
    REQUIRE(synth.code == 0);
    const auto cfg = temp_file("fit.json", R"({"free": [{"name": "g1", "start": 1.1}, {"name": "g2", "start": 0.01}],
        "datasets": [{"kind": "zeeman_rotation", "b_mT": 109.9}]})");
    const auto res = run_cli({"fit", "--config", cfg.string(), "--data", data.string()});
    REQUIRE(res.code == 0);
    const Json doc = Json::parse(res.out);
    CHECK(doc.at("converged") == true);
    CHECK(doc.at("n_points") == 4 * 24 * 4);
    const double g1 = doc.at("parameters").at(0).at("value");
    const double s1 = doc.at("parameters").at(0).at("sigma");
    CHECK(std::abs(g1 - 1.23) < 3 * s1);
  }
}
