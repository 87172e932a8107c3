#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "unilab/cli.hpp"

using namespace unilab;
namespace fs = std::filesystem;

namespace {

const fs::path kConfigs = UNILAB_CONFIG_DIR;
const fs::path kData = UNILAB_TEST_DATA_DIR;

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

nlohmann::json run_config(const fs::path& p) {
  const auto loaded = cli::load_config(p);
  REQUIRE(loaded.diagnostics.empty());
  bool failed = false;
  const auto report = cli::run_tasks(*loaded.config, failed);
  CHECK_FALSE(failed);
  return report;
}

}  // namespace

TEST_CASE("bundled configs validate cleanly") {
  for (const char* name : {"identical.json", "rotation_square.json", "laminated.json"}) {
    CAPTURE(name);
    CHECK(cli::validate(kConfigs / name).empty());
  }
}

TEST_CASE("validate: seeded bad configs") {
  const auto expr = cli::validate(kData / "bad_expression.json");
  REQUIRE(expr.size() == 1);
  REQUIRE(expr[0].offset.has_value());
  CHECK(*expr[0].offset == 5);

  const auto dangling = cli::validate(kData / "dangling_point.json");
  REQUIRE(dangling.size() == 1);
  CHECK(dangling[0].message.find("Q") != std::string::npos);

  CHECK(cli::validate(kData / "bad_schema.json").size() == 1);
  CHECK_FALSE(cli::validate(kData / "does_not_exist.json").empty());
}

TEST_CASE("load_config_text: unknown keys and wrong types") {
  const auto a = cli::load_config_text(R"({"schema": 1, "tasks": ["measure"], "bogus": 1})", ".");
  CHECK_FALSE(a.diagnostics.empty());
  CHECK_FALSE(a.config.has_value());
  const auto b = cli::load_config_text(R"({"schema": "one"})", ".");
  CHECK_FALSE(b.diagnostics.empty());
  const auto c = cli::load_config_text("{not json", ".");
  CHECK_FALSE(c.diagnostics.empty());
}

TEST_CASE("run: identical components") {
  const auto r = run_config(kConfigs / "identical.json");
  const auto& m = r["tasks"]["measure"];
  CHECK(m["status"] == "ok");
  CHECK(m["B"]["max"].get<double>() < 1e-12);
  CHECK(m["class"] == "UniformBody");
  CHECK(r["provenance"]["schema"] == cli::kSchemaVersion);
}

TEST_CASE("run: rotation square") {
  const auto r = run_config(kConfigs / "rotation_square.json");
  const auto& sq = r["tasks"]["squares"];
  CHECK(sq["all_listed_commutative"] == true);
  CHECK(sq["is_uniform"] == false);
  const auto& listed = sq["listed"][0];
  CHECK(listed["component2_states"]["X"]["rotation_deg"].get<double>() == doctest::Approx(10.0));
  CHECK(listed["component2_states"]["Y"]["rotation_deg"].get<double>() == doctest::Approx(30.0));
  CHECK(listed["component2_states"]["Z"]["rotation_deg"].get<double>() == doctest::Approx(40.0));
  CHECK(listed["opposite_pairs"]["wx_yz"]["misalignments_equal"] == true);
  CHECK(listed["opposite_pairs"]["wy_xz"]["misalignments_equal"] == true);
  CHECK(listed["complementary"]["commutative"] == true);
}

TEST_CASE("run: laminated") {
  const auto r = run_config(kConfigs / "laminated.json");
  CHECK(r["tasks"]["foliate"]["class"] == "Laminated");
  for (const auto& p : r["tasks"]["infinitesimal"]["points"]) {
    CHECK(p["m"] == 2);
    CHECK(p["foliation_m"] == 2);
    CHECK(p["kernel_angle"].get<double>() < 1e-10);
  }
}

TEST_CASE("dump_deterministic") {
  nlohmann::json j = {{"b", 1.5}, {"a", {1, 2}}, {"c", std::nan("")}};
  const std::string s = cli::dump_deterministic(j);
  CHECK(s.find("\"a\"") < s.find("\"b\""));
  CHECK(s.find("1.500000000000e+00") != std::string::npos);
  CHECK(s.find("null") != std::string::npos);
  CHECK(s == cli::dump_deterministic(nlohmann::json::parse(nlohmann::json(j).dump())));
}

TEST_CASE("run command writes identical bytes twice") {
  const fs::path dir = fs::temp_directory_path() / "unilab_cli_test";
  fs::create_directories(dir);
  std::ostringstream err;
  for (const char* name : {"identical.json", "rotation_square.json", "laminated.json"}) {
    CAPTURE(name);
    CHECK(cli::run(kConfigs / name, dir / "a.json", cli::Format::Json, err) == cli::kExitOk);
    CHECK(cli::run(kConfigs / name, dir / "b.json", cli::Format::Json, err) == cli::kExitOk);
    CHECK(slurp(dir / "a.json") == slurp(dir / "b.json"));
  }
  CHECK(cli::run(kConfigs / "laminated.json", dir / "f.csv", cli::Format::Csv, err) == cli::kExitOk);
  const std::string csv = slurp(dir / "f.csv");
  CHECK(csv.rfind("x1,x2,x3,m,sigma_min\n", 0) == 0);
  CHECK(cli::run(kConfigs / "rotation_square.json", dir / "g.csv", cli::Format::Csv, err) == cli::kExitInvalid);
  CHECK(cli::run(kData / "bad_schema.json", dir / "h.json", cli::Format::Json, err) == cli::kExitInvalid);

  std::ostringstream out;
  CHECK(cli::validate_command(kData / "bad_expression.json", out) == cli::kExitInvalid);
  CHECK(out.str().find("offset") != std::string::npos);
  fs::remove_all(dir);
}
