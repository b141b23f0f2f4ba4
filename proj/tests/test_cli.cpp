#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"
#include "dunkl/cli.hpp"
#include "dunkl/errors.hpp"
#include "json.hpp"

using namespace dunkl;
using namespace dunkl::cli;

namespace {

std::string tool() { return DUNKL_CERT_PATH; }

std::filesystem::path scratch(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / "dunkl_cli_test";
  std::filesystem::create_directories(dir);
  return dir / name;
}

int run_tool(const std::string& args, const std::filesystem::path& out = {}) {
  const std::string redirect = out.empty() ? " > /dev/null" : " > " + out.string();
  const int status = std::system((tool() + " " + args + redirect + " 2> /dev/null").c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string without_timestamp(const std::string& text) {
  std::istringstream in(text);
  std::string line, out;
  while (std::getline(in, line)) {
    if (line.rfind("# generated", 0) == 0) continue;
    out += line + "\n";
  }
  return out;
}

}  // namespace

TEST_CASE("config parsing") {
  RunConfig cfg;
  std::istringstream in(
      "# comment\n"
      "family = dunkl_heat\n"
      "d = 2\n"
      "kappa = 0.5, 1.5   # per axis\n"
      "t-min = 0.1\n"
      "points = 10\n"
      "format = json\n");
  load_config(cfg, in);
  CHECK(cfg.family == "dunkl_heat");
  CHECK(cfg.d == 2);
  CHECK(cfg.kappa == std::vector<double>{0.5, 1.5});
  CHECK(cfg.t_min == 0.1);
  CHECK(cfg.points == 10);
  CHECK(cfg.format == Format::json);
  CHECK(cfg.multiplicity().lambda() == doctest::Approx(2.0));

  std::istringstream bad("kappa: 1\n");
  CHECK_THROWS_AS(load_config(cfg, bad), DomainError);
  CHECK_THROWS_AS(apply_setting(cfg, "kappa", "-1"), DomainError);
  CHECK_THROWS_AS(apply_setting(cfg, "d", "1.5"), DomainError);
  CHECK_THROWS_AS(apply_setting(cfg, "colour", "red"), DomainError);
  CHECK_THROWS_AS(apply_setting(cfg, "family", "laplace"), DomainError);
  apply_setting(cfg, "kappa", "1,2,3");
  CHECK_THROWS_AS(cfg.multiplicity(), DomainError);
}

TEST_CASE("number formatting keeps 17 significant digits") {
  CHECK(format_double(0.1) == "0.10000000000000001");
  CHECK(format_double(1.0) == "1");
  CHECK(std::stod(format_double(M_PI)) == M_PI);
  CHECK(format_double(std::nan("")) == "nan");
  CHECK(parse_list("1, 2  3") == std::vector<double>{1.0, 2.0, 3.0});
}

TEST_CASE("CSV and JSON writers") {
  RunConfig cfg;
  Report rep;
  rep.command = "test";
  rep.table.columns = {"name", "value"};
  rep.table.rows = {{std::string("a"), 0.5}, {std::string("b"), std::nan("")}};
  std::ostringstream csv;
  write_csv(csv, cfg, rep, "T");
  const std::string text = csv.str();
  CHECK(text.find("# generated = T\n") != std::string::npos);
  CHECK(text.find("# seed = ") != std::string::npos);
  CHECK(text.find("name,value\na,0.5\nb,nan\n") != std::string::npos);
  std::ostringstream js;
  write_json(js, cfg, rep, "T");
  const auto doc = nlohmann::json::parse(js.str());
  CHECK(doc["meta"]["command"] == "test");
  CHECK(doc["meta"]["config"]["family"] == "dho");
  CHECK(doc["records"].size() == 2);
  CHECK(doc["records"][0]["value"] == 0.5);
  CHECK(doc["records"][1]["value"].is_null());
}

TEST_CASE("library commands") {
  RunConfig cfg;
  cfg.d = 1;
  cfg.kappa = {0.0};
  cfg.family = "mehler";
  cfg.t_count = 5;
  cfg.points = 10;
  SUBCASE("sweep with zero multiplicity is sharp") {
    const CommandResult r = cmd_sweep(cfg);
    CHECK(r.exit_code == kOk);
    CHECK(r.report.table.rows.size() == 50);
    for (const auto& row : r.report.table.rows) CHECK(std::abs(std::get<double>(row.back())) < 1e-6);
  }
  SUBCASE("kappa sweep records one row per value") {
    cfg.family = "dho";
    cfg.kappa_values = {0.1, 0.5, 1.0, 2.0, 5.0};
    cfg.x = {0.4};
    cfg.y = {-1.0};
    const CommandResult r = cmd_sweep(cfg);
    CHECK(r.report.table.rows.size() == 5);
    CHECK(r.report.table.columns.front() == "kappa");
  }
  SUBCASE("empty grid is a domain error") {
    cfg.points = 0;
    CHECK_THROWS_AS(cmd_sweep(cfg), DomainError);
  }
  SUBCASE("kernel command reports a constant form ratio") {
    cfg.family = "dho";
    cfg.kappa = {1.0};
    cfg.t = 0.5;
    const CommandResult r = cmd_kernel(cfg);
    REQUIRE(r.report.table.rows.size() == 2);
    const double ratio = std::get<double>(r.report.table.rows[1][3]);
    CHECK(ratio == doctest::Approx(std::exp(std::lgamma(1.0) - std::lgamma(1.5))).epsilon(1e-10));
  }
  SUBCASE("unknown certificate") { CHECK_THROWS_AS(cmd_certify(cfg, "fermat"), DomainError); }
}

TEST_CASE("command-line tool") {
  SUBCASE("Gaussian kernel value") {
    const auto out = scratch("kernel.csv");
    CHECK(run_tool("--family gauss --d 1 --kappa 0 --t 0.07957747154594767 kernel", out) == 0);
    CHECK(read_file(out).find("closed,0,1,1") != std::string::npos);
  }
  SUBCASE("exit codes") {
    CHECK(run_tool("--kappa -1 kernel") == 2);
    CHECK(run_tool("--points 0 sweep") == 2);
    CHECK(run_tool("certify nonsense") == 2);
    CHECK(run_tool("--config /nonexistent/file.cfg kernel") == 2);
    CHECK(run_tool("--tol 0 certify lemma41") == 1);
  }
  SUBCASE("zero-multiplicity oscillator certificate is sharp") {
    const auto out = scratch("liyau.json");
    CHECK(run_tool("--kappa 0 --d 2 --points 16 --t-count 4 --format json certify liyau-dho", out) == 0);
    const auto doc = nlohmann::json::parse(read_file(out));
    for (const auto& rec : doc["records"]) {
      if (rec["certificate"] == "liyau-dho") CHECK(std::abs(rec["margin"].get<double>()) < 1e-6);
    }
  }
  SUBCASE("phi certificate") { CHECK(run_tool("certify phi") == 0); }
  SUBCASE("Gaussian audit has unit mass") {
    const auto out = scratch("audit.json");
    CHECK(run_tool("--family gauss --kappa 0 --d 1 --format json audit", out) == 0);
    const auto doc = nlohmann::json::parse(read_file(out));
    CHECK(std::abs(std::stod(doc["meta"]["measured_constant"].get<std::string>()) - 1.0) < 1e-10);
  }
  SUBCASE("Dunkl heat audit") {
    CHECK(run_tool("--family dunkl_heat --kappa 1 --d 1 audit") == 0);
  }
  SUBCASE("config file with flag override") {
    const auto cfg = scratch("run.cfg");
    std::ofstream(cfg) << "family = dunkl_heat\nd = 1\nkappa = 0.5\npoints = 3\nt_count = 2\n";
    const auto out = scratch("sweep.csv");
    CHECK(run_tool("--config " + cfg.string() + " --points 5 sweep", out) == 0);
    const std::string text = read_file(out);
    CHECK(text.find("# family = dunkl_heat") != std::string::npos);
    CHECK(text.find("# points = 5") != std::string::npos);
  }
  SUBCASE("identical runs give identical reports") {
    const auto a = scratch("a.csv"), b = scratch("b.csv");
    const std::string args = "--d 2 --kappa 0.5,1.5 --points 20 --t-count 3 sweep";
    CHECK(run_tool(args, a) == 0);
    CHECK(run_tool(args + " --jobs 1", b) == 0);
    const std::string ta = without_timestamp(read_file(a)), tb = without_timestamp(read_file(b));
    // the jobs echo differs, every record must not
    CHECK(ta.substr(ta.find("t,x1")) == tb.substr(tb.find("t,x1")));
    CHECK(run_tool(args, b) == 0);
    CHECK(without_timestamp(read_file(a)) == without_timestamp(read_file(b)));
  }
}
