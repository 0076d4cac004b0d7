#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "wtpuf/cli.hpp"

namespace fs = std::filesystem;
using namespace wtpuf::cli;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

fs::path scratch(const std::string& name) {
  auto dir = fs::temp_directory_path() / ("wtpuf_cli_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

fs::path write_config(const fs::path& dir, const std::string& text) {
  auto p = dir / "config.json";
  std::ofstream(p) << text;
  return p;
}

// small enough for a unit test, large enough for a usable q=8 code
const char* kSmall = R"({
  "q": 8,
  "helper_modes": [true],
  "d_sweep": [0.05, 0.01, 0.001],
  "operating_d": 0.001,
  "trials": {"estimate": 4000, "construct": 600, "fer": 300, "demo": 20, "devices": 2},
  "seed": 5
})";

struct Run {
  int code;
  std::string log;
  std::string err;
};

Run run(const std::string& cmd, const std::optional<fs::path>& config, Overrides o = {}) {
  std::ostringstream log, err;
  int rc = run_command(cmd, config, o, log, err);
  return {rc, log.str(), err.str()};
}

}  // namespace

TEST_CASE("generate: shape, determinism and golden bytes") {
  auto dir = scratch("generate");
  Overrides o;
  o.out = dir;
  o.trials = 1;
  o.seed = 1;
  REQUIRE(run("generate", std::nullopt, o).code == kOk);
  const auto one = slurp(dir / "devices.csv");
  CHECK(std::count(one.begin(), one.end(), '\n') == 2);

  o.trials = 2;
  REQUIRE(run("generate", std::nullopt, o).code == kOk);
  const auto a = slurp(dir / "devices.csv");
  REQUIRE(run("generate", std::nullopt, o).code == kOk);
  CHECK(slurp(dir / "devices.csv") == a);
  CHECK(a == slurp(fs::path(WTPUF_GOLDEN_DIR) / "devices_seed1_n2.csv"));
}

TEST_CASE("config errors exit with 2") {
  auto dir = scratch("config");
  CHECK(run("generate", write_config(dir, "{ not json")).code == kConfigError);
  CHECK(run("generate", write_config(dir, R"({"bogus": 1})")).code == kConfigError);
  CHECK(run("construct", write_config(dir, R"({"d_sweep": [0.5, 2.0]})")).code == kConfigError);
  CHECK(run("construct", write_config(dir, R"({"d_sweep": []})")).code == kConfigError);
  CHECK(run("generate", write_config(dir, R"({"q": 6})")).code == kConfigError);
  CHECK(run("generate", write_config(dir, R"({"alpha": 0})")).code == kConfigError);
  CHECK(run("generate", write_config(dir, R"({"trials": {"fer": "many"}})")).code == kConfigError);
  CHECK(run("frobnicate", std::nullopt).code == kConfigError);
  Overrides o;
  o.q = 12;
  CHECK(run("generate", std::nullopt, o).code == kConfigError);
}

TEST_CASE("I/O errors exit with 4") {
  auto dir = scratch("io");
  Overrides o;
  o.out = dir;
  const Run fer = run("fer", std::nullopt, o);
  CHECK(fer.code == kIoError);
  CHECK(fer.err.find("missing code") != std::string::npos);
  CHECK(run("generate", dir / "absent.json").code == kIoError);
  std::ofstream(dir / "code.json") << "{ broken";
  CHECK(run("demo", std::nullopt, o).code == kIoError);
  std::ofstream(dir / "blocker") << "x";
  o.out = dir / "blocker" / "sub";
  CHECK(run("generate", std::nullopt, o).code == kIoError);
}

TEST_CASE("config dump parses back to the same document") {
  ExperimentConfig cfg = parse_config(kSmall);
  CHECK(cfg.q == 8);
  CHECK(cfg.trials.construct == 600);
  CHECK(dump_config(parse_config(dump_config(cfg))) == dump_config(cfg));
}

TEST_CASE("construct, fer, demo and sweep-alpha end to end") {
  auto dir = scratch("pipeline");
  const auto config = write_config(dir, kSmall);
  Overrides o;
  o.out = dir / "out";

  const Run c1 = run("construct", config, o);
  REQUIRE(c1.code == kOk);
  const auto report = slurp(dir / "out" / "report.csv");
  CHECK(report.rfind("q,d,with_helper_data,n_s,n_f,H_att,H_att_printed,H_secret\n", 0) == 0);
  CHECK(std::count(report.begin(), report.end(), '\n') == 4);
  for (const char* f : {"code.json", "quantizer.json", "channel_legitimate.json", "channel_attacker.json"})
    CHECK(fs::exists(dir / "out" / f));

  SUBCASE("construct is byte-reproducible and independent of the thread count") {
    Overrides o2 = o;
    o2.out = dir / "again";
    auto text = slurp(config);
    text.insert(text.find('{') + 1, "\"threads\": 1,");
    REQUIRE(run("construct", write_config(dir, text), o2).code == kOk);
    CHECK(slurp(dir / "again" / "report.csv") == report);
    CHECK(slurp(dir / "again" / "code.json") == slurp(dir / "out" / "code.json"));
  }

  SUBCASE("fer writes both decoders") {
    REQUIRE(run("fer", config, o).code == kOk);
    const auto fer = slurp(dir / "out" / "fer.csv");
    CHECK(fer.rfind("decoder,q,with_helper_data,frames,frame_errors,FER,n_s,n_f,H_att,H_att_printed,H_secret\n", 0) == 0);
    CHECK(fer.find("\nSCD,8,1,300,") != std::string::npos);
    CHECK(fer.find("\nSCL8,8,1,300,") != std::string::npos);
  }

  SUBCASE("demo outcomes and exit codes") {
    Overrides d = o;
    d.scenario = "benign";
    d.trials = 1;
    const Run benign = run("demo", config, d);
    CHECK(benign.code == kOk);
    CHECK(benign.log.find("benign: secret reproduced") != std::string::npos);

    d.scenario = "attacked";
    d.trials.reset();
    const Run attacked = run("demo", config, d);
    CHECK(attacked.code == kTamperFailure);
    CHECK(attacked.log.find("tamper detected 20/20") != std::string::npos);
    CHECK(fs::exists(dir / "out" / "bundle.json"));

    d.scenario = "all";
    const Run all1 = run("demo", config, d);
    const Run all2 = run("demo", config, d);
    CHECK(all1.log == all2.log);
    CHECK(all1.code == kTamperFailure);
  }

  SUBCASE("sweep-alpha lists every nonzero kernel element") {
    Overrides s = o;
    s.q = 4;
    s.trials = 200;
    REQUIRE(run("sweep-alpha", config, s).code == kOk);
    const auto csv = slurp(dir / "out" / "sweep_alpha.csv");
    CHECK(csv.rfind("alpha,q,d,with_helper_data,n_s,n_f,H_att,H_att_printed,H_secret\n", 0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 4);
  }
}

TEST_CASE("golden construct report") {
  auto dir = scratch("golden");
  Overrides o;
  o.out = dir;
  REQUIRE(run("construct", write_config(dir, kSmall), o).code == kOk);
  CHECK(slurp(dir / "report.csv") == slurp(fs::path(WTPUF_GOLDEN_DIR) / "report_small.csv"));
}
