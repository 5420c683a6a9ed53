#include "sympler/eval.hpp"
#include "sympler/io.hpp"
#include "sympler/learner.hpp"

#include "test_support.hpp"

#include <doctest.h>
#include <nlohmann/json.hpp>
#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <string>

using namespace sympler;
namespace fs = std::filesystem;

namespace {

const fs::path kWork = fs::temp_directory_path() / "sympler_cli_test";

struct CliResult {
  int exit_code = -1;
  std::string out;
  std::string err;
};

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

CliResult run_cli(const std::string& args) {
  fs::create_directories(kWork);
  const fs::path out = kWork / "stdout.txt";
  const fs::path err = kWork / "stderr.txt";
  const std::string cmd = std::string(SYMPLER_CLI_PATH) + " " + args + " > " +
                          out.string() + " 2> " + err.string();
  const int rc = std::system(cmd.c_str());
  return {WEXITSTATUS(rc), read_file(out), read_file(err)};
}

std::map<std::string, std::string> dir_bytes(const fs::path& dir) {
  std::map<std::string, std::string> bytes;
  for (const auto& entry : fs::recursive_directory_iterator(dir)) {
    if (entry.is_regular_file()) {
      bytes[fs::relative(entry.path(), dir).string()] = read_file(entry.path());
    }
  }
  return bytes;
}

}  // namespace

TEST_CASE("vc-table emits one row per dimension") {
  fs::remove_all(kWork);
  fs::create_directories(kWork);
  const fs::path table = kWork / "t.csv";
  const CliResult r = run_cli("vc-table --h-max 100 --out " + table.string());
  CHECK(r.exit_code == 0);

  const std::string text = read_file(table);
  CHECK(text.rfind("h,l_star,l_rule\n", 0) == 0);
  std::size_t lines = 0;
  for (char c : text) lines += c == '\n';
  CHECK(lines == 101);  // header + 100 rows
  CHECK(text.find("\n1,9.211968") != std::string::npos);
}

TEST_CASE("usage errors exit with code 2, help with 0") {
  CHECK(run_cli("no-such-command").exit_code == 2);
  CHECK(run_cli("vc-table --h-max 5 --no-such-flag 1 --out x.csv").exit_code == 2);
  CHECK(run_cli("vc-table").exit_code == 2);  // missing required --out
  CHECK(run_cli("--help").exit_code == 0);
  CHECK(run_cli("evaluate --help").exit_code == 0);
  CHECK(run_cli("").exit_code == 2);  // a subcommand is required
}

TEST_CASE("runtime failures exit with code 1 and one diagnostic line") {
  const CliResult r = run_cli("evaluate --data " + (kWork / "absent.csv").string() +
                              " --warmup 5 --update 5 --out " + (kWork / "e").string());
  CHECK(r.exit_code == 1);
  CHECK(r.err.rfind("error: ", 0) == 0);
}

TEST_CASE("pendulum-train twice with one seed is byte-identical") {
  fs::remove_all(kWork / "a");
  fs::remove_all(kWork / "b");
  CHECK(run_cli("pendulum-train --seed 7 --out " + (kWork / "a").string()).exit_code == 0);
  CHECK(run_cli("pendulum-train --seed 7 --out " + (kWork / "b").string()).exit_code == 0);
  const auto a = dir_bytes(kWork / "a");
  CHECK(a == dir_bytes(kWork / "b"));
  CHECK(a.count("trace.csv") == 1);
  CHECK(a.count("report.json") == 1);
  CHECK(a.count("snapshot.json") == 1);
  CHECK(a.count("manifest.json") == 1);
  CHECK(a.at("trace.csv").rfind("t,theta,err_sq,model_count\n", 0) == 0);
}

TEST_CASE("explain reports the local model around a query") {
  REQUIRE(run_cli("pendulum-train --out " + (kWork / "m").string()).exit_code == 0);
  const CliResult r = run_cli("explain --snapshot " +
                              (kWork / "m" / "snapshot.json").string() + " --x 0.44");
  CHECK(r.exit_code == 0);

  const auto rep = nlohmann::json::parse(r.out);
  CHECK(rep.contains("model_index"));
  CHECK(rep.contains("distance"));
  REQUIRE(rep["weights"].size() == 2);
  // slope of the responsible model near 0.44 rad
  CHECK(std::abs(rep["weights"][0].get<double>() - (-17.7)) < 0.5);
  CHECK(rep["distance"].get<double>() < 0.2);
}

TEST_CASE("predict matches in-process predictions") {
  const auto data = testsup::make_two_regime_stream(50);
  DatasetSchema schema;
  schema.feature_columns = {"x"};
  schema.target_column = "y";
  fs::create_directories(kWork);
  write_samples_csv(kWork / "d.csv", data.stream, schema);

  REQUIRE(run_cli("evaluate --data " + (kWork / "d.csv").string() +
                  " --warmup 300 --update 300 --out " + (kWork / "ev").string())
              .exit_code == 0);
  REQUIRE(run_cli("predict --snapshot " + (kWork / "ev" / "snapshot.json").string() +
                  " --data " + (kWork / "d.csv").string() + " --out " +
                  (kWork / "p.csv").string())
              .exit_code == 0);

  const SymplerLearner learner = load_snapshot(kWork / "ev" / "snapshot.json");
  const std::string csv = read_file(kWork / "p.csv");
  CHECK(csv.rfind("index,prediction,target\n", 0) == 0);

  // spot-check the first data row against the library
  const auto line_end = csv.find('\n', csv.find('\n') + 1);
  const std::string row = csv.substr(csv.find('\n') + 1,
                                     line_end - csv.find('\n') - 1);
  const auto c1 = row.find(',');
  const auto c2 = row.find(',', c1 + 1);
  const double pred = parse_double(row.substr(c1 + 1, c2 - c1 - 1));
  CHECK(pred == *predict(learner, data.stream[0].x));
}

TEST_CASE("evaluate standardizes against supplied stats") {
  const auto data = testsup::make_two_regime_stream(51);
  DatasetSchema schema;
  schema.feature_columns = {"x"};
  schema.target_column = "y";
  fs::create_directories(kWork);
  write_samples_csv(kWork / "s.csv", data.stream, schema);
  write_stats_csv(kWork / "st.csv", compute_stats(data.stream), schema);

  const CliResult r = run_cli(
      "evaluate --data " + (kWork / "s.csv").string() + " --stats " +
      (kWork / "st.csv").string() + " --warmup 300 --update 300 --out " +
      (kWork / "ev2").string());
  CHECK(r.exit_code == 0);

  const auto rep = nlohmann::json::parse(read_file(kWork / "ev2" / "report.json"));
  for (const char* key : {"fitting_rmse", "prediction_rmse", "forgetting_ratio",
                          "loss_ww", "loss_wu", "model_count",
                          "sentinel_substitutions"}) {
    CHECK(rep.contains(key));
  }
  CHECK(rep["sentinel_substitutions"].get<int>() == 0);
  // standardized units: the losses sit well below the raw target spread
  CHECK(rep["prediction_rmse"].get<double>() < 1.0);
  CHECK(rep["prediction_rmse"].get<double>() > 0.0);
}
