#include <catch2/catch_amalgamated.hpp>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

namespace {

const std::filesystem::path kWorkDir =
    std::filesystem::temp_directory_path() / "dpc_cli_tests";

std::string path_in_workdir(const std::string& name) {
  std::filesystem::create_directories(kWorkDir);
  return (kWorkDir / name).string();
}

int run_cli(const std::string& args, const std::string& stdout_file = "") {
  std::string command = std::string(DPC_CLI_PATH) + " " + args;
  command += stdout_file.empty() ? " >/dev/null 2>&1"
                                 : " >" + stdout_file + " 2>/dev/null";
  const int status = std::system(command.c_str());
  REQUIRE(status != -1);
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

const std::string kCommonGen = "--generate gaussian --n 400 --d 2 --k 4 "
                               "--spread 2000 --seed 21 --dcut 1200 "
                               "--rho-min 2 --delta-min 4000";

}  // namespace

TEST_CASE("cli: scan and ex produce identical label files") {
  const auto scan_labels = path_in_workdir("scan_labels.csv");
  const auto ex_labels = path_in_workdir("ex_labels.csv");
  REQUIRE(run_cli(kCommonGen + " --algo scan --out-labels " + scan_labels) == 0);
  REQUIRE(run_cli(kCommonGen + " --algo ex --out-labels " + ex_labels) == 0);
  const std::string scan_text = read_file(scan_labels);
  CHECK_FALSE(scan_text.empty());
  CHECK(scan_text == read_file(ex_labels));
}

TEST_CASE("cli: thread count does not change approx output") {
  const auto one = path_in_workdir("approx_t1.csv");
  const auto eight = path_in_workdir("approx_t8.csv");
  REQUIRE(run_cli(kCommonGen + " --algo approx --threads 1 --out-labels " + one) == 0);
  REQUIRE(run_cli(kCommonGen + " --algo approx --threads 8 --out-labels " + eight) == 0);
  CHECK(read_file(one) == read_file(eight));
}

TEST_CASE("cli: evaluating a run against its own labels prints rand_index 1") {
  const auto labels = path_in_workdir("self_labels.csv");
  const auto report = path_in_workdir("self_report.txt");
  REQUIRE(run_cli(kCommonGen + " --algo ex --out-labels " + labels) == 0);
  REQUIRE(run_cli(kCommonGen + " --algo ex --eval " + labels, report) == 0);
  CHECK(read_file(report).find("rand_index=1.000000") != std::string::npos);
}

TEST_CASE("cli: json-lines report carries the run summary") {
  const auto report = path_in_workdir("report.jsonl");
  REQUIRE(run_cli(kCommonGen + " --algo s-approx --epsilon 0.5 --report json-lines",
                  report) == 0);
  const auto parsed = nlohmann::json::parse(read_file(report));
  CHECK(parsed["algo"] == "s-approx");
  CHECK(parsed["n"] == 400);
  CHECK(parsed["epsilon"] == 0.5);
  CHECK(parsed["clusters"].get<int>() >= 1);
  CHECK(parsed["density_seconds"].get<double>() >= 0.0);
}

TEST_CASE("cli: dataset exports reload identically") {
  const auto data = path_in_workdir("walk.csv");
  const auto labels_a = path_in_workdir("walk_labels_a.csv");
  const auto labels_b = path_in_workdir("walk_labels_b.csv");
  REQUIRE(run_cli("--generate walk --n 2000 --d 2 --seed 3 --dcut 300 "
                  "--delta-min 2000 --algo approx --out-data " +
                  data + " --out-labels " + labels_a) == 0);
  REQUIRE(run_cli("--input " + data + " --dcut 300 --delta-min 2000 "
                  "--algo approx --out-labels " + labels_b) == 0);
  CHECK(read_file(labels_a) == read_file(labels_b));
}

TEST_CASE("cli: usage and parameter errors exit 1") {
  CHECK(run_cli("--algo bogus --dcut 10") == 1);
  CHECK(run_cli("--dcut 10 --no-such-flag") == 1);
  CHECK(run_cli("--generate gaussian --n 50 --dcut 0") == 1);
  // delta_min must exceed d_cut.
  CHECK(run_cli("--generate gaussian --n 50 --dcut 10 --delta-min 5") == 1);
  // s-approx needs epsilon.
  CHECK(run_cli("--generate gaussian --n 50 --dcut 10 --delta-min 50 "
                "--algo s-approx") == 1);
  // input and generate are mutually exclusive.
  CHECK(run_cli("--input x.csv --generate walk --dcut 10") == 1);
}

TEST_CASE("cli: i/o failures exit 2") {
  CHECK(run_cli("--input /nonexistent/points.csv --dcut 10") == 2);
  CHECK(run_cli("--generate gaussian --n 50 --dcut 10 --delta-min 50 "
                "--out-labels /nonexistent/dir/labels.csv") == 2);
}

TEST_CASE("cli: help exits 0") {
  CHECK(run_cli("--help") == 0);
}
