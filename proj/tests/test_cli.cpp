#include "oracles.hpp"

#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace fs = std::filesystem;

namespace {

struct Invocation {
  int exit_code = -1;
  std::string err;
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path scratch(const std::string& name) {
  auto dir = fs::temp_directory_path() / ("ctp_cli_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

Invocation run_cli(const std::string& args, const fs::path& dir) {
  const auto err_path = dir / "stderr.txt";
  const std::string cmd = std::string("\"") + CTP_CLI_PATH + "\" " + args + " > \"" + (dir / "stdout.txt").string() +
                          "\" 2> \"" + err_path.string() + "\"";
  const int status = std::system(cmd.c_str());
  Invocation r;
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.err = slurp(err_path);
  return r;
}

const std::string corpus = std::string("--input \"") + CTP_SAMPLE_CORPUS + "\"";

}  // namespace

TEST_CASE("run writes a report and one ROC file per cluster plus pooled") {
  const auto dir = scratch("run");
  const auto r = run_cli("run " + corpus + " --k 2 --n-trees 20 --seed 3 --out-dir \"" + dir.string() + "\"", dir);
  REQUIRE(r.exit_code == 0);
  CHECK(fs::exists(dir / "report.json"));
  CHECK(fs::exists(dir / "roc_pooled.csv"));
  CHECK(fs::exists(dir / "roc_cluster0.csv"));
  CHECK(fs::exists(dir / "roc_cluster1.csv"));
  const auto report = slurp(dir / "report.json");
  CHECK(report.find("\"per_cluster\"") != std::string::npos);
  CHECK(report.find("\"accuracy\"") != std::string::npos);
}

TEST_CASE("invalid train fraction is a configuration error") {
  const auto dir = scratch("frac");
  const auto r = run_cli("run " + corpus + " --train-frac 1.5 --out-dir \"" + dir.string() + "\"", dir);
  CHECK(r.exit_code == 2);
  CHECK(r.err.find("train-frac") != std::string::npos);
  CHECK_FALSE(fs::exists(dir / "report.json"));
}

TEST_CASE("missing column and missing file") {
  const auto dir = scratch("missing");
  auto r = run_cli("run " + corpus + " --text-col body --out-dir \"" + dir.string() + "\"", dir);
  CHECK(r.exit_code == 2);
  CHECK(r.err.find("body") != std::string::npos);
  r = run_cli("run --input /nonexistent/file.csv --out-dir \"" + dir.string() + "\"", dir);
  CHECK(r.exit_code == 2);
}

TEST_CASE("identical invocations give byte-identical outputs") {
  const auto a = scratch("det_a");
  const auto b = scratch("det_b");
  const std::string args = "run " + corpus + " --k 3 --n-trees 25 --seed 41 --out-dir ";
  REQUIRE(run_cli(args + "\"" + a.string() + "\"", a).exit_code == 0);
  REQUIRE(run_cli(args + "\"" + b.string() + "\"", b).exit_code == 0);
  for (const auto* name : {"report.json", "roc_pooled.csv", "roc_cluster0.csv", "roc_cluster1.csv", "roc_cluster2.csv"})
    CHECK(slurp(a / name) == slurp(b / name));
}

TEST_CASE("compare writes the five-row table") {
  const auto dir = scratch("compare");
  const auto r = run_cli("compare " + corpus + " --k 2 --n-trees 20 --seed 5 --out-dir \"" + dir.string() + "\"", dir);
  REQUIRE(r.exit_code == 0);
  std::istringstream csv(slurp(dir / "comparison.csv"));
  std::vector<std::string> lines;
  for (std::string line; std::getline(csv, line);) lines.push_back(line);
  REQUIRE(lines.size() == 6);
  CHECK(lines[0] == "technique,accuracy,auc,interpretability");
  const std::vector<std::string> names{"Proposed hybrid approach", "SVM", "CART", "Random forest",
                                       "Logistic Regression"};
  for (std::size_t i = 0; i < names.size(); ++i) {
    const auto& line = lines[i + 1];
    REQUIRE(line.rfind(names[i] + ",", 0) == 0);
    const double acc = std::stod(line.substr(names[i].size() + 1));
    CHECK(acc >= 0.0);
    CHECK(acc <= 1.0);
  }
}

TEST_CASE("export-tree writes parseable DOT") {
  const auto dir = scratch("dot");
  const auto dot = dir / "tree.dot";
  const auto r = run_cli("export-tree " + corpus + " --n-trees 1 --mtry all --no-bootstrap --tree-index 0 --dot \"" +
                         dot.string() + "\" --out-dir \"" + dir.string() + "\"",
                     dir);
  REQUIRE(r.exit_code == 0);
  const auto graph = oracle::parse_dot(slurp(dot));
  REQUIRE(graph.ok);
  REQUIRE_FALSE(graph.nodes.empty());
  CHECK(graph.edges.size() == graph.nodes.size() - 1);
  CHECK(graph.labels.at("n0").rfind("freak < ", 0) == 0);
}

TEST_CASE("export-tree rejects an out-of-range tree index") {
  const auto dir = scratch("dot_range");
  const auto r = run_cli("export-tree " + corpus + " --n-trees 1 --tree-index 5 --out-dir \"" + dir.string() + "\"", dir);
  CHECK(r.exit_code == 2);
  CHECK(r.err.find("tree-index") != std::string::npos);
  CHECK_FALSE(fs::exists(dir / "tree.dot"));
}

TEST_CASE("saved forest reloads to the same DOT") {
  const auto dir = scratch("reload");
  const auto forest = dir / "forest.json";
  REQUIRE(run_cli("export-tree " + corpus + " --n-trees 3 --seed 2 --tree-index 1 --save-forest \"" + forest.string() +
                  "\" --dot \"" + (dir / "a.dot").string() + "\" --out-dir \"" + dir.string() + "\"",
              dir)
              .exit_code == 0);
  REQUIRE(run_cli("export-tree --forest-json \"" + forest.string() + "\" --vocab \"" + (dir / "forest.vocab.txt").string() +
                  "\" --tree-index 1 --dot \"" + (dir / "b.dot").string() + "\" --out-dir \"" + dir.string() + "\"",
              dir)
              .exit_code == 0);
  CHECK(slurp(dir / "a.dot") == slurp(dir / "b.dot"));
}
