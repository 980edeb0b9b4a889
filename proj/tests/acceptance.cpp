// Runs every experiment at its published settings and prints one line per
// acceptance criterion. Exit status is the number of failing criteria.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "roq/experiments.hpp"

namespace fs = std::filesystem;
using namespace roq;

namespace {

struct Line {
  std::vector<Criterion> checks;
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

// Byte comparison of every CSV written by two runs of the same config.
Criterion determinism(const std::string& experiment, const fs::path& root) {
  ExperimentConfig c = ExperimentConfig::defaults(experiment);
  const fs::path a = root / ("det-a-" + experiment), b = root / ("det-b-" + experiment);
  fs::remove_all(a);
  fs::remove_all(b);
  c.output_dir = a;
  run_experiment(c);
  c.output_dir = b;
  run_experiment(c);
  std::size_t files = 0, differ = 0;
  for (const auto& e : fs::directory_iterator(a)) {
    if (e.path().extension() != ".csv") continue;
    ++files;
    const fs::path other = b / e.path().filename();
    if (!fs::exists(other) || slurp(e.path()) != slurp(other)) ++differ;
  }
  return {11, "byte_identical_csv_" + experiment, files > 0 && differ == 0, true,
          static_cast<double>(differ), 0.0, std::to_string(files) + " CSV files compared"};
}

}  // namespace

int main(int argc, char** argv) {
  const fs::path root = argc > 1 ? fs::path(argv[1]) : fs::temp_directory_path() / "roq-acceptance";
  fs::create_directories(root);
  std::map<int, Line> lines;
  const auto t0 = std::chrono::steady_clock::now();

  const auto collect = [&](const ExperimentResult& r) {
    for (const auto& c : r.criteria) {
      if (c.id > 0) lines[c.id].checks.push_back(c);
    }
  };
  const auto run = [&](ExperimentConfig c, GwPipeline* gw = nullptr) {
    c.output_dir = root / c.experiment;
    const auto s = std::chrono::steady_clock::now();
    try {
      collect(run_experiment(c, gw));
    } catch (const std::exception& e) {
      std::fprintf(stderr, "%s failed: %s\n", c.experiment.c_str(), e.what());
      lines[0].checks.push_back({0, c.experiment, false, true, 0, 0, e.what()});
    }
    std::fprintf(stderr, "  %-18s %7.1f s\n", c.experiment.c_str(),
                 std::chrono::duration<double>(std::chrono::steady_clock::now() - s).count());
  };

  for (const char* e : {"legendre_weights", "conditioning", "runge", "dim1", "dim2"}) {
    run(ExperimentConfig::defaults(e));
  }

  GwPipeline gw(ExperimentConfig::defaults("gw_basis"));
  for (const char* e : {"gw_basis", "gw_products", "gw_deim", "gw_roq", "gw_validate"}) {
    run(ExperimentConfig::defaults(e), &gw);
  }

  ExperimentConfig scaled = ExperimentConfig::defaults("gw_products");
  scaled.K = 300;
  scaled.tolerance = 1e-4;
  scaled.allow_direct_greedy = true;
  scaled.experiment = "gw_products";
  {
    ExperimentConfig c = scaled;
    c.output_dir = root / "gw_products_scaled";
    collect(run_experiment(c));
  }

  for (const char* e : {"legendre_weights", "runge", "gw_basis"}) {
    lines[11].checks.push_back(determinism(e, root));
  }

  int failed = 0;
  for (int id = 1; id <= 11; ++id) {
    const auto& checks = lines[id].checks;
    bool ok = !checks.empty();
    std::string detail;
    for (const auto& c : checks) {
      if (c.hard && !c.passed) ok = false;
      char buf[256];
      std::snprintf(buf, sizeof buf, "%s%s=%.4g%s", detail.empty() ? "" : "; ", c.name.c_str(), c.value,
                    c.passed ? "" : "(FAIL)");
      detail += buf;
    }
    if (checks.empty()) detail = "no checks ran";
    failed += !ok;
    std::printf("criterion %2d: %s  %s\n", id, ok ? "PASS" : "FAIL", detail.c_str());
  }
  for (const auto& c : lines[0].checks) {
    std::printf("error: %s: %s\n", c.name.c_str(), c.detail.c_str());
    ++failed;
  }
  std::printf("acceptance: %d of 11 criteria failing, %.0f s\n", failed,
              std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
  return failed;
}
