// Command-line harness: generate or load a dataset, run one of the
// clustering algorithms, export labels and the decision graph, evaluate
// against a reference labeling, and report per-phase timings.

#include <cstdio>
#include <exception>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "dpc/dpc.hpp"

namespace {

struct CliOptions {
  std::string algo = "ex";
  std::string input;
  std::string generate;
  std::size_t n = 1000;
  int dim = 2;
  int k = 5;
  double spread = 2500.0;
  std::uint64_t seed = 1;
  double d_cut = 0.0;
  double rho_min = 0.0;
  double delta_min = dpc::kInfiniteDelta;
  std::optional<double> epsilon;
  int threads = 0;
  std::string out_labels;
  std::string out_decision_graph;
  std::string out_data;
  std::string out_truth;
  std::string eval_path;
  std::string report = "text";
};

int run(const CliOptions& opt) {
  dpc::DpcParams params;
  params.d_cut = opt.d_cut;
  params.rho_min = opt.rho_min;
  params.delta_min = opt.delta_min;
  params.epsilon = opt.epsilon.value_or(0.0);
  params.threads = opt.threads > 0
                       ? opt.threads
                       : std::max(1u, std::thread::hardware_concurrency());
  params.seed = opt.seed;
  try {
    params.validate();
    if (opt.algo == "s-approx" && !(params.epsilon > 0.0))
      throw std::invalid_argument("--epsilon must be set (> 0) for s-approx");
  } catch (const std::exception& e) {
    std::fprintf(stderr, "parameter error: %s\n", e.what());
    return 1;
  }

  dpc::Dataset points;
  std::vector<int> truth;
  try {
    if (!opt.input.empty()) {
      points = dpc::load_dataset(opt.input);
    } else if (opt.generate == "gaussian") {
      auto mixture = dpc::generate_gaussian(opt.k, opt.n, opt.dim, opt.spread, opt.seed);
      points = std::move(mixture.points);
      truth = std::move(mixture.truth);
    } else {
      points = dpc::generate_random_walk(opt.n, opt.dim, opt.seed);
    }
    if (!opt.out_data.empty()) dpc::save_dataset(points, opt.out_data);
    if (!opt.out_truth.empty() && !truth.empty())
      dpc::export_labels(truth, opt.out_truth);
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "parameter error: %s\n", e.what());
    return 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "i/o error: %s\n", e.what());
    return 2;
  }

  dpc::RunResult result;
  if (opt.algo == "scan") {
    result = dpc::run_scan(points, params);
  } else if (opt.algo == "ex") {
    result = dpc::run_ex_dpc(points, params);
  } else if (opt.algo == "approx") {
    result = dpc::run_approx_dpc(points, params);
  } else {
    result = dpc::run_s_approx_dpc(points, params);
  }

  std::optional<double> rand;
  try {
    if (!opt.out_labels.empty())
      dpc::export_labels(result.clustering.labels, opt.out_labels);
    if (!opt.out_decision_graph.empty())
      dpc::export_decision_graph(result.profile, opt.out_decision_graph);
    if (!opt.eval_path.empty()) {
      const auto reference = dpc::load_labels(opt.eval_path);
      rand = dpc::rand_index(result.clustering.labels, reference);
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "i/o error: %s\n", e.what());
    return 2;
  }

  if (opt.report == "json-lines") {
    nlohmann::json line{
        {"algo", opt.algo},
        {"n", points.size()},
        {"d", points.dim},
        {"threads", params.threads},
        {"d_cut", params.d_cut},
        {"rho_min", params.rho_min},
        {"delta_min", params.delta_min},
        {"density_seconds", result.timings.density_seconds},
        {"dependency_seconds", result.timings.dependency_seconds},
        {"labeling_seconds", result.timings.labeling_seconds},
        {"clusters", result.clustering.cluster_count()},
        {"noise", result.clustering.noise_count()},
    };
    if (opt.algo == "s-approx") line["epsilon"] = params.epsilon;
    if (rand) line["rand_index"] = *rand;
    std::printf("%s\n", line.dump().c_str());
  } else {
    std::printf("algo=%s\n", opt.algo.c_str());
    std::printf("n=%zu\n", points.size());
    std::printf("d=%d\n", points.dim);
    std::printf("threads=%d\n", params.threads);
    std::printf("d_cut=%g\n", params.d_cut);
    std::printf("rho_min=%g\n", params.rho_min);
    std::printf("delta_min=%g\n", params.delta_min);
    if (opt.algo == "s-approx") std::printf("epsilon=%g\n", params.epsilon);
    std::printf("density_seconds=%.6f\n", result.timings.density_seconds);
    std::printf("dependency_seconds=%.6f\n", result.timings.dependency_seconds);
    std::printf("labeling_seconds=%.6f\n", result.timings.labeling_seconds);
    std::printf("clusters=%d\n", result.clustering.cluster_count());
    std::printf("noise=%zu\n", result.clustering.noise_count());
    if (rand) std::printf("rand_index=%.6f\n", *rand);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Density-peaks clustering: exact (kd-tree), approximate (grid), and "
      "sampled (fine grid) algorithms with a quadratic reference scan."};
  CliOptions opt;

  app.add_option("--algo", opt.algo, "Algorithm to run")
      ->check(CLI::IsMember({"scan", "ex", "approx", "s-approx"}))
      ->capture_default_str();
  auto* input = app.add_option("--input", opt.input,
                               "Dataset file: one point per line, comma- or "
                               "whitespace-separated; optional header line");
  auto* generate = app.add_option("--generate", opt.generate,
                                  "Generate a dataset instead of loading one")
                       ->check(CLI::IsMember({"gaussian", "walk"}));
  input->excludes(generate);
  generate->excludes(input);
  app.add_option("--n", opt.n, "Points to generate")->capture_default_str();
  app.add_option("--d", opt.dim, "Dimensions to generate")->capture_default_str();
  app.add_option("--k", opt.k, "Gaussian cluster count")->capture_default_str();
  app.add_option("--spread", opt.spread, "Gaussian cluster stddev")
      ->capture_default_str();
  app.add_option("--seed", opt.seed, "Generator seed")->capture_default_str();
  app.add_option("--dcut", opt.d_cut,
                 "Density cutoff radius; a point always counts itself "
                 "(distance 0) toward its own density")
      ->required();
  app.add_option("--rho-min", opt.rho_min,
                 "Noise threshold: points with density below it are noise "
                 "(label -1)")
      ->capture_default_str();
  app.add_option("--delta-min", opt.delta_min,
                 "Center threshold on the dependent distance; must exceed "
                 "--dcut (default: only the global density peak)");
  app.add_option("--epsilon", opt.epsilon,
                 "Cell granularity for s-approx (> 0); cells have side "
                 "epsilon*dcut/sqrt(d)");
  app.add_option("--threads", opt.threads,
                 "Worker threads (default: hardware concurrency)");
  app.add_option("--out-labels", opt.out_labels,
                 "Write 'id,label' CSV (-1 noise, -2 unassigned)");
  app.add_option("--out-decision-graph", opt.out_decision_graph,
                 "Write 'id,rho,delta' CSV ('inf' for the global peak, empty "
                 "rho for points the sampled algorithm skipped)");
  app.add_option("--out-data", opt.out_data, "Write the point set itself as CSV");
  app.add_option("--out-truth", opt.out_truth,
                 "Write generator ground-truth labels (gaussian only)");
  app.add_option("--eval", opt.eval_path,
                 "Reference label file; prints the Rand index against it");
  app.add_option("--report", opt.report, "Report format")
      ->check(CLI::IsMember({"text", "json-lines"}))
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }
  return run(opt);
}
