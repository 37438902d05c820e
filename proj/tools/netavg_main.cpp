#include <cmath>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "netavg/experiment.hpp"
#include "netavg/graph.hpp"
#include "netavg/kernels.hpp"
#include "netavg/rng.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitRuntime = 1;
constexpr int kExitUsage = 2;

void print_errors(const std::vector<std::string>& errors) {
  for (const auto& e : errors) std::cerr << "error: " << e << '\n';
}

int cmd_run(const netavg::ExperimentSpec& spec) {
  const auto violations = netavg::validate_spec_fields(spec);
  if (!violations.empty()) {
    print_errors(violations);
    return kExitUsage;
  }
  const netavg::ExperimentResult result = netavg::run_experiment(spec);
  for (const auto& f : result.files_written) std::cout << "wrote " << f << '\n';
  if (!result.ok) {
    print_errors(result.messages);
    return kExitRuntime;
  }
  return kExitOk;
}

int cmd_validate(const std::string& path) {
  std::vector<std::string> errors;
  netavg::ExperimentSpec spec;
  try {
    spec = netavg::load_spec_file(path, errors);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
  if (!errors.empty()) {
    print_errors(errors);
    return kExitUsage;
  }
  std::cout << netavg::serialize_spec(spec);
  return kExitOk;
}

int cmd_graph_export(const std::string& topology, int n, double c, std::uint64_t seed, int retries,
                     const std::string& out_path) {
  netavg::Graph g;
  try {
    const netavg::Topology t = netavg::topology_from_tag(topology);
    switch (t) {
      case netavg::Topology::cycle:
        g = netavg::build_cycle(n);
        break;
      case netavg::Topology::grid2d: {
        const int m = static_cast<int>(std::lround(std::sqrt(static_cast<double>(n))));
        if (m * m != n) throw std::invalid_argument("grid2d size must be a perfect square");
        g = netavg::build_grid(m);
        break;
      }
      case netavg::Topology::rgg: {
        netavg::RandomStream rng(seed, netavg::stream_id_graph(n));
        g = netavg::build_rgg(n, c, rng, retries);
        break;
      }
    }
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
  std::ofstream out(out_path, std::ios::binary);
  if (!out) {
    std::cerr << "error: cannot open " << out_path << " for writing\n";
    return kExitRuntime;
  }
  netavg::write_edge_list(g, out);
  out.close();
  if (!out) {
    std::cerr << "error: failed writing " << out_path << '\n';
    return kExitRuntime;
  }
  std::cout << "wrote " << out_path << '\n';
  return kExitOk;
}

int cmd_graph_import(const std::string& in_path, const std::string& out_path) {
  std::ifstream in(in_path, std::ios::binary);
  if (!in) {
    std::cerr << "error: cannot read " << in_path << '\n';
    return kExitRuntime;
  }
  netavg::Graph g;
  try {
    g = netavg::read_edge_list(in);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
  std::cout << "topology=" << netavg::topology_tag(g.topology) << " n=" << g.n << " m=" << g.m
            << " edges=" << g.edges.size() << " diameter=" << netavg::diameter(g)
            << " min_occupancy=" << g.min_square_occupancy()
            << " max_occupancy=" << g.max_square_occupancy() << '\n';
  if (!out_path.empty()) {
    std::ofstream out(out_path, std::ios::binary);
    if (!out) {
      std::cerr << "error: cannot open " << out_path << " for writing\n";
      return kExitRuntime;
    }
    netavg::write_edge_list(g, out);
    out.close();
    if (!out) {
      std::cerr << "error: failed writing " << out_path << '\n';
      return kExitRuntime;
    }
    std::cout << "wrote " << out_path << '\n';
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"netavg: two-phase distributed averaging over noisy links"};
  app.require_subcommand(1);

  // run
  auto* run = app.add_subcommand("run", "Run an experiment and write result files");
  std::string preset_name;
  std::string spec_path;
  auto* preset_opt = run->add_option("--preset", preset_name, "Built-in experiment preset")
                         ->check(CLI::IsMember({"fig-mse", "fig-scaling", "spectral-report",
                                                "custom"}));
  auto* spec_opt = run->add_option("--spec", spec_path, "Spec file (key = value lines)");
  preset_opt->excludes(spec_opt);
  spec_opt->excludes(preset_opt);

  std::uint64_t seed = 0;
  int paths = 0;
  std::string out_dir;
  int workers = -1;
  std::string mode;
  std::vector<int> sizes;
  std::string topology;
  double delta = 0.0, delta_prime = -1.0, sigma2 = -1.0, lambda2_hint = 0.0, c = 0.0,
         stop_target = -1.0;
  int max_outer = 0, record_every = -1, retry_cap = 0;
  std::uint64_t spectral_samples = 0;
  bool snapshot_theta = false;
  std::string backend;
  run->add_option("--seed", seed, "RNG seed (required unless the spec file sets one)");
  run->add_option("--paths", paths, "Number of sample paths");
  run->add_option("--out", out_dir, "Output directory (overrides NETAVG_OUT and the spec)");
  run->add_option("--workers", workers, "Worker threads (0 = hardware concurrency)");
  run->add_option("--mode", mode, "Dissemination mode")
      ->check(CLI::IsMember({"explicit", "aggregate"}));
  run->add_option("--sizes", sizes, "Comma-separated node counts")->delimiter(',');
  run->add_option("--topology", topology, "Graph family")
      ->check(CLI::IsMember({"cycle", "grid2d", "rgg"}));
  run->add_option("--delta", delta, "Step-size tolerance, in (0, 1/2)");
  run->add_option("--delta-prime", delta_prime, "rgg reparameterization delta' (delta = delta'/ln(n)^2)");
  run->add_option("--sigma2", sigma2, "Per-transmission noise variance");
  run->add_option("--lambda2-hint", lambda2_hint, "Spectral gap estimate used in the step size");
  run->add_option("--max-outer", max_outer, "Outer iterations per run");
  run->add_option("--record-every", record_every, "Snapshot stride (0 = default schedule)");
  run->add_flag("--snapshot-theta", snapshot_theta, "Record full state vectors for sample path 0");
  run->add_option("--c", c, "rgg density parameter");
  run->add_option("--retry-cap", retry_cap, "rgg placement redraw budget");
  run->add_option("--spectral-samples", spectral_samples, "Monte Carlo rounds for spectral-report");
  run->add_option("--stop-target", stop_target, "Stopping-time MSE target (0 = sigma2*delta)");
  run->add_option("--backend", backend, "Reduction kernel backend")
      ->check(CLI::IsMember({"scalar", "avx2", "auto"}));

  // validate
  auto* validate = app.add_subcommand("validate", "Check a spec file and echo it canonically");
  std::string validate_path;
  validate->add_option("--spec", validate_path, "Spec file to validate")->required();

  // graph
  auto* graph = app.add_subcommand("graph", "Export or import graphs as edge-list files");
  graph->require_subcommand(1);
  auto* gexport = graph->add_subcommand("export", "Build a graph and write an edge-list file");
  std::string g_topology;
  int g_n = 0;
  double g_c = 2.0;
  std::uint64_t g_seed = 1;
  int g_retries = 20;
  std::string g_out;
  gexport->add_option("--topology", g_topology, "Graph family")
      ->required()
      ->check(CLI::IsMember({"cycle", "grid2d", "rgg"}));
  gexport->add_option("--n", g_n, "Node count")->required();
  gexport->add_option("--c", g_c, "rgg density parameter");
  gexport->add_option("--seed", g_seed, "RNG seed for rgg placement");
  gexport->add_option("--retries", g_retries, "rgg placement redraw budget");
  gexport->add_option("--out", g_out, "Output file")->required();

  auto* gimport = graph->add_subcommand("import", "Read an edge-list file and print a summary");
  std::string g_in, g_reexport;
  gimport->add_option("--in", g_in, "Input edge-list file")->required();
  gimport->add_option("--out", g_reexport, "Optional re-export path (round-trip check)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    app.exit(e);
    return kExitUsage;
  }

  if (validate->parsed()) return cmd_validate(validate_path);
  if (graph->parsed()) {
    if (gexport->parsed()) return cmd_graph_export(g_topology, g_n, g_c, g_seed, g_retries, g_out);
    return cmd_graph_import(g_in, g_reexport);
  }

  // run
  netavg::ExperimentSpec spec;
  if (run->count("--spec")) {
    std::vector<std::string> errors;
    try {
      spec = netavg::load_spec_file(spec_path, errors);
    } catch (const std::exception& e) {
      std::cerr << "error: " << e.what() << '\n';
      return kExitRuntime;
    }
    // Domain violations are re-checked after flag overrides; only parse
    // problems are fatal here.
    std::vector<std::string> parse_errors;
    for (const auto& msg : errors) {
      if (msg.find("key") != std::string::npos || msg.find("line") != std::string::npos)
        parse_errors.push_back(msg);
    }
    if (!parse_errors.empty()) {
      print_errors(parse_errors);
      return kExitUsage;
    }
  } else if (run->count("--preset")) {
    spec = netavg::default_spec(netavg::preset_from_tag(preset_name));
  } else {
    spec = netavg::default_spec(netavg::Preset::custom);
  }

  if (run->count("--seed")) {
    spec.seed = seed;
    spec.has_seed = true;
  }
  if (run->count("--paths")) spec.sample_paths = paths;
  if (run->count("--workers")) spec.workers = workers;
  if (run->count("--mode")) spec.mode = netavg::dissemination_mode_from_tag(mode);
  if (run->count("--sizes")) spec.sizes = sizes;
  if (run->count("--topology")) spec.topology = netavg::topology_from_tag(topology);
  if (run->count("--delta")) spec.delta = delta;
  if (run->count("--delta-prime")) spec.delta_prime = delta_prime;
  if (run->count("--sigma2")) spec.sigma2 = sigma2;
  if (run->count("--lambda2-hint")) spec.lambda2_hint = lambda2_hint;
  if (run->count("--max-outer")) spec.max_outer = max_outer;
  if (run->count("--record-every")) spec.record_every = record_every;
  if (run->count("--snapshot-theta")) spec.snapshot_theta = true;
  if (run->count("--c")) spec.c = c;
  if (run->count("--retry-cap")) spec.retry_cap = retry_cap;
  if (run->count("--spectral-samples")) spec.spectral_samples = spectral_samples;
  if (run->count("--stop-target")) spec.stop_target = stop_target;

  if (run->count("--out")) {
    spec.out_dir = out_dir;
  } else if (const char* env = std::getenv("NETAVG_OUT"); env != nullptr && *env != '\0') {
    spec.out_dir = env;
  }

  if (run->count("--backend") && !netavg::kernels::set_backend(backend)) {
    std::cerr << "error: backend " << backend << " is not available on this machine\n";
    return kExitUsage;
  }

  return cmd_run(spec);
}
