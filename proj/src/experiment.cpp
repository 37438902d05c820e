#include "netavg/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <exception>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <json.hpp>

#include "netavg/kernels.hpp"
#include "netavg/metrics.hpp"
#include "netavg/spectral.hpp"

namespace netavg {

namespace {

std::string fmt(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

}  // namespace

std::string preset_tag(Preset p) {
  switch (p) {
    case Preset::fig_mse: return "fig-mse";
    case Preset::fig_scaling: return "fig-scaling";
    case Preset::spectral_report: return "spectral-report";
    case Preset::custom: return "custom";
  }
  throw std::invalid_argument("preset_tag: unknown preset");
}

Preset preset_from_tag(const std::string& tag) {
  if (tag == "fig-mse") return Preset::fig_mse;
  if (tag == "fig-scaling") return Preset::fig_scaling;
  if (tag == "spectral-report") return Preset::spectral_report;
  if (tag == "custom") return Preset::custom;
  throw std::invalid_argument("unknown preset: " + tag);
}

ExperimentSpec default_spec(Preset preset) {
  ExperimentSpec spec;
  spec.preset = preset;
  switch (preset) {
    case Preset::fig_mse:
      spec.topology = Topology::grid2d;
      spec.sizes = {900, 2500};
      spec.sample_paths = 50;
      spec.max_outer = 200;
      break;
    case Preset::fig_scaling:
      spec.topology = Topology::grid2d;
      spec.sizes = {100, 400, 900, 1600, 2500};
      spec.sample_paths = 50;
      spec.max_outer = 200;
      break;
    case Preset::spectral_report:
      spec.topology = Topology::grid2d;
      spec.sizes = {16, 36, 64, 100};
      break;
    case Preset::custom:
      spec.topology = Topology::grid2d;
      spec.sizes = {25};
      spec.sample_paths = 8;
      spec.max_outer = 100;
      break;
  }
  return spec;
}

double effective_delta(const ExperimentSpec& spec, int n) {
  if (spec.delta_prime > 0.0 && spec.topology == Topology::rgg) {
    const double ln = std::log(static_cast<double>(n));
    return spec.delta_prime / (ln * ln);
  }
  return spec.delta;
}

std::vector<std::string> validate_spec_fields(const ExperimentSpec& spec) {
  std::vector<std::string> errors;
  const auto fail = [&errors](std::string msg) { errors.push_back(std::move(msg)); };

  if (!spec.has_seed) fail("seed is required");
  if (spec.sizes.empty()) fail("sizes must be non-empty");
  if (!(spec.sigma2 >= 0.0)) fail("sigma2 must be >= 0");
  if (!(spec.lambda2_hint > 0.0)) fail("lambda2_hint must be > 0");
  if (spec.max_outer < 1) fail("max_outer must be >= 1");
  if (spec.record_every < 0) fail("record_every must be >= 0");
  if (spec.workers < 0) fail("workers must be >= 0");
  if (!(spec.c > 0.0)) fail("c must be > 0");
  if (spec.retry_cap < 1) fail("retry_cap must be >= 1");
  if (spec.spectral_samples < 1) fail("spectral_samples must be >= 1");
  if (!(spec.stop_target >= 0.0)) fail("stop_target must be > 0, or 0 for the sigma2*delta default");
  if (spec.out_dir.empty()) fail("out must be non-empty");
  if (spec.delta_prime < 0.0) fail("delta_prime must be >= 0");
  if (spec.delta_prime > 0.0 && spec.topology != Topology::rgg)
    fail("delta_prime applies only to rgg topology");

  const bool runs_protocol = spec.preset != Preset::spectral_report;
  if (runs_protocol) {
    if (spec.sample_paths < 2) fail("paths must be >= 2");
    if (spec.sample_paths > 1000000) fail("paths must be <= 1000000");
  }

  for (int n : spec.sizes) {
    switch (spec.topology) {
      case Topology::cycle:
        if (n < 3) fail("sizes entry " + std::to_string(n) + " invalid for cycle (need n >= 3)");
        break;
      case Topology::grid2d: {
        const int m = static_cast<int>(std::lround(std::sqrt(static_cast<double>(n))));
        if (n < 4 || m * m != n)
          fail("sizes entry " + std::to_string(n) +
               " invalid for grid2d (need a perfect square m^2 with m >= 2)");
        break;
      }
      case Topology::rgg: {
        if (n < 2) {
          fail("sizes entry " + std::to_string(n) + " invalid for rgg (need n >= 2)");
          break;
        }
        if (spec.c > 0.0 && rgg_squares_per_side(n, spec.c) < 2)
          fail("sizes entry " + std::to_string(n) + " invalid for rgg (partition below 2x2 at c = " +
               fmt(spec.c) + ")");
        break;
      }
    }
    if (spec.delta_prime == 0.0 || spec.topology != Topology::rgg) continue;
    const double d = effective_delta(spec, n);
    if (!(d > 0.0 && d < 0.5))
      fail("delta_prime " + fmt(spec.delta_prime) + " gives delta " + fmt(d) +
           " outside (0, 1/2) at n = " + std::to_string(n));
  }
  if (spec.delta_prime == 0.0 && !(spec.delta > 0.0 && spec.delta < 0.5))
    fail("delta must be in (0, 1/2)");
  return errors;
}

std::string serialize_spec(const ExperimentSpec& spec) {
  std::ostringstream out;
  out << "preset = " << preset_tag(spec.preset) << '\n';
  out << "topology = " << topology_tag(spec.topology) << '\n';
  out << "sizes = ";
  for (std::size_t k = 0; k < spec.sizes.size(); ++k) {
    if (k) out << ',';
    out << spec.sizes[k];
  }
  out << '\n';
  out << "seed = " << spec.seed << '\n';
  out << "paths = " << spec.sample_paths << '\n';
  out << "max_outer = " << spec.max_outer << '\n';
  out << "delta = " << fmt(spec.delta) << '\n';
  out << "delta_prime = " << fmt(spec.delta_prime) << '\n';
  out << "sigma2 = " << fmt(spec.sigma2) << '\n';
  out << "lambda2_hint = " << fmt(spec.lambda2_hint) << '\n';
  out << "mode = " << dissemination_mode_tag(spec.mode) << '\n';
  out << "record_every = " << spec.record_every << '\n';
  out << "snapshot_theta = " << (spec.snapshot_theta ? "true" : "false") << '\n';
  out << "workers = " << spec.workers << '\n';
  out << "c = " << fmt(spec.c) << '\n';
  out << "retry_cap = " << spec.retry_cap << '\n';
  out << "spectral_samples = " << spec.spectral_samples << '\n';
  out << "stop_target = " << fmt(spec.stop_target) << '\n';
  out << "out = " << spec.out_dir << '\n';
  return out.str();
}

namespace {

bool parse_double_exact(const std::string& tok, double& v) {
  const auto res = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  return res.ec == std::errc{} && res.ptr == tok.data() + tok.size();
}

template <class Int>
bool parse_int_exact(const std::string& tok, Int& v) {
  const auto res = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  return res.ec == std::errc{} && res.ptr == tok.data() + tok.size();
}

}  // namespace

ExperimentSpec parse_spec_text(const std::string& text, std::vector<std::string>& errors) {
  ExperimentSpec spec;
  std::istringstream in(text);
  std::string line;
  std::vector<std::string> seen_keys;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    const std::string stripped = trim(line);
    if (stripped.empty()) continue;
    const auto eq = stripped.find('=');
    if (eq == std::string::npos) {
      errors.push_back("line " + std::to_string(line_no) + ": expected 'key = value'");
      continue;
    }
    const std::string key = trim(stripped.substr(0, eq));
    const std::string value = trim(stripped.substr(eq + 1));
    if (key.empty()) {
      errors.push_back("line " + std::to_string(line_no) + ": empty key");
      continue;
    }
    if (std::find(seen_keys.begin(), seen_keys.end(), key) != seen_keys.end()) {
      errors.push_back("duplicate key '" + key + "'");
      continue;
    }
    seen_keys.push_back(key);

    const auto bad_value = [&]() {
      errors.push_back("key '" + key + "': bad value '" + value + "'");
    };
    try {
      if (key == "preset") {
        spec.preset = preset_from_tag(value);
      } else if (key == "topology") {
        spec.topology = topology_from_tag(value);
      } else if (key == "sizes") {
        std::vector<int> sizes;
        std::istringstream ss(value);
        std::string item;
        bool ok = !value.empty();
        while (std::getline(ss, item, ',')) {
          int n = 0;
          if (!parse_int_exact(trim(item), n)) {
            ok = false;
            break;
          }
          sizes.push_back(n);
        }
        if (!ok) {
          bad_value();
        } else {
          spec.sizes = std::move(sizes);
        }
      } else if (key == "seed") {
        std::uint64_t s = 0;
        if (!parse_int_exact(value, s)) {
          bad_value();
        } else {
          spec.seed = s;
          spec.has_seed = true;
        }
      } else if (key == "paths") {
        if (!parse_int_exact(value, spec.sample_paths)) bad_value();
      } else if (key == "max_outer") {
        if (!parse_int_exact(value, spec.max_outer)) bad_value();
      } else if (key == "delta") {
        if (!parse_double_exact(value, spec.delta)) bad_value();
      } else if (key == "delta_prime") {
        if (!parse_double_exact(value, spec.delta_prime)) bad_value();
      } else if (key == "sigma2") {
        if (!parse_double_exact(value, spec.sigma2)) bad_value();
      } else if (key == "lambda2_hint") {
        if (!parse_double_exact(value, spec.lambda2_hint)) bad_value();
      } else if (key == "mode") {
        spec.mode = dissemination_mode_from_tag(value);
      } else if (key == "record_every") {
        if (!parse_int_exact(value, spec.record_every)) bad_value();
      } else if (key == "snapshot_theta") {
        if (value == "true") spec.snapshot_theta = true;
        else if (value == "false") spec.snapshot_theta = false;
        else bad_value();
      } else if (key == "workers") {
        if (!parse_int_exact(value, spec.workers)) bad_value();
      } else if (key == "c") {
        if (!parse_double_exact(value, spec.c)) bad_value();
      } else if (key == "retry_cap") {
        if (!parse_int_exact(value, spec.retry_cap)) bad_value();
      } else if (key == "spectral_samples") {
        if (!parse_int_exact(value, spec.spectral_samples)) bad_value();
      } else if (key == "stop_target") {
        if (!parse_double_exact(value, spec.stop_target)) bad_value();
      } else if (key == "out") {
        spec.out_dir = value;
      } else {
        errors.push_back("unknown key '" + key + "'");
      }
    } catch (const std::invalid_argument& e) {
      errors.push_back("key '" + key + "': " + e.what());
    }
  }
  return spec;
}

ExperimentSpec load_spec_file(const std::string& path, std::vector<std::string>& errors) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read spec file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  ExperimentSpec spec = parse_spec_text(buf.str(), errors);
  const auto domain = validate_spec_fields(spec);
  errors.insert(errors.end(), domain.begin(), domain.end());
  return spec;
}

std::uint64_t stream_id_graph(int n) { return 0x0100000000ull + static_cast<std::uint64_t>(n); }
std::uint64_t stream_id_init(int n) { return 0x0200000000ull + static_cast<std::uint64_t>(n); }
std::uint64_t stream_id_spectral(int n) { return 0x0300000000ull + static_cast<std::uint64_t>(n); }

std::uint64_t stream_id_path(int n, int path) {
  return 0x1000000000ull + static_cast<std::uint64_t>(n) * 0x100000ull +
         static_cast<std::uint64_t>(path);
}

std::vector<double> draw_initial_theta(std::uint64_t seed, int n) {
  RandomStream rng(seed, stream_id_init(n));
  std::vector<double> theta(static_cast<std::size_t>(n));
  for (double& v : theta) v = 1.0 + rng.gaussian();
  return theta;
}

std::vector<RunTrace> run_sample_paths(const Graph& g, const std::vector<double>& theta0,
                                       const ProtocolConfig& config, std::uint64_t seed, int paths,
                                       int workers) {
  if (paths < 1) throw std::invalid_argument("run_sample_paths: paths must be >= 1");
  if (workers <= 0) workers = static_cast<int>(std::thread::hardware_concurrency());
  if (workers < 1) workers = 1;
  workers = std::min(workers, paths);

  std::vector<RunTrace> traces(static_cast<std::size_t>(paths));
  std::atomic<int> next{0};
  const auto work = [&]() {
    for (int p = next.fetch_add(1); p < paths; p = next.fetch_add(1)) {
      ProtocolConfig cfg = config;
      cfg.record_full_theta = config.record_full_theta && p == 0;
      RandomStream rng(seed, stream_id_path(g.n, p));
      RunTrace trace = protocol::run(g, theta0, cfg, rng);
      trace.sample_path_id = p;
      traces[static_cast<std::size_t>(p)] = std::move(trace);
    }
  };

  if (workers == 1) {
    work();
    return traces;
  }
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> failures(static_cast<std::size_t>(workers));
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&, w]() {
      try {
        work();
      } catch (...) {
        failures[static_cast<std::size_t>(w)] = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  for (const auto& f : failures) {
    if (f) std::rethrow_exception(f);
  }
  return traces;
}

namespace {

using json = nlohmann::ordered_json;

Graph build_graph_for(const ExperimentSpec& spec, int n) {
  switch (spec.topology) {
    case Topology::cycle: return build_cycle(n);
    case Topology::grid2d:
      return build_grid(static_cast<int>(std::lround(std::sqrt(static_cast<double>(n)))));
    case Topology::rgg: {
      RandomStream rng(spec.seed, stream_id_graph(n));
      return build_rgg(n, spec.c, rng, spec.retry_cap);
    }
  }
  throw std::invalid_argument("build_graph_for: unknown topology");
}

std::vector<std::string> metadata_lines(const ExperimentSpec& spec, int n, double delta_n) {
  std::vector<std::string> lines;
  std::istringstream echo(serialize_spec(spec));
  std::string line;
  while (std::getline(echo, line)) lines.push_back(line);
  lines.push_back("size = " + std::to_string(n));
  lines.push_back("effective_delta = " + fmt(delta_n));
  if (spec.record_every > 0) {
    lines.push_back("snapshot_stride = " + std::to_string(spec.record_every));
  } else {
    lines.push_back("snapshot_stride = default (every tau up to 100, then every 10)");
  }
  return lines;
}

json spec_to_json(const ExperimentSpec& spec) {
  json j;
  j["preset"] = preset_tag(spec.preset);
  j["topology"] = topology_tag(spec.topology);
  j["sizes"] = spec.sizes;
  j["seed"] = spec.seed;
  j["paths"] = spec.sample_paths;
  j["max_outer"] = spec.max_outer;
  j["delta"] = spec.delta;
  j["delta_prime"] = spec.delta_prime;
  j["sigma2"] = spec.sigma2;
  j["lambda2_hint"] = spec.lambda2_hint;
  j["mode"] = dissemination_mode_tag(spec.mode);
  j["record_every"] = spec.record_every;
  j["snapshot_theta"] = spec.snapshot_theta;
  j["workers"] = spec.workers;
  j["c"] = spec.c;
  j["retry_cap"] = spec.retry_cap;
  j["spectral_samples"] = spec.spectral_samples;
  j["stop_target"] = spec.stop_target;
  j["out"] = spec.out_dir;
  return j;
}

json bound_report_to_json(const BoundReport& report) {
  json j;
  j["name"] = report.name;
  j["applicable"] = report.applicable;
  if (!report.applicable) j["reason"] = report.reason;
  j["all_pass"] = report.all_pass;
  json points = json::array();
  for (const BoundCheckPoint& p : report.points) {
    points.push_back(
        {{"tau", p.tau}, {"value", p.value}, {"ci", p.ci}, {"bound", p.bound}, {"pass", p.pass}});
  }
  j["points"] = std::move(points);
  return j;
}

json stopping_to_json(const StoppingTime& st) {
  json j;
  j["target"] = st.target;
  j["reached"] = st.reached;
  if (st.reached) {
    j["tau"] = st.tau;
    j["rounds"] = st.rounds;
    j["transmissions"] = st.transmissions;
    j["mse"] = st.mse;
  }
  return j;
}

class OutputSink {
 public:
  OutputSink(std::filesystem::path dir, ExperimentResult& result)
      : dir_(std::move(dir)), result_(result) {}

  void write(const std::string& name, const std::string& content) {
    const std::filesystem::path path = dir_ / name;
    std::ofstream out(path, std::ios::binary);
    out << content;
    out.close();
    if (!out) throw std::runtime_error("failed to write " + path.string());
    result_.files_written.push_back(path.string());
  }

 private:
  std::filesystem::path dir_;
  ExperimentResult& result_;
};

std::string render_csv(const MseCurve& curve, const std::vector<std::string>& metadata) {
  std::ostringstream out;
  metrics::write_mse_csv(curve, out, metadata);
  return out.str();
}

std::string render_trace_csv(const std::vector<RunTrace>& traces,
                             const std::vector<std::string>& metadata) {
  std::ostringstream out;
  metrics::write_trace_csv(traces, out, metadata);
  return out.str();
}

std::string render_theta_csv(const RunTrace& trace, const std::vector<std::string>& metadata) {
  std::ostringstream out;
  for (const auto& line : metadata) out << "# " << line << '\n';
  out << "tau,node,theta\n";
  for (std::size_t k = 0; k < trace.theta_snapshots.size(); ++k) {
    const auto& theta = trace.theta_snapshots[k];
    for (std::size_t v = 0; v < theta.size(); ++v) {
      out << trace.snapshots[k].tau << ',' << v << ',' << fmt(theta[v]) << '\n';
    }
  }
  return out.str();
}

struct SizeRun {
  Graph graph;
  std::vector<double> theta0;
  std::vector<RunTrace> traces;
  MseCurve curve;
  double delta_n = 0.0;
  double theta_bar = 0.0;
};

SizeRun simulate_size(const ExperimentSpec& spec, int n) {
  SizeRun run;
  run.graph = build_graph_for(spec, n);
  run.delta_n = effective_delta(spec, n);
  run.theta0 = draw_initial_theta(spec.seed, n);
  run.theta_bar = metrics::sample_mean(run.theta0);
  ProtocolConfig cfg;
  cfg.delta = run.delta_n;
  cfg.sigma2 = spec.sigma2;
  cfg.max_outer = spec.max_outer;
  cfg.mode = spec.mode;
  cfg.lambda2_hint = spec.lambda2_hint;
  cfg.record_every = spec.record_every;
  cfg.record_full_theta = spec.snapshot_theta;
  run.traces = run_sample_paths(run.graph, run.theta0, cfg, spec.seed, spec.sample_paths,
                                spec.workers);
  run.curve = metrics::mse_curve(run.traces, run.theta_bar);
  return run;
}

std::string size_stub(const ExperimentSpec& spec, int n) {
  return topology_tag(spec.topology) + "_n" + std::to_string(n);
}

void emit_curves(const ExperimentSpec& spec, OutputSink& sink, bool with_aux) {
  for (int n : spec.sizes) {
    const SizeRun run = simulate_size(spec, n);
    auto meta = metadata_lines(spec, n, run.delta_n);
    meta.push_back("theta_bar = " + fmt(run.theta_bar));
    const std::string stub = size_stub(spec, n);
    sink.write("mse_" + stub + ".csv", render_csv(run.curve, meta));
    if (spec.snapshot_theta && !run.traces.empty() && !run.traces[0].theta_snapshots.empty())
      sink.write("theta_" + stub + "_path0.csv", render_theta_csv(run.traces[0], meta));
    if (!with_aux) continue;

    sink.write("trace_" + stub + ".csv", render_trace_csv(run.traces, meta));

    const double target = spec.stop_target > 0.0 ? spec.stop_target : spec.sigma2 * run.delta_n;
    json report;
    report["topology"] = topology_tag(spec.topology);
    report["n"] = n;
    report["stopping"] = stopping_to_json(metrics::stopping_time(run.curve, target));
    if (spec.topology != Topology::rgg) {
      const double lambda2 = spectral::lambda2_gap(spectral::expected_matrix_closed_form(run.graph));
      const double e2_initial =
          kernels::sum_sq_dev(run.theta0.data(), run.theta0.size(), run.theta_bar) /
          static_cast<double>(n);
      report["lambda2"] = lambda2;
      report["e1_bound"] =
          bound_report_to_json(metrics::check_e1_bound(run.curve, spec.sigma2, run.delta_n, lambda2));
      report["e2_bound"] = bound_report_to_json(
          metrics::check_e2_bound(run.curve, spec.sigma2, run.delta_n, lambda2, e2_initial));
    }
    report["spec"] = spec_to_json(spec);
    sink.write("report_" + stub + ".json", report.dump(2) + "\n");
  }
}

void emit_scaling(const ExperimentSpec& spec, OutputSink& sink) {
  std::ostringstream out;
  for (const auto& line : metadata_lines(spec, 0, spec.delta)) {
    if (line.rfind("size =", 0) == 0 || line.rfind("effective_delta =", 0) == 0) continue;
    out << "# " << line << '\n';
  }
  out << "n,m,diameter,inner_rounds_per_outer,tau_star,rounds,transmissions,mse_at_stop,reached\n";
  for (int n : spec.sizes) {
    const SizeRun run = simulate_size(spec, n);
    const double target = spec.stop_target > 0.0 ? spec.stop_target : spec.sigma2 * run.delta_n;
    const StoppingTime st = metrics::stopping_time(run.curve, target);
    out << n << ',' << run.graph.m << ',' << diameter(run.graph) << ','
        << run.curve.inner_rounds_per_outer << ',';
    if (st.reached) {
      out << st.tau << ',' << st.rounds << ',' << st.transmissions << ',' << fmt(st.mse) << ",1\n";
    } else {
      out << ",,,,0\n";
    }
  }
  sink.write("scaling_" + topology_tag(spec.topology) + ".csv", out.str());
}

void emit_spectral_report(const ExperimentSpec& spec, OutputSink& sink) {
  for (int n : spec.sizes) {
    const Graph g = build_graph_for(spec, n);
    AveragedMatrix matrix;
    if (spec.topology == Topology::rgg) {
      RandomStream rng(spec.seed, stream_id_spectral(n));
      matrix = spectral::expected_matrix_monte_carlo(g, spec.spectral_samples, rng);
    } else {
      matrix = spectral::expected_matrix_closed_form(g);
    }
    const double lambda2 = spectral::lambda2_gap(matrix);
    const double rho = spectral::poincare_coefficient(matrix, spectral::canonical_paths(g));

    json j;
    j["topology"] = topology_tag(spec.topology);
    j["n"] = n;
    j["m"] = g.m;
    j["diameter"] = diameter(g);
    j["lambda2"] = lambda2;
    j["poincare_rho"] = rho;
    j["poincare_bound"] = 1.0 / rho;
    j["provenance"] =
        matrix.provenance == MatrixProvenance::closed_form ? "closed-form" : "monte-carlo";
    j["samples"] = matrix.samples;
    j["min_square_occupancy"] = g.min_square_occupancy();
    j["max_square_occupancy"] = g.max_square_occupancy();
    if (spec.topology == Topology::rgg) {
      // Shape constant in 1/rho >= 1/(c1 * ln n).
      j["c1_fit"] = rho / std::log(static_cast<double>(n));
    }
    j["spec"] = spec_to_json(spec);
    sink.write("spectral_" + size_stub(spec, n) + ".json", j.dump(2) + "\n");
  }
}

}  // namespace

ExperimentResult run_experiment(const ExperimentSpec& spec) {
  ExperimentResult result;
  const auto violations = validate_spec_fields(spec);
  if (!violations.empty()) {
    result.messages = violations;
    return result;
  }
  try {
    std::filesystem::create_directories(spec.out_dir);
    OutputSink sink(spec.out_dir, result);
    switch (spec.preset) {
      case Preset::fig_mse:
        emit_curves(spec, sink, /*with_aux=*/false);
        break;
      case Preset::fig_scaling:
        emit_scaling(spec, sink);
        break;
      case Preset::spectral_report:
        emit_spectral_report(spec, sink);
        break;
      case Preset::custom:
        emit_curves(spec, sink, /*with_aux=*/true);
        break;
    }
    result.ok = true;
  } catch (const std::exception& e) {
    result.ok = false;
    result.messages.push_back(e.what());
  }
  return result;
}

}  // namespace netavg
