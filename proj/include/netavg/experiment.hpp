#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "netavg/graph.hpp"
#include "netavg/metrics.hpp"
#include "netavg/protocol.hpp"

namespace netavg {

enum class Preset { fig_mse, fig_scaling, spectral_report, custom };

std::string preset_tag(Preset p);
Preset preset_from_tag(const std::string& tag);

// One experiment file = one flat key=value spec; every result file embeds the
// canonical echo so it can be regenerated exactly.
struct ExperimentSpec {
  Preset preset = Preset::custom;
  Topology topology = Topology::grid2d;
  std::vector<int> sizes;  // node counts, one run per entry
  std::uint64_t seed = 0;
  bool has_seed = false;
  int sample_paths = 50;
  int max_outer = 200;
  double delta = 0.1;
  // Optional rgg reparameterization delta = delta_prime / ln(n)^2; 0 disables.
  double delta_prime = 0.0;
  double sigma2 = 1.0;
  double lambda2_hint = 1.0;
  DisseminationMode mode = DisseminationMode::aggregate_noise;
  int record_every = 0;      // 0 = default stride (1 up to tau=100, then 10)
  bool snapshot_theta = false;
  int workers = 0;           // 0 = hardware concurrency
  double c = 2.0;            // rgg density parameter
  int retry_cap = 20;        // rgg redraw budget
  std::uint64_t spectral_samples = 10000;
  double stop_target = 0.0;  // 0 = sigma2 * delta
  std::string out_dir = "results";

  friend bool operator==(const ExperimentSpec&, const ExperimentSpec&) = default;
};

ExperimentSpec default_spec(Preset preset);

// Complete list of domain violations; empty means valid.
std::vector<std::string> validate_spec_fields(const ExperimentSpec& spec);

// Canonical echo: fixed key order, exact decimal rendering; parsing the echo
// reproduces the spec losslessly.
std::string serialize_spec(const ExperimentSpec& spec);

// Collects parse problems (bad numbers, unknown keys) into errors and keeps
// going, so the caller sees every violation at once.
ExperimentSpec parse_spec_text(const std::string& text, std::vector<std::string>& errors);

// I/O failures throw std::runtime_error; content problems land in errors.
ExperimentSpec load_spec_file(const std::string& path, std::vector<std::string>& errors);

// The effective delta for a run of n nodes (applies delta_prime when set).
double effective_delta(const ExperimentSpec& spec, int n);

struct ExperimentResult {
  bool ok = false;
  std::vector<std::string> files_written;
  std::vector<std::string> messages;
};

ExperimentResult run_experiment(const ExperimentSpec& spec);

// Deterministic multi-path driver: path p always uses the same derived
// stream, so results do not depend on the worker count.
std::vector<RunTrace> run_sample_paths(const Graph& g, const std::vector<double>& theta0,
                                       const ProtocolConfig& config, std::uint64_t seed, int paths,
                                       int workers);

// theta_i(0) = 1 + N(0,1), drawn once per (seed, n) on a dedicated stream and
// shared by all sample paths.
std::vector<double> draw_initial_theta(std::uint64_t seed, int n);

// Stream-id layout (documented so archives can be reproduced externally).
std::uint64_t stream_id_graph(int n);
std::uint64_t stream_id_init(int n);
std::uint64_t stream_id_spectral(int n);
std::uint64_t stream_id_path(int n, int path);

}  // namespace netavg
