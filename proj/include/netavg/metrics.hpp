#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace netavg {

enum class DisseminationMode { explicit_messages, aggregate_noise };

std::string dissemination_mode_tag(DisseminationMode mode);
DisseminationMode dissemination_mode_from_tag(const std::string& tag);

// Per-recorded-tau summary. sum_sq_dev_init is about the run's initial mean
// theta_bar_init, so mse to the initial mean, consensus gap, and the e1/e2
// split can all be recovered without keeping full theta vectors.
struct TraceSnapshot {
  std::uint64_t tau = 0;
  std::uint64_t transmissions = 0;  // cumulative link messages
  double mean = 0.0;
  double sum_sq_dev_init = 0.0;
  double min = 0.0;
  double max = 0.0;
};

struct RunTrace {
  int sample_path_id = 0;
  std::uint64_t seed = 0;
  std::uint64_t stream_id = 0;
  int n = 0;
  double theta_bar_init = 0.0;
  std::uint64_t inner_rounds_per_outer = 0;  // M, wall-clock steps per outer round
  // Config echo.
  double delta = 0.0;
  double sigma2 = 0.0;
  double lambda2_hint = 1.0;
  int max_outer = 0;
  DisseminationMode mode = DisseminationMode::aggregate_noise;
  int record_every = 0;

  std::vector<TraceSnapshot> snapshots;
  // Full theta per recorded tau; populated only when requested.
  std::vector<std::vector<double>> theta_snapshots;
};

struct MseCurvePoint {
  std::uint64_t tau = 0;
  std::uint64_t transmissions = 0;
  double mse = 0.0;  // mean over paths of (1/n)*||theta - theta_bar*1||^2
  double e1 = 0.0;   // mean over paths of (mean theta - theta_bar)^2
  double e2 = 0.0;   // mean over paths of (1/n)*||theta - mean(theta)*1||^2
  double mean_bias = 0.0;  // across-path mean of (mean theta - theta_bar)
  double ci_mse = 0.0;     // 3-sigma halfwidths, normal approximation
  double ci_e1 = 0.0;
  double ci_e2 = 0.0;
  int paths = 0;
};

struct MseCurve {
  int n = 0;
  double theta_bar = 0.0;
  std::uint64_t inner_rounds_per_outer = 0;
  std::vector<MseCurvePoint> points;
};

struct BoundCheckPoint {
  std::uint64_t tau = 0;
  double value = 0.0;  // estimator
  double ci = 0.0;     // its 3-sigma halfwidth
  double bound = 0.0;  // analytical envelope
  bool pass = false;   // value - ci <= bound
};

// "applicable" is false when the envelope's derivation condition fails
// (e.g. delta > lambda2^2/4 for the disagreement bound); that is a report,
// not an error.
struct BoundReport {
  std::string name;
  bool applicable = true;
  std::string reason;
  bool all_pass = false;
  std::vector<BoundCheckPoint> points;
};

struct StoppingTime {
  bool reached = false;
  std::uint64_t tau = 0;
  std::uint64_t rounds = 0;         // M * tau wall-clock steps
  std::uint64_t transmissions = 0;  // cumulative link messages at tau
  double mse = 0.0;
  double target = 0.0;
};

namespace metrics {

double sample_mean(std::span<const double> values);
double consensus_gap(std::span<const double> values);

// Requires >= 2 traces recorded on identical (tau, transmissions) grids.
MseCurve mse_curve(const std::vector<RunTrace>& traces, double theta_bar);

// Envelope sigma^2*delta/lambda2^2 on the consensus-direction error e1.
BoundReport check_e1_bound(const MseCurve& curve, double sigma2, double delta, double lambda2);

// Two-term envelope on the disagreement energy e2; needs delta <= lambda2^2/4.
BoundReport check_e2_bound(const MseCurve& curve, double sigma2, double delta, double lambda2,
                           double e2_initial);

// Smallest recorded tau with mse <= target (resolution is the snapshot
// stride). target > 0.
StoppingTime stopping_time(const MseCurve& curve, double target);

// Columns: tau, transmissions, mse, e1, e2, ci, paths. Lines starting with
// '#' carry caller-provided metadata.
void write_mse_csv(const MseCurve& curve, std::ostream& out,
                   const std::vector<std::string>& metadata);

// Columns: sample_path_id, tau, transmissions_total, mse_to_initial_mean,
// consensus_gap, theta_mean.
void write_trace_csv(const std::vector<RunTrace>& traces, std::ostream& out,
                     const std::vector<std::string>& metadata);

}  // namespace metrics
}  // namespace netavg
