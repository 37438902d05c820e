#include "netavg/metrics.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <ostream>
#include <stdexcept>

#include "netavg/kernels.hpp"

namespace netavg {

std::string dissemination_mode_tag(DisseminationMode mode) {
  return mode == DisseminationMode::explicit_messages ? "explicit" : "aggregate";
}

DisseminationMode dissemination_mode_from_tag(const std::string& tag) {
  if (tag == "explicit") return DisseminationMode::explicit_messages;
  if (tag == "aggregate") return DisseminationMode::aggregate_noise;
  throw std::invalid_argument("unknown dissemination mode: " + tag);
}

namespace metrics {

namespace {

std::string fmt(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

// 3-sigma halfwidth of the mean of values, normal approximation.
double ci3(const std::vector<double>& values) {
  const std::size_t p = values.size();
  if (p < 2) return 0.0;
  const double mean = kernels::sum(values.data(), p) / static_cast<double>(p);
  const double var = kernels::sum_sq_dev(values.data(), p, mean) / static_cast<double>(p - 1);
  return 3.0 * std::sqrt(var / static_cast<double>(p));
}

}  // namespace

double sample_mean(std::span<const double> values) {
  if (values.empty()) throw std::invalid_argument("sample_mean: empty input");
  return kernels::sum(values.data(), values.size()) / static_cast<double>(values.size());
}

double consensus_gap(std::span<const double> values) {
  if (values.empty()) throw std::invalid_argument("consensus_gap: empty input");
  double lo = 0.0, hi = 0.0;
  kernels::min_max(values.data(), values.size(), lo, hi);
  return hi - lo;
}

MseCurve mse_curve(const std::vector<RunTrace>& traces, double theta_bar) {
  if (traces.size() < 2) throw std::invalid_argument("mse_curve: need at least 2 traces");
  const RunTrace& first = traces.front();
  const std::size_t points = first.snapshots.size();
  for (const RunTrace& t : traces) {
    if (t.n != first.n || t.inner_rounds_per_outer != first.inner_rounds_per_outer)
      throw std::invalid_argument("mse_curve: traces come from different configurations");
    if (t.snapshots.size() != points)
      throw std::invalid_argument("mse_curve: misaligned snapshot grids");
    for (std::size_t k = 0; k < points; ++k) {
      if (t.snapshots[k].tau != first.snapshots[k].tau ||
          t.snapshots[k].transmissions != first.snapshots[k].transmissions)
        throw std::invalid_argument("mse_curve: misaligned snapshot grids");
    }
  }

  MseCurve curve;
  curve.n = first.n;
  curve.theta_bar = theta_bar;
  curve.inner_rounds_per_outer = first.inner_rounds_per_outer;
  curve.points.resize(points);

  const std::size_t p = traces.size();
  std::vector<double> mse_p(p), e1_p(p), e2_p(p), dev_p(p);
  for (std::size_t k = 0; k < points; ++k) {
    for (std::size_t t = 0; t < p; ++t) {
      const TraceSnapshot& s = traces[t].snapshots[k];
      const double n = static_cast<double>(traces[t].n);
      const double c = traces[t].theta_bar_init;
      // ||x - theta_bar*1||^2 = ||x - c*1||^2 + 2n(c-theta_bar)(mean-c) + n(c-theta_bar)^2
      const double shift = c - theta_bar;
      const double mse = s.sum_sq_dev_init / n + 2.0 * shift * (s.mean - c) + shift * shift;
      const double dev = s.mean - theta_bar;
      const double e1 = dev * dev;
      mse_p[t] = mse;
      e1_p[t] = e1;
      e2_p[t] = std::max(0.0, mse - e1);
      dev_p[t] = dev;
    }
    MseCurvePoint& pt = curve.points[k];
    pt.tau = first.snapshots[k].tau;
    pt.transmissions = first.snapshots[k].transmissions;
    pt.paths = static_cast<int>(p);
    pt.mse = kernels::sum(mse_p.data(), p) / static_cast<double>(p);
    pt.e1 = kernels::sum(e1_p.data(), p) / static_cast<double>(p);
    pt.e2 = kernels::sum(e2_p.data(), p) / static_cast<double>(p);
    pt.mean_bias = kernels::sum(dev_p.data(), p) / static_cast<double>(p);
    pt.ci_mse = ci3(mse_p);
    pt.ci_e1 = ci3(e1_p);
    pt.ci_e2 = ci3(e2_p);
  }
  return curve;
}

BoundReport check_e1_bound(const MseCurve& curve, double sigma2, double delta, double lambda2) {
  if (!(sigma2 >= 0.0)) throw std::invalid_argument("check_e1_bound: sigma2 must be >= 0");
  if (!(delta > 0.0 && delta < 0.5))
    throw std::invalid_argument("check_e1_bound: delta must be in (0, 1/2)");
  if (!(lambda2 > 0.0)) throw std::invalid_argument("check_e1_bound: lambda2 must be > 0");
  BoundReport report;
  report.name = "e1_envelope";
  const double bound = sigma2 * delta / (lambda2 * lambda2);
  report.all_pass = true;
  report.points.reserve(curve.points.size());
  for (const MseCurvePoint& pt : curve.points) {
    BoundCheckPoint bp;
    bp.tau = pt.tau;
    bp.value = pt.e1;
    bp.ci = pt.ci_e1;
    bp.bound = bound;
    bp.pass = pt.e1 - pt.ci_e1 <= bound;
    report.all_pass = report.all_pass && bp.pass;
    report.points.push_back(bp);
  }
  return report;
}

BoundReport check_e2_bound(const MseCurve& curve, double sigma2, double delta, double lambda2,
                           double e2_initial) {
  if (!(sigma2 >= 0.0)) throw std::invalid_argument("check_e2_bound: sigma2 must be >= 0");
  if (!(delta > 0.0 && delta < 0.5))
    throw std::invalid_argument("check_e2_bound: delta must be in (0, 1/2)");
  if (!(lambda2 > 0.0)) throw std::invalid_argument("check_e2_bound: lambda2 must be > 0");
  if (!(e2_initial >= 0.0)) throw std::invalid_argument("check_e2_bound: e2_initial must be >= 0");
  BoundReport report;
  report.name = "e2_envelope";
  const double threshold = lambda2 * lambda2 / 4.0;
  if (delta > threshold) {
    report.applicable = false;
    report.reason = "delta " + fmt(delta) + " exceeds lambda2^2/4 = " + fmt(threshold) +
                    "; envelope derivation does not apply";
    report.all_pass = false;
    return report;
  }
  report.all_pass = true;
  report.points.reserve(curve.points.size());
  for (const MseCurvePoint& pt : curve.points) {
    const double x = static_cast<double>(pt.tau) + 1.0 / delta - 1.0;
    const double bound =
        sigma2 / (lambda2 * lambda2) * std::log(x) / x + e2_initial * (1.0 / delta - 1.0) / x;
    BoundCheckPoint bp;
    bp.tau = pt.tau;
    bp.value = pt.e2;
    bp.ci = pt.ci_e2;
    bp.bound = bound;
    bp.pass = pt.e2 - pt.ci_e2 <= bound;
    report.all_pass = report.all_pass && bp.pass;
    report.points.push_back(bp);
  }
  return report;
}

StoppingTime stopping_time(const MseCurve& curve, double target) {
  if (!(target > 0.0)) throw std::invalid_argument("stopping_time: target must be > 0");
  StoppingTime st;
  st.target = target;
  for (const MseCurvePoint& pt : curve.points) {
    if (pt.mse <= target) {
      st.reached = true;
      st.tau = pt.tau;
      st.rounds = curve.inner_rounds_per_outer * pt.tau;
      st.transmissions = pt.transmissions;
      st.mse = pt.mse;
      return st;
    }
  }
  return st;
}

void write_mse_csv(const MseCurve& curve, std::ostream& out,
                   const std::vector<std::string>& metadata) {
  for (const std::string& line : metadata) out << "# " << line << '\n';
  double max_bias = 0.0;
  for (const MseCurvePoint& pt : curve.points) max_bias = std::max(max_bias, std::abs(pt.mean_bias));
  out << "# max_abs_mean_bias = " << fmt(max_bias) << '\n';
  out << "tau,transmissions,mse,e1,e2,ci,paths\n";
  for (const MseCurvePoint& pt : curve.points) {
    out << pt.tau << ',' << pt.transmissions << ',' << fmt(pt.mse) << ',' << fmt(pt.e1) << ','
        << fmt(pt.e2) << ',' << fmt(pt.ci_mse) << ',' << pt.paths << '\n';
  }
}

void write_trace_csv(const std::vector<RunTrace>& traces, std::ostream& out,
                     const std::vector<std::string>& metadata) {
  for (const std::string& line : metadata) out << "# " << line << '\n';
  out << "sample_path_id,tau,transmissions_total,mse_to_initial_mean,consensus_gap,theta_mean\n";
  for (const RunTrace& t : traces) {
    const double n = static_cast<double>(t.n);
    for (const TraceSnapshot& s : t.snapshots) {
      out << t.sample_path_id << ',' << s.tau << ',' << s.transmissions << ','
          << fmt(s.sum_sq_dev_init / n) << ',' << fmt(s.max - s.min) << ',' << fmt(s.mean) << '\n';
    }
  }
}

}  // namespace metrics
}  // namespace netavg
