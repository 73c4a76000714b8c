#pragma once
#include <photocount/core.hpp>
#include <photocount/states.hpp>

#include <cstdint>
#include <functional>

namespace photocount {

enum class SimMode { independent, cw };
enum class TimingModel { instant, refined };

struct SimOptions {
  SimMode mode = SimMode::independent;
  TimingModel timing = TimingModel::instant;
  long n_windows = 100000;
  uint64_t seed = 1;
  int trajectories = 8;     // cw mode: independent trajectories pooled in order
  bool record_gaps = false; // inter-pulse times
  bool parallel = true;
};

/// Simulation output. Counts are per window (trajectory-major in cw mode).
/// tau2_samples hold the dead time leaked into each window (cw mode only;
/// independent windows never see a leak). Identical inputs give bit-identical
/// records regardless of thread count: every window (independent mode) and
/// every trajectory (cw mode) draws from its own seed-derived stream.
struct SimRecord {
  std::vector<int> counts;
  std::vector<double> tau2_samples;
  std::vector<double> gap_samples;
  uint64_t seed = 0;
  long n_windows = 0;
};

/// Event-level simulation of the counting model. Coherent states drive a
/// homogeneous Poisson arrival process at rate (eta |alpha|^2 + nu) / tau_m;
/// other states draw a photon number per window, place arrivals uniformly
/// and thin each with probability eta (dark arrivals added on top).
/// The instant timing model fires chained afterpulses exactly at dead-time
/// expiry with probability p(|alpha|^2); the refined model (cw + coherent
/// only) adds recovery thinning of photon detections and exponential
/// afterpulse delays, for pulse-timing studies.
SimRecord simulate(const DetectorConfig& cfg, const StateSpec& source,
                   const SimOptions& opts);
SimRecord simulate(const DetectorConfig& cfg, const PhotonDistribution& source,
                   const SimOptions& opts);

/// Serial reference path; same results as simulate(), kept for testing and
/// benchmarking the parallel kernels against.
SimRecord simulate_reference(const DetectorConfig& cfg, const StateSpec& source,
                             const SimOptions& opts);
SimRecord simulate_reference(const DetectorConfig& cfg,
                             const PhotonDistribution& source,
                             const SimOptions& opts);

/// Uninterrupted inter-pulse-time series under continuous coherent drive.
std::vector<double> simulate_gap_series(const DetectorConfig& cfg,
                                        double alpha_sq, long n_gaps,
                                        uint64_t seed,
                                        TimingModel timing = TimingModel::instant);

/// Right-continuous empirical CDF with sorted support.
class EmpiricalCdf {
 public:
  explicit EmpiricalCdf(std::vector<double> samples);
  double operator()(double t) const;
  /// Order statistic at level q in [0, 1].
  double quantile(double q) const;
  size_t size() const { return sorted_.size(); }
  const std::vector<double>& sorted() const { return sorted_; }

 private:
  std::vector<double> sorted_;
};

EmpiricalCdf empirical_cdf(std::vector<double> samples);

/// sup_t |F_emp(t) - F(t)| against a right-continuous model CDF, evaluated
/// at the sample points and their left limits (ties handled). Models with
/// atoms must supply their left-limit CDF separately.
double ks_distance(const EmpiricalCdf& emp,
                   const std::function<double(double)>& model_cdf);
double ks_distance(const EmpiricalCdf& emp,
                   const std::function<double(double)>& model_cdf,
                   const std::function<double(double)>& model_cdf_left);

/// Half-width of the Dvoretzky-Kiefer-Wolfowitz band at the given confidence.
double dkw_epsilon(size_t n, double confidence);

/// Normalized histogram of counts over n = 0..n_max.
std::vector<double> count_histogram(std::span<const int> counts, int n_max);

}  // namespace photocount
