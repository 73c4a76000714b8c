#pragma once
#include <cmath>
#include <span>
#include <stdexcept>
#include <vector>

namespace photocount {

/// Detector and measurement-window parameters.
///
/// Durations are in seconds. `p0` and `r_ap` define the intensity-dependent
/// afterpulse probability p(x) = p0 + (r_ap / tau_m) * x, where x is the mean
/// photon number per window. Constant-p detectors set r_ap = 0. `tau_r` and
/// `tau_after` belong to the pulse-timing model only; none of the counting
/// formulas read them.
struct DetectorConfig {
  double tau_m;       ///< measurement-window length
  double tau_d;       ///< nonparalyzable dead time, 0 < tau_d < tau_m
  double eta = 1.0;   ///< detection efficiency in [0, 1]
  double nu = 0.0;    ///< mean dark counts per window
  double p0 = 0.0;    ///< afterpulse probability intercept, in [0, 1)
  double r_ap = 0.0;  ///< afterpulse slope (seconds)
  double tau_r = 0.0;      ///< recovery time (timing model only)
  double tau_after = 0.0;  ///< afterpulse delay constant (timing model only)

  DetectorConfig(double tau_m, double tau_d, double eta = 1.0, double nu = 0.0,
                 double p0 = 0.0, double r_ap = 0.0, double tau_r = 0.0,
                 double tau_after = 0.0);

  /// Maximal number of whole dead-time intervals fitting in one window.
  int slots() const { return slots_; }
  /// Largest possible pulse count: slots()+1, or slots() if tau_m = N*tau_d.
  int max_pulses() const { return max_pulses_; }
  bool integer_ratio() const { return integer_ratio_; }
  /// tau_m - N*tau_d, the live remainder after N whole dead times.
  double seam() const { return seam_; }
  double delta() const { return tau_d / tau_m; }

  /// Afterpulse probability at mean photon number `alpha_sq` per window.
  /// Throws std::domain_error once the linear law reaches 1.
  double afterpulse_prob(double alpha_sq) const;
  /// eta * alpha_sq + nu: the Poisson intensity seen by the counting formulas.
  double effective_intensity(double alpha_sq) const {
    return eta * alpha_sq + nu;
  }

 private:
  int slots_;
  int max_pulses_;
  bool integer_ratio_;
  double seam_;
};

struct DeadTimeCount {
  int slots;       // N
  int max_pulses;  // N or N+1
};

/// Poisson probability mean^n e^{-mean} / n!, evaluated in log space for
/// mean > 30 or n > 30.
double poisson_kernel(double mean, int n);

/// Live-time fraction (tau_m - n*tau_d)/tau_m for n whole dead times.
double eta_rr(const DetectorConfig& cfg, int n);

DeadTimeCount max_whole_deadtimes(const DetectorConfig& cfg);

double effective_intensity(const DetectorConfig& cfg, double alpha_sq);

/// Binomial coefficient as a double; Pascal-triangle cache up to n = 64,
/// log-gamma beyond.
double binomial(int n, int k);

/// Photon-number probabilities P_0..P_K with a tail bound enforced at
/// construction: 1 - sum <= tail_tol.
class PhotonDistribution {
 public:
  explicit PhotonDistribution(std::vector<double> probs,
                              double tail_tol = 1e-10);
  int cutoff() const { return static_cast<int>(probs_.size()) - 1; }
  double operator[](int k) const {
    return (k >= 0 && k <= cutoff()) ? probs_[static_cast<size_t>(k)] : 0.0;
  }
  const std::vector<double>& probs() const { return probs_; }

 private:
  std::vector<double> probs_;
};

/// Pulse-count probabilities over n = 0..N+1 for one window.
class PulseDistribution {
 public:
  PulseDistribution(std::vector<double> probs, int n_max,
                    double sum_tol = 1e-8);
  int n_max() const { return n_max_; }
  double operator[](int n) const {
    return (n >= 0 && n < static_cast<int>(probs_.size()))
               ? probs_[static_cast<size_t>(n)]
               : 0.0;
  }
  const std::vector<double>& probs() const { return probs_; }
  /// 1 - sum(probs) before any tail was discarded upstream.
  double truncation_residual() const { return residual_; }
  void set_truncation_residual(double r) { residual_ = r; }

 private:
  std::vector<double> probs_;
  int n_max_;
  double residual_ = 0.0;
};

double distribution_mean(std::span<const double> probs);
double distribution_variance(std::span<const double> probs);

/// 0.5 * sum |p_i - q_i|, shorter vector zero-padded.
double total_variation(std::span<const double> p, std::span<const double> q);

}  // namespace photocount
