#include <photocount/core.hpp>

#include <algorithm>
#include <array>
#include <numeric>

namespace photocount {

DetectorConfig::DetectorConfig(double tau_m_in, double tau_d_in, double eta_in,
                               double nu_in, double p0_in, double r_ap_in,
                               double tau_r_in, double tau_after_in)
    : tau_m(tau_m_in),
      tau_d(tau_d_in),
      eta(eta_in),
      nu(nu_in),
      p0(p0_in),
      r_ap(r_ap_in),
      tau_r(tau_r_in),
      tau_after(tau_after_in) {
  if (!(tau_m > 0.0) || !(tau_d > 0.0) || !(tau_d < tau_m))
    throw std::invalid_argument("DetectorConfig: need 0 < tau_d < tau_m");
  if (eta < 0.0 || eta > 1.0)
    throw std::invalid_argument("DetectorConfig: eta outside [0, 1]");
  if (nu < 0.0) throw std::invalid_argument("DetectorConfig: nu < 0");
  if (p0 < 0.0 || p0 >= 1.0)
    throw std::invalid_argument("DetectorConfig: p0 outside [0, 1)");
  if (r_ap < 0.0 || tau_r < 0.0 || tau_after < 0.0)
    throw std::invalid_argument("DetectorConfig: negative time constant");

  const double ratio = tau_m / tau_d;
  // Tolerate FP noise just below an integer ratio.
  slots_ = static_cast<int>(std::floor(ratio + 1e-12));
  seam_ = tau_m - slots_ * tau_d;
  integer_ratio_ = std::abs(seam_) <= 1e-12 * tau_m;
  if (integer_ratio_) seam_ = 0.0;
  max_pulses_ = integer_ratio_ ? slots_ : slots_ + 1;
}

double DetectorConfig::afterpulse_prob(double alpha_sq) const {
  if (alpha_sq < 0.0)
    throw std::invalid_argument("afterpulse_prob: negative intensity");
  const double p = p0 + (r_ap / tau_m) * alpha_sq;
  if (p >= 1.0)
    throw std::domain_error("afterpulse_prob: p(|alpha|^2) >= 1");
  return p;
}

double poisson_kernel(double mean, int n) {
  if (mean < 0.0) throw std::invalid_argument("poisson_kernel: mean < 0");
  if (n < 0) throw std::invalid_argument("poisson_kernel: n < 0");
  if (mean == 0.0) return n == 0 ? 1.0 : 0.0;
  if (mean > 30.0 || n > 30)
    return std::exp(n * std::log(mean) - mean - std::lgamma(n + 1.0));
  double r = std::exp(-mean);
  for (int i = 1; i <= n; ++i) r *= mean / i;
  return r;
}

double eta_rr(const DetectorConfig& cfg, int n) {
  if (n < 0 || n > cfg.slots())
    throw std::out_of_range("eta_rr: n outside 0..N");
  return (cfg.tau_m - n * cfg.tau_d) / cfg.tau_m;
}

DeadTimeCount max_whole_deadtimes(const DetectorConfig& cfg) {
  return {cfg.slots(), cfg.max_pulses()};
}

double effective_intensity(const DetectorConfig& cfg, double alpha_sq) {
  if (alpha_sq < 0.0)
    throw std::invalid_argument("effective_intensity: negative intensity");
  return cfg.effective_intensity(alpha_sq);
}

double binomial(int n, int k) {
  if (k < 0 || k > n || n < 0) return 0.0;
  static constexpr int kCacheRows = 65;
  static const auto table = [] {
    std::array<std::array<double, kCacheRows>, kCacheRows> t{};
    for (int i = 0; i < kCacheRows; ++i) {
      t[i][0] = 1.0;
      for (int j = 1; j <= i; ++j)
        t[i][j] = t[i - 1][j - 1] + (j < i ? t[i - 1][j] : 0.0);
    }
    return t;
  }();
  if (n < kCacheRows) return table[n][k];
  return std::exp(std::lgamma(n + 1.0) - std::lgamma(k + 1.0) -
                  std::lgamma(n - k + 1.0));
}

PhotonDistribution::PhotonDistribution(std::vector<double> probs,
                                       double tail_tol)
    : probs_(std::move(probs)) {
  if (probs_.empty())
    throw std::invalid_argument("PhotonDistribution: empty");
  double sum = 0.0;
  for (auto& p : probs_) {
    if (p < 0.0) {
      if (p < -1e-12)
        throw std::invalid_argument("PhotonDistribution: negative entry");
      p = 0.0;
    }
    sum += p;
  }
  if (sum > 1.0 + 1e-10 || 1.0 - sum > tail_tol)
    throw std::invalid_argument("PhotonDistribution: tail bound violated");
}

PulseDistribution::PulseDistribution(std::vector<double> probs, int n_max,
                                     double sum_tol)
    : probs_(std::move(probs)), n_max_(n_max) {
  if (probs_.empty()) throw std::invalid_argument("PulseDistribution: empty");
  double sum = 0.0;
  for (auto& p : probs_) {
    if (p < 0.0) {
      if (p < -1e-10)
        throw std::invalid_argument("PulseDistribution: negative entry");
      p = 0.0;
    }
    sum += p;
  }
  if (std::abs(sum - 1.0) > sum_tol)
    throw std::invalid_argument("PulseDistribution: not normalized");
}

double distribution_mean(std::span<const double> probs) {
  double m = 0.0;
  for (size_t n = 0; n < probs.size(); ++n) m += double(n) * probs[n];
  return m;
}

double distribution_variance(std::span<const double> probs) {
  const double m = distribution_mean(probs);
  double s = 0.0;
  for (size_t n = 0; n < probs.size(); ++n)
    s += (double(n) - m) * (double(n) - m) * probs[n];
  return s;
}

double total_variation(std::span<const double> p, std::span<const double> q) {
  const size_t n = std::max(p.size(), q.size());
  double d = 0.0;
  for (size_t i = 0; i < n; ++i) {
    const double a = i < p.size() ? p[i] : 0.0;
    const double b = i < q.size() ? q[i] : 0.0;
    d += std::abs(a - b);
  }
  return 0.5 * d;
}

}  // namespace photocount
