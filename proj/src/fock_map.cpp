#include <photocount/fock_map.hpp>

#include <cmath>

namespace photocount {

namespace {

void require_fock_pathway(const DetectorConfig& cfg) {
  if (cfg.r_ap != 0.0 || cfg.nu != 0.0)
    throw std::invalid_argument(
        "fock maps require constant afterpulse probability (r_ap = 0) and "
        "nu = 0");
}

double pow_i(double x, int k) {
  if (k == 0) return 1.0;
  double r = 1.0;
  for (int i = 0; i < k; ++i) r *= x;
  return r;
}

double eta_of(const DetectorConfig& cfg, int n) {
  return (cfg.tau_m - n * cfg.tau_d) / cfg.tau_m;
}

// Fock diagonal of the elementary detection operator: probability of f
// detections from k photons at live-time fraction eta.
double binom_term(int k, int f, double eta) {
  if (f < 0 || f > k) return 0.0;
  return binomial(k, f) * pow_i(eta, f) * pow_i(1.0 - eta, k - f);
}

}  // namespace

double incomplete_beta(double z1, double z2, int a, int b) {
  if (a < 1 || b < 1)
    throw std::invalid_argument("incomplete_beta: a, b must be >= 1");
  if (z1 > z2) throw std::invalid_argument("incomplete_beta: z1 > z2");
  if (z1 < -1e-12 || z2 > 1.0 + 1e-12)
    throw std::invalid_argument("incomplete_beta: z outside [0, 1]");
  z1 = std::min(std::max(z1, 0.0), 1.0);
  z2 = std::min(std::max(z2, 0.0), 1.0);
  // Expand the shorter side so the alternating sum stays well conditioned.
  if (b > a) return incomplete_beta(1.0 - z2, 1.0 - z1, b, a);
  double acc = 0.0;
  for (int j = 0; j < b; ++j) {
    const double c = binomial(b - 1, j) * (j % 2 ? -1.0 : 1.0) / (a + j);
    acc += c * (std::pow(z2, a + j) - std::pow(z1, a + j));
  }
  return acc;
}

double fock_rr(const DetectorConfig& cfg, int n, int k) {
  require_fock_pathway(cfg);
  if (k < 0 || n < 0 || n > cfg.slots()) return 0.0;
  if (n == 0) return k == 0 ? 1.0 : 0.0;
  const double p = cfg.p0;
  const double eta = eta_of(cfg, n);
  double acc = 0.0;
  for (int f = 1; f <= std::min(k, n); ++f)
    acc += binom_term(k, f, eta) * binomial(n - 1, f - 1) * pow_i(p, n - f) *
           pow_i(1.0 - p, f);
  return acc;
}

double fock_ri(const DetectorConfig& cfg, int n, int k) {
  require_fock_pathway(cfg);
  const int N = cfg.slots();
  if (k < 0 || n < 1 || n > N + 1) return 0.0;
  const double p = cfg.p0;
  if (n <= N) {
    const double eta_n = eta_of(cfg, n);
    const double eta_m = eta_of(cfg, n - 1);
    double acc = 0.0;
    for (int f = 0; f <= std::min(k - 1, n - 1); ++f) {
      double inner = 0.0;
      for (int m = k - f; m <= k; ++m)
        inner += binomial(k, m) * (pow_i(eta_n, k - m) * pow_i(1.0 - eta_n, m) -
                                   pow_i(eta_m, k - m) * pow_i(1.0 - eta_m, m));
      acc += inner * binomial(n - 1, f) * pow_i(p, n - f - 1) * pow_i(1.0 - p, f);
    }
    return acc;
  }
  if (cfg.integer_ratio()) return 0.0;
  const double eta_N = eta_of(cfg, N);
  double acc = 1.0;
  for (int f = k; f <= N; ++f)
    acc -= binomial(N, f) * pow_i(p, N - f) * pow_i(1.0 - p, f);
  for (int f = 0; f <= std::min(N, k - 1); ++f) {
    double inner = 0.0;
    for (int m = k - f; m <= k; ++m)
      inner += binomial(k, m) * pow_i(eta_N, k - m) * pow_i(1.0 - eta_N, m);
    acc -= inner * binomial(N, f) * pow_i(p, N - f) * pow_i(1.0 - p, f);
  }
  return acc;
}

double fock_ir_avg(const DetectorConfig& cfg, int n, int k) {
  require_fock_pathway(cfg);
  const int N = cfg.slots();
  if (k < 0 || n < 0 || n > N) return 0.0;
  const double p = cfg.p0;
  const double d = cfg.delta();
  const double scale = cfg.tau_m / cfg.tau_d;
  const double z_hi = (n == N) ? 1.0 : (n + 1) * d;
  double acc = 0.0;
  for (int f = 0; f <= std::min(k, n); ++f)
    acc += binomial(k, f) * binomial(n, f) * pow_i(p, n - f) *
           pow_i(1.0 - p, f + 1) * incomplete_beta(n * d, z_hi, k - f + 1, f + 1);
  return scale * acc;
}

double fock_ii_avg(const DetectorConfig& cfg, int n, int k) {
  require_fock_pathway(cfg);
  const int N = cfg.slots();
  if (k < 0 || n < 1 || n > N + 1) return 0.0;
  const double p = cfg.p0;
  const double d = cfg.delta();
  const double scale = cfg.tau_m / cfg.tau_d;
  if (n < N) {
    double acc = 0.0;
    for (int f = 0; f <= std::min(k - 1, n - 1); ++f) {
      double inner = 0.0;
      for (int l = 0; l <= f; ++l)
        inner += binomial(k, l) *
                 (incomplete_beta(n * d, (n + 1) * d, k - l + 1, l + 1) -
                  incomplete_beta((n - 1) * d, n * d, k - l + 1, l + 1));
      acc += inner * binomial(n, f + 1) * pow_i(p, n - f - 1) *
             pow_i(1.0 - p, f + 1);
    }
    return scale * acc;
  }
  if (n == N) {
    const double atom = (cfg.tau_d - cfg.seam()) / cfg.tau_d;
    double bracket = 1.0;
    for (int f = k; f <= N - 1; ++f)
      bracket -= binomial(N, f + 1) * pow_i(p, N - f - 1) * pow_i(1.0 - p, f + 1);
    double acc = 0.0;
    for (int f = 0; f <= std::min(k - 1, N - 1); ++f) {
      double inner = 0.0;
      for (int l = 0; l <= f; ++l)
        inner += binomial(k, l) *
                 (incomplete_beta(N * d, 1.0, k - l + 1, l + 1) -
                  incomplete_beta((N - 1) * d, N * d, k - l + 1, l + 1));
      acc += inner * binomial(N, f + 1) * pow_i(p, N - f - 1) *
             pow_i(1.0 - p, f + 1);
    }
    return atom * bracket + scale * acc;
  }
  // n = N+1
  if (cfg.integer_ratio()) return 0.0;
  const double lead = cfg.seam() / cfg.tau_d;
  double bracket = 1.0;
  for (int f = k; f <= N; ++f)
    bracket -= binomial(N + 1, f + 1) * pow_i(p, N - f) * pow_i(1.0 - p, f + 1);
  double acc = 0.0;
  for (int f = 0; f <= std::min(k - 1, N); ++f) {
    double inner = 0.0;
    for (int l = 0; l <= f; ++l)
      inner += binomial(k, l) * incomplete_beta(N * d, 1.0, k - l + 1, l + 1);
    acc += inner * binomial(N + 1, f + 1) * pow_i(p, N - f) *
           pow_i(1.0 - p, f + 1);
  }
  return lead * bracket - scale * acc;
}

FockMap fock_map(const DetectorConfig& cfg, FockPart part, int k_max,
                 bool parallel) {
  require_fock_pathway(cfg);
  if (k_max < 0) throw std::invalid_argument("fock_map: k_max < 0");
  const int rows = cfg.slots() + 2;
  const int cols = k_max + 1;
  FockMap m{part, rows, cols,
            std::vector<double>(static_cast<size_t>(rows) * cols, 0.0)};
  const auto entry = [&](int n, int k) {
    switch (part) {
      case FockPart::rr: return fock_rr(cfg, n, k);
      case FockPart::ri: return fock_ri(cfg, n, k);
      case FockPart::ir_avg: return fock_ir_avg(cfg, n, k);
      case FockPart::ii_avg: return fock_ii_avg(cfg, n, k);
      case FockPart::r_total: return fock_rr(cfg, n, k) + fock_ri(cfg, n, k);
      case FockPart::i_total:
        return fock_ir_avg(cfg, n, k) + fock_ii_avg(cfg, n, k);
    }
    return 0.0;
  };
#pragma omp parallel for schedule(static) if (parallel)
  for (int k = 0; k <= k_max; ++k)
    for (int n = 0; n < rows; ++n)
      m.v[static_cast<size_t>(n) * cols + k] = entry(n, k);
  return m;
}

PulseDistribution pulse_stats_linear(const DetectorConfig& cfg,
                                     const PhotonDistribution& photons) {
  const auto map = fock_map(cfg, FockPart::r_total, photons.cutoff());
  const int rows = map.n_rows;
  std::vector<double> probs(rows, 0.0);
  for (int n = 0; n < rows; ++n) {
    double acc = 0.0;
    for (int k = 0; k <= photons.cutoff(); ++k)
      acc += map.at(n, k) * photons[k];
    probs[n] = acc;
  }
  double sum = 0.0;
  for (double x : probs) sum += x;
  auto out = PulseDistribution(std::move(probs), cfg.max_pulses(), 1e-8);
  out.set_truncation_residual(1.0 - sum);
  return out;
}

PulseDistribution pulse_stats_cw(const DetectorConfig& cfg,
                                 const PhotonDistribution& photons,
                                 int depth) {
  const int K = photons.cutoff();
  const auto r_map = fock_map(cfg, FockPart::r_total, K);
  const auto i_map = fock_map(cfg, FockPart::i_total, K);
  const auto rr_map = fock_map(cfg, FockPart::rr, K);
  const auto ir_map = fock_map(cfg, FockPart::ir_avg, K);

  double b = 0.0, c = 0.0;
  for (int k = 0; k <= K; ++k) {
    double A_k = 0.0, B_k = 0.0;
    for (int n = 0; n <= cfg.slots(); ++n) {
      A_k += rr_map.at(n, k);
      B_k += ir_map.at(n, k);
    }
    b += B_k * photons[k];
    c += (A_k - B_k) * photons[k];
  }
  const double q = depth < 0 ? b / (1.0 - c)
                             : b * (1.0 - std::pow(c, depth)) / (1.0 - c);

  const int rows = r_map.n_rows;
  std::vector<double> probs(rows, 0.0);
  double sum = 0.0;
  for (int n = 0; n < rows; ++n) {
    double reg = 0.0, irr = 0.0;
    for (int k = 0; k <= K; ++k) {
      reg += r_map.at(n, k) * photons[k];
      irr += i_map.at(n, k) * photons[k];
    }
    probs[n] = q * reg + (1.0 - q) * irr;
    sum += probs[n];
  }
  auto out = PulseDistribution(std::move(probs), cfg.max_pulses(), 1e-8);
  out.set_truncation_residual(1.0 - sum);
  return out;
}

}  // namespace photocount
