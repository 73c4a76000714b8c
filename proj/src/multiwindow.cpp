#include <photocount/multiwindow.hpp>

#include <photocount/detail/povm_formulas.hpp>
#include <photocount/povm_cw.hpp>
#include <photocount/povm_independent.hpp>

#include <cmath>

namespace photocount {

namespace {

double trapezoid_mass(std::span<const double> f, double dtau) {
  if (f.size() < 2) return 0.0;
  double s = 0.5 * (f.front() + f.back());
  for (size_t i = 1; i + 1 < f.size(); ++i) s += f[i];
  return s * dtau;
}

}  // namespace

CwKernels cw_kernels(const DetectorConfig& cfg, double alpha_sq,
                     int grid_size) {
  if (grid_size < 16)
    throw std::invalid_argument("cw_kernels: grid_size < 16");
  const auto g = detail::geometry_of(cfg);
  const double I = cfg.effective_intensity(alpha_sq);
  const double p = cfg.afterpulse_prob(alpha_sq);
  const int N = g.slots;
  const int M = grid_size;
  CwKernels k;
  k.grid_size = M;
  k.dtau = cfg.tau_d / (M - 1);

  k.A = 0.0;
  for (int n = 0; n <= N; ++n) k.A += detail::q_rr(g, I, p, n);

  k.B.assign(M, 0.0);
  k.G.assign(M, 0.0);
  k.H.assign(static_cast<size_t>(M) * M, 0.0);
  for (int j = 0; j < M; ++j) {
    const double tau = j * k.dtau;
    for (int n = 0; n <= N; ++n)
      k.B[j] += detail::q_ir_cond(g, I, p, n, tau);
    for (int n = 1; n <= N + 1; ++n)
      k.G[j] += detail::q_ri_density(g, I, p, n, tau);
  }
#pragma omp parallel for schedule(static)
  for (int i = 0; i < M; ++i) {
    const double tau_in = i * k.dtau;
    for (int j = 0; j < M; ++j) {
      const double tau_out = j * k.dtau;
      double h = 0.0;
      for (int n = 1; n <= N + 1; ++n)
        h += detail::q_ii_density(g, I, p, n, tau_out, tau_in);
      k.H[static_cast<size_t>(i) * M + j] = h;
    }
  }

  k.B_bar = 0.0;
  for (int n = 0; n <= N; ++n) k.B_bar += q_ir_avg(cfg, alpha_sq, n);
  k.C = k.A - k.B_bar;
  return k;
}

std::vector<MemoryState> recursion_exact(const DetectorConfig& cfg,
                                         std::span<const double> intensities,
                                         int grid_size) {
  if (grid_size < 16)
    throw std::invalid_argument("recursion_exact: grid_size < 16");
  if (intensities.empty())
    throw std::invalid_argument("recursion_exact: empty sequence");
  const int M = grid_size;

  std::vector<MemoryState> states;
  states.reserve(intensities.size() + 1);
  MemoryState st{1.0, std::vector<double>(M, 0.0)};
  states.push_back(st);

  // Kernel cache: constant-intensity sequences are the common case.
  double cached_intensity = -1.0;
  CwKernels k;
  std::vector<double> w(M, 1.0);  // trapezoid weights / dtau
  w.front() = w.back() = 0.5;

  for (double a : intensities) {
    if (a < 0.0)
      throw std::invalid_argument("recursion_exact: negative intensity");
    if (a != cached_intensity) {
      k = cw_kernels(cfg, a, M);
      cached_intensity = a;
    }
    MemoryState next{0.0, std::vector<double>(M, 0.0)};
    double atom = st.q_atom * k.A;
    for (int i = 0; i < M; ++i)
      atom += w[i] * k.dtau * st.density[i] * k.B[i];
    for (int j = 0; j < M; ++j) {
      double d = st.q_atom * k.G[j];
      for (int i = 0; i < M; ++i)
        d += w[i] * k.dtau * st.density[i] *
             k.H[static_cast<size_t>(i) * M + j];
      next.density[j] = d;
    }
    next.q_atom = atom;
    const double mass = next.q_atom + trapezoid_mass(next.density, k.dtau);
    for (auto& d : next.density) d /= mass;
    next.q_atom /= mass;
    st = next;
    states.push_back(st);
  }
  return states;
}

MemoryState stationary_memory(const DetectorConfig& cfg, double alpha_sq,
                              int grid_size, double tol, int max_iter) {
  const auto k = cw_kernels(cfg, alpha_sq, grid_size);
  const int M = grid_size;
  MemoryState st{1.0, std::vector<double>(M, 0.0)};
  std::vector<double> w(M, 1.0);
  w.front() = w.back() = 0.5;
  for (int it = 0; it < max_iter; ++it) {
    MemoryState next{st.q_atom * k.A, std::vector<double>(M, 0.0)};
    for (int i = 0; i < M; ++i)
      next.q_atom += w[i] * k.dtau * st.density[i] * k.B[i];
    for (int j = 0; j < M; ++j) {
      double d = st.q_atom * k.G[j];
      for (int i = 0; i < M; ++i)
        d += w[i] * k.dtau * st.density[i] *
             k.H[static_cast<size_t>(i) * M + j];
      next.density[j] = d;
    }
    const double mass = next.q_atom + trapezoid_mass(next.density, k.dtau);
    next.q_atom /= mass;
    for (auto& d : next.density) d /= mass;
    double delta = std::abs(next.q_atom - st.q_atom);
    for (int j = 0; j < M; ++j)
      delta = std::max(delta, std::abs(next.density[j] - st.density[j]));
    st = next;
    if (delta < tol) break;
  }
  return st;
}

double q_prob_uniform(const DetectorConfig& cfg,
                      std::span<const double> prev_intensities, int depth) {
  if (depth == 0) return 1.0;
  double q = 0.0;
  double chain = 1.0;  // product of C factors of more recent windows
  int terms = 0;
  for (size_t i = prev_intensities.size(); i-- > 0;) {
    const double a = prev_intensities[i];
    const auto rr = povm_part(cfg, a, RegularPart::rr);
    const auto ir = povm_avg_part(cfg, a, IrregularPart::ir);
    double A = 0.0, Bb = 0.0;
    for (int n = 0; n <= cfg.slots(); ++n) {
      A += rr[n];
      Bb += ir[n];
    }
    q += chain * Bb;
    chain *= A - Bb;
    if (++terms == depth) return q;
  }
  // Clean-start tail: the first window saw no leak with certainty.
  return q + chain;
}

double lambda_q(const DetectorConfig& cfg, std::span<const double> intensities,
                int n, int depth) {
  if (intensities.empty())
    throw std::invalid_argument("lambda_q: empty sequence");
  const double a = intensities.back();
  if (n < 0 || n > cfg.slots() + 1) return 0.0;
  const double q = q_prob_uniform(
      cfg, intensities.subspan(0, intensities.size() - 1), depth);
  const auto reg = povm_part(cfg, a, RegularPart::r_total);
  const auto irr = povm_avg_part(cfg, a, IrregularPart::i_total);
  return q * reg[n] + (1.0 - q) * irr[n];
}

PulseDistribution cw_pulse_distribution(const DetectorConfig& cfg,
                                        double alpha_sq, int depth) {
  const auto rr = povm_part(cfg, alpha_sq, RegularPart::rr);
  const auto reg = povm_part(cfg, alpha_sq, RegularPart::r_total);
  const auto ir = povm_avg_part(cfg, alpha_sq, IrregularPart::ir);
  const auto irr = povm_avg_part(cfg, alpha_sq, IrregularPart::i_total);
  const int N = cfg.slots();
  double A = 0.0, Bb = 0.0;
  for (int n = 0; n <= N; ++n) {
    A += rr[n];
    Bb += ir[n];
  }
  const double C = A - Bb;
  const double q = depth < 0 ? Bb / (1.0 - C)
                             : Bb * (1.0 - std::pow(C, depth)) / (1.0 - C);
  std::vector<double> probs(static_cast<size_t>(N) + 2, 0.0);
  for (int n = 0; n <= N + 1; ++n) probs[n] = q * reg[n] + (1.0 - q) * irr[n];
  return PulseDistribution(std::move(probs), cfg.max_pulses(), 1e-9);
}

PulseDistribution cw_pulse_distribution_exact(const DetectorConfig& cfg,
                                              double alpha_sq, int grid_size) {
  const auto st = stationary_memory(cfg, alpha_sq, grid_size);
  const int N = cfg.slots();
  const int M = grid_size;
  const double dtau = cfg.tau_d / (M - 1);
  std::vector<double> w(M, 1.0);
  w.front() = w.back() = 0.5;
  const auto reg = povm_part(cfg, alpha_sq, RegularPart::r_total);
  std::vector<double> probs(static_cast<size_t>(N) + 2, 0.0);
  for (int n = 0; n <= N + 1; ++n) {
    double v = st.q_atom * reg[n];
    for (int i = 0; i < M; ++i) {
      const double tau2 = i * dtau;
      v += w[i] * dtau * st.density[i] *
           (q_ir_cond(cfg, alpha_sq, n, tau2) +
            q_ii_cond(cfg, alpha_sq, n, tau2));
    }
    probs[n] = v;
  }
  return PulseDistribution(std::move(probs), cfg.max_pulses(), 1e-8);
}

}  // namespace photocount
