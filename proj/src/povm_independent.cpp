#include <photocount/povm_independent.hpp>

#include <photocount/detail/povm_formulas.hpp>

namespace photocount {

namespace {
struct Eval {
  detail::Geometry g;
  double intensity;
  double p;
  Eval(const DetectorConfig& cfg, double alpha_sq)
      : g(detail::geometry_of(cfg)),
        intensity(cfg.effective_intensity(alpha_sq)),
        p(cfg.afterpulse_prob(alpha_sq)) {
    if (alpha_sq < 0.0)
      throw std::invalid_argument("negative input intensity");
  }
};
}  // namespace

double q_rr(const DetectorConfig& cfg, double alpha_sq, int n) {
  if (n < 0 || n > cfg.slots())
    throw std::out_of_range("q_rr: n outside 0..N");
  const Eval e(cfg, alpha_sq);
  return detail::q_rr(e.g, e.intensity, e.p, n);
}

double q_ri(const DetectorConfig& cfg, double alpha_sq, int n) {
  if (n < 1 || n > cfg.slots() + 1)
    throw std::out_of_range("q_ri: n outside 1..N+1");
  const Eval e(cfg, alpha_sq);
  return detail::q_ri(e.g, e.intensity, e.p, n);
}

double q_ri_density(const DetectorConfig& cfg, double alpha_sq, int n,
                    double tau1) {
  if (n < 1 || n > cfg.slots() + 1)
    throw std::out_of_range("q_ri_density: n outside 1..N+1");
  const Eval e(cfg, alpha_sq);
  return detail::q_ri_density(e.g, e.intensity, e.p, n, tau1);
}

PulseDistribution povm_r(const DetectorConfig& cfg, double alpha_sq) {
  const Eval e(cfg, alpha_sq);
  const int N = cfg.slots();
  std::vector<double> probs(static_cast<size_t>(N) + 2, 0.0);
  for (int n = 0; n <= N; ++n)
    probs[n] = detail::q_rr(e.g, e.intensity, e.p, n) +
               detail::q_ri(e.g, e.intensity, e.p, n);
  probs[N + 1] =
      cfg.integer_ratio() ? 0.0 : detail::q_ri(e.g, e.intensity, e.p, N + 1);
  return PulseDistribution(std::move(probs), cfg.max_pulses(), 1e-9);
}

std::vector<double> povm_part(const DetectorConfig& cfg, double alpha_sq,
                              RegularPart part) {
  const Eval e(cfg, alpha_sq);
  const int N = cfg.slots();
  std::vector<double> v(static_cast<size_t>(N) + 2, 0.0);
  for (int n = 0; n <= N + 1; ++n) {
    double x = 0.0;
    if (part != RegularPart::ri) x += detail::q_rr(e.g, e.intensity, e.p, n);
    if (part != RegularPart::rr) x += detail::q_ri(e.g, e.intensity, e.p, n);
    v[n] = x;
  }
  return v;
}

}  // namespace photocount
