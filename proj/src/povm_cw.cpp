#include <photocount/povm_cw.hpp>

#include <photocount/detail/povm_formulas.hpp>

namespace photocount {

namespace {

constexpr double kSmallIntensity = 1e-4;
constexpr int kQuadPanels = 256;

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

// (1/tau_d) * integral over tau2 of a conditional part, split at the branch
// seam so each Simpson segment sees a smooth integrand.
template <class F>
double tau2_average(const detail::Geometry& g, F f) {
  double acc = 0.0;
  if (g.seam > 0.0 && g.seam < g.tau_d) {
    acc += detail::simpson(f, 0.0, g.seam, kQuadPanels);
    acc += detail::simpson(f, g.seam, g.tau_d, kQuadPanels);
  } else {
    acc += detail::simpson(f, 0.0, g.tau_d, kQuadPanels);
  }
  return acc / g.tau_d;
}

}  // namespace

double q_ir_cond(const DetectorConfig& cfg, double alpha_sq, int n,
                 double tau2) {
  const Eval e(cfg, alpha_sq);
  return detail::q_ir_cond(e.g, e.intensity, e.p, n, tau2);
}

double q_ii_cond(const DetectorConfig& cfg, double alpha_sq, int n,
                 double tau2) {
  const Eval e(cfg, alpha_sq);
  return detail::q_ii_cond(e.g, e.intensity, e.p, n, tau2);
}

double q_ii_density(const DetectorConfig& cfg, double alpha_sq, int n,
                    double tau1, double tau2) {
  const Eval e(cfg, alpha_sq);
  return detail::q_ii_density(e.g, e.intensity, e.p, n, tau1, tau2);
}

double q_ir_avg(const DetectorConfig& cfg, double alpha_sq, int n) {
  const Eval e(cfg, alpha_sq);
  if (n < 0 || n > e.g.slots) return 0.0;
  if (e.intensity < kSmallIntensity)
    return tau2_average(e.g, [&](double t2) {
      return detail::q_ir_cond(e.g, e.intensity, e.p, n, t2);
    });
  return detail::q_ir_avg(e.g, e.intensity, e.p, n);
}

double q_ii_avg(const DetectorConfig& cfg, double alpha_sq, int n) {
  const Eval e(cfg, alpha_sq);
  if (n < 1 || n > e.g.slots + 1) return 0.0;
  if (e.intensity < kSmallIntensity)
    return tau2_average(e.g, [&](double t2) {
      return detail::q_ii_cond(e.g, e.intensity, e.p, n, t2);
    });
  return detail::q_ii_avg(e.g, e.intensity, e.p, n);
}

std::vector<double> povm_cond_part(const DetectorConfig& cfg, double alpha_sq,
                                   IrregularPart part, double tau2) {
  const Eval e(cfg, alpha_sq);
  const int N = cfg.slots();
  std::vector<double> v(static_cast<size_t>(N) + 2, 0.0);
  for (int n = 0; n <= N + 1; ++n) {
    double x = 0.0;
    if (part != IrregularPart::ii)
      x += detail::q_ir_cond(e.g, e.intensity, e.p, n, tau2);
    if (part != IrregularPart::ir)
      x += detail::q_ii_cond(e.g, e.intensity, e.p, n, tau2);
    v[n] = x;
  }
  return v;
}

std::vector<double> povm_avg_part(const DetectorConfig& cfg, double alpha_sq,
                                  IrregularPart part) {
  const int N = cfg.slots();
  std::vector<double> v(static_cast<size_t>(N) + 2, 0.0);
  for (int n = 0; n <= N + 1; ++n) {
    double x = 0.0;
    if (part != IrregularPart::ii) x += q_ir_avg(cfg, alpha_sq, n);
    if (part != IrregularPart::ir) x += q_ii_avg(cfg, alpha_sq, n);
    v[n] = x;
  }
  return v;
}

}  // namespace photocount
