#include <photocount/states.hpp>

#include <cmath>
#include <complex>

namespace photocount {

namespace {

using cplx = std::complex<double>;

// Generating function sum_n P_n t^n of the attenuated squeezed state with
// real displacement alpha0' along the squeezed quadrature.
// P(t) = exp(E(t)) / sqrt(D(t)) with D, E as below; sqrt branch handled by
// the caller, which walks a contour and keeps the root continuous.
struct SqueezedGen {
  double a2;   // alpha0'^2
  double eta;
  double sh2;  // sinh^2 r
  double em2r; // e^{-2r}

  cplx denom(cplx t) const {
    const cplx bracket =
        eta * (2.0 - eta) - 2.0 * t * eta * (1.0 - eta) - t * t * eta * eta;
    return 1.0 + bracket * sh2;
  }
  cplx exponent(cplx t, cplx D) const {
    const cplx u = eta * (1.0 - t);
    return a2 * u * (u * (1.0 - em2r) - 2.0) / (2.0 * D);
  }
};

std::vector<double> squeezed_probs(double alpha0_prime, double r, double eta,
                                   int k_max, double rho) {
  const SqueezedGen gen{alpha0_prime * alpha0_prime, eta,
                        std::sinh(r) * std::sinh(r), std::exp(-2.0 * r)};
  const int M = 4 * (k_max + 1);
  std::vector<cplx> vals(M);
  cplx prev_root = std::sqrt(gen.denom(cplx(rho, 0.0)));
  for (int j = 0; j < M; ++j) {
    const double th = 2.0 * M_PI * j / M;
    const cplx t = rho * cplx(std::cos(th), std::sin(th));
    const cplx D = gen.denom(t);
    cplx root = std::sqrt(D);
    // D is zero-free on the closed unit disk; keep the analytic branch by
    // continuity along the contour.
    if ((root + prev_root) == cplx(0.0, 0.0) ||
        std::real(root * std::conj(prev_root)) < 0.0)
      root = -root;
    prev_root = root;
    vals[j] = std::exp(gen.exponent(t, D)) / root;
  }
  std::vector<double> probs(static_cast<size_t>(k_max) + 1, 0.0);
  for (int k = 0; k <= k_max; ++k) {
    cplx acc(0.0, 0.0);
    for (int j = 0; j < M; ++j) {
      const double th = -2.0 * M_PI * j * k / M;
      acc += vals[j] * cplx(std::cos(th), std::sin(th));
    }
    probs[k] = std::real(acc) / (M * std::pow(rho, k));
    if (std::abs(probs[k]) < 1e-13) probs[k] = 0.0;
  }
  return probs;
}

}  // namespace

StateSpec StateSpec::coherent(double alpha0_re, double alpha0_im) {
  StateSpec s;
  s.kind = Kind::coherent;
  s.alpha_sq = alpha0_re * alpha0_re + alpha0_im * alpha0_im;
  return s;
}

StateSpec StateSpec::thermal(double n_th) {
  if (n_th < 0.0) throw std::invalid_argument("thermal: n_th < 0");
  StateSpec s;
  s.kind = Kind::thermal;
  s.n_th = n_th;
  return s;
}

StateSpec StateSpec::attenuated_fock(int n, double eta) {
  if (n < 0) throw std::invalid_argument("attenuated_fock: n < 0");
  if (eta < 0.0 || eta > 1.0)
    throw std::invalid_argument("attenuated_fock: eta outside [0, 1]");
  StateSpec s;
  s.kind = Kind::fock;
  s.fock_n = n;
  s.eta = eta;
  return s;
}

StateSpec StateSpec::squeezed_coherent(double alpha0_prime, double r,
                                       double eta) {
  if (eta < 0.0 || eta > 1.0)
    throw std::invalid_argument("squeezed_coherent: eta outside [0, 1]");
  StateSpec s;
  s.kind = Kind::squeezed;
  s.alpha0_prime = alpha0_prime;
  s.r = r;
  s.eta = eta;
  return s;
}

PhotonDistribution photon_distribution(const StateSpec& spec, double tail_eps,
                                       double contour_radius) {
  switch (spec.kind) {
    case StateSpec::Kind::coherent: {
      const double mean = spec.alpha_sq;
      if (mean == 0.0) return PhotonDistribution({1.0});
      int K = static_cast<int>(mean + 12.0 * std::sqrt(mean) + 25.0);
      std::vector<double> probs(static_cast<size_t>(K) + 1);
      for (int k = 0; k <= K; ++k) probs[k] = poisson_kernel(mean, k);
      return PhotonDistribution(std::move(probs), tail_eps);
    }
    case StateSpec::Kind::thermal: {
      if (spec.n_th == 0.0) return PhotonDistribution({1.0});
      const double ratio = spec.n_th / (1.0 + spec.n_th);
      const int K = static_cast<int>(std::log(tail_eps * 0.1) /
                                     std::log(ratio)) + 2;
      std::vector<double> probs(static_cast<size_t>(K) + 1);
      double term = 1.0 / (1.0 + spec.n_th);
      for (int k = 0; k <= K; ++k) {
        probs[k] = term;
        term *= ratio;
      }
      return PhotonDistribution(std::move(probs), tail_eps);
    }
    case StateSpec::Kind::fock: {
      std::vector<double> probs(static_cast<size_t>(spec.fock_n) + 1);
      for (int k = 0; k <= spec.fock_n; ++k)
        probs[k] = binomial(spec.fock_n, k) * std::pow(spec.eta, k) *
                   std::pow(1.0 - spec.eta, spec.fock_n - k);
      return PhotonDistribution(std::move(probs), 1e-14);
    }
    case StateSpec::Kind::squeezed: {
      // Grow the cutoff geometrically until the retained mass covers the
      // tail bound.
      for (int K = 32; K <= 8192; K *= 2) {
        auto probs = squeezed_probs(spec.alpha0_prime, spec.r, spec.eta, K,
                                    contour_radius);
        double sum = 0.0;
        for (double x : probs) sum += x;
        if (1.0 - sum <= tail_eps) {
          return PhotonDistribution(std::move(probs), tail_eps);
        }
      }
      throw std::runtime_error(
          "photon_distribution: squeezed-state cutoff exceeds 8192");
    }
  }
  throw std::logic_error("photon_distribution: unknown state kind");
}

double mandel_q(std::span<const double> probs) {
  const double mean = distribution_mean(probs);
  if (mean <= 0.0)
    throw std::domain_error("mandel_q: distribution has zero mean");
  return distribution_variance(probs) / mean - 1.0;
}

}  // namespace photocount
