#pragma once
#include <photocount/core.hpp>

#include <span>

namespace photocount {

/// Input-state description for photon-number statistics. The squeezed kind
/// is a quadrature-squeezed state displaced along the squeezed axis, with
/// its own attenuation folded in; `alpha0_prime` must be real (a complex
/// displacement has no supported generating function and is rejected).
struct StateSpec {
  enum class Kind { coherent, thermal, fock, squeezed };
  Kind kind = Kind::coherent;
  double alpha_sq = 0.0;  // coherent: |alpha0|^2
  double n_th = 0.0;      // thermal mean photon number
  int fock_n = 0;         // Fock level before attenuation
  double eta = 1.0;       // state-side attenuation (fock, squeezed)
  double r = 0.0;         // squeezing parameter
  double alpha0_prime = 0.0;  // real displacement (squeezed)

  static StateSpec coherent(double alpha0_re, double alpha0_im = 0.0);
  static StateSpec thermal(double n_th);
  static StateSpec attenuated_fock(int n, double eta);
  static StateSpec squeezed_coherent(double alpha0_prime, double r, double eta);
};

/// Photon-number distribution of the state, truncated once the discarded
/// tail is below tail_eps. The squeezed case extracts power-series
/// coefficients of the generating function by roots-of-unity quadrature on a
/// circle of the given radius.
PhotonDistribution photon_distribution(const StateSpec& spec,
                                       double tail_eps = 1e-12,
                                       double contour_radius = 0.95);

/// Var(n)/Mean(n) - 1. Rejects distributions with zero mean.
double mandel_q(std::span<const double> probs);

}  // namespace photocount
