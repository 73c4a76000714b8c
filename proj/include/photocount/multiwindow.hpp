#pragma once
#include <photocount/core.hpp>

#include <span>

namespace photocount {

/// One per-window intensity |alpha_l|^2, oldest first.
using WindowIntensitySequence = std::vector<double>;

/// Law of the dead time leaked into a window: an atom at "no leak" plus a
/// density sampled on a uniform tau2 grid over [0, tau_d].
/// q_atom + trapezoid(density) = 1.
struct MemoryState {
  double q_atom;
  std::vector<double> density;
};

/// Transition kernels of the leak-time recursion for one window intensity.
/// A: probability the window ends with no spill given it started clean.
/// B[j]: same, given incoming leak tau_j. G[j]: spill density from a clean
/// start. H[i*M+j]: spill density tau_j given incoming leak tau_i.
/// B_bar = (1/tau_d) int B; C = A - B_bar.
struct CwKernels {
  double A;
  double B_bar;
  double C;
  std::vector<double> B;
  std::vector<double> G;
  std::vector<double> H;
  int grid_size;
  double dtau;
};

CwKernels cw_kernels(const DetectorConfig& cfg, double alpha_sq,
                     int grid_size = 64);

/// Iterates the coupled leak-time recursion from a clean detector
/// (q_atom = 1) through the given windows; returns the state before each
/// window l = 1..len+1 (the last entry is the state after the whole
/// sequence). Each step renormalizes atom+density mass to 1, absorbing
/// trapezoid discretization drift. Requires grid_size >= 16.
std::vector<MemoryState> recursion_exact(const DetectorConfig& cfg,
                                         std::span<const double> intensities,
                                         int grid_size = 64);

/// Fixed point of the recursion for constant intensity.
MemoryState stationary_memory(const DetectorConfig& cfg, double alpha_sq,
                              int grid_size = 64, double tol = 1e-12,
                              int max_iter = 512);

/// No-leak probability for the window following `prev_intensities` under the
/// uniform-leak approximation: B(a_{l-1}) + B(a_{l-2})C(a_{l-1}) + ...,
/// truncated after `depth` terms (depth < 0 keeps every available term plus
/// the clean-start tail).
double q_prob_uniform(const DetectorConfig& cfg,
                      std::span<const double> prev_intensities, int depth = 3);

/// Multiwindow Q symbol for n pulses in the last window of `intensities`.
double lambda_q(const DetectorConfig& cfg, std::span<const double> intensities,
                int n, int depth = -1);

/// Stationary cw pulse distribution under the uniform-leak approximation;
/// depth < 0 uses the closed geometric form of the no-leak probability.
PulseDistribution cw_pulse_distribution(const DetectorConfig& cfg,
                                        double alpha_sq, int depth = -1);

/// Stationary cw pulse distribution from the exact leak-time recursion.
PulseDistribution cw_pulse_distribution_exact(const DetectorConfig& cfg,
                                              double alpha_sq,
                                              int grid_size = 64);

}  // namespace photocount
