#pragma once
#include <photocount/core.hpp>

namespace photocount {

/// Conditional pulse-count probabilities P[n | k absorbed photons] for every
/// POVM part, and the photon-to-pulse statistics maps built from them.
///
/// This pathway treats the afterpulse probability as the constant cfg.p0 and
/// admits no dark counts: construction throws unless r_ap == 0 and nu == 0.
/// Detection efficiency belongs to the photon distribution, not the map.
enum class FockPart { rr, ri, ir_avg, ii_avg, r_total, i_total };

/// integral_{z1}^{z2} t^(a-1) (1-t)^(b-1) dt for integer a, b >= 1, by exact
/// binomial-expansion antiderivative (the short side is expanded).
double incomplete_beta(double z1, double z2, int a, int b);

double fock_rr(const DetectorConfig& cfg, int n, int k);
double fock_ri(const DetectorConfig& cfg, int n, int k);
double fock_ir_avg(const DetectorConfig& cfg, int n, int k);
double fock_ii_avg(const DetectorConfig& cfg, int n, int k);

struct FockMap {
  FockPart part;
  int n_rows;  // N+2
  int k_cols;  // k_max+1
  std::vector<double> v;
  double at(int n, int k) const {
    return v[static_cast<size_t>(n) * k_cols + k];
  }
};

FockMap fock_map(const DetectorConfig& cfg, FockPart part, int k_max,
                 bool parallel = true);

/// Pulse statistics of isolated windows: P_n = sum_k P^(r)[n|k] photon_k.
PulseDistribution pulse_stats_linear(const DetectorConfig& cfg,
                                     const PhotonDistribution& photons);

/// Stationary cw pulse statistics for i.i.d. windows. The no-leak probability
/// collapses to the scalar Q = sum_k B_k P_k / (1 - sum_k C_k P_k);
/// depth >= 0 truncates the underlying geometric series instead.
PulseDistribution pulse_stats_cw(const DetectorConfig& cfg,
                                 const PhotonDistribution& photons,
                                 int depth = -1);

}  // namespace photocount
