#pragma once
#include <photocount/core.hpp>

namespace photocount {

/// Q symbols of the counting POVM for isolated windows (detector state
/// cleared between windows). `alpha_sq` is the raw mean photon number of the
/// coherent input; efficiency, dark counts and the afterpulse probability
/// p(|alpha|^2) are folded in internally.
enum class RegularPart { rr, ri, r_total };

/// Probability of n pulses with the last dead time ending inside the window.
double q_rr(const DetectorConfig& cfg, double alpha_sq, int n);

/// Probability of n pulses with the last dead time spilling past the window.
double q_ri(const DetectorConfig& cfg, double alpha_sq, int n);

/// Density over the spill time tau1; integrates to q_ri over the tau1 domain.
double q_ri_density(const DetectorConfig& cfg, double alpha_sq, int n,
                    double tau1);

/// Full pulse-count distribution over n = 0..N+1.
PulseDistribution povm_r(const DetectorConfig& cfg, double alpha_sq);

/// One POVM part as a vector indexed by n (length N+2).
std::vector<double> povm_part(const DetectorConfig& cfg, double alpha_sq,
                              RegularPart part);

}  // namespace photocount
