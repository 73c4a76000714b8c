#pragma once
#include <photocount/core.hpp>

namespace photocount {

/// Q symbols for continuous-wave windows that start inside a dead time
/// leaked from the previous window (leak length tau2), plus their uniform
/// averages over tau2. Out-of-domain (n, tau2) combinations evaluate to 0.
enum class IrregularPart { ir, ii, i_total };

/// n pulses, window ends with all dead times inside; conditioned on tau2.
double q_ir_cond(const DetectorConfig& cfg, double alpha_sq, int n,
                 double tau2);

/// n pulses, last dead time spills into the next window; conditioned on tau2.
double q_ii_cond(const DetectorConfig& cfg, double alpha_sq, int n,
                 double tau2);

/// Density of the outgoing spill time tau1 given incoming leak tau2.
/// Integrating over tau1 reproduces q_ii_cond except for the O(p^N) mass of
/// afterpulse chains spanning the whole window, which is discrete in tau1.
double q_ii_density(const DetectorConfig& cfg, double alpha_sq, int n,
                    double tau1, double tau2);

/// Uniform tau2 averages. Below intensity 1e-4 the closed forms are replaced
/// by seam-split Simpson quadrature of the conditionals to avoid the 0/0
/// prefactor.
double q_ir_avg(const DetectorConfig& cfg, double alpha_sq, int n);
double q_ii_avg(const DetectorConfig& cfg, double alpha_sq, int n);

std::vector<double> povm_cond_part(const DetectorConfig& cfg, double alpha_sq,
                                   IrregularPart part, double tau2);
std::vector<double> povm_avg_part(const DetectorConfig& cfg, double alpha_sq,
                                  IrregularPart part);

}  // namespace photocount
