#include <photocount/fock_map.hpp>
#include <photocount/states.hpp>
#include <photocount/montecarlo.hpp>
#include <photocount/multiwindow.hpp>
#include <photocount/povm_independent.hpp>
#include <cstdio>
#include <cmath>
#include <chrono>
using namespace photocount;
using clk = std::chrono::steady_clock;
static double ms(clk::time_point a, clk::time_point b) {
  return std::chrono::duration<double, std::milli>(b - a).count();
}

int main() {
  // fock map column sums
  {
    DetectorConfig cfg(1.0, 0.09, 1.0, 0.0, 0.1);
    for (int k : {0, 3, 12, 40}) {
      double sr = 0, si = 0;
      for (int n = 0; n <= cfg.slots() + 1; ++n) {
        sr += fock_rr(cfg, n, k) + fock_ri(cfg, n, k);
        si += fock_ir_avg(cfg, n, k) + fock_ii_avg(cfg, n, k);
      }
      std::printf("k=%2d  r-col-1=%.3e  i-col-1=%.3e\n", k, sr - 1.0, si - 1.0);
    }
  }
  // coherent consistency: linear map on Poisson columns == Q symbols
  {
    DetectorConfig cfg(1.0, 0.09, 1.0, 0.0, 0.05);
    for (double I : {1.0, 4.0, 9.0}) {
      auto ph = photon_distribution(StateSpec::coherent(std::sqrt(I)));
      auto viaFock = pulse_stats_linear(cfg, ph);
      auto viaQ = povm_r(cfg, I);
      double maxd = 0;
      for (int n = 0; n <= cfg.slots() + 1; ++n)
        maxd = std::max(maxd, std::abs(viaFock[n] - viaQ[n]));
      std::printf("I=%.0f coherent-consistency maxdiff=%.2e resid=%.2e\n", I,
                  maxd, viaFock.truncation_residual());
    }
  }
  // squeezed state: closed-form oracle for squeezed vacuum
  {
    auto ph = photon_distribution(StateSpec::squeezed_coherent(0.0, 1.0, 1.0));
    double c = std::cosh(1.0), t = std::tanh(1.0);
    std::printf("sq-vac P0 err=%.2e P2 err=%.2e P1=%.2e P3=%.2e\n",
                ph[0] - 1.0 / c, ph[2] - t * t / (2.0 * c), ph[1], ph[3]);
    // acceptance 3 config check
    DetectorConfig cfg(1.0, 0.09, 1.0, 0.0, 0.1);
    auto ph2 = photon_distribution(StateSpec::squeezed_coherent(4.0, 0.69, 0.8));
    std::printf("squeezed mean=%.4f (expect %.4f) cutoff=%d\n",
                distribution_mean(ph2.probs()),
                0.8 * (16.0 + std::sinh(0.69) * std::sinh(0.69)), ph2.cutoff());
    auto ind = pulse_stats_linear(cfg, ph2);
    auto cw = pulse_stats_cw(cfg, ph2);
    std::printf("ind mean=%.4f var=%.4f | cw mean=%.4f var=%.4f\n",
                distribution_mean(ind.probs()), distribution_variance(ind.probs()),
                distribution_mean(cw.probs()), distribution_variance(cw.probs()));
  }
  // incomplete beta sanity
  std::printf("B(0,1,1,1)=%.12f  B(0,1,3,4)-1/60=%.2e  B(0.2,0.7,2,3)=%.10f\n",
              incomplete_beta(0, 1, 1, 1),
              incomplete_beta(0, 1, 3, 4) - 2.0 / (3 * 4 * 5 * 2),
              incomplete_beta(0.2, 0.7, 2, 3));
  // MC independent vs analytic, TV
  {
    DetectorConfig cfg(1.0, 0.09, 1.0, 0.0, 0.05);
    SimOptions opts; opts.n_windows = 1000000; opts.seed = 42;
    auto t0 = clk::now();
    auto rec = simulate(cfg, StateSpec::coherent(2.0), opts);
    auto t1 = clk::now();
    auto hist = count_histogram(rec.counts, cfg.slots() + 1);
    auto ana = povm_r(cfg, 4.0);
    std::printf("MC indep 1e6 windows: %.0f ms, TV=%.5f\n", ms(t0, t1),
                total_variation(hist, ana.probs()));
    auto rec2 = simulate_reference(cfg, StateSpec::coherent(2.0), opts);
    bool same = rec.counts == rec2.counts && rec.gap_samples == rec2.gap_samples;
    std::printf("parallel == serial: %s\n", same ? "yes" : "NO!");
  }
  // MC cw vs analytic
  {
    DetectorConfig cfg(1.0, 0.09, 1.0, 0.0, 0.1);
    SimOptions opts; opts.mode = SimMode::cw; opts.n_windows = 1000000; opts.seed = 7;
    auto t0 = clk::now();
    auto rec = simulate(cfg, StateSpec::coherent(2.0), opts);
    auto t1 = clk::now();
    auto hist = count_histogram(rec.counts, cfg.slots() + 1);
    auto uni = cw_pulse_distribution(cfg, 4.0);
    auto exa = cw_pulse_distribution_exact(cfg, 4.0);
    std::printf("MC cw 1e6 windows: %.0f ms, TV(uniform)=%.5f TV(exact)=%.5f\n",
                ms(t0, t1), total_variation(hist, uni.probs()),
                total_variation(hist, exa.probs()));
    // tau2 CDF vs uniform law
    double Q = stationary_memory(cfg, 4.0).q_atom;
    EmpiricalCdf F(rec.tau2_samples);
    auto model = [&](double t) {
      if (t < 0) return 0.0;
      return std::min(Q + (1 - Q) * t / cfg.tau_d, 1.0);
    };
    auto model_left = [&](double t) {
      if (t <= 0) return 0.0;
      return std::min(Q + (1 - Q) * t / cfg.tau_d, 1.0);
    };
    double D = ks_distance(F, model, model_left);
    std::printf("tau2 KS D=%.5f  DKW99(n=%zu)=%.5f\n", D, F.size(),
                dkw_epsilon(F.size(), 0.99));
  }
  return 0;
}
