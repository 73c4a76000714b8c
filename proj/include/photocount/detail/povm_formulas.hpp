#pragma once
#include <photocount/core.hpp>

#include <complex>
#include <vector>

// Q symbols of the counting POVM as explicit functions of the window
// geometry, the Poisson intensity I (already efficiency/dark-count adjusted)
// and a constant afterpulse probability p. Everything is templated on the
// scalar so the test suite can evaluate the same expressions at complex
// intensity and extract Fock-basis coefficients by contour quadrature.
namespace photocount::detail {

struct Geometry {
  double tau_m;
  double tau_d;
  double seam;  // tau_m - N*tau_d
  int slots;    // N
  bool integer_ratio;
};

inline Geometry geometry_of(const DetectorConfig& cfg) {
  return {cfg.tau_m, cfg.tau_d, cfg.seam(), cfg.slots(), cfg.integer_ratio()};
}

inline double pow_i(double x, int k) {
  if (k == 0) return 1.0;  // 0^0 = 1 by the conventions of the sums below
  double r = 1.0;
  for (int i = 0; i < k; ++i) r *= x;
  return r;
}

// Poisson factors F_j = mean^j e^{-mean} / j! for j = 0..jmax, by progressive
// product. Valid for |mean| well below 700; callers stay in that range.
template <class S>
std::vector<S> poisson_row(S mean, int jmax) {
  std::vector<S> row(static_cast<size_t>(jmax) + 1);
  row[0] = std::exp(-mean);
  for (int j = 1; j <= jmax; ++j) row[j] = row[j - 1] * mean / double(j);
  return row;
}

inline double eta_rr_of(const Geometry& g, int n) {
  return (g.tau_m - n * g.tau_d) / g.tau_m;
}
inline double eta_ri_of(const Geometry& g, int n, double tau1) {
  return (g.tau_m - n * g.tau_d + tau1) / g.tau_m;
}
inline double eta_ir_of(const Geometry& g, int n, double tau2) {
  return (g.tau_m - n * g.tau_d - tau2) / g.tau_m;
}
inline double eta_ii_of(const Geometry& g, int n, double tau1, double tau2) {
  return (g.tau_m - n * g.tau_d + tau1 - tau2) / g.tau_m;
}

// Regular-regular part: all dead times inside the window. n = 0..N.
template <class S>
S q_rr(const Geometry& g, S intensity, double p, int n) {
  if (n < 0 || n > g.slots) return S(0);
  if (n == 0) return std::exp(-intensity);
  const auto F = poisson_row<S>(intensity * eta_rr_of(g, n), n);
  S acc(0);
  for (int f = 1; f <= n; ++f)
    acc += F[f] * (binomial(n - 1, f - 1) * pow_i(p, n - f) * pow_i(1 - p, f));
  return acc;
}

// Regular-irregular part: last dead time spills past the window end.
// n = 1..N, plus the closed-form n = N+1 element.
template <class S>
S q_ri(const Geometry& g, S intensity, double p, int n) {
  if (n < 1 || n > g.slots + 1) return S(0);
  if (n <= g.slots) {
    const auto Fn = poisson_row<S>(intensity * eta_rr_of(g, n), n - 1);
    const auto Fm = poisson_row<S>(intensity * eta_rr_of(g, n - 1), n - 1);
    S pre_n(0), pre_m(0), acc(0);
    for (int f = 0; f <= n - 1; ++f) {
      pre_n += Fn[f];
      pre_m += Fm[f];
      acc += (pre_n - pre_m) *
             (binomial(n - 1, f) * pow_i(p, n - 1 - f) * pow_i(1 - p, f));
    }
    return acc;
  }
  if (g.integer_ratio) return S(0);
  const int N = g.slots;
  const auto F = poisson_row<S>(intensity * eta_rr_of(g, N), N);
  S pre(0), acc(0);
  for (int f = 0; f <= N; ++f) {
    pre += F[f];
    acc += pre * (binomial(N, f) * pow_i(p, N - f) * pow_i(1 - p, f));
  }
  return S(1) - acc;
}

// Density over the spill time tau1 whose integral gives q_ri.
template <class S>
S q_ri_density(const Geometry& g, S intensity, double p, int n, double tau1) {
  if (n < 1 || n > g.slots + 1) return S(0);
  const double lo = (n == g.slots + 1) ? g.tau_d - g.seam : 0.0;
  if (tau1 < lo || tau1 > g.tau_d) return S(0);
  const auto F = poisson_row<S>(intensity * eta_ri_of(g, n, tau1), n - 1);
  S acc(0);
  for (int f = 0; f <= n - 1; ++f)
    acc += F[f] * (binomial(n - 1, f) * pow_i(p, n - 1 - f) * pow_i(1 - p, f));
  return intensity / g.tau_m * acc;
}

// Irregular-regular part conditioned on the leaked dead time tau2.
// Branch seams are half-open: the short n = N branch owns tau2 = seam.
template <class S>
S q_ir_cond(const Geometry& g, S intensity, double p, int n, double tau2) {
  if (tau2 < 0.0 || tau2 > g.tau_d) return S(0);
  if (n < 0 || n > g.slots) return S(0);
  if (n == g.slots && !(tau2 < g.seam)) return S(0);
  const auto F = poisson_row<S>(intensity * eta_ir_of(g, n, tau2), n);
  S acc(0);
  for (int f = 0; f <= n; ++f)
    acc += F[f] * (binomial(n, f) * pow_i(p, n - f) * pow_i(1 - p, f + 1));
  return acc;
}

// Irregular-irregular part conditioned on tau2; n = 1..N+1 with the
// three-branch domain logic over tau2.
template <class S>
S q_ii_cond(const Geometry& g, S intensity, double p, int n, double tau2) {
  if (tau2 < 0.0 || tau2 > g.tau_d) return S(0);
  if (n < 1 || n > g.slots + 1) return S(0);
  const int N = g.slots;
  if (n < N || (n == N && tau2 < g.seam)) {
    const auto Fn = poisson_row<S>(intensity * eta_ir_of(g, n, tau2), n - 1);
    const auto Fm =
        poisson_row<S>(intensity * eta_ir_of(g, n - 1, tau2), n - 1);
    S pre_n(0), pre_m(0), acc(0);
    for (int f = 0; f <= n - 1; ++f) {
      pre_n += Fn[f];
      pre_m += Fm[f];
      acc += (pre_n - pre_m) *
             (binomial(n, f + 1) * pow_i(p, n - 1 - f) * pow_i(1 - p, f + 1));
    }
    return acc;
  }
  if (n == N) {  // tau2 in [seam, tau_d]; includes the pure-chain atom p^N
    const auto F =
        poisson_row<S>(intensity * eta_ir_of(g, N - 1, tau2), N - 1);
    S pre(0), acc(0);
    for (int f = 0; f <= N - 1; ++f) {
      pre += F[f];
      acc += pre *
             (binomial(N, f + 1) * pow_i(p, N - 1 - f) * pow_i(1 - p, f + 1));
    }
    return S(1) - acc;
  }
  // n = N+1, only below the seam; includes the pure-chain atom p^(N+1)
  if (!(tau2 < g.seam)) return S(0);
  const auto F = poisson_row<S>(intensity * eta_ir_of(g, N, tau2), N);
  S pre(0), acc(0);
  for (int f = 0; f <= N; ++f) {
    pre += F[f];
    acc +=
        pre * (binomial(N + 1, f + 1) * pow_i(p, N - f) * pow_i(1 - p, f + 1));
  }
  return S(1) - acc;
}

// Density over tau1 of the ii part given tau2. Does not carry the
// whole-window afterpulse-chain atoms; q_ii_cond does.
template <class S>
S q_ii_density(const Geometry& g, S intensity, double p, int n, double tau1,
               double tau2) {
  if (tau1 < 0.0 || tau1 > g.tau_d) return S(0);
  if (tau2 < 0.0 || tau2 > g.tau_d) return S(0);
  if (n < 1 || n > g.slots + 1) return S(0);
  if (n == g.slots && tau2 - tau1 > g.seam) return S(0);
  if (n == g.slots + 1 && tau2 - tau1 > g.seam - g.tau_d) return S(0);
  const auto F = poisson_row<S>(intensity * eta_ii_of(g, n, tau1, tau2), n - 1);
  S acc(0);
  for (int f = 0; f <= n - 1; ++f)
    acc += F[f] * (binomial(n, f + 1) * pow_i(p, n - 1 - f) * pow_i(1 - p, f + 1));
  return intensity / g.tau_m * acc;
}

// Uniform average over tau2 of the ir part, closed form. Contains a 1/I
// prefactor; the double-precision wrappers switch to quadrature at small I.
template <class S>
S q_ir_avg(const Geometry& g, S intensity, double p, int n) {
  if (n < 0 || n > g.slots) return S(0);
  const int N = g.slots;
  const double pref_scale = g.tau_m / g.tau_d;
  if (n < N) {
    const auto Fhi = poisson_row<S>(intensity * eta_rr_of(g, n + 1), n);
    const auto Flo = poisson_row<S>(intensity * eta_rr_of(g, n), n);
    S pre_hi(0), pre_lo(0), acc(0);
    for (int f = 0; f <= n; ++f) {
      pre_hi += Fhi[f];
      pre_lo += Flo[f];
      acc += (pre_hi - pre_lo) *
             (binomial(n, f) * pow_i(p, n - f) * pow_i(1 - p, f + 1));
    }
    return pref_scale / intensity * acc;
  }
  if (g.integer_ratio) return S(0);
  const auto F = poisson_row<S>(intensity * eta_rr_of(g, N), N);
  S pre(0), acc(0);
  for (int f = 0; f <= N; ++f) {
    pre += F[f];
    acc += (S(1) - pre) *
           (binomial(N, f) * pow_i(p, N - f) * pow_i(1 - p, f + 1));
  }
  return pref_scale / intensity * acc;
}

// Uniform average over tau2 of the ii part, closed form, n = 1..N+1.
template <class S>
S q_ii_avg(const Geometry& g, S intensity, double p, int n) {
  if (n < 1 || n > g.slots + 1) return S(0);
  const int N = g.slots;
  const double pref_scale = g.tau_m / g.tau_d;
  if (n < N) {
    const auto Fhi = poisson_row<S>(intensity * eta_rr_of(g, n + 1), n - 1);
    const auto Fmid = poisson_row<S>(intensity * eta_rr_of(g, n), n - 1);
    const auto Flo = poisson_row<S>(intensity * eta_rr_of(g, n - 1), n - 1);
    S acc(0);
    for (int f = 0; f <= n - 1; ++f) {
      S inner(0);
      for (int m = 0; m <= f; ++m)
        inner +=
            double(f - m + 1) * (Fhi[m] - 2.0 * Fmid[m] + Flo[m]);
      acc += inner *
             (binomial(n, f + 1) * pow_i(p, n - 1 - f) * pow_i(1 - p, f + 1));
    }
    return pref_scale / intensity * acc;
  }
  if (n == N) {
    const double atom = (g.tau_d - g.seam) / g.tau_d;  // ((N+1)tau_d - tau_m)/tau_d
    const auto Fm1 =
        poisson_row<S>(intensity * eta_rr_of(g, N - 1), std::max(N - 1, 0));
    const auto Fn = poisson_row<S>(intensity * eta_rr_of(g, N), std::max(N - 1, 0));
    S acc(0);
    for (int f = 0; f <= N - 1; ++f) {
      S inner(0);
      for (int m = 0; m <= f; ++m)
        inner += double(f - m + 1) * (Fm1[m] - 2.0 * Fn[m]);
      acc += inner *
             (binomial(N, f + 1) * pow_i(p, N - 1 - f) * pow_i(1 - p, f + 1));
    }
    return S(atom) + pref_scale / intensity * (double(N) * (1.0 - p) + acc);
  }
  // n = N+1
  if (g.integer_ratio) return S(0);
  const double lead = g.seam / g.tau_d;  // (tau_m - N*tau_d)/tau_d
  const auto F = poisson_row<S>(intensity * eta_rr_of(g, N), N);
  S acc(0);
  for (int f = 0; f <= N; ++f) {
    S inner(0);
    for (int m = 0; m <= f; ++m) inner += double(f - m + 1) * F[m];
    acc += inner *
           (binomial(N + 1, f + 1) * pow_i(p, N - f) * pow_i(1 - p, f + 1));
  }
  return S(lead) +
         pref_scale / intensity * (acc - double(N + 1) * (1.0 - p));
}

// Composite Simpson rule; panels must be even.
template <class F>
double simpson(F f, double a, double b, int panels) {
  if (b <= a) return 0.0;
  const double h = (b - a) / panels;
  double acc = f(a) + f(b);
  for (int i = 1; i < panels; ++i) acc += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
  return acc * h / 3.0;
}

}  // namespace photocount::detail
