#include <photocount/montecarlo.hpp>

#include <photocount/rng.hpp>

#include <algorithm>
#include <cmath>

namespace photocount {

namespace {

// Stream-index offsets keep window streams and trajectory streams disjoint.
constexpr uint64_t kTrajectoryStreamBase = 0x74726a0000000000ull;

struct SourceModel {
  bool poissonian;              // coherent (or dark-only) arrivals
  double intensity;             // eta |alpha|^2 + nu
  double p;                     // afterpulse probability at this intensity
  const PhotonDistribution* photons = nullptr;  // non-Poissonian source law
  std::vector<double> photon_cdf;
  double eta = 1.0;             // thinning applied to drawn photons
  double nu = 0.0;

  static SourceModel coherent(const DetectorConfig& cfg, double alpha_sq) {
    SourceModel s{};
    s.poissonian = true;
    s.intensity = cfg.effective_intensity(alpha_sq);
    s.p = cfg.afterpulse_prob(alpha_sq);
    return s;
  }
  static SourceModel fock_diagonal(const DetectorConfig& cfg,
                                   const PhotonDistribution& ph, double eta) {
    SourceModel s{};
    s.poissonian = false;
    s.photons = &ph;
    s.eta = eta;
    s.nu = cfg.nu;
    const double mean = distribution_mean(ph.probs());
    s.intensity = eta * mean + cfg.nu;
    s.p = cfg.afterpulse_prob(eta * mean);
    s.photon_cdf.resize(ph.probs().size());
    double acc = 0.0;
    for (size_t k = 0; k < ph.probs().size(); ++k) {
      acc += ph.probs()[k];
      s.photon_cdf[k] = acc;
    }
    return s;
  }

  int draw_photon_number(Rng& rng) const {
    const double u = rng.uniform() * photon_cdf.back();
    return int(std::lower_bound(photon_cdf.begin(), photon_cdf.end(), u) -
               photon_cdf.begin());
  }
};

// Arrival times within one window, sorted ascending, relative to the window
// start. Poissonian sources use exponential inter-arrival sampling; Fock
// sources draw a photon number, thin, and place uniformly.
void window_arrivals(const SourceModel& src, const DetectorConfig& cfg,
                     Rng& rng, std::vector<double>& out) {
  out.clear();
  if (src.poissonian) {
    if (src.intensity <= 0.0) return;
    const double mean_gap = cfg.tau_m / src.intensity;
    double t = rng.exponential(mean_gap);
    while (t < cfg.tau_m) {
      out.push_back(t);
      t += rng.exponential(mean_gap);
    }
    return;
  }
  const int k = src.draw_photon_number(rng);
  for (int i = 0; i < k; ++i)
    if (src.eta >= 1.0 || rng.bernoulli(src.eta))
      out.push_back(rng.uniform() * cfg.tau_m);
  if (src.nu > 0.0) {
    const double mean_gap = cfg.tau_m / src.nu;
    double t = rng.exponential(mean_gap);
    while (t < cfg.tau_m) {
      out.push_back(t);
      t += rng.exponential(mean_gap);
    }
  }
  std::sort(out.begin(), out.end());
}

// One isolated window: detector starts clean, chain afterpulses fire at
// dead-time expiry while it lies inside the window.
int run_isolated_window(const SourceModel& src, const DetectorConfig& cfg,
                        Rng& rng, std::vector<double>& arrivals,
                        std::vector<double>* gaps) {
  window_arrivals(src, cfg, rng, arrivals);
  int count = 0;
  double t_live = 0.0;
  double last_pulse = -1.0;
  for (size_t i = 0; i < arrivals.size();) {
    if (arrivals[i] < t_live) {
      ++i;  // lost inside dead time (nonparalyzable)
      continue;
    }
    double t = arrivals[i];
    ++i;
    // Pulse plus its afterpulse chain.
    for (;;) {
      ++count;
      if (gaps && last_pulse >= 0.0) gaps->push_back(t - last_pulse);
      last_pulse = t;
      const double expiry = t + cfg.tau_d;
      if (expiry >= cfg.tau_m || !rng.bernoulli(src.p)) {
        t_live = expiry;
        break;
      }
      t = expiry;
    }
  }
  return count;
}

struct Trajectory {
  std::vector<int> counts;
  std::vector<double> tau2;
  std::vector<double> gaps;
};

// Continuous-wave trajectory: windows abut, detector state carries across
// boundaries. Counts, leak times and gaps all derive from the pulse series.
Trajectory run_cw_trajectory(const SourceModel& src, const DetectorConfig& cfg,
                             Rng rng, long n_windows, bool record_gaps) {
  Trajectory tr;
  tr.counts.assign(static_cast<size_t>(n_windows), 0);
  tr.tau2.assign(static_cast<size_t>(n_windows), 0.0);
  const double horizon = n_windows * cfg.tau_m;

  double last_pulse = -1.0;
  long tau2_cursor = 1;  // next window whose leak is still unrecorded

  auto record_pulse = [&](double t) {
    // Leaks for window boundaries passed since the previous pulse.
    for (; tau2_cursor * cfg.tau_m <= t && tau2_cursor < n_windows;
         ++tau2_cursor) {
      const double boundary = tau2_cursor * cfg.tau_m;
      const double leak =
          last_pulse >= 0.0 ? last_pulse + cfg.tau_d - boundary : 0.0;
      tr.tau2[tau2_cursor] = std::max(leak, 0.0);
    }
    if (t < horizon) {
      ++tr.counts[static_cast<size_t>(t / cfg.tau_m)];
      if (record_gaps && last_pulse >= 0.0) tr.gaps.push_back(t - last_pulse);
    }
    last_pulse = t;
  };

  if (src.poissonian) {
    if (src.intensity <= 0.0) return tr;
    const double mean_gap = cfg.tau_m / src.intensity;
    double t = rng.exponential(mean_gap);
    while (t < horizon) {
      record_pulse(t);
      // Afterpulse chain, then the next photon after the final dead time.
      while (t + cfg.tau_d < horizon && rng.bernoulli(src.p)) {
        t += cfg.tau_d;
        record_pulse(t);
      }
      t = t + cfg.tau_d + rng.exponential(mean_gap);
    }
    record_pulse(horizon + cfg.tau_d);  // flush remaining leak bookkeeping
    tr.counts.resize(static_cast<size_t>(n_windows));
    return tr;
  }

  // Fock-diagonal source: per-window arrival lists, state carried across.
  std::vector<double> arrivals;
  double t_live = 0.0;
  for (long w = 0; w < n_windows; ++w) {
    window_arrivals(src, cfg, rng, arrivals);
    const double base = w * cfg.tau_m;
    for (size_t i = 0; i < arrivals.size(); ++i) {
      double t = base + arrivals[i];
      if (t < t_live) continue;
      record_pulse(t);
      while (t + cfg.tau_d < horizon && rng.bernoulli(src.p)) {
        t += cfg.tau_d;
        record_pulse(t);
      }
      t_live = t + cfg.tau_d;
    }
    // A chain can outrun this window's arrivals; loop continues with the
    // carried t_live, skipping arrivals it covers.
  }
  record_pulse(horizon + cfg.tau_d);
  tr.counts.resize(static_cast<size_t>(n_windows));
  return tr;
}

SimRecord simulate_impl(const DetectorConfig& cfg, const SourceModel& src,
                        const SimOptions& opts, bool force_serial) {
  if (opts.n_windows < 1)
    throw std::invalid_argument("simulate: n_windows < 1");
  SimRecord rec;
  rec.seed = opts.seed;
  rec.n_windows = opts.n_windows;
  const bool parallel = opts.parallel && !force_serial;

  if (opts.mode == SimMode::independent) {
    if (opts.timing == TimingModel::refined)
      throw std::invalid_argument(
          "simulate: refined timing model requires cw mode");
    const long n = opts.n_windows;
    rec.counts.assign(static_cast<size_t>(n), 0);
    std::vector<std::vector<double>> gap_buf;
    if (opts.record_gaps) gap_buf.resize(static_cast<size_t>(n));
#pragma omp parallel if (parallel)
    {
      std::vector<double> arrivals;
#pragma omp for schedule(static)
      for (long w = 0; w < n; ++w) {
        Rng rng = Rng::stream(opts.seed, static_cast<uint64_t>(w));
        rec.counts[static_cast<size_t>(w)] = run_isolated_window(
            src, cfg, rng, arrivals,
            opts.record_gaps ? &gap_buf[static_cast<size_t>(w)] : nullptr);
      }
    }
    if (opts.record_gaps)
      for (auto& g : gap_buf)
        rec.gap_samples.insert(rec.gap_samples.end(), g.begin(), g.end());
    return rec;
  }

  // cw mode: fixed trajectory split (independent of thread count).
  const int T = std::max(1, opts.trajectories);
  const long q = opts.n_windows / T;
  const long r = opts.n_windows % T;
  std::vector<Trajectory> trs(static_cast<size_t>(T));
#pragma omp parallel for schedule(dynamic) if (parallel)
  for (int i = 0; i < T; ++i) {
    const long len = q + (i < r ? 1 : 0);
    if (len == 0) continue;
    trs[static_cast<size_t>(i)] = run_cw_trajectory(
        src, cfg, Rng::stream(opts.seed, kTrajectoryStreamBase + i), len,
        opts.record_gaps);
  }
  for (auto& tr : trs) {
    rec.counts.insert(rec.counts.end(), tr.counts.begin(), tr.counts.end());
    rec.tau2_samples.insert(rec.tau2_samples.end(), tr.tau2.begin(),
                            tr.tau2.end());
    rec.gap_samples.insert(rec.gap_samples.end(), tr.gaps.begin(),
                           tr.gaps.end());
  }
  return rec;
}

double recovery_thinned_delay(Rng& rng, double mean, double tau_r) {
  if (mean <= 0.0) return 0.0;
  double s = 0.0;
  for (;;) {
    s += rng.exponential(mean);
    if (tau_r <= 0.0 || rng.uniform() < 1.0 - std::exp(-s / tau_r)) return s;
  }
}

}  // namespace

SimRecord simulate(const DetectorConfig& cfg, const StateSpec& source,
                   const SimOptions& opts) {
  if (opts.timing == TimingModel::refined) {
    if (source.kind != StateSpec::Kind::coherent || opts.mode != SimMode::cw)
      throw std::invalid_argument(
          "simulate: refined timing model requires cw mode and a coherent "
          "source");
    // Refined timing is a renewal model on the pulse series; windows and
    // leak times derive from the pulse times.
    SimRecord rec;
    rec.seed = opts.seed;
    rec.n_windows = opts.n_windows;
    const double horizon = opts.n_windows * cfg.tau_m;
    Rng rng = Rng::stream(opts.seed, kTrajectoryStreamBase);
    const double I = cfg.effective_intensity(source.alpha_sq);
    const double p = cfg.afterpulse_prob(source.alpha_sq);
    rec.counts.assign(static_cast<size_t>(opts.n_windows), 0);
    rec.tau2_samples.assign(static_cast<size_t>(opts.n_windows), 0.0);
    if (I <= 0.0) return rec;
    const double tau_phot = cfg.tau_m / I;
    double last = -1.0;
    long cursor = 1;
    double t = rng.exponential(tau_phot);
    while (t < horizon) {
      for (; cursor * cfg.tau_m <= t && cursor < opts.n_windows; ++cursor) {
        const double leak =
            last >= 0.0 ? last + cfg.tau_d - cursor * cfg.tau_m : 0.0;
        rec.tau2_samples[static_cast<size_t>(cursor)] = std::max(leak, 0.0);
      }
      ++rec.counts[static_cast<size_t>(t / cfg.tau_m)];
      if (opts.record_gaps && last >= 0.0) rec.gap_samples.push_back(t - last);
      last = t;
      const double delay =
          rng.bernoulli(p)
              ? recovery_thinned_delay(rng, cfg.tau_after, cfg.tau_r)
              : recovery_thinned_delay(rng, tau_phot, cfg.tau_r);
      t += cfg.tau_d + delay;
    }
    return rec;
  }
  if (source.kind == StateSpec::Kind::coherent)
    return simulate_impl(cfg, SourceModel::coherent(cfg, source.alpha_sq),
                         opts, false);
  const auto photons = photon_distribution(source);
  return simulate_impl(cfg, SourceModel::fock_diagonal(cfg, photons, cfg.eta),
                       opts, false);
}

SimRecord simulate(const DetectorConfig& cfg, const PhotonDistribution& source,
                   const SimOptions& opts) {
  if (opts.timing == TimingModel::refined)
    throw std::invalid_argument(
        "simulate: refined timing model requires a coherent source");
  return simulate_impl(cfg, SourceModel::fock_diagonal(cfg, source, cfg.eta),
                       opts, false);
}

SimRecord simulate_reference(const DetectorConfig& cfg, const StateSpec& source,
                             const SimOptions& opts) {
  SimOptions o = opts;
  o.parallel = false;
  return simulate(cfg, source, o);
}

SimRecord simulate_reference(const DetectorConfig& cfg,
                             const PhotonDistribution& source,
                             const SimOptions& opts) {
  SimOptions o = opts;
  o.parallel = false;
  return simulate_impl(cfg, SourceModel::fock_diagonal(cfg, source, cfg.eta),
                       o, true);
}

std::vector<double> simulate_gap_series(const DetectorConfig& cfg,
                                        double alpha_sq, long n_gaps,
                                        uint64_t seed, TimingModel timing) {
  if (n_gaps < 1) throw std::invalid_argument("simulate_gap_series: n_gaps < 1");
  const double I = cfg.effective_intensity(alpha_sq);
  if (I <= 0.0)
    throw std::invalid_argument("simulate_gap_series: zero intensity");
  const double p = cfg.afterpulse_prob(alpha_sq);
  const double tau_phot = cfg.tau_m / I;
  Rng rng(seed);
  std::vector<double> gaps;
  gaps.reserve(static_cast<size_t>(n_gaps));
  for (long i = 0; i < n_gaps; ++i) {
    double delay;
    if (timing == TimingModel::instant) {
      delay = rng.bernoulli(p) ? 0.0 : rng.exponential(tau_phot);
    } else {
      delay = rng.bernoulli(p)
                  ? recovery_thinned_delay(rng, cfg.tau_after, cfg.tau_r)
                  : recovery_thinned_delay(rng, tau_phot, cfg.tau_r);
    }
    gaps.push_back(cfg.tau_d + delay);
  }
  return gaps;
}

EmpiricalCdf::EmpiricalCdf(std::vector<double> samples)
    : sorted_(std::move(samples)) {
  if (sorted_.empty()) throw std::invalid_argument("EmpiricalCdf: empty");
  std::sort(sorted_.begin(), sorted_.end());
}

double EmpiricalCdf::operator()(double t) const {
  const auto it = std::upper_bound(sorted_.begin(), sorted_.end(), t);
  return double(it - sorted_.begin()) / double(sorted_.size());
}

double EmpiricalCdf::quantile(double q) const {
  if (q < 0.0 || q > 1.0)
    throw std::invalid_argument("EmpiricalCdf::quantile: q outside [0, 1]");
  const size_t n = sorted_.size();
  const size_t i = std::min(static_cast<size_t>(q * n), n - 1);
  return sorted_[i];
}

EmpiricalCdf empirical_cdf(std::vector<double> samples) {
  return EmpiricalCdf(std::move(samples));
}

double ks_distance(const EmpiricalCdf& emp,
                   const std::function<double(double)>& model_cdf) {
  return ks_distance(emp, model_cdf, model_cdf);
}

double ks_distance(const EmpiricalCdf& emp,
                   const std::function<double(double)>& model_cdf,
                   const std::function<double(double)>& model_cdf_left) {
  const auto& x = emp.sorted();
  const double n = double(x.size());
  double d = 0.0;
  size_t i = 0;
  while (i < x.size()) {
    size_t j = i;
    while (j < x.size() && x[j] == x[i]) ++j;  // tie block
    d = std::max(d, std::abs(double(j) / n - model_cdf(x[i])));
    d = std::max(d, std::abs(double(i) / n - model_cdf_left(x[i])));
    i = j;
  }
  return d;
}

double dkw_epsilon(size_t n, double confidence) {
  if (n == 0 || confidence <= 0.0 || confidence >= 1.0)
    throw std::invalid_argument("dkw_epsilon: bad arguments");
  return std::sqrt(std::log(2.0 / (1.0 - confidence)) / (2.0 * double(n)));
}

std::vector<double> count_histogram(std::span<const int> counts, int n_max) {
  std::vector<double> h(static_cast<size_t>(n_max) + 1, 0.0);
  for (int c : counts)
    if (c >= 0 && c <= n_max) h[static_cast<size_t>(c)] += 1.0;
  for (auto& v : h) v /= double(counts.size());
  return h;
}

}  // namespace photocount
