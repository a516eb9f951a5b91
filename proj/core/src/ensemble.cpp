#include "rswave/ensemble.hpp"

#include <algorithm>
#include <cmath>
#include <memory>

#include "rswave/effective_medium.hpp"
#include "rswave/errors.hpp"
#include "rswave/parallel.hpp"
#include "rswave/quadrature.hpp"

namespace rswave {
namespace {

constexpr double kTwoPi = 6.283185307179586476925287;

int next_pow2(int n) {
  int p = 2;
  while (p < n) p *= 2;
  return p;
}

// Per-worker stepping workspace; worker threads live for one parallel_for.
WaveStepper& local_stepper(const FieldGrid& grid) {
  thread_local std::unique_ptr<WaveStepper> stepper;
  thread_local FieldGrid cached;
  if (!stepper || cached.dim != grid.dim || cached.n != grid.n ||
      cached.L != grid.L) {
    stepper = std::make_unique<WaveStepper>(grid);
    cached = grid;
  }
  return *stepper;
}

// Observation step counts between consecutive micro times.
std::vector<int> plan_steps(const std::vector<double>& micro_times,
                            double dt) {
  std::vector<int> steps;
  double prev = 0.0;
  for (double s : micro_times) {
    const double span = s - prev;
    if (span < -1e-12)
      throw ConfigError("t_macro_list: times must be ascending");
    const auto n = static_cast<long long>(std::llround(span / dt));
    if (std::abs(n * dt - span) > 1e-9 * std::max(1.0, s))
      throw ConfigError("t_macro_list: not commensurate with dt");
    steps.push_back(static_cast<int>(n));
    prev = s;
  }
  return steps;
}

// Mean and batch-means standard error of a real sample.
std::pair<double, double> scalar_stats(std::span<const double> v,
                                       std::size_t block = kDefaultBlock) {
  const std::size_t n = v.size();
  double mean = 0.0;
  for (double x : v) mean += x;
  mean /= static_cast<double>(n);
  const std::size_t nb = (n + block - 1) / block;
  if (nb < 2) return {mean, 0.0};
  double acc = 0.0;
  for (std::size_t b = 0; b < nb; ++b) {
    const std::size_t lo = b * block;
    const std::size_t hi = std::min(n, lo + block);
    double s = 0.0;
    for (std::size_t i = lo; i < hi; ++i) s += v[i];
    const double bm = s / static_cast<double>(hi - lo);
    acc += (bm - mean) * (bm - mean);
  }
  return {mean, std::sqrt(acc / (static_cast<double>(nb) * (nb - 1)))};
}

double zscore(double distance, double se) {
  if (se <= 0.0) return distance == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
  return distance / se;
}

}  // namespace

SpectralModel model_from(const RunConfig& cfg) {
  const GapKind gk =
      cfg.gap_kind == "constant" ? GapKind::constant : GapKind::quadratic;
  return SpectralModel(cfg.dim, SpectrumKind::gaussian, cfg.spectrum_amplitude,
                       cfg.spectrum_sigma, gk, cfg.gap_gamma0, cfg.gap_gamma2);
}

InitialProfile profile_from(const RunConfig& cfg) {
  const ProfileKind pk = cfg.profile_kind == "gaussian"
                             ? ProfileKind::gaussian
                             : ProfileKind::gaussian_hermite;
  return InitialProfile(cfg.dim, pk, cfg.profile_amplitude, cfg.profile_sigma);
}

GridPlan plan_grid(const RunConfig& cfg, double eps, bool wigner_mode) {
  GridPlan plan;
  plan.params = WaveParams::make(eps, cfg.alpha);
  double L = cfg.grid_L;
  if (L <= 0.0) {
    L = cfg.width_factor / plan.params.kappa;
    if (wigner_mode) {
      // The eta lattice spacing is 2 dxi / eps^2; size the box so it hits
      // the requested eta1.
      const double L_eta = 2.0 * kTwoPi / (cfg.wigner_eta1 * eps * eps);
      L = std::max(L, L_eta);
    }
  }
  int n = cfg.grid_n;
  if (n <= 0)
    n = next_pow2(static_cast<int>(
        std::ceil(L * cfg.grid_xi_max_target / 3.14159265358979323846)));
  plan.grid = FieldGrid(cfg.dim, n, L);
  plan.psi_dxi = plan.grid.dxi() / plan.params.kappa;
  return plan;
}

std::vector<RealizationData> run_ensemble(const EnsembleSpec& spec) {
  auto table = make_mode_table(*spec.model, spec.grid);
  const auto seg_steps = plan_steps(spec.micro_times, spec.dt);

  // Window mode index list (1-d only; checked by the wigner runner).
  std::vector<std::size_t> window_idx;
  if (spec.window >= 0) {
    for (int m = -spec.window; m <= spec.window; ++m)
      window_idx.push_back(
          static_cast<std::size_t>(spec.grid.index_of_mode(m)));
  }

  std::vector<RealizationData> out(
      static_cast<std::size_t>(spec.n_realizations));
  parallel_for(
      static_cast<std::size_t>(spec.n_realizations), spec.workers,
      [&](std::size_t r) {
        WaveStepper& stepper = local_stepper(spec.grid);
        FieldState field(table, RngStream(spec.seed, StreamKind::field, r));
        WaveState wave = init_low_freq(*spec.profile, spec.params, spec.grid,
                                       spec.width_factor);
        RealizationData rec;
        const double mass0 = wave.mass();
        for (std::size_t seg = 0; seg < seg_steps.size(); ++seg) {
          for (int s = 0; s < seg_steps[seg]; ++s)
            stepper.step(wave, field, spec.dt);
          if (!spec.low_probes.empty())
            rec.low.push_back(compensate_low(wave, spec.low_probes));
          if (!spec.high_probes.empty())
            rec.high.push_back(compensate_high(wave, spec.high_probes));
          if (!window_idx.empty())
            rec.window.push_back(compensate_low(wave, window_idx));
          rec.mass_drift = std::max(
              rec.mass_drift, std::abs(wave.mass() - mass0) / mass0);
          rec.tail_frac =
              std::max(rec.tail_frac, stepper.tail_mass_fraction(wave));
        }
        out[r] = std::move(rec);
      });
  return out;
}

Table rows_to_table(const std::string& name,
                    const std::vector<StatRow>& rows) {
  Table t;
  t.name = name;
  t.columns = {"t",         "xi",        "stat",       "estimate_re",
               "estimate_im", "stderr",    "target_re",  "target_im",
               "target_err",  "z"};
  for (const auto& r : rows) {
    t.add_row({Table::fmt(r.t), Table::fmt(r.xi), r.stat,
               Table::fmt(r.estimate.real()), Table::fmt(r.estimate.imag()),
               Table::fmt(r.se), Table::fmt(r.target.real()),
               Table::fmt(r.target.imag()), Table::fmt(r.target_err),
               Table::fmt(r.z)});
  }
  return t;
}

namespace {

struct ProbePlan {
  std::vector<std::size_t> indices;  // one grid index per probe
  std::vector<double> actual_xi;     // realized (snapped) probe frequency
};

// Low-frequency probes live on the psi lattice: xi = m * psi_dxi.
ProbePlan plan_low_probes(const GridPlan& plan,
                          const std::vector<double>& probes) {
  ProbePlan out;
  for (double xi : probes) {
    const double m_real = xi / plan.psi_dxi;
    const long long m = std::llround(m_real);
    if (std::abs(m_real - static_cast<double>(m)) > 1e-6 * (1.0 + std::abs(m_real)))
      throw ConfigError(
          "probes_xi: probe is not a multiple of the psi-lattice spacing " +
          Table::fmt(plan.psi_dxi));
    out.indices.push_back(static_cast<std::size_t>(
        plan.grid.index_of_mode(static_cast<int>(m))));
    out.actual_xi.push_back(static_cast<double>(m) * plan.psi_dxi);
  }
  return out;
}

std::vector<std::complex<double>> gather(
    const std::vector<RealizationData>& data, bool low, std::size_t time_idx,
    std::size_t probe_idx) {
  std::vector<std::complex<double>> out;
  out.reserve(data.size());
  for (const auto& r : data)
    out.push_back(low ? r.low[time_idx][probe_idx]
                      : r.high[time_idx][probe_idx]);
  return out;
}

EnsembleDiagnostics diagnostics(const std::vector<RealizationData>& data) {
  EnsembleDiagnostics d;
  for (const auto& r : data) {
    d.max_mass_drift = std::max(d.max_mass_drift, r.mass_drift);
    d.max_tail_frac = std::max(d.max_tail_frac, r.tail_frac);
  }
  return d;
}

}  // namespace

HomogenizationResult run_homogenization(const RunConfig& cfg) {
  return run_homogenization(cfg, cfg.eps);
}

HomogenizationResult run_homogenization(const RunConfig& cfg, double eps) {
  const SpectralModel model = model_from(cfg);
  const InitialProfile profile = profile_from(cfg);
  const GridPlan plan = plan_grid(cfg, eps, false);
  const ProbePlan probes = plan_low_probes(plan, cfg.probes_xi);

  EnsembleSpec spec;
  spec.model = &model;
  spec.profile = &profile;
  spec.grid = plan.grid;
  spec.params = plan.params;
  spec.dt = cfg.dt;
  spec.width_factor = cfg.width_factor;
  for (double t : cfg.t_macro_list)
    spec.micro_times.push_back(t / (eps * eps));
  spec.n_realizations = cfg.n_realizations;
  spec.seed = cfg.master_seed;
  spec.workers = cfg.workers;
  spec.low_probes = probes.indices;

  const auto data = run_ensemble(spec);

  HomogenizationResult res;
  res.diag = diagnostics(data);
  res.d0 = d_zero(model).value;

  for (std::size_t ti = 0; ti < cfg.t_macro_list.size(); ++ti) {
    const double t = cfg.t_macro_list[ti];
    for (std::size_t pi = 0; pi < probes.indices.size(); ++pi) {
      const double xi = probes.actual_xi[pi];
      Vec xiv = Vec::zero(cfg.dim);
      xiv[0] = xi;
      const std::complex<double> phi0 = profile.phi0hat(xiv);
      const auto samples = gather(data, true, ti, pi);
      const auto stats = compute_moment_stats(samples);

      StatRow mean_row;
      mean_row.t = t;
      mean_row.xi = xi;
      mean_row.stat = "mean";
      mean_row.estimate = stats.mean;
      mean_row.se = stats.se_mean;
      mean_row.target = phi0 * std::exp(-0.5 * res.d0 * t);
      mean_row.z = zscore(std::abs(mean_row.estimate - mean_row.target),
                          mean_row.se);
      res.rows.push_back(mean_row);

      std::vector<double> abs2(samples.size());
      for (std::size_t i = 0; i < samples.size(); ++i)
        abs2[i] = std::norm(samples[i]);
      const auto [m2, m2_se] = scalar_stats(abs2);
      StatRow m2_row;
      m2_row.t = t;
      m2_row.xi = xi;
      m2_row.stat = "second_moment";
      m2_row.estimate = m2;
      m2_row.se = m2_se;
      m2_row.target = std::norm(phi0) * std::exp(-res.d0.real() * t);
      m2_row.z = zscore(std::abs(m2_row.estimate - m2_row.target), m2_se);
      res.rows.push_back(m2_row);
    }
  }
  return res;
}

HighFreqResult run_high_freq(const RunConfig& cfg) {
  const SpectralModel model = model_from(cfg);
  const InitialProfile profile = profile_from(cfg);
  const GridPlan plan = plan_grid(cfg, cfg.eps, false);

  // Snap each probe to the grid and take every mode within its cell.
  const double dxi = plan.grid.dxi();
  std::vector<std::size_t> probe_start, probe_count;
  std::vector<double> actual_xi;
  std::vector<std::size_t> all_modes;
  const int half = std::max(
      0, static_cast<int>(std::floor(cfg.highfreq_cell / (2.0 * dxi))));
  for (double xi : cfg.probes_xi) {
    if (xi == 0.0)
      throw ConfigError("probes_xi: high-freq probes must be nonzero");
    const int mc = static_cast<int>(std::llround(xi / dxi));
    probe_start.push_back(all_modes.size());
    for (int m = mc - half; m <= mc + half; ++m)
      all_modes.push_back(
          static_cast<std::size_t>(plan.grid.index_of_mode(m)));
    probe_count.push_back(all_modes.size() - probe_start.back());
    actual_xi.push_back(mc * dxi);
  }

  EnsembleSpec spec;
  spec.model = &model;
  spec.profile = &profile;
  spec.grid = plan.grid;
  spec.params = plan.params;
  spec.dt = cfg.dt;
  spec.width_factor = cfg.width_factor;
  for (double t : cfg.t_macro_list)
    spec.micro_times.push_back(t / (cfg.eps * cfg.eps));
  spec.n_realizations = cfg.n_realizations;
  spec.seed = cfg.master_seed;
  spec.workers = cfg.workers;
  spec.high_probes = all_modes;

  const auto data = run_ensemble(spec);

  HighFreqResult res;
  res.diag = diagnostics(data);

  const ScatteringRate rate(model, 2.0 * model.cutoff() + 2.0, 2048);

  for (std::size_t ti = 0; ti < cfg.t_macro_list.size(); ++ti) {
    const double t = cfg.t_macro_list[ti];
    for (std::size_t pi = 0; pi < actual_xi.size(); ++pi) {
      const double xi = actual_xi[pi];
      const std::size_t start = probe_start[pi];
      const std::size_t count = probe_count[pi];
      const std::size_t center = start + count / 2;

      const auto center_samples = gather(data, false, ti, center);
      const auto stats = compute_moment_stats(center_samples);

      StatRow mean_row;
      mean_row.t = t;
      mean_row.xi = xi;
      mean_row.stat = "mean";
      mean_row.estimate = stats.mean;
      mean_row.se = stats.se_mean;
      mean_row.target = 0.0;
      mean_row.z = zscore(std::abs(stats.mean), stats.se_mean);
      res.rows.push_back(mean_row);

      StatRow pseudo_row;
      pseudo_row.t = t;
      pseudo_row.xi = xi;
      pseudo_row.stat = "pseudo_over_var";
      const double ratio = stats.var_conj > 0
                               ? std::abs(stats.second_nonconj) / stats.var_conj
                               : 0.0;
      pseudo_row.estimate = ratio;
      pseudo_row.se = stats.var_conj > 0
                          ? std::hypot(stats.se_second_nonconj / stats.var_conj,
                                       ratio * stats.se_var_conj / stats.var_conj)
                          : 0.0;
      pseudo_row.target = 0.0;
      pseudo_row.z = zscore(ratio, pseudo_row.se);
      res.rows.push_back(pseudo_row);

      StatRow kurt_row;
      kurt_row.t = t;
      kurt_row.xi = xi;
      kurt_row.stat = "kurtosis_ratio";
      kurt_row.estimate = stats.kurtosis_ratio;
      kurt_row.se = stats.se_kurtosis_ratio;
      kurt_row.target = 2.0;
      kurt_row.z = zscore(std::abs(stats.kurtosis_ratio - 2.0),
                          stats.se_kurtosis_ratio);
      res.rows.push_back(kurt_row);

      // Cell-averaged E|Psi|^2 against the scattering series.
      std::vector<double> cell_m2(data.size());
      for (std::size_t r = 0; r < data.size(); ++r) {
        double acc = 0.0;
        for (std::size_t k = 0; k < count; ++k)
          acc += std::norm(data[r].high[ti][start + k]);
        cell_m2[r] = acc / static_cast<double>(count);
      }
      const auto [m2, m2_se] = scalar_stats(cell_m2);
      Vec xiv = Vec::zero(cfg.dim);
      xiv[0] = xi;
      const auto series = scattering_series(
          model, profile, t, xiv, cfg.kinetic_k_max, cfg.kinetic_n_mc, rate,
          cfg.master_seed, (ti << 8) | pi, resolve_workers(cfg.workers));
      StatRow var_row;
      var_row.t = t;
      var_row.xi = xi;
      var_row.stat = "var_vs_series";
      var_row.estimate = m2;
      var_row.se = m2_se;
      var_row.target = series.estimate;
      var_row.target_err = series.stderr_ + series.truncation_bound;
      var_row.z = zscore(std::abs(m2 - series.estimate),
                         std::hypot(m2_se, var_row.target_err));
      res.rows.push_back(var_row);
    }
  }
  return res;
}

CorrectorResult run_corrector(const RunConfig& cfg) {
  const SpectralModel model = model_from(cfg);
  const InitialProfile profile = profile_from(cfg);
  const GridPlan plan = plan_grid(cfg, cfg.eps, false);
  const ProbePlan probes = plan_low_probes(plan, cfg.probes_xi);

  EnsembleSpec spec;
  spec.model = &model;
  spec.profile = &profile;
  spec.grid = plan.grid;
  spec.params = plan.params;
  spec.dt = cfg.dt;
  spec.width_factor = cfg.width_factor;
  for (double t : cfg.t_macro_list)
    spec.micro_times.push_back(t / (cfg.eps * cfg.eps));
  spec.n_realizations = cfg.n_realizations;
  spec.seed = cfg.master_seed;
  spec.workers = cfg.workers;
  spec.low_probes = probes.indices;

  const auto data = run_ensemble(spec);

  CorrectorResult res;
  res.diag = diagnostics(data);
  const ScatteringRate rate(model, 2.0 * model.cutoff() + 2.0, 2048);

  for (std::size_t ti = 0; ti < cfg.t_macro_list.size(); ++ti) {
    const double t = cfg.t_macro_list[ti];
    const auto series0 = scattering_series(
        model, profile, t, Vec::zero(cfg.dim), cfg.kinetic_k_max,
        cfg.kinetic_n_mc, rate, cfg.master_seed, 0xC0 | ti,
        resolve_workers(cfg.workers));
    for (std::size_t pi = 0; pi < probes.indices.size(); ++pi) {
      const double xi = probes.actual_xi[pi];
      const auto psi = gather(data, true, ti, pi);
      const auto u = fluctuation(psi, plan.params.kappa, cfg.dim);
      const auto stats = compute_moment_stats(u);

      StatRow var_row;
      var_row.t = t;
      var_row.xi = xi;
      var_row.stat = "var_conj";
      var_row.estimate = stats.var_conj;
      var_row.se = stats.se_var_conj;
      var_row.target = series0.estimate;
      var_row.target_err = series0.stderr_ + series0.truncation_bound;
      var_row.z = zscore(std::abs(stats.var_conj - series0.estimate),
                         std::hypot(stats.se_var_conj, var_row.target_err));
      res.rows.push_back(var_row);

      Vec xiv = Vec::zero(cfg.dim);
      xiv[0] = xi;
      const std::complex<double> walpha =
          corrector_pseudovariance(model, profile, t, xiv, cfg.alpha);
      StatRow pseudo_row;
      pseudo_row.t = t;
      pseudo_row.xi = xi;
      pseudo_row.stat = "second_nonconj";
      pseudo_row.estimate = stats.second_nonconj;
      pseudo_row.se = stats.se_second_nonconj;
      pseudo_row.target = walpha;
      pseudo_row.z = zscore(std::abs(stats.second_nonconj - walpha),
                            stats.se_second_nonconj);
      res.rows.push_back(pseudo_row);
    }
  }
  return res;
}

namespace {

std::vector<WignerTest> builtin_wigner_tests(const RunConfig& cfg) {
  auto make = [&](double sg, double sh) {
    WignerTest t;
    t.ghat = [sg](const Vec& eta) {
      return std::complex<double>(
          sg * std::sqrt(kTwoPi) * std::exp(-0.5 * eta.norm2() * sg * sg),
          0.0);
    };
    t.h = [sh](const Vec& xi) {
      return std::complex<double>(
          std::exp(-0.5 * xi.norm2() / (sh * sh)), 0.0);
    };
    t.eta_cut = 4.3 / sg;
    t.xi_cut = 4.3 * sh;
    return t;
  };
  return {make(cfg.wigner_sigma_g, cfg.wigner_sigma_h),
          make(1.6 * cfg.wigner_sigma_g, 0.7 * cfg.wigner_sigma_h)};
}

// Physical-space test factor g(x) matching builtin_wigner_tests.
double wigner_g_phys(const RunConfig& cfg, int test_id, double x) {
  const double sg =
      test_id == 0 ? cfg.wigner_sigma_g : 1.6 * cfg.wigner_sigma_g;
  return std::exp(-0.5 * x * x / (sg * sg));
}

double wigner_h_integral(const RunConfig& cfg, int test_id) {
  const double sh =
      test_id == 0 ? cfg.wigner_sigma_h : 0.7 * cfg.wigner_sigma_h;
  return sh * std::sqrt(kTwoPi);
}

}  // namespace

WignerResult run_wigner(const RunConfig& cfg) {
  validate_for_command(cfg, "wigner");
  if (cfg.dim != 1)
    throw ConfigError("wigner: the Wigner runner supports dim = 1");

  const SpectralModel model = model_from(cfg);
  const InitialProfile profile = profile_from(cfg);
  const GridPlan plan = plan_grid(cfg, cfg.eps, true);
  const auto tests = builtin_wigner_tests(cfg);

  const double eps_beta = std::pow(cfg.eps, cfg.beta);
  const double deta = 2.0 * plan.psi_dxi / eps_beta;
  int window = 0;
  for (const auto& t : tests) {
    const int m_cut = static_cast<int>(std::floor(t.xi_cut / plan.psi_dxi));
    const int j_cut = static_cast<int>(std::floor(t.eta_cut / deta));
    window = std::max(window, m_cut + j_cut + 1);
  }
  if (2 * window + 1 > plan.grid.n)
    throw ConfigError("wigner: test support exceeds the grid");

  EnsembleSpec spec;
  spec.model = &model;
  spec.profile = &profile;
  spec.grid = plan.grid;
  spec.params = plan.params;
  spec.dt = cfg.dt;
  spec.width_factor = cfg.width_factor;
  for (double t : cfg.t_macro_list)
    spec.micro_times.push_back(t / (cfg.eps * cfg.eps));
  spec.n_realizations = cfg.n_realizations;
  spec.seed = cfg.master_seed;
  spec.workers = cfg.workers;
  spec.window = window;

  const auto data = run_ensemble(spec);

  WignerResult res;
  res.diag = diagnostics(data);
  const ScatteringRate rate(model, 2.0 * model.cutoff() + 2.0, 2048);
  const std::size_t n_window = 2 * static_cast<std::size_t>(window) + 1;
  const double kappa_scale = std::pow(plan.params.kappa, -0.5 * cfg.dim);

  for (std::size_t ti = 0; ti < cfg.t_macro_list.size(); ++ti) {
    const double t = cfg.t_macro_list[ti];

    // Ensemble mean of psi per window mode, then the fluctuation field.
    std::vector<std::complex<double>> mean(n_window, {0.0, 0.0});
    for (const auto& r : data)
      for (std::size_t k = 0; k < n_window; ++k) mean[k] += r.window[ti][k];
    for (auto& m : mean) m /= static_cast<double>(data.size());

    // Particle cloud for the targets at this time.
    const auto cloud = transport_particles(
        model, profile, t, cfg.kinetic_n_particles, rate, cfg.master_seed,
        0xA0 | ti, resolve_workers(cfg.workers));

    for (std::size_t test_id = 0; test_id < tests.size(); ++test_id) {
      std::vector<std::complex<double>> values(data.size());
      std::vector<std::complex<double>> u(n_window);
      for (std::size_t r = 0; r < data.size(); ++r) {
        for (std::size_t k = 0; k < n_window; ++k)
          u[k] = kappa_scale * (data[r].window[ti][k] - mean[k]);
        values[r] = wigner_pairing(u, window, cfg.dim, plan.psi_dxi, cfg.eps,
                                   cfg.beta, tests[test_id]);
      }
      const auto stats = compute_moment_stats(values);

      // Target: h-integral x (1/cell) x sum of scattering-particle weights
      // near zero momentum weighted by g(x).
      const double cell = cfg.wigner_mom_cell;
      double target_sum = 0.0, target_sq = 0.0;
      for (const auto& p : cloud.particles) {
        if (p.n_jumps == 0 || std::abs(p.xi[0]) > 0.5 * cell) continue;
        const double c = p.weight * wigner_g_phys(cfg, static_cast<int>(test_id), p.x[0]);
        target_sum += c;
        target_sq += c * c;
      }
      const double hint = wigner_h_integral(cfg, static_cast<int>(test_id));
      const double target = hint * target_sum / cell;
      const double target_err = hint * std::sqrt(target_sq) / cell;

      WignerRow mean_re;
      mean_re.eps = cfg.eps;
      mean_re.t = t;
      mean_re.test_id = static_cast<int>(test_id);
      mean_re.stat = "mean_re";
      mean_re.estimate = stats.mean.real();
      mean_re.se = stats.se_mean;
      mean_re.target = target;
      mean_re.target_err = target_err;
      mean_re.z = zscore(std::abs(mean_re.estimate - target),
                         std::hypot(stats.se_mean, target_err));
      res.rows.push_back(mean_re);

      WignerRow mean_im;
      mean_im.eps = cfg.eps;
      mean_im.t = t;
      mean_im.test_id = static_cast<int>(test_id);
      mean_im.stat = "mean_im";
      mean_im.estimate = stats.mean.imag();
      mean_im.se = stats.se_mean;
      mean_im.target = 0.0;
      mean_im.z = zscore(std::abs(stats.mean.imag()), stats.se_mean);
      res.rows.push_back(mean_im);

      WignerRow var_row;
      var_row.eps = cfg.eps;
      var_row.t = t;
      var_row.test_id = static_cast<int>(test_id);
      var_row.stat = "variance";
      var_row.estimate = stats.var_conj;
      var_row.se = stats.se_var_conj;
      var_row.target = 0.0;
      var_row.target_err = 0.0;
      var_row.z = 0.0;
      res.rows.push_back(var_row);
    }
  }
  return res;
}

Table wigner_table(const std::vector<WignerRow>& rows) {
  Table t;
  t.name = "wigner";
  t.columns = {"eps",      "t",          "test",     "stat", "estimate",
               "stderr",   "target",     "target_err", "z"};
  for (const auto& r : rows) {
    t.add_row({Table::fmt(r.eps), Table::fmt(r.t), Table::fmt(r.test_id),
               r.stat, Table::fmt(r.estimate), Table::fmt(r.se),
               Table::fmt(r.target), Table::fmt(r.target_err),
               Table::fmt(r.z)});
  }
  return t;
}

KineticRunResult run_kinetic(const RunConfig& cfg) {
  if (cfg.dim != 1)
    throw ConfigError("kinetic: the grid solver route requires dim = 1");
  const SpectralModel model = model_from(cfg);
  const InitialProfile profile = profile_from(cfg);
  const double mass0 = profile.l2norm_sq();
  const ScatteringRate rate(model, 2.0 * model.cutoff() + 2.0, 2048);
  const int workers = resolve_workers(cfg.workers);

  KineticRunResult res;

  // Grid solver with the explicit atom.
  const KineticGrid grid{cfg.kinetic_n_cells, cfg.kinetic_xi_max};
  const KineticOperator op(model, grid);
  if (cfg.kinetic_dt * op.max_rate() > 0.9)
    throw ConfigError("kinetic.dt: CFL violated (dt * max_rate > 0.9)");
  const auto n_steps =
      static_cast<int>(std::llround(cfg.kinetic_t / cfg.kinetic_dt));
  if (std::abs(n_steps * cfg.kinetic_dt - cfg.kinetic_t) >
      1e-9 * std::max(1.0, cfg.kinetic_t))
    throw ConfigError("kinetic.t: not commensurate with kinetic.dt");

  KineticState state;
  state.grid = grid;
  state.what.assign(static_cast<std::size_t>(grid.n_cells), 0.0);
  state.delta_weight = mass0;

  const double red0 = d_zero(model).value.real();
  Table atom_table;
  atom_table.name = "atom_decay";
  atom_table.columns = {"t", "atom", "target", "rel_err"};

  const int checkpoints = std::min(64, std::max(1, n_steps));
  const int chunk = std::max(1, n_steps / checkpoints);
  int done = 0;
  double min_what = 0.0;
  const double initial_mass = state.total_mass();
  while (done < n_steps) {
    const int todo = std::min(chunk, n_steps - done);
    op.evolve(state, cfg.kinetic_dt, todo);
    done += todo;
    const double target = mass0 * std::exp(-red0 * state.time);
    atom_table.add_row({Table::fmt(state.time), Table::fmt(state.delta_weight),
                        Table::fmt(target),
                        Table::fmt(std::abs(state.delta_weight - target) /
                                   target)});
    for (double w : state.what) min_what = std::min(min_what, w);
  }
  res.atom_final = state.delta_weight;
  res.atom_target = mass0 * std::exp(-red0 * state.time);
  res.mass_drift =
      std::abs(state.total_mass() - initial_mass) / initial_mass;
  res.min_what = min_what;
  res.tables.push_back(std::move(atom_table));

  Table profile_table;
  profile_table.name = "what_profile";
  profile_table.columns = {"xi", "what"};
  for (int i = 0; i < grid.n_cells; ++i)
    profile_table.add_row({Table::fmt(grid.center(i)),
                           Table::fmt(state.what[static_cast<std::size_t>(i)])});
  res.tables.push_back(std::move(profile_table));

  // Per-cell three-route comparison.
  const auto cloud =
      transport_particles(model, profile, cfg.kinetic_t,
                          cfg.kinetic_n_particles, rate, cfg.master_seed,
                          0xB0, workers);
  Table orders_table;
  orders_table.name = "series_orders";
  orders_table.columns = {"xi", "order", "contribution", "stderr"};

  const double width =
      (cfg.kinetic_hist_hi - cfg.kinetic_hist_lo) / cfg.kinetic_hist_cells;
  for (int c = 0; c < cfg.kinetic_hist_cells; ++c) {
    KineticCell cell;
    cell.lo = cfg.kinetic_hist_lo + c * width;
    cell.hi = cell.lo + width;
    const double center = 0.5 * (cell.lo + cell.hi);

    const auto series = scattering_series(
        model, profile, cfg.kinetic_t, Vec(center), cfg.kinetic_k_max,
        cfg.kinetic_n_mc, rate, cfg.master_seed,
        0xD0 | static_cast<std::uint64_t>(c), workers);
    for (const auto& ord : series.orders)
      orders_table.add_row({Table::fmt(center), Table::fmt(ord.order),
                            Table::fmt(ord.estimate), Table::fmt(ord.stderr_)});
    cell.series = series.estimate * width;
    cell.series_err = series.stderr_ * width;
    cell.series_trunc = series.truncation_bound * width;

    const auto [pmass, perr] = momentum_cell_mass(cloud, cell.lo, cell.hi, true);
    cell.particles = pmass;
    cell.particles_err = perr;

    double emass = 0.0;
    for (int i = 0; i < grid.n_cells; ++i) {
      const double x = grid.center(i);
      if (x >= cell.lo && x < cell.hi)
        emass += state.what[static_cast<std::size_t>(i)] * grid.delta();
    }
    cell.evolve = emass;
    res.cells.push_back(cell);
  }
  res.tables.push_back(std::move(orders_table));

  Table hist_table;
  hist_table.name = "particles_hist";
  hist_table.columns = {"cell_lo",      "cell_hi",   "particles",
                        "particles_err", "series",    "series_err",
                        "series_trunc",  "evolve"};
  for (const auto& c : res.cells)
    hist_table.add_row({Table::fmt(c.lo), Table::fmt(c.hi),
                        Table::fmt(c.particles), Table::fmt(c.particles_err),
                        Table::fmt(c.series), Table::fmt(c.series_err),
                        Table::fmt(c.series_trunc), Table::fmt(c.evolve)});
  res.tables.push_back(std::move(hist_table));
  return res;
}

std::vector<Table> run_field_stats(const RunConfig& cfg) {
  const SpectralModel model = model_from(cfg);
  model.ensure_valid();

  // A compact box is enough for covariance checks; the spectral sums are
  // exponentially accurate once the cutoff fits.
  const double L = cfg.grid_L > 0 ? cfg.grid_L : 12.8;
  const int n = cfg.grid_n > 0 ? cfg.grid_n : 64;
  const FieldGrid grid(cfg.dim, n, L);
  auto table = make_mode_table(model, grid);

  std::vector<double> lags = cfg.field_lags;
  std::sort(lags.begin(), lags.end());

  const int paths = cfg.field_paths;
  std::vector<FieldTrajectory> trajectories(static_cast<std::size_t>(paths));
  parallel_for(static_cast<std::size_t>(paths), cfg.workers, [&](std::size_t p) {
    thread_local std::unique_ptr<Fft> fft;
    thread_local FieldGrid cached;
    if (!fft || cached.n != grid.n || cached.dim != grid.dim ||
        cached.L != grid.L) {
      fft = std::make_unique<Fft>(grid);
      cached = grid;
    }
    FieldState state(table, RngStream(cfg.master_seed, StreamKind::field, p));
    FieldTrajectory traj;
    double now = 0.0;
    for (double lag : lags) {
      state.advance(lag - now);
      now = lag;
      traj.push_back({now, state.realize(*fft)});
    }
    trajectories[p] = std::move(traj);
  });

  Table out;
  out.name = "field_stats";
  out.columns = {"lag", "shift", "estimate", "stderr", "target"};
  for (double lag : lags) {
    const auto [est, se] = empirical_covariance(
        trajectories, lag - lags.front(), {0, 0, 0}, grid);
    const double target =
        model.covariance(lag - lags.front(), Vec::zero(cfg.dim));
    out.add_row({Table::fmt(lag - lags.front()), Table::fmt(0.0),
                 Table::fmt(est), Table::fmt(se), Table::fmt(target)});
  }
  // One spatial-shift row at zero lag (half box).
  {
    std::array<int, 3> shift{grid.n / 2, 0, 0};
    const auto [est, se] =
        empirical_covariance(trajectories, 0.0, shift, grid);
    Vec y = Vec::zero(cfg.dim);
    y[0] = grid.dx() * (grid.n / 2);
    const double target = model.covariance(0.0, y);
    out.add_row({Table::fmt(0.0), Table::fmt(y[0]), Table::fmt(est),
                 Table::fmt(se), Table::fmt(target)});
  }
  return {out};
}

}  // namespace rswave
