#include "specbound/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace specbound {

ExperimentConfig ExperimentConfig::example1() {
  ExperimentConfig c;
  c.example = Example::example1;
  c.n = 900;
  c.p = 3;
  c.tau = IndexSet::first(3);
  c.i = 3;
  return c;
}

ExperimentConfig ExperimentConfig::example2() {
  ExperimentConfig c;
  c.example = Example::example2;
  c.n = 3600;
  c.p = 9;
  c.tau = IndexSet::of({3, 4, 5, 6, 7, 8});
  c.i = 8;
  return c;
}

namespace {

std::vector<double> parse_eigenvalue_spec(const std::string& value, std::size_t n) {
  if (value.rfind("formula:", 0) == 0) {
    std::stringstream ss(value.substr(8));
    std::string kind, a_s, b_s;
    if (!std::getline(ss, kind, ',') || !std::getline(ss, a_s, ',') || !std::getline(ss, b_s))
      throw ConfigError("eigenvalue formula needs the form formula:linear,a,b");
    if (kind != "linear") throw ConfigError("unknown eigenvalue formula: " + kind);
    const double a = std::stod(a_s), b = std::stod(b_s);
    std::vector<double> ev(n);
    for (std::size_t j = 0; j < n; ++j) ev[j] = a + b * static_cast<double>(j + 1);
    return ev;
  }
  std::vector<double> ev;
  std::stringstream ss(value);
  std::string tok;
  while (std::getline(ss, tok, ','))
    if (!tok.empty()) ev.push_back(std::stod(tok));
  return ev;
}

}  // namespace

ExperimentConfig ExperimentConfig::custom_from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  ExperimentConfig c;
  c.example = Example::custom;
  std::string eig_spec;
  std::string tau_spec;
  bool have_i = false;
  std::string line;
  while (std::getline(in, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const auto eq = line.find('=');
    if (eq == std::string::npos) continue;
    auto trim = [](std::string s) {
      const char* ws = " \t\r";
      s.erase(0, s.find_first_not_of(ws));
      const auto last = s.find_last_not_of(ws);
      s.erase(last == std::string::npos ? 0 : last + 1);
      return s;
    };
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    try {
      if (key == "n")
        c.n = std::stoul(value);
      else if (key == "p")
        c.p = std::stoul(value);
      else if (key == "eigenvalues")
        eig_spec = value;
      else if (key == "tau")
        tau_spec = value;
      else if (key == "i") {
        c.i = std::stoul(value);
        have_i = true;
      } else if (key == "k_max")
        c.k_max = static_cast<unsigned>(std::stoul(value));
      else
        throw ConfigError("unknown config key: " + key);
    } catch (const ConfigError&) {
      throw;
    } catch (const std::exception&) {
      throw ConfigError("bad value for key " + key + ": " + value);
    }
  }
  if (eig_spec.empty()) throw ConfigError("custom config needs eigenvalues");
  c.eigenvalues = parse_eigenvalue_spec(eig_spec, c.n);
  if (c.eigenvalues.size() != c.n)
    throw ConfigError("eigenvalue list length does not match n");
  c.tau = tau_spec.empty() ? IndexSet::first(c.p) : IndexSet::parse(tau_spec);
  if (!have_i) c.i = c.p;
  c.validate();
  return c;
}

void ExperimentConfig::validate() const {
  if (example == Example::example1 && (n != 900 || p != 3))
    throw ConfigError("example1 fixes n=900, p=3");
  if (example == Example::example2 && (n != 3600 || p != 9))
    throw ConfigError("example2 fixes n=3600, p=9");
  if (samples < 1) throw ConfigError("samples must be at least 1");
  if (k_max < 1) throw ConfigError("k_max must be at least 1");
  if (p < 1 || p >= n) throw ConfigError("need 1 <= p < n");
  if (tau.max_index() > p) throw ConfigError("tau must select indices within 1..p");
  if (i < 1 || i > p) throw ConfigError("need 1 <= i <= p");
  if (!(tol > 0.0)) throw ConfigError("tolerance must be positive");
  if (example == Example::custom) {
    if (eigenvalues.size() != n) throw ConfigError("custom run needs n eigenvalues");
    for (std::size_t j = 0; j + 1 < n; ++j)
      if (eigenvalues[j] < eigenvalues[j + 1])
        throw ConfigError("eigenvalues must be non-increasing");
    if (!(eigenvalues[p - 1] > eigenvalues[p]))
      throw ConfigError("need a gap: lambda_p > lambda_{p+1}");
  }
}

Spectrum build_example_spectrum(ExperimentConfig::Example which) {
  if (which == ExperimentConfig::Example::example1) {
    const std::size_t n = 900;
    std::vector<double> ev(n);
    ev[0] = 2.0;
    ev[1] = 1.6;
    ev[2] = 1.4;
    for (std::size_t j = 4; j <= n; ++j)
      ev[j - 1] = 1.0 - static_cast<double>(j - 3) / static_cast<double>(n);
    return Spectrum::diagonal(std::move(ev), 3);
  }
  if (which == ExperimentConfig::Example::example2) {
    const std::size_t n = 3600;
    std::vector<double> ev(n);
    const double head[9] = {2.05, 2.0, 1.95, 1.65, 1.6, 1.55, 1.45, 1.4, 1.35};
    for (std::size_t j = 0; j < 9; ++j) ev[j] = head[j];
    for (std::size_t j = 10; j <= n; ++j)
      ev[j - 1] = 1.0 - static_cast<double>(j - 9) / static_cast<double>(n);
    return Spectrum::diagonal(std::move(ev), 9);
  }
  throw ConfigError("custom spectra come from build_custom_spectrum");
}

Spectrum build_custom_spectrum(const std::vector<double>& eigenvalues, std::size_t p) {
  return Spectrum::diagonal(eigenvalues, p);
}

Subspace sample_initial_subspace(std::size_t n, std::size_t p, CounterRng& rng,
                                 std::size_t* resamples) {
  if (p >= n) throw ConfigError("need p < n for the initial subspace draw");
  for (int attempt = 0; attempt < 64; ++attempt) {
    Matrix top(p, p);
    for (std::size_t r = 0; r < p; ++r)
      for (std::size_t c = 0; c < p; ++c) top(r, c) = rng.next_normal();
    Matrix y(n, p);
    try {
      Matrix top_on = orthonormalize(top);
      for (std::size_t r = 0; r < p; ++r)
        for (std::size_t c = 0; c < p; ++c) y(r, c) = top_on(r, c);
    } catch (const RankDeficiencyError&) {
      if (resamples != nullptr) ++(*resamples);
      continue;
    }
    for (std::size_t r = p; r < n; ++r)
      for (std::size_t c = 0; c < p; ++c) y(r, c) = rng.next_normal();
    try {
      return Subspace::from_columns(std::move(y));
    } catch (const RankDeficiencyError&) {
      if (resamples != nullptr) ++(*resamples);
    }
  }
  throw ConvergenceError("initial subspace draw kept hitting rank deficiency");
}

namespace {

struct SampleOut {
  // [k-1] panels
  std::vector<double> ang_lanczos, ang_cheby, ang_new, ang_lz;
  std::vector<double> ritz_lanczos, ritz_cheby, ritz_new, ritz_lz;
  std::vector<std::size_t> ang_viol, ritz_viol;
  std::size_t resamples = 0;
};

double tuple_dot(const DescTuple& f, const DescTuple& x) {
  double s = 0.0;
  for (std::size_t j = 0; j < f.size(); ++j) s += f[j] * x[j];
  return s;
}

bool weak_ok(const DescTuple& bound, const DescTuple& measured, double tol) {
  return weakly_majorizes(bound, measured, tol).holds;
}

// sigma tuple (1-based j = 1..p) for degree k, optionally re-anchored at Ritz
// values of A in X + K.
std::vector<double> sigmas_for_k(const Spectrum& spec, unsigned k, const Matrix* krylov_prefix,
                                 bool from_ritz) {
  const std::size_t p = spec.p();
  if (!from_ritz || krylov_prefix == nullptr) return convergence_factors(spec, p, k).sigma;
  const Matrix x = spec.eigenvector_columns([&] {
    std::vector<std::size_t> r(p);
    for (std::size_t j = 0; j < p; ++j) r[j] = j;
    return r;
  }());
  std::size_t kept = 0;
  Matrix extra = orthonormalize_against(*krylov_prefix, &x, 1e-12, kept);
  if (kept == 0) return convergence_factors(spec, p, k).sigma;
  Matrix v = hstack(x, extra);
  const Matrix av = spec.apply(v);
  Matrix h = adjoint_times(v, av);
  DescTuple mu = hermitian_eigenvalues((h + h.adjoint()) * cplx(0.5, 0.0));
  const double mu_p1 = mu[p];
  const double mu_min = mu[mu.size() - 1];
  std::vector<double> s(p);
  for (std::size_t j = 0; j < p; ++j) {
    const double gamma = (spec.eigenvalue_real(j) - mu_p1) / (mu_p1 - mu_min);
    s[j] = 1.0 / chebyshev_eval(k - 1, 1.0 + 2.0 * std::max(gamma, 0.0));
  }
  return s;
}

SampleOut run_sample(const Spectrum& spec, const ExperimentConfig& cfg, std::size_t sample_index) {
  const std::size_t p = cfg.p;
  const std::size_t t = cfg.tau.t();
  const std::size_t iw = cfg.i;
  const std::vector<std::size_t> tau0 = cfg.tau.zero_based();
  std::vector<std::size_t> head_i(iw), head_p(p);
  for (std::size_t j = 0; j < iw; ++j) head_i[j] = j;
  for (std::size_t j = 0; j < p; ++j) head_p[j] = j;

  SampleOut out;
  out.ang_lanczos.resize(cfg.k_max);
  out.ang_cheby.resize(cfg.k_max);
  out.ang_new.resize(cfg.k_max);
  out.ang_lz.resize(cfg.k_max);
  out.ritz_lanczos.resize(cfg.k_max);
  out.ritz_cheby.resize(cfg.k_max);
  out.ritz_new.resize(cfg.k_max);
  out.ritz_lz.resize(cfg.k_max);
  out.ang_viol.assign(cfg.k_max, 0);
  out.ritz_viol.assign(cfg.k_max, 0);

  CounterRng rng(cfg.seed, sample_index);
  const Subspace y = sample_initial_subspace(cfg.n, p, rng, &out.resamples);
  const Matrix y_on = orthonormalize(y.basis());

  // k-independent right-hand-side material.
  const Matrix ybi = biorthogonal_from_spectrum(spec, y_on);
  const DescTuple tan_tau = tangents_via_rows(spec, tau0, ybi.columns(tau0));
  const DescTuple tan_i = tangents_via_rows(spec, head_i, ybi.columns(0, iw));
  const DescTuple tan_i_sq = tan_i.componentwise_square();
  const DescTuple tan_xy = tangents_via_rows(spec, head_p, y_on);
  const DescTuple tan_xy_t = tan_xy.leading(t);
  const DescTuple tan_xy_i_sq = tan_xy.leading(iw).componentwise_square();

  const double lam1 = spec.eigenvalue_real(0);
  const double lam_n = spec.eigenvalue_real(spec.n() - 1);
  const double lam_p1 = spec.eigenvalue_real(p);

  // Block Krylov basis up to k_max, then its Gram matrix with A.
  KrylovBasis kb = build_block_krylov(spec, y_on, cfg.k_max);
  Matrix gram = adjoint_times(kb.q, spec.apply(kb.q));
  gram = (gram + gram.adjoint()) * cplx(0.5, 0.0);

  for (unsigned k = 1; k <= cfg.k_max; ++k) {
    const std::size_t m = kb.dim_at[k - 1];
    const Matrix kq = kb.q.columns(0, m);

    // --- angle panel -----------------------------------------------------
    const DescTuple tan_k = tangents_to_orthonormal(spec, tau0, kq);
    const FilterSpec f = FilterSpec::shifted_chebyshev(lam_p1, lam_n, k);
    const Matrix yp = orthonormalize(spec.apply_function(f.values_on(spec), y_on));
    const DescTuple tan_ch = tangents_to_orthonormal(spec, tau0, yp);

    // The re-anchored factors (Ritz values of X + K) bound the Krylov curve;
    // the filtered-subspace curve is built from the original-interval filter
    // and keeps its original-parameter factors for the validity checks.
    const std::vector<double> sig = sigmas_for_k(spec, k, &kq, cfg.cheby_params_from_ritz);
    const std::vector<double> sig_orig =
        cfg.cheby_params_from_ritz ? convergence_factors(spec, p, k).sigma : sig;
    std::vector<double> fac_tau(t), fac_tau_orig(t), fac_i(iw), fac_i_orig(iw);
    for (std::size_t j = 0; j < t; ++j) {
      fac_tau[j] = sig[tau0[t - 1 - j]];
      fac_tau_orig[j] = sig_orig[tau0[t - 1 - j]];
    }
    for (std::size_t j = 0; j < iw; ++j) {
      fac_i[j] = sig[iw - 1 - j] * sig[iw - 1 - j];
      fac_i_orig[j] = sig_orig[iw - 1 - j] * sig_orig[iw - 1 - j];
    }
    const DescTuple factor_tau = DescTuple::from_sorted(fac_tau);
    const DescTuple factor_tau_orig = DescTuple::from_sorted(fac_tau_orig);
    const DescTuple factor_i = DescTuple::from_sorted(fac_i);
    const DescTuple factor_i_orig = DescTuple::from_sorted(fac_i_orig);

    const DescTuple bound_new_tuple = factor_tau.componentwise_times(tan_tau);
    const DescTuple bound_lz_tuple = tan_tau.scaled(sig[tau0[t - 1]]);

    out.ang_lanczos[k - 1] = tan_k.sum();
    out.ang_cheby[k - 1] = tan_ch.sum();
    out.ang_new[k - 1] = bound_new_tuple.sum();
    out.ang_lz[k - 1] = bound_lz_tuple.sum();

    if (!weak_ok(bound_new_tuple, tan_k, cfg.tol)) ++out.ang_viol[k - 1];
    if (!weak_ok(factor_tau_orig.componentwise_times(tan_tau), tan_ch, cfg.tol))
      ++out.ang_viol[k - 1];
    if (!weak_ok(bound_lz_tuple, tan_k, cfg.tol)) ++out.ang_viol[k - 1];
    if (!weak_ok(factor_tau.componentwise_times(tan_xy_t), tan_k, cfg.tol)) ++out.ang_viol[k - 1];

    // --- Ritz panel --------------------------------------------------------
    std::vector<std::size_t> lead(m);
    for (std::size_t j = 0; j < m; ++j) lead[j] = j;
    const Matrix hk = gram.rows_subset(lead).columns(0, m);
    DescTuple psi = hermitian_eigenvalues(hk);

    Matrix hp = adjoint_times(yp, spec.apply(yp));
    DescTuple eta = hermitian_eigenvalues((hp + hp.adjoint()) * cplx(0.5, 0.0));

    // Entries whose denominator falls under the guard count as +infinity:
    // they are clamped for the displayed sums and drop the theorem checks for
    // this (sample, k), mirroring the evaluators' exclusion flags.
    bool guarded = false;
    auto ritz_measures = [&](const DescTuple& vals, std::size_t count) {
      double simplified = 0.0;
      std::vector<double> exact(count);
      for (std::size_t j = 0; j < count; ++j) {
        const double num = std::max(spec.eigenvalue_real(j) - vals[j], 0.0);
        simplified += num / (lam1 - lam_n);
        const double den = vals[j] - lam_n;
        if (den < 1e-14 * (lam1 - lam_n)) guarded = true;
        exact[j] = num / std::max(den, 1e-14 * (lam1 - lam_n));
      }
      return std::make_pair(simplified, exact);
    };
    auto [psi_simplified, psi_exact] = ritz_measures(psi, iw);
    auto [eta_simplified, eta_exact] = ritz_measures(eta, std::min<std::size_t>(iw, p));

    out.ritz_lanczos[k - 1] = cfg.ritz_denominator_lam1
                                  ? psi_simplified
                                  : DescTuple::arranged(psi_exact).sum();
    out.ritz_cheby[k - 1] = cfg.ritz_denominator_lam1
                                ? eta_simplified
                                : DescTuple::arranged(eta_exact).sum();
    out.ritz_new[k - 1] = tuple_dot(factor_i, tan_i_sq);
    out.ritz_lz[k - 1] = fac_i[0] * tan_i_sq.sum();

    if (!guarded) {
      const DescTuple psi_tuple = DescTuple::arranged(psi_exact);
      const DescTuple eta_tuple = DescTuple::arranged(eta_exact);
      const DescTuple bound_ritz_new = factor_i.componentwise_times(tan_i_sq);
      if (!weak_ok(bound_ritz_new, psi_tuple, cfg.tol)) ++out.ritz_viol[k - 1];
      if (!weak_ok(factor_i_orig.componentwise_times(tan_i_sq), eta_tuple, cfg.tol))
        ++out.ritz_viol[k - 1];
      if (!weak_ok(tan_i_sq.scaled(fac_i[0]), psi_tuple, cfg.tol)) ++out.ritz_viol[k - 1];
      if (!weak_ok(factor_i.componentwise_times(tan_xy_i_sq), psi_tuple, cfg.tol))
        ++out.ritz_viol[k - 1];
    }
  }
  return out;
}

}  // namespace

ExperimentResult run_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  const Spectrum spec = (cfg.example == ExperimentConfig::Example::custom)
                            ? build_custom_spectrum(cfg.eigenvalues, cfg.p)
                            : build_example_spectrum(cfg.example);

  ExperimentResult result;
  result.cfg = cfg;
  auto init_panel = [&](PanelData& pd) {
    pd.lanczos.assign(cfg.k_max, std::vector<double>(cfg.samples, 0.0));
    pd.chebyshev.assign(cfg.k_max, std::vector<double>(cfg.samples, 0.0));
    pd.bound_new.assign(cfg.k_max, std::vector<double>(cfg.samples, 0.0));
    pd.bound_lz.assign(cfg.k_max, std::vector<double>(cfg.samples, 0.0));
    pd.violations.assign(cfg.k_max, std::vector<std::size_t>(cfg.samples, 0));
  };
  init_panel(result.angles);
  init_panel(result.ritz);
  std::vector<std::size_t> resamples(cfg.samples, 0);
  std::vector<char> failed(cfg.samples, 0);
  std::vector<std::string> diagnostics(cfg.samples);

  // Samples are independent; each writes only its own slots, and per-sample
  // random streams depend on the index alone, so any schedule gives the same
  // numbers. A numeric failure aborts that sample only.
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic)
#endif
  for (std::ptrdiff_t s = 0; s < static_cast<std::ptrdiff_t>(cfg.samples); ++s) {
    try {
      SampleOut so = run_sample(spec, cfg, static_cast<std::size_t>(s));
      for (unsigned k = 0; k < cfg.k_max; ++k) {
        result.angles.lanczos[k][s] = so.ang_lanczos[k];
        result.angles.chebyshev[k][s] = so.ang_cheby[k];
        result.angles.bound_new[k][s] = so.ang_new[k];
        result.angles.bound_lz[k][s] = so.ang_lz[k];
        result.angles.violations[k][s] = so.ang_viol[k];
        result.ritz.lanczos[k][s] = so.ritz_lanczos[k];
        result.ritz.chebyshev[k][s] = so.ritz_cheby[k];
        result.ritz.bound_new[k][s] = so.ritz_new[k];
        result.ritz.bound_lz[k][s] = so.ritz_lz[k];
        result.ritz.violations[k][s] = so.ritz_viol[k];
      }
      resamples[s] = so.resamples;
    } catch (const std::exception& e) {
      failed[s] = 1;
      diagnostics[s] = e.what();
    }
  }
  for (std::size_t s = 0; s < cfg.samples; ++s) {
    result.resample_events += resamples[s];
    if (failed[s]) {
      result.aborted_samples.push_back(s);
      std::fprintf(stderr, "sample %zu aborted: %s\n", s, diagnostics[s].c_str());
    }
  }
  if (result.aborted_samples.size() == cfg.samples)
    throw NumericDomainError("every sample aborted: " + diagnostics[0]);
  return result;
}

namespace {

double aggregate(const std::vector<double>& v, const std::vector<char>& skip,
                 ExperimentConfig::Aggregation agg, double cap, bool use_cap) {
  double acc = (agg == ExperimentConfig::Aggregation::mean) ? 0.0 : -1e308;
  std::size_t used = 0;
  for (std::size_t s = 0; s < v.size(); ++s) {
    if (skip[s]) continue;
    ++used;
    const double val = use_cap ? std::min(v[s], cap) : v[s];
    if (agg == ExperimentConfig::Aggregation::mean)
      acc += val;
    else
      acc = std::max(acc, val);
  }
  if (agg == ExperimentConfig::Aggregation::mean) acc /= static_cast<double>(used);
  return acc;
}

std::vector<ExperimentRow> build_rows(const PanelData& pd, const ExperimentConfig& cfg,
                                      const std::vector<std::size_t>& aborted, bool cap_bounds,
                                      double cap) {
  std::vector<char> skip(cfg.samples, 0);
  for (std::size_t s : aborted) skip[s] = 1;
  std::vector<ExperimentRow> rows(pd.lanczos.size());
  for (std::size_t k = 0; k < rows.size(); ++k) {
    rows[k].k = static_cast<unsigned>(k + 1);
    rows[k].measure_mean = aggregate(pd.lanczos[k], skip, cfg.agg, cap, false);
    rows[k].chebyshev_mean = aggregate(pd.chebyshev[k], skip, cfg.agg, cap, false);
    rows[k].bound_new_mean = aggregate(pd.bound_new[k], skip, cfg.agg, cap, cap_bounds);
    rows[k].bound_lz_mean = aggregate(pd.bound_lz[k], skip, cfg.agg, cap, cap_bounds);
    for (std::size_t s = 0; s < pd.violations[k].size(); ++s)
      if (!skip[s]) rows[k].violations += pd.violations[k][s];
  }
  return rows;
}

}  // namespace

std::vector<ExperimentRow> ExperimentResult::angle_rows() const {
  return build_rows(angles, cfg, aborted_samples, false, 0.0);
}

std::vector<ExperimentRow> ExperimentResult::ritz_rows(bool apply_cap) const {
  return build_rows(ritz, cfg, aborted_samples, apply_cap, static_cast<double>(cfg.i));
}

namespace {

std::string fmt17(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

}  // namespace

void emit(const std::vector<ExperimentRow>& rows, bool ritz_panel, EmitFormat format,
          std::ostream& out) {
  const char* prefix = ritz_panel ? "ritz_" : "";
  if (format == EmitFormat::csv) {
    out << "k," << prefix << "lanczos_mean," << prefix << "chebyshev_mean," << prefix
        << "bound_new_mean," << prefix << "bound_lz_mean,violations\n";
    for (const ExperimentRow& r : rows)
      out << r.k << ',' << fmt17(r.measure_mean) << ',' << fmt17(r.chebyshev_mean) << ','
          << fmt17(r.bound_new_mean) << ',' << fmt17(r.bound_lz_mean) << ',' << r.violations
          << '\n';
    return;
  }
  out << "[";
  for (std::size_t idx = 0; idx < rows.size(); ++idx) {
    const ExperimentRow& r = rows[idx];
    out << (idx == 0 ? "" : ",") << "\n  {\"k\": " << r.k << ", \"" << prefix
        << "lanczos_mean\": " << fmt17(r.measure_mean) << ", \"" << prefix
        << "chebyshev_mean\": " << fmt17(r.chebyshev_mean) << ", \"" << prefix
        << "bound_new_mean\": " << fmt17(r.bound_new_mean) << ", \"" << prefix
        << "bound_lz_mean\": " << fmt17(r.bound_lz_mean) << ", \"violations\": " << r.violations
        << "}";
  }
  out << "\n]\n";
}

void emit_file(const std::vector<ExperimentRow>& rows, bool ritz_panel, EmitFormat format,
               const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open output file: " + path);
  emit(rows, ritz_panel, format, out);
  if (!out) throw IoError("write failed: " + path);
}

}  // namespace specbound
