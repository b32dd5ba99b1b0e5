#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "specbound/bounds.hpp"
#include "specbound/rng.hpp"

namespace specbound {

/// Configuration of a benchmark run. The built-in problems fix (n, p); custom
/// runs read them from a key=value file.
struct ExperimentConfig {
  enum class Example { example1, example2, custom };
  enum class Aggregation { mean, max };

  Example example = Example::example1;
  std::size_t n = 900;
  std::size_t p = 3;
  std::vector<double> eigenvalues;  // custom spectra; built-ins derive their own
  IndexSet tau = IndexSet::first(3);
  std::size_t i = 3;
  unsigned k_max = 15;
  std::size_t samples = 1000;
  std::uint64_t seed = 0;
  Aggregation agg = Aggregation::mean;
  double tol = 1e-8;
  bool ritz_denominator_lam1 = true;   // else the exact psi_j - lambda_n denominators
  bool ritz_trivial_cap = true;        // cap the Ritz bound curves at i
  bool cheby_params_from_ritz = false; // Chebyshev parameters from Ritz values of X + K

  static ExperimentConfig example1();
  static ExperimentConfig example2();
  /// Plain-text config: lines `key=value` with keys n, p, eigenvalues
  /// (comma list or "formula:linear,a,b" meaning lambda_j = a + b*j), tau, i,
  /// k_max. '#' starts a comment.
  static ExperimentConfig custom_from_file(const std::string& path);

  void validate() const;
};

/// One aggregated output row (per k, per panel).
struct ExperimentRow {
  unsigned k = 0;
  double measure_mean = 0.0;     // block Lanczos measure
  double chebyshev_mean = 0.0;   // filtered-subspace measure
  double bound_new_mean = 0.0;   // tuplewise-factor bound
  double bound_lz_mean = 0.0;    // scalar-factor comparison bound
  std::size_t violations = 0;
};

/// Raw per-sample values for one figure panel, indexed [k-1][sample].
struct PanelData {
  std::vector<std::vector<double>> lanczos;
  std::vector<std::vector<double>> chebyshev;
  std::vector<std::vector<double>> bound_new;
  std::vector<std::vector<double>> bound_lz;
  std::vector<std::vector<std::size_t>> violations;
};

struct ExperimentResult {
  ExperimentConfig cfg;
  PanelData angles;
  PanelData ritz;
  std::size_t resample_events = 0;
  /// Samples that hit a numeric error; logged and excluded from aggregation.
  std::vector<std::size_t> aborted_samples;

  std::vector<ExperimentRow> angle_rows() const;
  /// `apply_cap` overrides the config's trivial-cap switch (the cap is a
  /// per-sample min with i applied to the bound values before aggregation).
  std::vector<ExperimentRow> ritz_rows(bool apply_cap) const;
  std::vector<ExperimentRow> ritz_rows() const { return ritz_rows(cfg.ritz_trivial_cap); }
};

/// The built-in diagonal spectra.
Spectrum build_example_spectrum(ExperimentConfig::Example which);
/// Diagonal spectrum from an explicit eigenvalue list (custom runs).
Spectrum build_custom_spectrum(const std::vector<double>& eigenvalues, std::size_t p);

/// Initial subspace draw: orthonormalized p x p standard-normal block on top
/// of an (n-p) x p standard-normal block. Deterministic given the generator
/// state; the measure-zero rank-deficiency event triggers a counted resample.
Subspace sample_initial_subspace(std::size_t n, std::size_t p, CounterRng& rng,
                                 std::size_t* resamples = nullptr);

/// Runs the full sweep. Samples execute concurrently; per-sample streams and
/// ascending-order reduction make the result independent of the worker count.
ExperimentResult run_experiment(const ExperimentConfig& cfg);

enum class EmitFormat { csv, json };

/// Writes rows with the exact column schema; floats carry 17 significant
/// digits. `ritz_panel` switches the measure column names to the ritz_ set.
void emit(const std::vector<ExperimentRow>& rows, bool ritz_panel, EmitFormat format,
          std::ostream& out);
void emit_file(const std::vector<ExperimentRow>& rows, bool ritz_panel, EmitFormat format,
               const std::string& path);

}  // namespace specbound
