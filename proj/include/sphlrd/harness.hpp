#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "sphlrd/lrdtest.hpp"

#include "json.hpp"

// Monte Carlo experiment orchestration: empirical size and power tables and
// the consistency (divergence) study, deterministically seeded and
// replicate-parallel.

namespace sphlrd {

struct ExperimentConfig {
  int T = 500;
  double gamma = 0.45;        // M(T) = floor(T^{2 gamma})
  double beta = 0.25;         // B_T = T^{-beta}
  double sigma2 = 0.5;        // observation noise variance
  int example = 0;            // 0 = H0 SPHARMA(1,1); 1..3 = LRD examples
  int replicates = 200;
  std::uint64_t seed = 42;
  double alpha = 0.05;        // test level
  int k_budget = 0;           // 0 = rule max(16, floor(log T) + 6)
  int burn_in = 500;
  int threads = 1;
  bool redraw_locations = false;  // robustness study: new design each step
  std::string innovation = "flat";  // "flat" or "sobolev"
  std::vector<int> T_grid;    // consistency experiment sample sizes
  bool quiet = false;

  void validate() const;
  SieveBasis sieve() const;
};

/// Parses flat key=value text ('#' starts a comment). Unknown keys and
/// malformed values throw std::invalid_argument.
ExperimentConfig parse_config_text(const std::string& text);
ExperimentConfig parse_config_file(const std::string& path);

struct ReplicateRecord {
  int replicate = 0;
  std::vector<double> z;
  std::vector<bool> reject;
  double hs_norm = 0.0;
  std::vector<double> block_norms;
};

struct ResultRow {
  int T = 0;
  double gamma = 0.0;
  std::vector<double> values;  // six rates, or one norm
  int replicates = 0;
  std::uint64_t seed = 0;
};

struct ResultTable {
  enum class Kind { Rates, Norms };
  Kind kind = Kind::Rates;
  std::vector<ResultRow> rows;
  std::vector<ReplicateRecord> records;  // per-replicate diagnostics
};

/// One full pipeline pass (simulate, observe, reconstruct, test) for
/// replicate `replicate` of the experiment.
TestOutcome run_test_replicate(const ExperimentConfig& cfg, int replicate);

/// Empirical size under the H0 SPHARMA(1,1) model. Requires example = 0.
ResultTable run_size_experiment(const ExperimentConfig& cfg);

/// Empirical power under a multifractionally integrated alternative.
/// Requires example in 1..3.
ResultTable run_power_experiment(const ExperimentConfig& cfg);

/// Median Hilbert-Schmidt norm of the sieve-projected statistic per T.
/// The optional hook mutates each simulated series before observation
/// (test instrumentation).
ResultTable run_consistency_experiment(
    const ExperimentConfig& cfg, const std::vector<int>& T_grid,
    const std::function<void(CoefficientSeries&)>& mutate_series = nullptr);

/// CSV with header T,gamma,proj1..proj6,R,seed (rates, 4 decimals) or
/// T,gamma,norm,R,seed (scientific, 4 significant digits).
void emit_table(const ResultTable& table, std::ostream& out);
void emit_table(const ResultTable& table, const std::string& path);

/// Per-replicate diagnostics sidecar.
nlohmann::json records_json(const ResultTable& table);

}  // namespace sphlrd
