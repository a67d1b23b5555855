#include "sphlrd/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "sphlrd/observe.hpp"
#include "sphlrd/reconstruct.hpp"
#include "sphlrd/rng.hpp"

namespace sphlrd {

namespace {

// Replicate r draws its sub-streams from split_seed(master, r + 1); the
// projection directions use stream 0 so they are shared by all replicates.
enum StreamId : std::uint64_t {
  kSeriesStream = 1,
  kLocationStream = 2,
  kNoiseStream = 3
};

SpectralModel build_model(const ExperimentConfig& cfg,
                          const SieveBasis& sieve) {
  SpectralModel model = cfg.example == 0
                            ? null_spharma11_model(sieve)
                            : alternative_model(cfg.example, sieve);
  if (cfg.innovation == "sobolev")
    model.innovation = sobolev_innovation(sieve);
  else if (cfg.innovation != "flat")
    throw std::invalid_argument("innovation must be 'flat' or 'sobolev'");
  return model;
}

void warn_design(const ExperimentConfig& cfg, int M, int k) {
  if (cfg.quiet) return;
  if (M < k) {
    std::cerr << "warning: M = " << M << " < k = " << k
              << "; the design is rank deficient and the minimum-norm "
                 "solution is used\n";
  } else if (static_cast<double>(k) * k > M) {
    std::cerr << "warning: k^2/M = " << static_cast<double>(k) * k / M
              << " > 1; outside the regime k(T)^2/M(T) -> 0\n";
  }
}

CoefficientSeries reconstruct_replicate(const ExperimentConfig& cfg,
                                        const CoefficientSeries& series,
                                        std::uint64_t loc_seed,
                                        std::uint64_t noise_seed,
                                        const SieveBasis& sieve) {
  const int M = spatial_budget(cfg.T, cfg.gamma);

  if (!cfg.redraw_locations) {
    const auto locations = sample_uniform_sphere(M, loc_seed);
    const ObservationSet obs =
        observe(series, locations, cfg.sigma2, noise_seed);
    return reconstruct_series(obs, sieve);
  }

  // Robustness mode: a fresh spatial design at every time step.
  CoefficientSeries recon;
  recon.sieve = sieve;
  recon.values.resize(series.length(), sieve.size);
  CoefficientSeries snapshot;
  snapshot.sieve = series.sieve;
  snapshot.values.resize(1, series.sieve.size);
  for (int t = 0; t < series.length(); ++t) {
    const auto locations =
        sample_uniform_sphere(M, split_seed(loc_seed, static_cast<std::uint64_t>(t)));
    snapshot.values.row(0) = series.values.row(t);
    const ObservationSet obs =
        observe(snapshot, locations, cfg.sigma2,
                split_seed(noise_seed, static_cast<std::uint64_t>(t)));
    recon.values.row(t) =
        reconstruct_series(obs, sieve).values.row(0);
  }
  return recon;
}

void run_parallel(int replicates, int threads,
                  const std::function<void(int)>& work) {
  const int workers = std::max(1, std::min(threads, replicates));
  if (workers == 1) {
    for (int r = 0; r < replicates; ++r) work(r);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(workers));
  for (int wkr = 0; wkr < workers; ++wkr) {
    pool.emplace_back([&, wkr] {
      try {
        for (int r = next.fetch_add(1); r < replicates;
             r = next.fetch_add(1))
          work(r);
      } catch (...) {
        errors[static_cast<std::size_t>(wkr)] = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  for (const auto& err : errors)
    if (err) std::rethrow_exception(err);
}

ResultTable run_rate_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  const SieveBasis sieve = cfg.sieve();
  const auto dirs = default_projections(sieve, split_seed(cfg.seed, 0));
  warn_design(cfg, spatial_budget(cfg.T, cfg.gamma), sieve.size);
  // Model construction validates the configuration before any worker starts.
  (void)build_model(cfg, sieve);

  ResultTable table;
  table.kind = ResultTable::Kind::Rates;
  table.records.resize(static_cast<std::size_t>(cfg.replicates));

  run_parallel(cfg.replicates, cfg.threads, [&](int r) {
    const TestOutcome outcome = run_test_replicate(cfg, r);
    ReplicateRecord rec;
    rec.replicate = r;
    rec.hs_norm = outcome.hs_norm;
    rec.block_norms = outcome.block_norms;
    for (const ProjectionResult& p : outcome.projections) {
      rec.z.push_back(p.z);
      rec.reject.push_back(p.reject);
    }
    table.records[static_cast<std::size_t>(r)] = std::move(rec);
  });

  ResultRow row;
  row.T = cfg.T;
  row.gamma = cfg.gamma;
  row.replicates = cfg.replicates;
  row.seed = cfg.seed;
  row.values.assign(dirs.size(), 0.0);
  for (const ReplicateRecord& rec : table.records)
    for (std::size_t m = 0; m < rec.reject.size(); ++m)
      row.values[m] += rec.reject[m] ? 1.0 : 0.0;
  for (double& v : row.values) v /= static_cast<double>(cfg.replicates);
  table.rows.push_back(std::move(row));
  return table;
}

}  // namespace

void ExperimentConfig::validate() const {
  if (T < 50) throw std::invalid_argument("config: T must be >= 50");
  if (replicates < 1) throw std::invalid_argument("config: R must be >= 1");
  if (beta <= 0.0 || beta >= 1.0)
    throw std::invalid_argument("config: beta outside (0,1)");
  if (gamma <= 0.0 || gamma >= 1.0)
    throw std::invalid_argument("config: gamma outside (0,1)");
  if (sigma2 < 0.0) throw std::invalid_argument("config: sigma2 < 0");
  if (example < 0 || example > 3)
    throw std::invalid_argument("config: example must be 0..3");
  if (alpha <= 0.0 || alpha >= 1.0)
    throw std::invalid_argument("config: alpha outside (0,1)");
  if (burn_in < 0) throw std::invalid_argument("config: burn_in < 0");
  if (threads < 1) throw std::invalid_argument("config: threads < 1");
  if (innovation != "flat" && innovation != "sobolev")
    throw std::invalid_argument("config: innovation must be flat or sobolev");
}

SieveBasis ExperimentConfig::sieve() const {
  if (k_budget > 0) return sieve_from_budget(k_budget);
  const int budget =
      std::max(16, static_cast<int>(std::floor(std::log(static_cast<double>(T)))) + 6);
  return sieve_from_budget(budget);
}

ExperimentConfig parse_config_text(const std::string& text) {
  ExperimentConfig cfg;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const auto strip = [](std::string s) {
      const auto b = s.find_first_not_of(" \t\r");
      if (b == std::string::npos) return std::string();
      const auto e = s.find_last_not_of(" \t\r");
      return s.substr(b, e - b + 1);
    };
    line = strip(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("config line " + std::to_string(line_no) +
                                  ": expected key=value");
    const std::string key = strip(line.substr(0, eq));
    const std::string value = strip(line.substr(eq + 1));
    const auto bad_value = [&]() {
      return std::invalid_argument("config line " + std::to_string(line_no) +
                                   ": bad value for '" + key + "'");
    };
    const auto as_int = [&](const std::string& s) {
      try {
        std::size_t used = 0;
        const int v = std::stoi(s, &used);
        if (used != s.size()) throw bad_value();
        return v;
      } catch (const std::invalid_argument&) {
        throw bad_value();
      } catch (const std::out_of_range&) {
        throw bad_value();
      }
    };
    const auto as_double = [&](const std::string& s) {
      try {
        std::size_t used = 0;
        const double v = std::stod(s, &used);
        if (used != s.size()) throw bad_value();
        return v;
      } catch (const std::invalid_argument&) {
        throw bad_value();
      } catch (const std::out_of_range&) {
        throw bad_value();
      }
    };

    if (key == "T") cfg.T = as_int(value);
    else if (key == "gamma") cfg.gamma = as_double(value);
    else if (key == "beta") cfg.beta = as_double(value);
    else if (key == "sigma2") cfg.sigma2 = as_double(value);
    else if (key == "example") cfg.example = as_int(value);
    else if (key == "R") cfg.replicates = as_int(value);
    else if (key == "seed") {
      try {
        cfg.seed = std::stoull(value);
      } catch (const std::exception&) {
        throw bad_value();
      }
    } else if (key == "alpha") cfg.alpha = as_double(value);
    else if (key == "k_budget") cfg.k_budget = as_int(value);
    else if (key == "burn_in") cfg.burn_in = as_int(value);
    else if (key == "threads") cfg.threads = as_int(value);
    else if (key == "redraw_locations")
      cfg.redraw_locations = value == "1" || value == "true";
    else if (key == "innovation") cfg.innovation = value;
    else if (key == "T_grid") {
      cfg.T_grid.clear();
      std::istringstream items(value);
      std::string item;
      while (std::getline(items, item, ','))
        cfg.T_grid.push_back(as_int(strip(item)));
    } else {
      throw std::invalid_argument("config: unknown key '" + key + "'");
    }
  }
  return cfg;
}

ExperimentConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config: " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_config_text(buffer.str());
}

TestOutcome run_test_replicate(const ExperimentConfig& cfg, int replicate) {
  const SieveBasis sieve = cfg.sieve();
  const SpectralModel model = build_model(cfg, sieve);
  const auto dirs = default_projections(sieve, split_seed(cfg.seed, 0));
  const WeightKernel weights =
      WeightKernel::epanechnikov(bandwidth_from_exponent(cfg.T, cfg.beta));

  const std::uint64_t rep_seed =
      split_seed(cfg.seed, static_cast<std::uint64_t>(replicate) + 1);
  const CoefficientSeries series =
      simulate_series(model, cfg.T, cfg.burn_in, split_seed(rep_seed, kSeriesStream));
  const CoefficientSeries recon = reconstruct_replicate(
      cfg, series, split_seed(rep_seed, kLocationStream),
      split_seed(rep_seed, kNoiseStream), sieve);
  return null_calibration(recon, weights, dirs, cfg.alpha);
}

ResultTable run_size_experiment(const ExperimentConfig& cfg) {
  if (cfg.example != 0)
    throw std::invalid_argument("size experiment requires example=0 (H0)");
  return run_rate_experiment(cfg);
}

ResultTable run_power_experiment(const ExperimentConfig& cfg) {
  if (cfg.example < 1 || cfg.example > 3)
    throw std::invalid_argument("power experiment requires example in 1..3");
  return run_rate_experiment(cfg);
}

ResultTable run_consistency_experiment(
    const ExperimentConfig& cfg, const std::vector<int>& T_grid,
    const std::function<void(CoefficientSeries&)>& mutate_series) {
  if (T_grid.empty())
    throw std::invalid_argument("consistency experiment: empty T grid");
  for (std::size_t i = 1; i < T_grid.size(); ++i)
    if (T_grid[i] <= T_grid[i - 1])
      throw std::invalid_argument("consistency experiment: T grid not increasing");
  if (cfg.example < 1 || cfg.example > 3)
    throw std::invalid_argument("consistency experiment requires example in 1..3");

  ResultTable table;
  table.kind = ResultTable::Kind::Norms;

  for (int T : T_grid) {
    ExperimentConfig point = cfg;
    point.T = T;
    point.validate();
    const SieveBasis sieve = point.sieve();
    const SpectralModel model = build_model(point, sieve);
    const WeightKernel weights =
        WeightKernel::epanechnikov(bandwidth_from_exponent(T, point.beta));

    std::vector<double> norms(static_cast<std::size_t>(point.replicates));
    run_parallel(point.replicates, point.threads, [&](int r) {
      const std::uint64_t rep_seed =
          split_seed(point.seed, static_cast<std::uint64_t>(r) + 1);
      CoefficientSeries series = simulate_series(
          model, T, point.burn_in, split_seed(rep_seed, kSeriesStream));
      if (mutate_series) mutate_series(series);
      const CoefficientSeries recon = reconstruct_replicate(
          point, series, split_seed(rep_seed, kLocationStream),
          split_seed(rep_seed, kNoiseStream), sieve);
      norms[static_cast<std::size_t>(r)] =
          hs_norm(test_statistic(recon, weights));
    });

    std::sort(norms.begin(), norms.end());
    const std::size_t n = norms.size();
    const double median = n % 2 == 1
                              ? norms[n / 2]
                              : 0.5 * (norms[n / 2 - 1] + norms[n / 2]);
    ResultRow row;
    row.T = T;
    row.gamma = point.gamma;
    row.values = {median};
    row.replicates = point.replicates;
    row.seed = point.seed;
    table.rows.push_back(std::move(row));
  }
  return table;
}

void emit_table(const ResultTable& table, std::ostream& out) {
  char buf[64];
  if (table.kind == ResultTable::Kind::Rates) {
    out << "T,gamma,proj1,proj2,proj3,proj4,proj5,proj6,R,seed\n";
    for (const ResultRow& row : table.rows) {
      std::snprintf(buf, sizeof(buf), "%d,%.4f", row.T, row.gamma);
      out << buf;
      for (double v : row.values) {
        std::snprintf(buf, sizeof(buf), ",%.4f", v);
        out << buf;
      }
      out << "," << row.replicates << "," << row.seed << "\n";
    }
  } else {
    out << "T,gamma,norm,R,seed\n";
    for (const ResultRow& row : table.rows) {
      std::snprintf(buf, sizeof(buf), "%d,%.4f,%.4e", row.T, row.gamma,
                    row.values.at(0));
      out << buf << "," << row.replicates << "," << row.seed << "\n";
    }
  }
}

void emit_table(const ResultTable& table, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  emit_table(table, out);
  out.flush();
  if (!out) throw std::runtime_error("write failed: " + path);
}

nlohmann::json records_json(const ResultTable& table) {
  nlohmann::json all = nlohmann::json::array();
  for (const ReplicateRecord& rec : table.records) {
    nlohmann::json j;
    j["replicate"] = rec.replicate;
    j["z"] = rec.z;
    j["reject"] = rec.reject;
    j["hs_norm"] = rec.hs_norm;
    j["block_norms"] = rec.block_norms;
    all.push_back(std::move(j));
  }
  return all;
}

}  // namespace sphlrd
