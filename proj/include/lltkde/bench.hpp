#pragma once

#include <atomic>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <iostream>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "lltkde/competitors.hpp"
#include "lltkde/genf.hpp"
#include "lltkde/lscv.hpp"
#include "lltkde/tkde.hpp"

namespace lltkde {

inline std::uint64_t splitmix64(std::uint64_t z)
{
  z += 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

//! Splittable seed combination: deriving per-replication seeds from the
//! master seed and (density, n, replication) indices keeps the samples drawn
//! independent of which estimators are configured.
inline std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b)
{
  return splitmix64(a ^ splitmix64(b + 0x9E3779B97F4A7C15ULL));
}

struct BenchConfig
{
  std::vector<GenFParams> densities;
  std::vector<std::string> estimators; // gamma, mod-gamma, reflect, can, bound,
                                       // naive-lt, ll-lt, ll-pt
  std::vector<int> sample_sizes;
  int replications{ 100 };
  int grid_size{ 1000 };
  double grid_start{ 0.001 };
  double tail_quantile{ 0.80 };
  std::uint64_t master_seed{ 20170601 };
  int threads{ 0 }; // 0 = hardware concurrency

  void validate() const
  {
    if (densities.empty() || estimators.empty() || sample_sizes.empty())
      throw std::invalid_argument("BenchConfig: densities, estimators, sample sizes required");
    if (replications < 1) throw std::invalid_argument("BenchConfig: replications must be >= 1");
    if (grid_size < 2) throw std::invalid_argument("BenchConfig: grid size must be >= 2");
    if (!(tail_quantile > 0.0 && tail_quantile < 1.0))
      throw std::invalid_argument("BenchConfig: tail quantile must be in (0,1)");
  }
};

//! Absolute relative error summed over grid points in a region.
struct MiareValue
{
  double sum{ 0.0 };  // raw grid sum, as in the displayed approximation
  double mean{ 0.0 }; // per-point mean over the region
  int points{ 0 };
};

//! MIARE of an estimate against a generalized-F truth over the grid points
//! with x > tail_above (pass -inf for the full grid).
inline MiareValue miare_breakdown(const DensityEstimate& est, const GenFParams& truth,
                                  double tail_above = -std::numeric_limits<double>::infinity())
{
  MiareValue out;
  for (std::size_t i = 0; i < est.grid.size(); ++i) {
    if (!(est.grid[i] > tail_above)) continue;
    double f = genf_pdf(est.grid[i], truth);
    if (!(f > 0.0)) throw std::runtime_error("miare: truth density vanishes on the grid");
    out.sum += std::abs(est.values[i] - f) / f;
    ++out.points;
  }
  out.mean = (out.points > 0) ? out.sum / out.points : 0.0;
  return out;
}

inline double miare(const DensityEstimate& est, const GenFParams& truth,
                    double tail_above = -std::numeric_limits<double>::infinity())
{
  return miare_breakdown(est, truth, tail_above).sum;
}

//! Simulation grid: the points i q_{0.999}/size, i = 1..size, unless the
//! configured start exceeds the first of them (then equally spaced from start).
inline std::vector<double> protocol_grid(double q999, int size, double start = 0.001)
{
  std::vector<double> grid(size);
  if (start <= q999 / size) {
    for (int i = 1; i <= size; ++i) grid[i - 1] = i * q999 / size;
  } else {
    for (int i = 0; i < size; ++i) grid[i] = start + (q999 - start) * i / (size - 1.0);
  }
  return grid;
}

//! Run one estimator on one sample with its prescribed smoothing rule:
//! Gamma reference rule for the Gamma kernels, direct plug-in for the
//! symmetric-kernel competitors, plug-in on the log scale for the naive
//! log-transform estimator, and LSCV-selected NN fraction for the LLTKDE.
inline DensityEstimate bench_estimate(const std::string& id, std::span<const double> grid,
                                      std::span<const double> sample)
{
  if (id == "gamma" || id == "mod-gamma") {
    CompetitorConfig cc;
    cc.id = CompetitorConfig::id_from_name(id);
    cc.bandwidth = gamma_reference_bandwidth(sample);
    return competitor_grid(grid, sample, cc, false);
  }
  if (id == "reflect" || id == "can" || id == "bound") {
    CompetitorConfig cc;
    cc.id = CompetitorConfig::id_from_name(id);
    cc.bandwidth = plugin_bandwidth(sample);
    bool renorm = (id != "reflect"); // reflection already integrates to one
    return competitor_grid(grid, sample, cc, renorm);
  }
  if (id == "naive-lt") {
    std::vector<double> logs(sample.size());
    for (std::size_t i = 0; i < sample.size(); ++i) logs[i] = std::log(sample[i]);
    TkdeConfig tc;
    tc.transform = Transformation::log();
    tc.smoothing = SmoothingSpec::fixed(plugin_bandwidth(logs));
    tc.renormalize = false; // exact log-normal mixture
    auto est = naive_tkde_grid(grid, sample, tc);
    est.estimator = id;
    return est;
  }
  if (id == "ll-lt" || id == "ll-pt" || id == "ll1-lt" || id == "ll1-pt") {
    TkdeConfig tc;
    tc.transform = id.ends_with("-lt") ? Transformation::log() : Transformation::probex();
    tc.degree = id.starts_with("ll1") ? 1 : 2;
    std::vector<double> ty(sample.size());
    for (std::size_t i = 0; i < sample.size(); ++i) ty[i] = tc.transform.forward(sample[i]);
    auto cands = alpha_candidates();
    tc.smoothing = select_smoothing(ty, cands, tc.degree, tc.kernel);
    tc.renormalize = true;
    auto est = lltkde_grid(grid, sample, tc);
    est.estimator = id;
    return est;
  }
  throw std::invalid_argument("bench_estimate: unknown estimator '" + id + "'");
}

struct BenchCell
{
  std::string density;
  std::string estimator;
  int n{ 0 };
  double miare_mean{ 0.0 };
  double miare_se{ 0.0 };
  double tail_mean{ 0.0 };
  double tail_se{ 0.0 };
  double miare_raw_mean{ 0.0 };
  double miare_raw_se{ 0.0 };
  double tail_raw_mean{ 0.0 };
  double tail_raw_se{ 0.0 };
  int replications{ 0 };
  int failures{ 0 };
};

struct BenchResult
{
  std::vector<BenchCell> cells;
  std::string variant{ "mean-per-point" }; // headline MIARE columns
  std::uint64_t master_seed{ 0 };
};

namespace detail {

struct RepOutcome
{
  bool ok{ false };
  MiareValue full;
  MiareValue tail;
};

inline void mean_se(const std::vector<double>& xs, double& mean, double& se)
{
  mean = 0.0;
  se = 0.0;
  if (xs.empty()) return;
  for (double v : xs) mean += v;
  mean /= xs.size();
  if (xs.size() < 2) return;
  double s2 = 0.0;
  for (double v : xs) s2 += (v - mean) * (v - mean);
  se = std::sqrt(s2 / (xs.size() - 1) / xs.size());
}

} // namespace detail

//! Monte Carlo benchmark: for every (density, n, replication) a fresh sample
//! is drawn from a replication-specific seed; every configured estimator runs
//! on the same sample; MIARE statistics aggregate over replications.
//! Results are a pure function of the configuration, whatever the worker count.
inline BenchResult run_benchmark(const BenchConfig& config)
{
  config.validate();
  BenchResult result;
  result.master_seed = config.master_seed;

  int workers = config.threads > 0 ? config.threads
                                   : static_cast<int>(std::thread::hardware_concurrency());
  if (workers < 1) workers = 1;

  for (std::size_t d = 0; d < config.densities.size(); ++d) {
    const GenFParams& density = config.densities[d];
    double q999 = genf_quantile(0.999, density);
    double qtail = genf_quantile(config.tail_quantile, density);
    auto grid = protocol_grid(q999, config.grid_size, config.grid_start);

    for (std::size_t ni = 0; ni < config.sample_sizes.size(); ++ni) {
      int n = config.sample_sizes[ni];
      const int M = config.replications;
      const std::size_t ne = config.estimators.size();
      std::vector<std::vector<detail::RepOutcome>> outcomes(
          M, std::vector<detail::RepOutcome>(ne));

      std::atomic<int> next{ 0 };
      auto worker = [&]() {
        for (;;) {
          int rep = next.fetch_add(1);
          if (rep >= M) return;
          std::uint64_t seed =
              mix_seed(mix_seed(mix_seed(config.master_seed, d), ni), static_cast<std::uint64_t>(rep));
          std::vector<double> sample;
          try {
            sample = genf_sample(static_cast<std::size_t>(n), density, seed);
          } catch (const std::exception& e) {
            std::cerr << "bench: sampling failed (" << density.name() << ", n=" << n
                      << ", rep=" << rep << "): " << e.what() << "\n";
            continue; // all estimators fail for this replication
          }
          for (std::size_t e = 0; e < ne; ++e) {
            try {
              auto est = bench_estimate(config.estimators[e], grid, sample);
              outcomes[rep][e].full = miare_breakdown(est, density);
              outcomes[rep][e].tail = miare_breakdown(est, density, qtail);
              outcomes[rep][e].ok = true;
            } catch (const std::exception& ex) {
              std::cerr << "bench: " << config.estimators[e] << " failed (" << density.name()
                        << ", n=" << n << ", rep=" << rep << "): " << ex.what() << "\n";
            }
          }
        }
      };
      std::vector<std::thread> pool;
      for (int w = 1; w < workers; ++w) pool.emplace_back(worker);
      worker();
      for (auto& th : pool) th.join();

      for (std::size_t e = 0; e < ne; ++e) {
        BenchCell cell;
        cell.density = density.name();
        cell.estimator = config.estimators[e];
        cell.n = n;
        std::vector<double> fm, fs, tm, ts;
        for (int rep = 0; rep < M; ++rep) {
          const auto& oc = outcomes[rep][e];
          if (!oc.ok) {
            ++cell.failures;
            continue;
          }
          fm.push_back(oc.full.mean);
          fs.push_back(oc.full.sum);
          tm.push_back(oc.tail.mean);
          ts.push_back(oc.tail.sum);
        }
        cell.replications = static_cast<int>(fm.size());
        detail::mean_se(fm, cell.miare_mean, cell.miare_se);
        detail::mean_se(fs, cell.miare_raw_mean, cell.miare_raw_se);
        detail::mean_se(tm, cell.tail_mean, cell.tail_se);
        detail::mean_se(ts, cell.tail_raw_mean, cell.tail_raw_se);
        result.cells.push_back(cell);
      }
    }
  }
  return result;
}

namespace detail {

inline std::string fmt(double v)
{
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

} // namespace detail

//! Serialize a benchmark result.  Formats: "csv", "json", "table".  The text
//! table marks the row-minimum estimator per (density, n) and every estimator
//! within two standard errors of that minimum.
inline std::string emit_tables(const BenchResult& result, const std::string& format)
{
  if (result.cells.empty()) throw std::invalid_argument("emit_tables: empty result");
  std::ostringstream os;

  if (format == "csv") {
    os << "density,n,estimator,miare_mean,miare_se,tail_miare_mean,tail_miare_se,"
          "miare_raw_mean,miare_raw_se,tail_raw_mean,tail_raw_se,replications,failures\n";
    for (const auto& c : result.cells) {
      os << c.density << ',' << c.n << ',' << c.estimator << ',' << detail::fmt(c.miare_mean)
         << ',' << detail::fmt(c.miare_se) << ',' << detail::fmt(c.tail_mean) << ','
         << detail::fmt(c.tail_se) << ',' << detail::fmt(c.miare_raw_mean) << ','
         << detail::fmt(c.miare_raw_se) << ',' << detail::fmt(c.tail_raw_mean) << ','
         << detail::fmt(c.tail_raw_se) << ',' << c.replications << ',' << c.failures << '\n';
    }
    return os.str();
  }

  if (format == "json") {
    os << "{\n  \"variant\": \"" << result.variant << "\",\n  \"master_seed\": "
       << result.master_seed << ",\n  \"cells\": [\n";
    for (std::size_t i = 0; i < result.cells.size(); ++i) {
      const auto& c = result.cells[i];
      os << "    {\"density\": \"" << c.density << "\", \"n\": " << c.n << ", \"estimator\": \""
         << c.estimator << "\", \"miare_mean\": " << detail::fmt(c.miare_mean)
         << ", \"miare_se\": " << detail::fmt(c.miare_se)
         << ", \"tail_miare_mean\": " << detail::fmt(c.tail_mean)
         << ", \"tail_miare_se\": " << detail::fmt(c.tail_se)
         << ", \"miare_raw_mean\": " << detail::fmt(c.miare_raw_mean)
         << ", \"miare_raw_se\": " << detail::fmt(c.miare_raw_se)
         << ", \"tail_raw_mean\": " << detail::fmt(c.tail_raw_mean)
         << ", \"tail_raw_se\": " << detail::fmt(c.tail_raw_se)
         << ", \"replications\": " << c.replications << ", \"failures\": " << c.failures << "}"
         << (i + 1 < result.cells.size() ? "," : "") << "\n";
    }
    os << "  ]\n}\n";
    return os.str();
  }

  if (format == "table") {
    // group rows sharing (density, n)
    std::size_t i = 0;
    while (i < result.cells.size()) {
      std::size_t j = i;
      double best = std::numeric_limits<double>::infinity();
      while (j < result.cells.size() && result.cells[j].density == result.cells[i].density &&
             result.cells[j].n == result.cells[i].n) {
        if (result.cells[j].replications > 0) best = std::min(best, result.cells[j].miare_mean);
        ++j;
      }
      os << result.cells[i].density << "  n=" << result.cells[i].n << "\n";
      for (std::size_t k = i; k < j; ++k) {
        const auto& c = result.cells[k];
        bool marked = c.replications > 0 && c.miare_mean <= best + 2.0 * c.miare_se;
        os << "  " << (marked ? '*' : ' ') << ' ' << c.estimator << "  miare="
           << detail::fmt(c.miare_mean) << " (se " << detail::fmt(c.miare_se) << ")  tail="
           << detail::fmt(c.tail_mean) << " (se " << detail::fmt(c.tail_se) << ")  M="
           << c.replications;
        if (c.failures > 0) os << "  failures=" << c.failures;
        os << "\n";
      }
      i = j;
    }
    return os.str();
  }

  throw std::invalid_argument("emit_tables: unknown format '" + format + "'");
}

} // namespace lltkde
