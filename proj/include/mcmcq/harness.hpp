#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "mcmcq/samplers.hpp"
#include "mcmcq/trace.hpp"
#include "mcmcq/trace_io.hpp"

namespace mcmcq {

inline constexpr std::string_view kVersion = "0.1.0";

enum class ExperimentKind { coverage, linchpin_bound, tour_stats, halfwidth };

std::string_view to_string(ExperimentKind kind) noexcept;
ExperimentKind parse_experiment_kind(std::string_view text);

struct SamplerSettings {
  std::string type = "rw";  // "rw" or "linchpin"
  double df = 30.0;
  double sigma = 2.5;
  LinchpinInit init = LinchpinInit::fixed;
};

struct ExperimentConfig {
  ExperimentKind kind = ExperimentKind::coverage;
  SamplerSettings sampler;
  std::vector<double> quantiles{0.5};
  std::vector<Method> methods{Method::bm, Method::sbm, Method::rs};
  double confidence = 0.95;
  std::size_t replications = 100;
  std::size_t tours = 500;                          // R per replication
  std::vector<std::size_t> lengths{500, 1000, 4700};  // linchpin run lengths
  double epsilon = 0.1;                             // linchpin |error| threshold
  double delta = 0.99999;                           // linchpin bound delta
  std::uint64_t seed = 20130101;
  std::string truth = "analytic";
  std::optional<double> bandwidth;
  std::size_t threads = 0;  // 0: hardware concurrency
  std::string output;

  /// Throws ConfigError describing the first violated invariant.
  void validate() const;
};

void to_json(nlohmann::json& j, const ExperimentConfig& config);
/// Missing fields keep their defaults. Throws ConfigError on bad values.
void from_json(const nlohmann::json& j, ExperimentConfig& config);

ExperimentConfig load_experiment_config(const std::string& path);

struct CoverageCell {
  Method method = Method::bm;
  double q = 0.5;
  double truth = 0.0;
  std::size_t replications = 0;  // successful
  std::size_t failures = 0;
  std::size_t covered = 0;
  double coverage = 0.0;
  double coverage_mcse = 0.0;  // sqrt(p (1 - p) / replications)
  double mean_half_width = 0.0;
  double sd_half_width = 0.0;
};

struct LinchpinRow {
  std::size_t length = 0;
  std::size_t replications = 0;
  std::size_t exceed_count = 0;
  double proportion = 0.0;
  double proportion_mcse = 0.0;
  std::optional<double> bound;  // empty when n is outside the bound's domain
  std::vector<std::size_t> histogram;  // bins of width 0.02 over [-0.6, 0.6]
};

struct TourStatsRow {
  double df = 0.0;
  double sigma = 0.0;
  std::size_t tours = 0;
  std::size_t steps = 0;
  double mean_length = 0.0;
  std::optional<double> sd_length;  // undefined for a single tour
  double acceptance_rate = 0.0;
};

struct ExperimentReport {
  ExperimentConfig config;
  std::vector<CoverageCell> coverage;
  std::vector<LinchpinRow> linchpin;
  std::optional<TourStatsRow> tour_stats;
  std::vector<std::string> warnings;
};

/// Runs `body(i)` for i in [0, count) on `threads` workers pulling indices
/// from a shared counter. The first exception thrown is rethrown.
void parallel_for(std::size_t count, std::size_t threads,
                  const std::function<void(std::size_t)>& body);

/// BM/SBM/RS intervals on the same regenerative random-walk output per
/// replication, scored against the analytic t quantile. Results depend only
/// on (config, seed), not on the worker count.
ExperimentReport run_coverage_experiment(const ExperimentConfig& config);

/// Linchpin sampler replications at each configured length: counts of
/// |median - 0| > epsilon, the improved uniform bound at that length and a
/// histogram of the medians.
ExperimentReport run_linchpin_bound_experiment(const ExperimentConfig& config);

/// Tour-length mean/SD and acceptance rate of one regenerative run of R tours.
ExperimentReport run_tour_stats(const ExperimentConfig& config);

/// Dispatches on config.kind.
ExperimentReport run_experiment(const ExperimentConfig& config);

/// One CSV table per experiment kind, with a header row.
void write_report_csv(std::ostream& out, const ExperimentReport& report);
/// `bin_left,count` for one linchpin length.
void write_histogram_csv(std::ostream& out, const LinchpinRow& row);
/// Resolved config plus version and seed, as a JSON document.
nlohmann::json report_provenance(const ExperimentReport& report);

struct QuantileReportRow {
  double q = 0.5;
  QuantileEstimate estimate;
};

/// Estimates for every (q, method) pair on one trace file. RS requires the
/// regen column (MissingRegeneration otherwise).
std::vector<QuantileReportRow> quantile_report(const TraceFile& file,
                                               const std::vector<double>& quantiles,
                                               const std::vector<Method>& methods,
                                               double confidence,
                                               std::optional<double> bandwidth = {});

void write_quantile_report_csv(std::ostream& out,
                               const std::vector<QuantileReportRow>& rows);

}  // namespace mcmcq
