#include "mcmcq/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <fstream>
#include <mutex>
#include <ostream>
#include <thread>

#include "mcmcq/batch_means.hpp"
#include "mcmcq/bounds.hpp"
#include "mcmcq/distributions.hpp"
#include "mcmcq/error.hpp"
#include "mcmcq/regen.hpp"
#include "mcmcq/subsampling.hpp"

namespace mcmcq {

using nlohmann::json;

namespace {

constexpr double kHistogramLeft = -0.6;
constexpr double kHistogramWidth = 0.02;
constexpr std::size_t kHistogramBins = 60;

std::string optional_real(const std::optional<double>& x) {
  return x ? format_real(*x) : std::string();
}

double mean_of(const std::vector<double>& xs) {
  double sum = 0.0;
  for (double x : xs) sum += x;
  return xs.empty() ? 0.0 : sum / static_cast<double>(xs.size());
}

std::optional<double> sd_of(const std::vector<double>& xs) {
  if (xs.size() < 2) return std::nullopt;
  const double m = mean_of(xs);
  double ss = 0.0;
  for (double x : xs) ss += (x - m) * (x - m);
  return std::sqrt(ss / static_cast<double>(xs.size() - 1));
}

std::string init_name(LinchpinInit init) {
  return init == LinchpinInit::stationary ? "stationary" : "fixed";
}

}  // namespace

std::string_view to_string(ExperimentKind kind) noexcept {
  switch (kind) {
    case ExperimentKind::coverage: return "coverage";
    case ExperimentKind::linchpin_bound: return "linchpin";
    case ExperimentKind::tour_stats: return "tour-stats";
    case ExperimentKind::halfwidth: return "halfwidth";
  }
  return "?";
}

ExperimentKind parse_experiment_kind(std::string_view text) {
  if (text == "coverage") return ExperimentKind::coverage;
  if (text == "linchpin" || text == "linchpin-bound") return ExperimentKind::linchpin_bound;
  if (text == "tour-stats") return ExperimentKind::tour_stats;
  if (text == "halfwidth") return ExperimentKind::halfwidth;
  throw ConfigError("unknown experiment kind '" + std::string(text) + "'");
}

void ExperimentConfig::validate() const {
  if (!(confidence > 0.0 && confidence < 1.0)) {
    throw ConfigError("confidence must lie strictly inside (0, 1)");
  }
  for (double q : quantiles) {
    if (!(q > 0.0 && q < 1.0)) throw ConfigError("every quantile must lie in (0, 1)");
  }
  if (truth != "analytic") {
    throw ConfigError("unresolvable truth source '" + truth +
                      "'; only 'analytic' is supported");
  }
  if (bandwidth && !(*bandwidth > 0.0)) throw ConfigError("bandwidth must be positive");
  if (sampler.type != "rw" && sampler.type != "linchpin") {
    throw ConfigError("sampler type must be 'rw' or 'linchpin'");
  }
  switch (kind) {
    case ExperimentKind::coverage:
    case ExperimentKind::halfwidth:
      if (quantiles.empty()) throw ConfigError("no quantiles requested");
      if (methods.empty()) throw ConfigError("no methods requested");
      if (std::find(methods.begin(), methods.end(), Method::rs) != methods.end() &&
          tours < 3) {
        throw ConfigError("RS intervals need at least 3 tours");
      }
      [[fallthrough]];
    case ExperimentKind::tour_stats:
      if (sampler.type != "rw") {
        throw ConfigError("regenerative experiments need the rw sampler");
      }
      if (!(sampler.df > 2.0)) throw ConfigError("rw target needs v > 2");
      if (!(sampler.sigma > 0.0)) throw ConfigError("rw proposal scale must be positive");
      if (tours < 1) throw ConfigError("tours must be at least 1");
      break;
    case ExperimentKind::linchpin_bound:
      if (lengths.empty()) throw ConfigError("no run lengths requested");
      for (auto n : lengths) {
        if (n < 1) throw ConfigError("run lengths must be positive");
      }
      if (!(epsilon > 0.0)) throw ConfigError("epsilon must be positive");
      if (!(delta > 0.0 && delta < 1.0)) throw ConfigError("delta must lie in (0, 1)");
      break;
  }
}

void to_json(json& j, const ExperimentConfig& c) {
  json methods = json::array();
  for (Method m : c.methods) methods.push_back(std::string(to_string(m)));
  j = json{
      {"kind", std::string(to_string(c.kind))},
      {"sampler",
       {{"type", c.sampler.type},
        {"v", c.sampler.df},
        {"sigma", c.sampler.sigma},
        {"init", init_name(c.sampler.init)}}},
      {"quantiles", c.quantiles},
      {"methods", methods},
      {"confidence", c.confidence},
      {"replications", c.replications},
      {"tours", c.tours},
      {"lengths", c.lengths},
      {"epsilon", c.epsilon},
      {"delta", c.delta},
      {"seed", c.seed},
      {"truth", c.truth},
      {"bandwidth", c.bandwidth ? json(*c.bandwidth) : json(nullptr)},
      {"threads", c.threads},
      {"output", c.output},
  };
}

void from_json(const json& j, ExperimentConfig& c) {
  if (!j.is_object()) throw ConfigError("experiment config must be a JSON object");
  try {
    if (j.contains("kind")) c.kind = parse_experiment_kind(j.at("kind").get<std::string>());
    if (j.contains("sampler")) {
      const json& s = j.at("sampler");
      if (s.contains("type")) c.sampler.type = s.at("type").get<std::string>();
      if (s.contains("v")) c.sampler.df = s.at("v").get<double>();
      if (s.contains("sigma")) c.sampler.sigma = s.at("sigma").get<double>();
      if (s.contains("init")) {
        const auto init = s.at("init").get<std::string>();
        if (init == "fixed") {
          c.sampler.init = LinchpinInit::fixed;
        } else if (init == "stationary") {
          c.sampler.init = LinchpinInit::stationary;
        } else {
          throw ConfigError("sampler init must be 'fixed' or 'stationary'");
        }
      }
    }
    if (j.contains("quantiles")) c.quantiles = j.at("quantiles").get<std::vector<double>>();
    if (j.contains("methods")) {
      c.methods.clear();
      for (const auto& m : j.at("methods")) c.methods.push_back(parse_method(m.get<std::string>()));
    }
    if (j.contains("confidence")) c.confidence = j.at("confidence").get<double>();
    if (j.contains("replications")) c.replications = j.at("replications").get<std::size_t>();
    if (j.contains("tours")) c.tours = j.at("tours").get<std::size_t>();
    if (j.contains("lengths")) c.lengths = j.at("lengths").get<std::vector<std::size_t>>();
    if (j.contains("epsilon")) c.epsilon = j.at("epsilon").get<double>();
    if (j.contains("delta")) c.delta = j.at("delta").get<double>();
    if (j.contains("seed")) c.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("truth")) c.truth = j.at("truth").get<std::string>();
    if (j.contains("bandwidth")) {
      const json& h = j.at("bandwidth");
      c.bandwidth = h.is_null() ? std::nullopt : std::optional<double>(h.get<double>());
    }
    if (j.contains("threads")) c.threads = j.at("threads").get<std::size_t>();
    if (j.contains("output")) c.output = j.at("output").get<std::string>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("bad experiment config: ") + e.what());
  } catch (const InvalidInput& e) {
    throw ConfigError(e.what());
  }
}

ExperimentConfig load_experiment_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ConfigError("config file '" + path + "' is not valid JSON: " + e.what());
  }
  ExperimentConfig config;
  from_json(j, config);
  return config;
}

void parallel_for(std::size_t count, std::size_t threads,
                  const std::function<void(std::size_t)>& body) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min(threads, std::max<std::size_t>(count, 1));
  if (threads <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    while (true) {
      const std::size_t i = next.fetch_add(1);
      if (i >= count) return;
      try {
        body(i);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next.store(count);
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
  if (failure) std::rethrow_exception(failure);
}

namespace {

struct CellOutcome {
  bool ok = false;
  bool covered = false;
  double half_width = 0.0;
};

QuantileEstimate estimate_with(Method method, const RegenTrace& trace,
                               const QuantileSpec& spec, double confidence,
                               const KdeConfig& kde) {
  switch (method) {
    case Method::bm: return bm_quantile_ci(trace.trace(), spec, confidence, kde);
    case Method::sbm: return sbm_quantile_ci(trace.trace(), spec, confidence);
    case Method::rs: return rs_quantile_ci(trace, spec, confidence, kde);
  }
  throw InvalidInput("unknown method");
}

}  // namespace

ExperimentReport run_coverage_experiment(const ExperimentConfig& config) {
  config.validate();
  ExperimentReport report;
  report.config = config;
  if (config.replications == 0) {
    report.warnings.push_back("zero replications requested; report is empty");
    return report;
  }

  const RwRegenParams params =
      RwRegenParams::defaults(config.sampler.df, config.sampler.sigma);
  const StudentT target(config.sampler.df);
  std::vector<double> truths;
  for (double q : config.quantiles) truths.push_back(target.quantile(q));
  const KdeConfig kde{config.bandwidth};

  const std::size_t cells = config.quantiles.size() * config.methods.size();
  std::vector<CellOutcome> outcomes(config.replications * cells);

  parallel_for(config.replications, config.threads, [&](std::size_t rep) {
    Rng rng = Rng::stream(config.seed, rep);
    const RegenRun run = simulate_regenerative_rw(params, config.tours, rng);
    for (std::size_t qi = 0; qi < config.quantiles.size(); ++qi) {
      const QuantileSpec spec(config.quantiles[qi]);
      for (std::size_t mi = 0; mi < config.methods.size(); ++mi) {
        CellOutcome& out = outcomes[rep * cells + qi * config.methods.size() + mi];
        try {
          const QuantileEstimate est = estimate_with(config.methods[mi], run.trace, spec,
                                                     config.confidence, kde);
          out.ok = true;
          out.covered = est.contains(truths[qi]);
          out.half_width = est.half_width();
        } catch (const Error&) {
          out.ok = false;
        }
      }
    }
  });

  for (std::size_t qi = 0; qi < config.quantiles.size(); ++qi) {
    for (std::size_t mi = 0; mi < config.methods.size(); ++mi) {
      CoverageCell cell;
      cell.method = config.methods[mi];
      cell.q = config.quantiles[qi];
      cell.truth = truths[qi];
      std::vector<double> widths;
      for (std::size_t rep = 0; rep < config.replications; ++rep) {
        const CellOutcome& out = outcomes[rep * cells + qi * config.methods.size() + mi];
        if (!out.ok) {
          ++cell.failures;
          continue;
        }
        cell.covered += out.covered;
        widths.push_back(out.half_width);
      }
      cell.replications = widths.size();
      if (cell.replications > 0) {
        const double reps = static_cast<double>(cell.replications);
        cell.coverage = static_cast<double>(cell.covered) / reps;
        cell.coverage_mcse = std::sqrt(cell.coverage * (1.0 - cell.coverage) / reps);
        cell.mean_half_width = mean_of(widths);
        cell.sd_half_width = sd_of(widths).value_or(0.0);
      }
      if (cell.failures > 0) {
        report.warnings.push_back(std::to_string(cell.failures) + " " +
                                  std::string(to_string(cell.method)) +
                                  " estimates failed at q = " + format_real(cell.q));
      }
      report.coverage.push_back(cell);
    }
  }
  return report;
}

ExperimentReport run_linchpin_bound_experiment(const ExperimentConfig& config) {
  config.validate();
  ExperimentReport report;
  report.config = config;
  if (config.replications == 0) {
    report.warnings.push_back("zero replications requested; report is empty");
    return report;
  }

  const double q = 0.5;
  const TargetCdf target = TargetCdf::student_t(4.0, q);
  const double gamma = gamma_eps(target, q, config.epsilon, config.delta);
  const UniformErgodicity profile{linchpin_minorization_constant(), 1};

  for (std::size_t li = 0; li < config.lengths.size(); ++li) {
    const std::size_t n = config.lengths[li];
    const std::uint64_t length_seed = derive_seed(config.seed, li);
    std::vector<double> medians(config.replications);
    parallel_for(config.replications, config.threads, [&](std::size_t rep) {
      Rng rng = Rng::stream(length_seed, rep);
      const ChainRun run = run_linchpin(n, rng, config.sampler.init);
      medians[rep] = empirical_quantile(ScalarTrace(run.values), QuantileSpec(q));
    });

    LinchpinRow row;
    row.length = n;
    row.replications = config.replications;
    row.histogram.assign(kHistogramBins, 0);
    for (double m : medians) {
      if (std::abs(m - target.quantile) > config.epsilon) ++row.exceed_count;
      const double pos = std::floor((m - kHistogramLeft) / kHistogramWidth);
      if (pos >= 0.0 && pos < static_cast<double>(kHistogramBins)) {
        ++row.histogram[static_cast<std::size_t>(pos)];
      }
    }
    const double reps = static_cast<double>(row.replications);
    row.proportion = static_cast<double>(row.exceed_count) / reps;
    row.proportion_mcse = std::sqrt(row.proportion * (1.0 - row.proportion) / reps);
    try {
      row.bound = bound_uniform_improved(n, gamma, profile);
    } catch (const DomainError&) {
      report.warnings.push_back("bound undefined at n = " + std::to_string(n));
    }
    report.linchpin.push_back(std::move(row));
  }
  return report;
}

ExperimentReport run_tour_stats(const ExperimentConfig& config) {
  config.validate();
  ExperimentReport report;
  report.config = config;
  const RwRegenParams params =
      RwRegenParams::defaults(config.sampler.df, config.sampler.sigma);
  Rng rng = Rng::stream(config.seed, 0);
  const RegenRun run = simulate_regenerative_rw(params, config.tours, rng);

  std::vector<double> lengths;
  for (auto len : run.trace.tour_lengths()) lengths.push_back(static_cast<double>(len));
  TourStatsRow row;
  row.df = config.sampler.df;
  row.sigma = config.sampler.sigma;
  row.tours = lengths.size();
  row.steps = run.steps;
  row.mean_length = mean_of(lengths);
  row.sd_length = sd_of(lengths);
  row.acceptance_rate = run.acceptance_rate();
  if (!row.sd_length) report.warnings.push_back("single tour: SD of tour lengths undefined");
  report.tour_stats = row;
  return report;
}

ExperimentReport run_experiment(const ExperimentConfig& config) {
  switch (config.kind) {
    case ExperimentKind::coverage:
    case ExperimentKind::halfwidth:
      return run_coverage_experiment(config);
    case ExperimentKind::linchpin_bound:
      return run_linchpin_bound_experiment(config);
    case ExperimentKind::tour_stats:
      return run_tour_stats(config);
  }
  throw ConfigError("unknown experiment kind");
}

void write_report_csv(std::ostream& out, const ExperimentReport& report) {
  switch (report.config.kind) {
    case ExperimentKind::coverage:
    case ExperimentKind::halfwidth:
      out << "method,q,truth,replications,failures,covered,coverage,coverage_mcse,"
             "mean_half_width,sd_half_width\n";
      for (const auto& c : report.coverage) {
        out << to_string(c.method) << ',' << format_real(c.q) << ','
            << format_real(c.truth) << ',' << c.replications << ',' << c.failures << ','
            << c.covered << ',' << format_real(c.coverage) << ','
            << format_real(c.coverage_mcse) << ',' << format_real(c.mean_half_width)
            << ',' << format_real(c.sd_half_width) << '\n';
      }
      break;
    case ExperimentKind::linchpin_bound:
      out << "length,replications,exceed_count,proportion,proportion_mcse,bound\n";
      for (const auto& r : report.linchpin) {
        out << r.length << ',' << r.replications << ',' << r.exceed_count << ','
            << format_real(r.proportion) << ',' << format_real(r.proportion_mcse) << ','
            << optional_real(r.bound) << '\n';
      }
      break;
    case ExperimentKind::tour_stats:
      out << "v,sigma,tours,steps,mean_tour_length,sd_tour_length,acceptance_rate\n";
      if (const auto& t = report.tour_stats) {
        out << format_real(t->df) << ',' << format_real(t->sigma) << ',' << t->tours << ','
            << t->steps << ',' << format_real(t->mean_length) << ','
            << optional_real(t->sd_length) << ',' << format_real(t->acceptance_rate)
            << '\n';
      }
      break;
  }
}

void write_histogram_csv(std::ostream& out, const LinchpinRow& row) {
  out << "bin_left,count\n";
  for (std::size_t k = 0; k < row.histogram.size(); ++k) {
    const double left = static_cast<double>(2 * static_cast<long>(k) - 60) / 100.0;
    out << format_real(left) << ',' << row.histogram[k] << '\n';
  }
}

json report_provenance(const ExperimentReport& report) {
  return json{{"version", std::string(kVersion)},
              {"seed", report.config.seed},
              {"config", report.config},
              {"warnings", report.warnings}};
}

std::vector<QuantileReportRow> quantile_report(const TraceFile& file,
                                               const std::vector<double>& quantiles,
                                               const std::vector<Method>& methods,
                                               double confidence,
                                               std::optional<double> bandwidth) {
  const bool wants_rs = std::find(methods.begin(), methods.end(), Method::rs) != methods.end();
  if (wants_rs && !file.regen) {
    throw MissingRegeneration("RS requested but the trace has no regen column");
  }
  const ScalarTrace trace = file.scalar();
  std::optional<RegenTrace> regen;
  if (wants_rs) regen.emplace(file.regenerative());
  const KdeConfig kde{bandwidth};

  std::vector<QuantileReportRow> rows;
  for (double q : quantiles) {
    const QuantileSpec spec(q);
    for (Method m : methods) {
      QuantileReportRow row{q, {}};
      switch (m) {
        case Method::bm: row.estimate = bm_quantile_ci(trace, spec, confidence, kde); break;
        case Method::sbm: row.estimate = sbm_quantile_ci(trace, spec, confidence); break;
        case Method::rs: row.estimate = rs_quantile_ci(*regen, spec, confidence, kde); break;
      }
      rows.push_back(row);
    }
  }
  return rows;
}

void write_quantile_report_csv(std::ostream& out,
                               const std::vector<QuantileReportRow>& rows) {
  out << "q,method,point,avar,mcse,ci_low,ci_high,confidence,n,tours,bandwidth,"
         "batch_count,batch_size,block_length\n";
  for (const auto& row : rows) {
    const QuantileEstimate& e = row.estimate;
    out << format_real(row.q) << ',' << to_string(e.method) << ',' << format_real(e.point)
        << ',' << format_real(e.avar) << ',' << format_real(e.mcse) << ','
        << format_real(e.ci_low) << ',' << format_real(e.ci_high) << ','
        << format_real(e.confidence) << ',' << e.sample_size << ',';
    if (e.tours) out << *e.tours;
    out << ',' << optional_real(e.bandwidth) << ',';
    if (e.batches) out << e.batches->batch_count << ',' << e.batches->batch_size;
    else out << ',';
    out << ',';
    if (e.subsample) out << e.subsample->block_length;
    out << '\n';
  }
}

}  // namespace mcmcq
