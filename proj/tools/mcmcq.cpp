#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "mcmcq/bounds.hpp"
#include "mcmcq/error.hpp"
#include "mcmcq/harness.hpp"
#include "mcmcq/regen.hpp"
#include "mcmcq/rng.hpp"
#include "mcmcq/samplers.hpp"
#include "mcmcq/subsampling.hpp"
#include "mcmcq/trace_io.hpp"

namespace {

using namespace mcmcq;

constexpr int kExitConfig = 2;
constexpr int kExitData = 3;

std::ofstream open_output(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot open '" + path + "' for writing");
  out.precision(17);
  return out;
}

// Writes to `path`, or stdout when the path is empty or "-".
template <class Fn>
void emit(const std::string& path, Fn&& write) {
  if (path.empty() || path == "-") {
    write(std::cout);
    std::cout.flush();
    return;
  }
  auto out = open_output(path);
  write(out);
}

std::vector<Method> parse_methods(const std::vector<std::string>& names) {
  std::vector<Method> methods;
  for (const auto& name : names) {
    std::stringstream list(name);
    std::string item;
    while (std::getline(list, item, ',')) {
      if (!item.empty()) methods.push_back(parse_method(item));
    }
  }
  if (methods.empty()) throw ConfigError("no estimation methods selected");
  return methods;
}

struct SampleOptions {
  std::string sampler = "rw";
  double df = 30.0;
  double sigma = 2.5;
  std::optional<std::size_t> n;
  std::optional<std::size_t> tours;
  std::uint64_t seed = 1;
  std::string out;
  std::string init = "fixed";
  std::string tour_summary;
};

void run_sample(const SampleOptions& opt) {
  Rng rng(opt.seed);
  if (opt.sampler == "linchpin") {
    if (!opt.n) throw ConfigError("linchpin sampling needs --n");
    if (opt.tours) throw ConfigError("--tours applies to the rw sampler only");
    LinchpinInit init;
    if (opt.init == "fixed") {
      init = LinchpinInit::fixed;
    } else if (opt.init == "stationary") {
      init = LinchpinInit::stationary;
    } else {
      throw ConfigError("--init must be 'fixed' or 'stationary'");
    }
    const ChainRun run = run_linchpin(*opt.n, rng, init);
    emit(opt.out, [&](std::ostream& os) { write_trace_csv(os, run.values); });
    return;
  }
  if (opt.sampler != "rw") throw ConfigError("--sampler must be 'rw' or 'linchpin'");
  if (opt.n.has_value() == opt.tours.has_value()) {
    throw ConfigError("rw sampling needs exactly one of --n or --tours");
  }
  if (opt.n) {
    if (!opt.tour_summary.empty()) {
      throw ConfigError("--tour-summary needs a regenerative run (--tours)");
    }
    const ChainRun run = run_metropolis_rw(opt.df, opt.sigma, *opt.n, rng);
    emit(opt.out, [&](std::ostream& os) { write_trace_csv(os, run.values); });
    return;
  }
  const RegenRun run =
      simulate_regenerative_rw(RwRegenParams::defaults(opt.df, opt.sigma), *opt.tours, rng);
  emit(opt.out, [&](std::ostream& os) { write_trace_csv(os, run.trace); });
  if (!opt.tour_summary.empty()) {
    emit(opt.tour_summary, [&](std::ostream& os) { write_tour_summary_csv(os, run.trace); });
  }
}

struct ReportOptions {
  std::string trace;
  std::vector<double> quantiles{0.5};
  std::vector<std::string> methods;  // empty: every method the trace supports
  double confidence = 0.95;
  std::optional<double> bandwidth;
  std::string out;
  std::string blocks_out;
};

void run_quantile_report(const ReportOptions& opt) {
  const TraceFile file = read_trace_csv(opt.trace);
  std::vector<Method> methods;
  if (opt.methods.empty()) {
    methods = {Method::bm, Method::sbm};
    if (file.regen) methods.push_back(Method::rs);
  } else {
    methods = parse_methods(opt.methods);
  }
  const auto rows =
      quantile_report(file, opt.quantiles, methods, opt.confidence, opt.bandwidth);
  emit(opt.out, [&](std::ostream& os) { write_quantile_report_csv(os, rows); });
  if (!opt.blocks_out.empty()) {
    const ScalarTrace trace = file.scalar();
    const auto layout = default_subsample_layout(trace.size());
    const auto xi = block_quantiles(trace, QuantileSpec(opt.quantiles.front()), layout);
    emit(opt.blocks_out, [&](std::ostream& os) { write_block_quantiles_csv(os, xi); });
  }
}

struct BoundsOptions {
  std::string kind = "improved";
  std::optional<std::uint64_t> n;
  std::optional<std::uint64_t> a;
  double q = 0.5;
  double eps = 0.1;
  double delta = 0.99999;
  double df = 4.0;
  std::optional<double> gamma;
  double lambda = linchpin_minorization_constant();
  std::uint64_t n0 = 1;
  double m = 2.0;
  double moment = 1.0;
  std::optional<double> target;
};

// Best a on the halving grid for an a-dependent bound.
std::uint64_t best_a(const BoundSpec& spec, std::uint64_t n) {
  std::uint64_t best = 1;
  double best_value = 0.0;
  bool first = true;
  for (const std::uint64_t a : a_grid(n)) {
    const double value =
        spec.kind == BoundKind::polynomial
            ? bound_polynomial(n, a, spec.gamma, std::get<PolynomialErgodicity>(spec.profile))
            : bound_uniform(n, a, spec.gamma, std::get<UniformErgodicity>(spec.profile));
    if (first || value < best_value) {
      best = a;
      best_value = value;
      first = false;
    }
  }
  return best;
}

void run_bounds(const BoundsOptions& opt) {
  BoundSpec spec;
  spec.kind = parse_bound_kind(opt.kind);
  spec.gamma = opt.gamma ? *opt.gamma
                         : gamma_eps(TargetCdf::student_t(opt.df, opt.q), opt.q, opt.eps,
                                     opt.delta);
  if (spec.kind == BoundKind::polynomial) {
    spec.profile = PolynomialErgodicity{opt.m, opt.moment};
  } else {
    spec.profile = UniformErgodicity{opt.lambda, opt.n0};
  }
  validate(spec.profile);

  std::uint64_t n = 0;
  std::optional<std::uint64_t> a;
  std::optional<double> bound;
  if (opt.target) {
    if (opt.n) throw ConfigError("--n and --target are mutually exclusive");
    const SampleSizeResult result = min_sample_size(spec, *opt.target);
    n = result.n;
    bound = result.bound;
    if (spec.kind != BoundKind::uniform_improved) a = best_a(spec, n);
  } else {
    if (!opt.n) throw ConfigError("bounds needs --n or --target");
    n = *opt.n;
    if (spec.kind == BoundKind::uniform_improved) {
      try {
        bound = bound_uniform_improved(n, spec.gamma, std::get<UniformErgodicity>(spec.profile));
      } catch (const DomainError&) {
      }
    } else {
      a = opt.a ? *opt.a : default_a(n);
      bound = spec.kind == BoundKind::polynomial
                  ? bound_polynomial(n, *a, spec.gamma,
                                     std::get<PolynomialErgodicity>(spec.profile))
                  : bound_uniform(n, *a, spec.gamma, std::get<UniformErgodicity>(spec.profile));
    }
  }
  std::cout << "kind,n,a,gamma,bound,valid\n"
            << to_string(spec.kind) << ',' << n << ',' << (a ? std::to_string(*a) : "")
            << ',' << format_real(spec.gamma) << ',' << (bound ? format_real(*bound) : "")
            << ',' << (bound && !is_vacuous(*bound) ? 1 : 0) << '\n';
}

struct ExperimentOptions {
  std::string kind;
  std::string config;
  std::optional<double> df;
  std::optional<double> sigma;
  std::optional<std::size_t> replications;
  std::optional<std::size_t> tours;
  std::vector<std::size_t> lengths;
  std::vector<double> quantiles;
  std::vector<std::string> methods;
  std::optional<double> confidence;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> threads;
  std::optional<std::string> init;
  std::string out;
};

std::filesystem::path with_suffix(const std::string& out, const std::string& suffix) {
  std::filesystem::path p(out);
  const auto stem = p.stem().string();
  return p.replace_filename(stem + suffix);
}

void run_experiment_command(const ExperimentOptions& opt) {
  ExperimentConfig config;
  if (!opt.config.empty()) config = load_experiment_config(opt.config);
  config.kind = parse_experiment_kind(opt.kind);
  if (config.kind == ExperimentKind::linchpin_bound) config.sampler.type = "linchpin";
  if (opt.df) config.sampler.df = *opt.df;
  if (opt.sigma) config.sampler.sigma = *opt.sigma;
  if (opt.replications) config.replications = *opt.replications;
  if (opt.tours) config.tours = *opt.tours;
  if (!opt.lengths.empty()) config.lengths = opt.lengths;
  if (!opt.quantiles.empty()) config.quantiles = opt.quantiles;
  if (!opt.methods.empty()) config.methods = parse_methods(opt.methods);
  if (opt.confidence) config.confidence = *opt.confidence;
  if (opt.seed) config.seed = *opt.seed;
  if (opt.threads) config.threads = *opt.threads;
  if (opt.init) {
    if (*opt.init == "fixed") {
      config.sampler.init = LinchpinInit::fixed;
    } else if (*opt.init == "stationary") {
      config.sampler.init = LinchpinInit::stationary;
    } else {
      throw ConfigError("--init must be 'fixed' or 'stationary'");
    }
  }
  if (!opt.out.empty()) config.output = opt.out;
  config.validate();

  const ExperimentReport report = run_experiment(config);
  for (const auto& warning : report.warnings) std::cerr << "warning: " << warning << '\n';

  emit(config.output, [&](std::ostream& os) { write_report_csv(os, report); });
  if (config.output.empty() || config.output == "-") return;

  auto sidecar = open_output(config.output + ".config.json");
  sidecar << report_provenance(report).dump(2) << '\n';
  for (const auto& row : report.linchpin) {
    auto hist = open_output(with_suffix(config.output, ".hist_" + std::to_string(row.length) +
                                                           ".csv")
                                .string());
    write_histogram_csv(hist, row);
  }
}

int exit_code_for(const Error& e) { return e.is_data_error() ? kExitData : kExitConfig; }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Quantile estimation with Monte Carlo standard errors for MCMC output"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);

  SampleOptions sample;
  auto* sample_cmd = app.add_subcommand("sample", "Run a sampler and write its trace");
  sample_cmd->add_option("--sampler", sample.sampler, "rw or linchpin")->capture_default_str();
  sample_cmd->add_option("--v", sample.df, "Degrees of freedom of the t target")
      ->capture_default_str();
  sample_cmd->add_option("--sigma", sample.sigma, "Random-walk proposal scale")
      ->capture_default_str();
  sample_cmd->add_option("--n", sample.n, "Number of iterations");
  sample_cmd->add_option("--tours", sample.tours, "Number of regenerations (rw only)");
  sample_cmd->add_option("--seed", sample.seed, "Generator seed")->capture_default_str();
  sample_cmd->add_option("--out", sample.out, "Trace CSV path (default stdout)");
  sample_cmd->add_option("--init", sample.init, "Linchpin start: fixed or stationary")
      ->capture_default_str();
  sample_cmd->add_option("--tour-summary", sample.tour_summary, "Write tour lengths to CSV");

  ReportOptions report;
  auto* report_cmd =
      app.add_subcommand("quantile-report", "Quantile estimates and intervals for a trace");
  report_cmd->add_option("--trace", report.trace, "Trace CSV")->required();
  report_cmd->add_option("--q", report.quantiles, "Quantile levels")->delimiter(',');
  report_cmd->add_option("--methods", report.methods, "Comma list of BM, SBM, RS");
  report_cmd->add_option("--confidence", report.confidence, "Nominal level")
      ->capture_default_str();
  report_cmd->add_option("--bandwidth", report.bandwidth, "Fixed kernel bandwidth");
  report_cmd->add_option("--out", report.out, "Report CSV path (default stdout)");
  report_cmd->add_option("--blocks-out", report.blocks_out,
                         "Write subsample block quantiles for the first q");

  BoundsOptions bounds;
  auto* bounds_cmd = app.add_subcommand("bounds", "Finite-sample error bounds");
  bounds_cmd->add_option("--kind", bounds.kind, "polynomial, uniform or improved")
      ->capture_default_str();
  bounds_cmd->add_option("--n", bounds.n, "Chain length");
  bounds_cmd->add_option("--a", bounds.a, "Blocking parameter (default n/16)");
  bounds_cmd->add_option("--q", bounds.q, "Quantile level")->capture_default_str();
  bounds_cmd->add_option("--eps", bounds.eps, "Error tolerance")->capture_default_str();
  bounds_cmd->add_option("--delta", bounds.delta, "Slack factor")->capture_default_str();
  bounds_cmd->add_option("--v", bounds.df, "Degrees of freedom of the t target")
      ->capture_default_str();
  bounds_cmd->add_option("--gamma", bounds.gamma, "Use this gamma instead of computing it");
  bounds_cmd->add_option("--lambda", bounds.lambda, "Minorization constant")
      ->capture_default_str();
  bounds_cmd->add_option("--n0", bounds.n0, "Minorization step count")->capture_default_str();
  bounds_cmd->add_option("--m", bounds.m, "Polynomial ergodicity order")->capture_default_str();
  bounds_cmd->add_option("--EpiM", bounds.moment, "Stationary mean of M")
      ->capture_default_str();
  bounds_cmd->add_option("--target", bounds.target, "Find the smallest n reaching this bound");

  ExperimentOptions experiment;
  auto* exp_cmd = app.add_subcommand("experiment", "Replication experiments");
  exp_cmd->add_option("kind", experiment.kind, "coverage, linchpin or tour-stats")
      ->required()
      ->check(CLI::IsMember({"coverage", "halfwidth", "linchpin", "linchpin-bound", "tour-stats"}));
  exp_cmd->add_option("--config", experiment.config, "JSON config file");
  exp_cmd->add_option("--v", experiment.df, "Degrees of freedom of the t target");
  exp_cmd->add_option("--sigma", experiment.sigma, "Random-walk proposal scale");
  exp_cmd->add_option("--reps", experiment.replications, "Replications");
  exp_cmd->add_option("--tours", experiment.tours, "Regenerations per replication");
  exp_cmd->add_option("--lengths", experiment.lengths, "Linchpin run lengths")->delimiter(',');
  exp_cmd->add_option("--q", experiment.quantiles, "Quantile levels")->delimiter(',');
  exp_cmd->add_option("--methods", experiment.methods, "Comma list of BM, SBM, RS");
  exp_cmd->add_option("--confidence", experiment.confidence, "Nominal level");
  exp_cmd->add_option("--seed", experiment.seed, "Master seed");
  exp_cmd->add_option("--threads", experiment.threads, "Worker threads (0: all cores)");
  exp_cmd->add_option("--init", experiment.init, "Linchpin start: fixed or stationary");
  exp_cmd->add_option("--out", experiment.out, "Report CSV path (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    if (*sample_cmd) run_sample(sample);
    if (*report_cmd) run_quantile_report(report);
    if (*bounds_cmd) run_bounds(bounds);
    if (*exp_cmd) run_experiment_command(experiment);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_code_for(e);
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfig;
  }
  return 0;
}
