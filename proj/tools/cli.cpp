#include "cli.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "smoothck/csv.hpp"
#include "smoothck/parallel.hpp"
#include "smoothck/smc.hpp"

namespace smoothck::cli {

namespace {

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::stringstream ss(text);
  std::string part;
  while (std::getline(ss, part, sep)) parts.push_back(part);
  if (!text.empty() && text.back() == sep) parts.emplace_back();
  return parts;
}

double parse_real(const std::string& text, const std::string& what) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != text.size() || !std::isfinite(v)) {
    throw UsageError("invalid number '" + text + "' in " + what);
  }
  return v;
}

std::uint64_t parse_count(const std::string& text, const std::string& what) {
  std::size_t used = 0;
  unsigned long long v = 0;
  try {
    if (!text.empty() && text[0] != '-') v = std::stoull(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != text.size()) throw UsageError("invalid count '" + text + "' in " + what);
  return v;
}

VariedParameter parse_param(const std::string& spec) {
  const auto parts = split(spec, ':');
  if (parts.size() != 3 || parts[0].empty()) {
    throw UsageError("--param expects name:low:high, got '" + spec + "'");
  }
  VariedParameter p{parts[0], parse_real(parts[1], "--param"), parse_real(parts[2], "--param")};
  if (!(p.low < p.high)) {
    throw UsageError("malformed range for '" + p.name + "': low must be below high");
  }
  return p;
}

std::pair<std::string, double> parse_assignment(const std::string& spec, const char* flag) {
  const auto eq = spec.find('=');
  if (eq == std::string::npos || eq == 0) {
    throw UsageError(std::string(flag) + " expects name=value, got '" + spec + "'");
  }
  return {spec.substr(0, eq), parse_real(spec.substr(eq + 1), flag)};
}

std::vector<std::size_t> parse_counts(const std::string& spec, const char* flag) {
  std::vector<std::size_t> counts;
  for (const auto& part : split(spec, ',')) counts.push_back(parse_count(part, flag));
  if (counts.empty()) throw UsageError(std::string(flag) + " needs at least one count");
  for (std::size_t c : counts) {
    if (c < 2) throw UsageError(std::string(flag) + " counts must be at least 2");
  }
  return counts;
}

// A single count applies to every dimension.
std::vector<std::size_t> broadcast(std::vector<std::size_t> counts, std::size_t dims,
                                   const char* flag) {
  if (counts.size() == 1 && dims > 1) counts.assign(dims, counts[0]);
  if (counts.size() != dims) {
    throw UsageError(std::string(flag) + " gives " + std::to_string(counts.size()) +
                     " counts for " + std::to_string(dims) + " parameters");
  }
  return counts;
}

void require_readable(const std::filesystem::path& path, const char* what) {
  std::ifstream in(path);
  if (!in) throw IoError(std::string("cannot read ") + what + " file '" + path.string() + "'");
}

unsigned threads_from_env() {
  if (const char* env = std::getenv("SMOOTHCK_THREADS")) {
    try {
      const auto v = parse_count(env, "SMOOTHCK_THREADS");
      if (v > 0) return static_cast<unsigned>(v);
    } catch (const UsageError&) {
    }
  }
  return default_thread_count();
}

// Rate-limited "points completed / total" reporter.
class Progress {
 public:
  explicit Progress(std::ostream& err) : err_(err) {}

  void operator()(std::size_t done, std::size_t total) {
    const auto now = std::chrono::steady_clock::now();
    if (done != total && now - last_ < std::chrono::milliseconds(500)) return;
    last_ = now;
    err_ << "simulated " << done << " / " << total << " points\n";
  }

 private:
  std::ostream& err_;
  std::chrono::steady_clock::time_point last_{};
};

std::string usage_footer() {
  return "\nExamples:\n"
         "  smoothck --model sir.model --property ext.mitl --param k_i:0.005:0.3 \\\n"
         "           --train grid:200 --runs 10 --predict 200 --out-prefix sir_ki --seed 1\n"
         "  smoothck smc --model sir.model --property ext.mitl --fix k_i=0.1 --runs 5000\n";
}

int run_estimate(const CliConfig& c, std::ostream& out, std::ostream& err) {
  const Model model = load_model(c.model_path);
  const Formula property = load_formula(c.property_path);

  ParameterDomain domain{c.params, c.fixed};
  ExperimentConfig ec;
  ec.design = c.train;
  ec.runs_per_point = c.runs;
  ec.predict_counts = c.predict;
  std::vector<double> lengths = c.lengthscales;
  if (lengths.size() == 1 && c.params.size() > 1) lengths.assign(c.params.size(), lengths[0]);
  if (lengths.empty()) lengths.assign(c.params.size(), c.units == InputUnits::Rescaled ? 0.3 : 1.0);
  ec.kernel = KernelConfig::make(c.amplitude, lengths);
  ec.optimize = c.optimize;
  ec.units = c.units;
  ec.seed = c.seed;
  ec.threads = c.threads;
  ec.smc.horizon = c.horizon;
  ec.smc.pilot_runs = c.pilot_runs;
  Progress progress(err);
  if (!c.quiet) ec.progress = std::ref(progress);

  ExperimentResult result = run_smoothed_mc(model, property, domain, ec);
  result.metadata.emplace(result.metadata.begin(), "model", c.model_path.string());
  result.metadata.emplace(result.metadata.begin() + 1, "property_file", c.property_path.string());

  std::optional<std::vector<BernoulliEstimate>> baseline;
  Points probes;
  if (c.baseline) {
    const auto start = std::chrono::steady_clock::now();
    const std::vector<std::size_t> counts(c.params.size(), c.baseline->probes);
    probes = regular_grid(domain, counts);
    const Formula bound = bind_formula(property, model);
    const std::vector<double> base = domain.base_parameters(model);
    const std::vector<std::size_t> idx = domain.varied_indices(model);
    SmcOptions smc;
    smc.horizon = c.horizon;
    smc.pilot_runs = c.pilot_runs;
    smc.threads = c.threads;
    baseline.emplace();
    for (Eigen::Index j = 0; j < probes.rows(); ++j) {
      std::vector<double> params = base;
      for (std::size_t k = 0; k < idx.size(); ++k) params[idx[k]] = probes(j, static_cast<Eigen::Index>(k));
      baseline->push_back(estimate_at(model, params, bound, c.baseline->runs,
                                      derive_seed(c.seed, 3, static_cast<std::uint64_t>(j)), smc));
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    result.metadata.emplace_back("baseline_probes", std::to_string(probes.rows()));
    result.metadata.emplace_back("baseline_runs", std::to_string(c.baseline->runs));
    result.metadata.emplace_back("time_baseline_s", format_number(secs));
  }

  const std::filesystem::path predictions = c.out_prefix + ".predictions.csv";
  const std::filesystem::path training = c.out_prefix + ".training.csv";
  write_csv(result, predictions, training);
  std::filesystem::path baseline_path = c.out_prefix + ".baseline.csv";
  if (baseline) {
    std::ofstream file(baseline_path, std::ios::binary | std::ios::trunc);
    if (!file) throw IoError("cannot open '" + baseline_path.string() + "' for writing");
    write_baseline_csv(file, result.names, probes, *baseline);
    file.flush();
    if (!file) throw IoError("failed writing '" + baseline_path.string() + "'");
  }

  if (!result.state.converged) {
    err << "warning: EP stopped after " << result.state.sweeps
        << " sweeps without converging (max site change " << result.state.max_delta << ")\n";
  }
  if (!c.quiet) {
    out << "simulation        " << format_number(result.timings.simulation) << " s\n"
        << "hyperparameters   " << format_number(result.timings.hyperopt) << " s\n"
        << "prediction        " << format_number(result.timings.prediction) << " s\n"
        << "kernel            amplitude " << format_number(result.state.kernel.amplitude)
        << ", lengthscales";
    for (double l : result.state.kernel.lengthscales) out << ' ' << format_number(l);
    out << "\nwrote " << predictions.string() << ", " << training.string();
    if (baseline) out << ", " << baseline_path.string();
    out << '\n';
  }
  return kOk;
}

int run_smc(const CliConfig& c, std::ostream& out) {
  const Model model = load_model(c.model_path);
  const Formula property = bind_formula(load_formula(c.property_path), model);
  ParameterDomain domain{{}, c.fixed};
  std::vector<std::string> problems;
  for (const auto& [name, value] : c.fixed) {
    if (!model.parameter_index(name)) problems.push_back("parameter '" + name + "' is not declared by the model");
  }
  if (!problems.empty()) throw ValidationError(problems);
  SmcOptions smc;
  smc.horizon = c.horizon;
  smc.pilot_runs = c.pilot_runs;
  smc.threads = c.threads;
  if (c.horizon > 0.0 && horizon(property) > c.horizon) {
    throw InferenceError("property horizon " + format_number(horizon(property)) +
                         " exceeds the simulation horizon " + format_number(c.horizon));
  }
  const BernoulliEstimate e =
      estimate_at(model, domain.base_parameters(model), property, c.runs, c.seed, smc);
  out << "successes,trials,p_hat,ci_low,ci_high\n"
      << e.successes << ',' << e.trials << ',' << format_csv_number(e.p_hat) << ','
      << format_csv_number(e.ci_low) << ',' << format_csv_number(e.ci_high) << '\n';
  return kOk;
}

}  // namespace

CliConfig parse_args(const std::vector<std::string>& args) {
  CliConfig c;
  CLI::App app{"Smoothed model checking of parametric stochastic models", "smoothck"};
  app.footer(usage_footer());
  app.require_subcommand(1);

  std::string model, property, train, predict, kernel = "optimize", units = "rescaled", baseline;
  std::vector<std::string> params, fixes;
  std::string threads;
  std::uint64_t runs = 10;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--model", model, "Model file")->required();
    sub->add_option("--property", property, "Property file")->required();
    sub->add_option("--fix", fixes, "Override a model parameter, name=value (repeatable)");
    sub->add_option("--runs", runs, "Trajectories per point")->capture_default_str();
    sub->add_option("--seed", c.seed, "Random seed")->capture_default_str();
    sub->add_option("--threads", threads, "Worker threads (default: $SMOOTHCK_THREADS or all cores)");
    sub->add_option("--horizon", c.horizon, "Simulation horizon (default: the property horizon)");
    sub->add_option("--pilot-runs", c.pilot_runs, "Ensemble size for mean() signals")->capture_default_str();
  };

  CLI::App* est = app.add_subcommand("estimate", "Smoothed model checking over a parameter box");
  add_common(est);
  est->add_option("--param", params, "Varied parameter, name:low:high (repeatable)")->required();
  est->add_option("--train", train, "Training design: grid:N[,M...] or lhs:n")->required();
  est->add_option("--predict", predict, "Prediction grid counts N[,M...]")->required();
  est->add_option("--kernel", kernel, "optimize or fixed:amplitude:lengthscale[:...]")->capture_default_str();
  est->add_option("--kernel-units", units, "Kernel input units: rescaled or raw")->capture_default_str();
  est->add_option("--baseline", baseline, "Deep SMC at probe grid, probes:runs");
  est->add_option("--out-prefix", c.out_prefix, "Output prefix for <prefix>.predictions.csv etc.")->required();
  est->add_flag("--quiet", c.quiet, "No progress or summary output");

  CLI::App* smc = app.add_subcommand("smc", "Plain statistical model checking at one parameter point");
  add_common(smc);

  std::vector<std::string> argv = args;
  if (argv.empty()) throw UsageError("no arguments given\n\n" + app.help());
  if (argv[0].rfind("-", 0) == 0 && argv[0] != "-h" && argv[0] != "--help") {
    argv.insert(argv.begin(), "estimate");
  }
  std::vector<std::string> reversed(argv.rbegin(), argv.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    c.help = true;
    c.help_text = app.help();
    return c;
  } catch (const CLI::CallForAllHelp&) {
    c.help = true;
    c.help_text = app.help("", CLI::AppFormatMode::All);
    return c;
  } catch (const CLI::ParseError& e) {
    const CLI::App* failed = est->parsed() ? est : (smc->parsed() ? smc : &app);
    throw UsageError(std::string(e.what()) + "\n\n" + failed->help());
  }

  c.command = smc->parsed() ? CliConfig::Command::Smc : CliConfig::Command::Estimate;
  c.model_path = model;
  c.property_path = property;
  c.runs = runs;
  if (runs == 0) throw UsageError("--runs must be at least 1");
  for (const auto& f : fixes) c.fixed.push_back(parse_assignment(f, "--fix"));
  c.threads = threads.empty() ? threads_from_env()
                              : static_cast<unsigned>(parse_count(threads, "--threads"));
  if (c.threads == 0) c.threads = default_thread_count();
  if (c.horizon < 0.0) throw UsageError("--horizon must be non-negative");

  if (c.command == CliConfig::Command::Estimate) {
    for (const auto& p : params) c.params.push_back(parse_param(p));
    const std::size_t dims = c.params.size();

    if (train.rfind("grid:", 0) == 0) {
      c.train.kind = DesignSpec::Kind::Grid;
      c.train.counts = broadcast(parse_counts(train.substr(5), "--train"), dims, "--train");
    } else if (train.rfind("lhs:", 0) == 0) {
      c.train.kind = DesignSpec::Kind::Lhs;
      c.train.lhs_points = parse_count(train.substr(4), "--train");
      if (c.train.lhs_points == 0) throw UsageError("--train lhs:n needs n >= 1");
    } else {
      throw UsageError("--train expects grid:N[,M...] or lhs:n, got '" + train + "'");
    }
    c.predict = broadcast(parse_counts(predict, "--predict"), dims, "--predict");

    if (kernel == "optimize") {
      c.optimize = true;
    } else if (kernel.rfind("fixed:", 0) == 0) {
      c.optimize = false;
      const auto parts = split(kernel.substr(6), ':');
      if (parts.size() < 2) throw UsageError("--kernel fixed needs an amplitude and a lengthscale");
      c.amplitude = parse_real(parts[0], "--kernel");
      for (std::size_t i = 1; i < parts.size(); ++i) c.lengthscales.push_back(parse_real(parts[i], "--kernel"));
      if (c.lengthscales.size() != 1 && c.lengthscales.size() != dims) {
        throw UsageError("--kernel gives " + std::to_string(c.lengthscales.size()) +
                         " lengthscales for " + std::to_string(dims) + " parameters");
      }
      bool positive = c.amplitude > 0.0;
      for (double l : c.lengthscales) positive = positive && l > 0.0;
      if (!positive) throw UsageError("--kernel values must be positive");
    } else {
      throw UsageError("--kernel expects optimize or fixed:amplitude:lengthscale..., got '" + kernel + "'");
    }

    if (units == "rescaled") {
      c.units = InputUnits::Rescaled;
    } else if (units == "raw") {
      c.units = InputUnits::Raw;
    } else {
      throw UsageError("--kernel-units expects rescaled or raw, got '" + units + "'");
    }

    if (!baseline.empty()) {
      const auto parts = split(baseline, ':');
      if (parts.size() != 2) throw UsageError("--baseline expects probes:runs, got '" + baseline + "'");
      BaselineSpec b{parse_count(parts[0], "--baseline"), parse_count(parts[1], "--baseline")};
      if (b.probes < 2 || b.runs == 0) throw UsageError("--baseline needs probes >= 2 and runs >= 1");
      c.baseline = b;
    }
  }

  require_readable(c.model_path, "model");
  require_readable(c.property_path, "property");
  return c;
}

int exit_code_for(const std::exception& e) {
  if (dynamic_cast<const UsageError*>(&e) || dynamic_cast<const ParseError*>(&e) ||
      dynamic_cast<const ValidationError*>(&e)) {
    return kParse;
  }
  if (dynamic_cast<const SimulationError*>(&e) || dynamic_cast<const EvalError*>(&e) ||
      dynamic_cast<const MonitorError*>(&e)) {
    return kSimulation;
  }
  if (dynamic_cast<const InferenceError*>(&e)) return kInference;
  if (dynamic_cast<const IoError*>(&e)) return kIo;
  return kInternal;
}

int run(const CliConfig& config, std::ostream& out, std::ostream& err) {
  if (config.help) {
    out << config.help_text;
    return kOk;
  }
  if (config.command == CliConfig::Command::Smc) return run_smc(config, out);
  return run_estimate(config, out, err);
}

int main_with_args(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  try {
    return run(parse_args(args), out, err);
  } catch (const std::exception& e) {
    const int code = exit_code_for(e);
    err << "smoothck: " << e.what() << '\n';
    return code;
  }
}

}  // namespace smoothck::cli
