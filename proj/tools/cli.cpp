#include "cli.hpp"

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "gibbs/config.hpp"
#include "gibbs/csv.hpp"
#include "gibbs/error.hpp"
#include "gibbs/experiment.hpp"
#include "gibbs/stats.hpp"

namespace gibbs::cli {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

std::ofstream open_output(const fs::path& path) {
  std::ofstream file(path, std::ios::binary);
  if (!file) throw Error("cannot write '" + path.string() + "'");
  return file;
}

void make_directory(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error("cannot create directory '" + dir.string() + "': " + ec.message());
}

std::string fmt(const std::optional<double>& v) {
  if (!v) return "-";
  std::ostringstream s;
  s << std::setprecision(4) << *v;
  return s.str();
}

int experiment_run(const std::string& config_path, const std::string& out_dir, bool full,
                   bool timing, std::size_t workers, std::ostream& out) {
  ExperimentConfig config = load_config(config_path);
  if (full) config.spec.replications = config.full_replications;
  config.spec.timing = timing;
  config.spec.workers = workers;
  const std::vector<ResultRow> rows = run_experiment(config.spec);

  const fs::path dir(out_dir);
  make_directory(dir);
  {
    std::ofstream f = open_output(dir / "results.csv");
    write_results_csv(f, rows);
  }
  {
    std::ofstream f = open_output(dir / "radii.csv");
    write_radii_csv(f, rows);
  }
  const json summary = experiment_summary(config, rows);
  {
    std::ofstream f = open_output(dir / "summary.json");
    f << summary.dump(2) << '\n';
  }

  out << "n        rows  fail  radius_q90  misclass_est  misclass_truth  coverage  accept\n";
  for (const Aggregate& a : aggregate(rows))
    out << std::left << std::setw(9) << a.n << std::setw(6) << a.rows << std::setw(6)
        << a.failures << std::setw(12) << fmt(a.mean_radius) << std::setw(14)
        << fmt(a.mean_misclass_est) << std::setw(16) << fmt(a.mean_misclass_truth)
        << std::setw(10) << fmt(a.coverage) << fmt(a.mean_accept_rate) << '\n';
  if (const auto fit = radius_fit(rows)) out << "radius slope " << fmt(fit->slope) << '\n';
  out << "wrote " << (dir / "results.csv").string() << '\n';
  return summary["failures"].get<std::size_t>() == rows.size() ? kRuntimeError : kOk;
}

// The chain for `sample`: the configured data when given, else the first
// cell of the experiment grid.
struct SampleRun {
  Chain chain;
  std::uint64_t seed = 0;
  double omega = 0.0;
  std::size_t n = 0;
};

SampleRun sample_chain(const ExperimentConfig& config) {
  const ExperimentSpec& spec = config.spec;
  if (!config.data) {
    ReplicationResult r = run_replication(spec, 0, 0);
    return {std::move(r.chain), hash64(r.row.seed, 1), r.row.omega.value_or(0.0), r.row.n};
  }
  const Dataset data = load_dataset(*config.data);
  double omega = 0.0;
  if (const auto* auc = std::get_if<AucDataDriven>(&spec.rate)) {
    const auto& d = data.two_sample();
    const double a = auc_multiplier(auc->multiplier, d.scores0.size(), d.scores1.size());
    omega = auc_learning_rate(auc_covariances(d.scores0, d.scores1), d.scores0.size(),
                              d.scores1.size(), a);
  } else {
    omega = rate_at(spec.rate, data.size()).omega;
  }
  const int dim = parameter_dimension(spec.loss, data);
  if (dim <= 0) throw ConfigError("loss " + loss_name(spec.loss) + " does not fit the data file");
  const GibbsTarget target(spec.loss, with_dimension(spec.prior, dim), data, omega);
  MHConfig mh = spec.mh;
  mh.seed = hash64(spec.base_seed, 1);
  SampleRun run;
  run.seed = mh.seed;
  run.omega = omega;
  run.n = data.size();
  if (const auto* ss = std::get_if<SpikeSlab>(&target.prior().kind))
    run.chain = densify(ss_mh_run(target, mh), ss->q, dim == ss->q + 1);
  else
    run.chain = mh_run(target, mh);
  return run;
}

int sample(const std::string& config_path, const std::string& out_dir,
           std::optional<std::uint64_t> seed, std::ostream& out) {
  ExperimentConfig config = load_config(config_path);
  if (seed) config.spec.base_seed = *seed;
  const SampleRun run = sample_chain(config);
  const Chain& chain = run.chain;
  if (chain.draws.empty()) throw Error("the chain kept no draws");
  const auto dim = chain.draws.front().size();

  const fs::path dir(out_dir);
  make_directory(dir);
  {
    std::ofstream f = open_output(dir / "draws.csv");
    std::vector<std::string> header;
    for (Eigen::Index j = 0; j < dim; ++j) header.push_back("theta" + std::to_string(j + 1));
    header.emplace_back("log_density");
    csv::write_row(f, header);
    for (std::size_t i = 0; i < chain.draws.size(); ++i) {
      std::vector<std::string> fields;
      for (Eigen::Index j = 0; j < dim; ++j) fields.push_back(csv::format_double(chain.draws[i](j)));
      fields.push_back(csv::format_double(chain.log_density[i]));
      csv::write_row(f, fields);
    }
  }

  const Eigen::VectorXd mean = posterior_mean(chain);
  json coords = json::array();
  for (Eigen::Index j = 0; j < dim; ++j) {
    const auto [lo, hi] = credible_interval(chain, static_cast<int>(j), config.spec.level);
    const std::vector<double> trace = coordinate_trace(chain, static_cast<int>(j));
    coords.push_back({{"mean", mean(j)},
                      {"interval", {lo, hi}},
                      {"ess", stats::effective_sample_size(trace)}});
  }
  json summary = {{"schema", kConfigSchema},
                  {"config", config.document},
                  {"n", run.n},
                  {"omega", run.omega},
                  {"seed", run.seed},
                  {"level", config.spec.level},
                  {"draws", chain.draws.size()},
                  {"steps", chain.steps},
                  {"acceptance_rate", chain.acceptance_rate()},
                  {"target", chain.target},
                  {"coordinates", coords}};
  {
    std::ofstream f = open_output(dir / "summary.json");
    f << summary.dump(2) << '\n';
  }
  out << "kept " << chain.draws.size() << " draws, acceptance " << fmt(chain.acceptance_rate())
      << ", wrote " << (dir / "draws.csv").string() << '\n';
  return kOk;
}

int diagnose_mgf(const std::string& config_path, const std::string& out_file, std::ostream& out) {
  const ExperimentConfig config = load_config(config_path);
  const MgfSettings settings = config.mgf.value_or(MgfSettings{});
  const ExperimentSpec& spec = config.spec;
  const Truth truth = truth_of(spec.generator);
  if (!truth.theta) throw ConfigError("generator " + generator_name(spec.generator) +
                                      " defines no parameter theta* for the MGF check");
  std::vector<Eigen::VectorXd> grid;
  for (double offset : settings.offsets) {
    Eigen::VectorXd theta = *truth.theta;
    theta(0) += offset;
    grid.push_back(theta);
  }
  const Generator gen = spec.generator;
  const DataSampler sampler = [gen](std::size_t n, Rng& rng) { return generate(gen, n, rng).data; };
  Divergence div = spec.divergence;
  if (std::holds_alternative<Euclid>(div) && truth.theta->size() == 1) div = AbsScalar{};
  Rng rng(spec.base_seed, 7);
  const MgfReport report = mgf_condition_check(spec.loss, grid, *truth.theta, settings.omega, div,
                                               settings.r, sampler, settings.n, rng);
  const json doc = to_json(report);
  if (!out_file.empty()) {
    std::ofstream f = open_output(out_file);
    f << doc.dump(2) << '\n';
  }
  out << doc.dump(2) << '\n';
  out << "min K_hat " << fmt(report.min_k_hat) << " (3-s.e. lower bound "
      << fmt(report.min_k_lower) << ")\n";
  return kOk;
}

int diagnose_rate(const std::string& csv_path, std::ostream& out) {
  const csv::Table table = csv::read_file(csv_path);
  const int n_col = table.column("n");
  int r_col = table.column("radius_q90");
  if (r_col < 0) r_col = table.column("radius");
  if (n_col < 0 || r_col < 0)
    throw ConfigError(csv_path + ": needs columns n and radius_q90 (or radius)");
  std::vector<std::pair<double, double>> pairs;
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    const std::string& n = table.rows[i][static_cast<std::size_t>(n_col)];
    const std::string& r = table.rows[i][static_cast<std::size_t>(r_col)];
    if (r.empty()) continue;  // failed rows
    try {
      pairs.emplace_back(std::stod(n), std::stod(r));
    } catch (const std::exception&) {
      throw ConfigError(csv_path + ": line " + std::to_string(i + 2) + ": not a number");
    }
  }
  const RateFit fit = concentration_slope(pairs);
  out << "slope " << std::setprecision(6) << fit.slope << '\n'
      << "intercept " << fit.intercept << '\n'
      << "pairs " << fit.pairs.size() << '\n';
  return kOk;
}

}  // namespace

int run(int argc, char** argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Gibbs posterior sampling, simulation experiments and diagnostics", "gibbs"};
  app.require_subcommand(1);

  std::string config_path, out_dir = ".", out_file, csv_path;
  bool full = false, timing = false;
  std::size_t workers = 0;
  std::optional<std::uint64_t> seed;

  auto* experiment = app.add_subcommand("experiment", "Replicated simulation experiments");
  experiment->require_subcommand(1);
  auto* exp_run = experiment->add_subcommand("run", "Run every (n, replication) cell");
  exp_run->add_option("config", config_path, "Experiment config (JSON)")->required();
  exp_run->add_option("--out", out_dir, "Output directory")->required();
  exp_run->add_flag("--full", full, "Use full_replications from the config");
  exp_run->add_flag("--timing", timing, "Record wall time per row");
  exp_run->add_option("--workers", workers, "Worker threads (default: GIBBS_WORKERS or all cores)");

  auto* sample_cmd = app.add_subcommand("sample", "Run one chain; write draws.csv and summary.json");
  sample_cmd->add_option("config", config_path, "Config (JSON)")->required();
  sample_cmd->add_option("--out", out_dir, "Output directory");
  sample_cmd->add_option("--seed", seed, "Override base_seed");

  auto* diagnose = app.add_subcommand("diagnose", "Diagnostics");
  diagnose->require_subcommand(1);
  auto* mgf = diagnose->add_subcommand("mgf", "Exponential-moment condition check");
  mgf->add_option("config", config_path, "Config (JSON)")->required();
  mgf->add_option("--out", out_file, "Also write the report to this file");
  auto* rate = diagnose->add_subcommand("rate", "Fit log radius on log n");
  rate->add_option("results", csv_path, "results.csv or a CSV with n and radius columns")
      ->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kConfigError;
  }

  try {
    if (*exp_run) return experiment_run(config_path, out_dir, full, timing, workers, out);
    if (*sample_cmd) return sample(config_path, out_dir, seed, out);
    if (*mgf) return diagnose_mgf(config_path, out_file, out);
    if (*rate) return diagnose_rate(csv_path, out);
  } catch (const ConfigError& e) {
    err << "gibbs: config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const std::exception& e) {
    err << "gibbs: error: " << e.what() << '\n';
    return kRuntimeError;
  }
  return kConfigError;
}

int run(int argc, char** argv) { return run(argc, argv, std::cout, std::cerr); }

}  // namespace gibbs::cli
