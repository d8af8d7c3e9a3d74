// Experiment driver: reproduce bundled scenarios, run configured experiments,
// and run the property-check suites. Exit codes: 0 on success, 1 when a check
// fails, 2 on usage or parse errors.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "investsim/experiments.hpp"
#include "investsim/knapsack.hpp"
#include "investsim/serialize.hpp"

namespace fs = std::filesystem;
using namespace investsim;

namespace {

struct CommonOptions {
  uint64_t seed = kDefaultSeed;
  bool seed_given = false;
  std::string out_dir = "out";
  int jobs = 1;
};

uint64_t effective_seed(const CommonOptions& opts) {
  if (opts.seed_given) return opts.seed;
  if (const char* env = std::getenv("INVESTSIM_SEED")) {
    try {
      return std::stoull(env);
    } catch (const std::exception&) {
      throw ConfigError("INVESTSIM_SEED is not a valid integer");
    }
  }
  return opts.seed;
}

void add_common(CLI::App* cmd, CommonOptions& opts) {
  cmd->add_option("--seed", opts.seed, "Master seed (INVESTSIM_SEED as fallback)")
      ->each([&](const std::string&) { opts.seed_given = true; });
  cmd->add_option("--out", opts.out_dir, "Output directory");
  cmd->add_option("--jobs", opts.jobs, "Worker threads for Monte-Carlo runs")
      ->check(CLI::PositiveNumber);
}

struct Verdict {
  std::vector<std::string> lines;
  bool pass = true;

  void check(bool ok, const std::string& what) {
    lines.push_back(std::string(ok ? "PASS " : "FAIL ") + what);
    pass = pass && ok;
  }
};

int finish(const CommonOptions& opts, const Verdict& verdict) {
  fs::create_directories(opts.out_dir);
  std::string text;
  for (const auto& line : verdict.lines) text += line + "\n";
  atomic_write_file(fs::path(opts.out_dir) / "verdict.txt", text);
  std::cout << text;
  return verdict.pass ? 0 : 1;
}

void write_trace_artifacts(const CommonOptions& opts,
                           const DynamicInvestmentInstance& instance,
                           const AllocationAlgorithm& algo,
                           const std::string& learner_id, uint64_t seed) {
  fs::create_directories(opts.out_dir);
  auto learner = make_learner(learner_id, instance.num_arms(), instance.horizon);
  const RunTrace trace = simulate_run(instance, algo, *learner, seed);
  atomic_write_file(fs::path(opts.out_dir) / "trace.csv", trace_to_csv(trace));
  atomic_write_file(
      fs::path(opts.out_dir) / "summary.json",
      run_summary_to_json(trace, instance_digest(instance)).dump(2) + "\n");
}

int cmd_reproduce_table1(const CommonOptions& opts, double epsilon, int horizon,
                         int runs) {
  const Table1Report report = run_table1_checks(epsilon);

  Verdict verdict;
  verdict.check(std::abs(report.optimal_welfare - 2.0) <= 1e-9,
                "optimal welfare = " + format_double(report.optimal_welfare));
  verdict.check(std::abs(report.smart_greedy_welfare - 2.0) <= 1e-9,
                "smart_greedy welfare = " + format_double(report.smart_greedy_welfare));
  verdict.check(std::abs(report.threshold_a - (1.0 + 2.0 * epsilon)) <= 1e-9,
                "threshold price of A = " + format_double(report.threshold_a));
  verdict.check(std::abs(report.invested_welfare - (1.0 + epsilon)) <= 1e-9,
                "invested welfare = " + format_double(report.invested_welfare));
  verdict.check(std::abs(report.invested_utility + epsilon) <= 1e-9,
                "invested utility = " + format_double(report.invested_utility));

  const DynamicInvestmentInstance instance = gen_table1_dynamic(horizon, epsilon);
  const SmartGreedyAlgorithm smart;
  const MonteCarloEstimates est = expected_quantities(
      instance, smart, LearnerSpec{"exp3"}, runs, effective_seed(opts), opts.jobs);
  verdict.lines.push_back(
      "INFO exp3 mean welfare over " + std::to_string(runs) + " runs, T=" +
      std::to_string(horizon) + ": " + format_double(est.welfare_mean) +
      " (regret " + format_double(est.regret_mean) + ")");
  write_trace_artifacts(opts, instance, smart, "exp3",
                        run_seed(effective_seed(opts), 0));
  return finish(opts, verdict);
}

int cmd_reproduce_prop1(const CommonOptions& opts, int arms, int horizon,
                        int runs) {
  const Prop1Study study =
      run_prop1_study(arms, horizon, runs, effective_seed(opts), 0.23, 0.30,
                      opts.jobs);
  Verdict verdict;
  verdict.check(study.ratio_exp3 >= study.ratio_lo && study.ratio_exp3 <= study.ratio_hi,
                "exp3 welfare ratio vs strongly dynamic benchmark = " +
                    format_double(study.ratio_exp3));
  verdict.check(
      study.ratio_uniform >= study.ratio_lo && study.ratio_uniform <= study.ratio_hi,
      "uniform welfare ratio vs strongly dynamic benchmark = " +
          format_double(study.ratio_uniform));
  verdict.lines.push_back("INFO strongly dynamic benchmark = " +
                          format_double(study.strong_benchmark));

  const DynamicInvestmentInstance instance =
      gen_prop1_instance(arms, horizon, run_seed(effective_seed(opts), 7));
  write_trace_artifacts(opts, instance, OptimalAlgorithm{}, "exp3",
                        run_seed(effective_seed(opts), 0));
  return finish(opts, verdict);
}

int cmd_reproduce_theorem3(const CommonOptions& opts, int instances, int horizon,
                           int runs, double beta) {
  const DynApproxStudy study = run_theorem3_study(instances, horizon, runs, beta,
                                                  effective_seed(opts), opts.jobs);
  Verdict verdict;
  verdict.check(study.failures == 0,
                "dynamic approximation at beta=" + format_double(beta) + " on " +
                    std::to_string(instances) + " instances (" +
                    std::to_string(study.failures) + " failures)");
  verdict.lines.push_back("INFO min margin in sigmas = " +
                          format_double(study.min_margin_sigmas));

  Json rows = Json::array();
  for (const auto& r : study.reports)
    rows.push_back(Json{{"benchmark", r.benchmark},
                        {"welfare_mean", r.welfare_mean},
                        {"regret_mean", r.regret_mean},
                        {"margin_mean", r.margin_mean},
                        {"margin_se", r.margin_se},
                        {"pass", r.pass}});
  fs::create_directories(opts.out_dir);
  atomic_write_file(fs::path(opts.out_dir) / "summary.json",
                    Json{{"beta", beta}, {"instances", rows}}.dump(2) + "\n");
  return finish(opts, verdict);
}

int cmd_reproduce_prop2(const CommonOptions& opts, int instances, int horizon,
                        int runs, double beta) {
  const Prop2Study study = run_prop2_study(instances, horizon, runs, beta,
                                           effective_seed(opts), opts.jobs);
  Verdict verdict;
  verdict.check(study.chain_failures == 0,
                "exact benchmark inequality chain on " + std::to_string(instances) +
                    " instances (" + std::to_string(study.chain_failures) +
                    " failures)");
  verdict.check(study.mc_failures == 0,
                "strong benchmark Monte-Carlo check at beta/|I| (" +
                    std::to_string(study.mc_failures) + " failures)");
  return finish(opts, verdict);
}

int cmd_run(const CommonOptions& opts_in, const std::string& config_path) {
  std::ifstream in(config_path);
  if (!in) {
    std::cerr << "cannot open config: " << config_path << "\n";
    return 2;
  }
  Json config;
  try {
    config = Json::parse(in);
  } catch (const Json::parse_error& e) {
    std::cerr << "config parse error: " << e.what() << "\n";
    return 2;
  }

  CommonOptions opts = opts_in;
  if (!opts.seed_given && config.contains("seed")) {
    opts.seed = config.at("seed").get<uint64_t>();
    opts.seed_given = true;
  }
  if (config.contains("out") && opts.out_dir == "out")
    opts.out_dir = config.at("out").get<std::string>();

  const int horizon = config.value("T", 1000);
  const int runs = config.value("R", 10);
  const std::string learner_id = config.value("learner", std::string("exp3"));
  const std::string algo_id = config.value("algorithm", std::string("smart_greedy"));
  const auto algo = make_algorithm(algo_id);

  DynamicInvestmentInstance instance;
  if (config.contains("instance")) {
    // Stationary repetition of a static investment instance from a file.
    std::ifstream instance_file(config.at("instance").get<std::string>());
    if (!instance_file) {
      std::cerr << "cannot open instance file\n";
      return 2;
    }
    const StaticInvestmentInstance base =
        static_instance_from_json(Json::parse(instance_file));
    instance.horizon = horizon;
    instance.states = base.states;
    instance.investor = base.investor;
    instance.investments = base.investments;
    instance.envs.push_back(RoundEnv{base.dist, base.scenarios});
    instance.env_of_round.assign(horizon, 0);
    set_normalization_bounds(instance, *algo);
  } else {
    const std::string scenario = config.value("scenario", std::string("random"));
    if (scenario == "table1") {
      instance = gen_table1_dynamic(horizon, config.value("epsilon", 0.05));
    } else if (scenario == "prop1") {
      instance = gen_prop1_instance(config.value("arms", 4), horizon,
                                    run_seed(effective_seed(opts), 7));
    } else if (scenario == "random") {
      RandomInstanceParams params;
      params.horizon = horizon;
      if (config.contains("arms"))
        params.min_arms = params.max_arms = config.at("arms").get<int>();
      instance = gen_random_instance(params, effective_seed(opts));
    } else {
      std::cerr << "unknown scenario in config: " << scenario << "\n";
      return 2;
    }
  }

  const MonteCarloEstimates est = expected_quantities(
      instance, *algo, LearnerSpec{learner_id}, runs, effective_seed(opts),
      opts.jobs);

  fs::create_directories(opts.out_dir);
  auto learner = make_learner(learner_id, instance.num_arms(), instance.horizon);
  const RunTrace trace =
      simulate_run(instance, *algo, *learner, run_seed(effective_seed(opts), 0));
  atomic_write_file(fs::path(opts.out_dir) / "trace.csv", trace_to_csv(trace));

  Json summary = run_summary_to_json(trace, instance_digest(instance));
  summary["monte_carlo"] = Json{{"runs", est.runs},
                                {"welfare_mean", est.welfare_mean},
                                {"welfare_se", est.welfare_se},
                                {"regret_mean", est.regret_mean},
                                {"regret_se", est.regret_se}};
  summary["algorithm"] = algo_id;
  summary["learner"] = learner_id;
  atomic_write_file(fs::path(opts.out_dir) / "summary.json",
                    summary.dump(2) + "\n");
  std::cout << "welfare_mean " << format_double(est.welfare_mean) << " regret_mean "
            << format_double(est.regret_mean) << "\n";
  return 0;
}

int cmd_check_properties(const CommonOptions& opts, const std::string& algo_id,
                         const std::string& templates_path, int default_count) {
  const auto algo = make_algorithm(algo_id);

  std::vector<AllocationInstance> templates;
  uint64_t seed = effective_seed(opts);
  if (!templates_path.empty()) {
    std::ifstream in(templates_path);
    if (!in) {
      std::cerr << "cannot open templates file: " << templates_path << "\n";
      return 2;
    }
    Json doc;
    try {
      doc = Json::parse(in);
    } catch (const Json::parse_error& e) {
      std::cerr << "templates parse error: " << e.what() << "\n";
      return 2;
    }
    if (doc.is_array()) {
      for (const Json& item : doc)
        templates.push_back(to_allocation_instance(knapsack_from_json(item)));
    } else {
      default_count = doc.value("count", default_count);
      seed = doc.value("seed", seed);
    }
  }
  Rng rng(seed);
  if (templates.empty()) {
    KnapsackSampler sampler;
    sampler.min_items = 4;
    sampler.max_items = 4;
    for (int i = 0; i < default_count; ++i)
      templates.push_back(
          to_allocation_instance(sample_knapsack_instance(rng, sampler)));
  }

  std::vector<PropertyReport> monotone_reports, xcone_reports;
  for (size_t i = 0; i < templates.size(); ++i) {
    ValueGrid grid;
    for (int b = 0; b < templates[i].num_bidders(); ++b) {
      std::vector<double> points = {rng.uniform(0.0, 0.5), rng.uniform(0.5, 1.0),
                                    rng.uniform(1.0, 1.5), rng.uniform(1.5, 2.05)};
      std::sort(points.begin(), points.end());
      grid.per_bidder.push_back(std::move(points));
    }
    monotone_reports.push_back(check_weak_monotone(*algo, templates[i], grid, i));
    xcone_reports.push_back(check_xcone(*algo, templates[i], grid, i));
  }
  const PropertyReport monotone = merge_reports(monotone_reports);
  const PropertyReport xcone = merge_reports(xcone_reports);

  fs::create_directories(opts.out_dir);
  Json out = Json::array();
  out.push_back(property_report_to_json(monotone));
  out.push_back(property_report_to_json(xcone));
  atomic_write_file(fs::path(opts.out_dir) / ("properties_" + algo_id + ".json"),
                    out.dump(2) + "\n");

  Verdict verdict;
  verdict.check(monotone.pass, "weak_monotone for " + algo_id + " over " +
                                   std::to_string(templates.size()) + " templates (" +
                                   std::to_string(monotone.counterexamples.size()) +
                                   " counterexamples)");
  verdict.check(xcone.pass, "xcone for " + algo_id + " over " +
                                std::to_string(templates.size()) + " templates (" +
                                std::to_string(xcone.counterexamples.size()) +
                                " counterexamples)");
  return finish(opts, verdict);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Truthful-auction simulator with a learning investor"};
  app.require_subcommand(1);

  CommonOptions opts;

  // reproduce
  auto* reproduce = app.add_subcommand("reproduce", "Reproduce a bundled scenario");
  std::string scenario;
  reproduce->add_option("scenario", scenario, "table1|prop1|theorem3|prop2")
      ->required()
      ->check(CLI::IsMember({"table1", "prop1", "theorem3", "prop2"}));
  double epsilon = 0.05, beta = 0.5;
  int horizon = 0, runs = 0, arms = 4, instances = 100;
  reproduce->add_option("--epsilon", epsilon, "Scenario epsilon")
      ->check(CLI::Range(1e-9, 0.2499));
  reproduce->add_option("--T", horizon, "Rounds per run");
  reproduce->add_option("--runs", runs, "Monte-Carlo runs");
  reproduce->add_option("--arms", arms, "Investment arm count");
  reproduce->add_option("--instances", instances, "Random instance count");
  reproduce->add_option("--beta", beta, "Approximation ratio to check")
      ->check(CLI::Range(0.0, 1.0));
  add_common(reproduce, opts);

  // run
  auto* run = app.add_subcommand("run", "Run a configured experiment");
  std::string config_path;
  run->add_option("--config", config_path, "Experiment config JSON")->required();
  add_common(run, opts);

  // check-properties
  auto* check = app.add_subcommand("check-properties",
                                   "Run the monotonicity and externality checkers");
  std::string algo_id = "smart_greedy";
  std::string templates_path;
  int template_count = 100;
  check->add_option("--algo", algo_id, "Allocation algorithm id");
  check->add_option("--templates", templates_path,
                    "Templates JSON (array of knapsack instances, or {count, seed})");
  check->add_option("--count", template_count, "Generated template count");
  add_common(check, opts);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (reproduce->parsed()) {
      if (scenario == "table1")
        return cmd_reproduce_table1(opts, epsilon, horizon > 0 ? horizon : 200,
                                    runs > 0 ? runs : 20);
      if (scenario == "prop1")
        return cmd_reproduce_prop1(opts, arms, horizon > 0 ? horizon : 20000,
                                   runs > 0 ? runs : 100);
      if (scenario == "theorem3")
        return cmd_reproduce_theorem3(opts, instances, horizon > 0 ? horizon : 2000,
                                      runs > 0 ? runs : 50, beta);
      if (scenario == "prop2")
        return cmd_reproduce_prop2(opts, instances, horizon > 0 ? horizon : 2000,
                                   runs > 0 ? runs : 50, beta);
      std::cerr << "unknown scenario: " << scenario << "\n";
      return 2;
    }
    if (run->parsed()) return cmd_run(opts, config_path);
    if (check->parsed())
      return cmd_check_properties(opts, algo_id, templates_path, template_count);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
