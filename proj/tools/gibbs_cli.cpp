// Copyright 2026 The gibbs-tpa Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Command-line front end: estimate, trials, schedule, tau, lowerbound, suite.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <string>

#include <CLI11.hpp>

#include "gibbs/estimator.hpp"
#include "gibbs/harness.hpp"
#include "gibbs/io.hpp"
#include "gibbs/lowerbound.hpp"
#include "gibbs/models.hpp"
#include "gibbs/special.hpp"
#include "gibbs/suites.hpp"
#include "gibbs/tpa.hpp"

namespace {

struct Options {
  gibbs::ModelSpec model;
  std::string model_name = "synthetic";
  double eps = 0.5;
  std::string energy_case;
  std::uint64_t d = 0, r = 0;
  double gamma = 0, m = 0, lambda = 0;
  std::uint64_t trials = 1;
  std::uint64_t seed = 1;
  double tv_budget = -1;
  std::string corruption_mode = "uniform";
  std::uint64_t boost = 0;
  std::string out;
  std::string format = "ndjson";
  unsigned workers = 1;
  bool timing = false;
};

void add_model_flags(CLI::App* app, Options& o) {
  app->add_option("--model", o.model_name, "synthetic | ising | colorings | matchings | lowerbound")
      ->capture_default_str();
  app->add_option("--graph", o.model.graph_path, "edge-list file (`u v` per line, 0-indexed)");
  app->add_option("--vertices", o.model.vertices, "vertex count when isolated vertices trail the edge list");
  app->add_option("--colors", o.model.kcolors, "number of colors for --model colorings")->capture_default_str();
  app->add_option("--instance", o.model.instance_path, "instance file for --model synthetic");
  app->add_option("--preset", o.model.preset, "singleton | twolevel | twolevel-q8")->capture_default_str();
  app->add_option("--N", o.model.lb_N, "factor count for --model lowerbound")->capture_default_str();
  app->add_option("--m-grid", o.model.lb_m, "grid parameter for --model lowerbound")->capture_default_str();
  app->add_option_function<double>("--beta-min", [&o](double v) { o.model.beta_min = v; }, "lower inverse temperature");
  app->add_option_function<double>("--beta-max", [&o](double v) { o.model.beta_max = v; }, "upper inverse temperature");
  app->add_option_function<double>("--target-q", [&o](double v) { o.model.target_q = v; },
                                   "choose beta_max so that q equals this value");
}

void add_estimator_flags(CLI::App* app, Options& o) {
  app->add_option("--eps", o.eps, "relative accuracy epsilon")->capture_default_str();
  app->add_option("--case", o.energy_case, "I | II (default: detected from the support)");
  app->add_option("--d", o.d, "thinning stride d");
  app->add_option("--gamma", o.gamma, "Chebyshev failure budget gamma in (0, 0.25)");
  app->add_option("--r", o.r, "paired-product runs r");
  app->add_option("--m", o.m, "TPA rate m = k / d");
  app->add_option("--lambda", o.lambda, "case II split lambda in (0, 1)");
  app->add_option("--seed", o.seed, "master seed")->capture_default_str();
  app->add_option("--tv-budget", o.tv_budget, "corrupt each oracle draw with this probability");
  app->add_option("--corruption-mode", o.corruption_mode, "uniform | adversarial_max_h | adversarial_min_h")
      ->capture_default_str();
  app->add_option("--boost", o.boost, "median of this many (odd) runs per trial");
  app->add_option("--out", o.out, "output path (default stdout)");
  app->add_option("--format", o.format, "ndjson | csv")->capture_default_str();
  app->add_option("--workers", o.workers, "worker threads (0 = all cores)")->capture_default_str();
  app->add_flag("--timing", o.timing, "include wall_time per record (breaks byte-identical output)");
}

gibbs::ExperimentConfig experiment_from(Options& o) {
  o.model.kind = gibbs::parse_model_kind(o.model_name);
  gibbs::ExperimentConfig cfg;
  cfg.instance = std::make_shared<const gibbs::CountInstance>(gibbs::build_model(o.model));
  cfg.epsilon = o.eps;
  if (!o.energy_case.empty()) cfg.energy_case = gibbs::parse_energy_case(o.energy_case);
  if (o.d) cfg.overrides.d = o.d;
  if (o.r) cfg.overrides.r = o.r;
  if (o.gamma > 0) cfg.overrides.gamma = o.gamma;
  if (o.m > 0) cfg.overrides.m = o.m;
  if (o.lambda > 0) cfg.overrides.lambda = o.lambda;
  cfg.trials = o.trials;
  cfg.master_seed = o.seed;
  if (o.tv_budget >= 0)
    cfg.corruption = gibbs::Corruption{o.tv_budget, gibbs::parse_corruption_mode(o.corruption_mode)};
  if (o.boost) cfg.boost_t = o.boost;
  cfg.workers = o.workers;
  if (cfg.corruption)  // validates the budget
    (void)gibbs::Oracle(cfg.instance).with_corruption(cfg.corruption->tv_budget, cfg.corruption->mode);
  return cfg;
}

void emit(const Options& o, const std::string& text) {
  if (o.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(o.out);
  if (!f) throw gibbs::InvalidArgument("cannot write '" + o.out + "'");
  f << text;
}

std::string render(const Options& o, const gibbs::ExperimentResult& res) {
  if (o.format == "csv") return gibbs::write_csv(res, o.timing);
  if (o.format != "ndjson") throw gibbs::InvalidArgument("unknown format '" + o.format + "'");
  return gibbs::write_ndjson(res, o.timing);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Partition-function ratio estimation with TPA schedules and the paired product estimator"};
  app.require_subcommand(1);
  Options o;

  auto* est = app.add_subcommand("estimate", "single estimate of q = ln(Z(beta_min)/Z(beta_max))");
  add_model_flags(est, o);
  add_estimator_flags(est, o);

  auto* trials = app.add_subcommand("trials", "batch of seeded trials with summary statistics");
  add_model_flags(trials, o);
  add_estimator_flags(trials, o);
  trials->add_option("--trials", o.trials, "number of trials")->capture_default_str();

  auto* sched = app.add_subcommand("schedule", "generate one schedule and its delta diagnostics");
  add_model_flags(sched, o);
  add_estimator_flags(sched, o);

  auto* inst = app.add_subcommand("instance", "write the model's count instance");
  add_model_flags(inst, o);
  inst->add_option("--out", o.out, "output path (default stdout)");

  long tau_d = 0;
  double tau_rho_value = 75.0 / 76.0;
  auto* tau = app.add_subcommand("tau", "print tau_rho(d) and its minimizer");
  tau->add_option("--d", tau_d, "single d (default: 1, 2, 4, ..., 512)");
  tau->add_option("--rho", tau_rho_value, "success target rho")->capture_default_str();

  double q_bar = 0, c2 = 1.8;
  std::uint64_t lb_n = 0;
  std::string lb_instance_out;
  auto* lb = app.add_subcommand("lowerbound", "build an adversarial instance and verify its properties");
  lb->add_option("--N", o.model.lb_N, "number of product factors")->capture_default_str();
  lb->add_option("--m-grid", o.model.lb_m, "grid parameter m")->capture_default_str();
  lb->add_option("--q-bar", q_bar, "build from a target q instead of (N, m)");
  lb->add_option("--n", lb_n, "integer energy bound when using --q-bar");
  lb->add_option("--c2", c2, "grid constant, > sqrt(2 / ln 2)")->capture_default_str();
  lb->add_option("--instance-out", lb_instance_out, "also write the expanded instance here");
  lb->add_option("--out", o.out, "output path (default stdout)");

  std::string suite_name;
  auto* suite = app.add_subcommand("suite", "run a statistical or structural check suite");
  suite->add_option("name", suite_name, "distribution | accounting | hardness | tau_table")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*est || *trials) {
      if (*est) o.trials = 1;
      emit(o, render(o, gibbs::run_trials(experiment_from(o))));
    } else if (*sched) {
      auto cfg = experiment_from(o);
      const auto est_cfg = gibbs::resolve_estimator_config(cfg);
      gibbs::Rng rng = gibbs::make_stream(cfg.master_seed, 0);
      gibbs::Oracle oracle(cfg.instance);
      const auto s = gibbs::generate_schedule(oracle, est_cfg.k, est_cfg.d, rng);
      const auto delta = gibbs::schedule_delta(*cfg.instance, s);
      std::string text = gibbs::write_schedule(s);
      text += "# l = " + std::to_string(s.length()) + "\n";
      text += "# oracle_calls = " + std::to_string(oracle.call_count()) + "\n";
      text += "# delta = " + gibbs::format_double(delta.delta) + "\n";
      text += "# delta_threshold = " + gibbs::format_double(est_cfg.delta_threshold()) + "\n";
      text += "# delta_ok = " + std::string(delta.delta <= est_cfg.delta_threshold() ? "true" : "false") + "\n";
      for (std::size_t i = 0; i < delta.per_interval.size(); ++i)
        text += "# delta_" + std::to_string(i) + " = " + gibbs::format_double(delta.per_interval[i]) + "\n";
      emit(o, text);
    } else if (*inst) {
      o.model.kind = gibbs::parse_model_kind(o.model_name);
      emit(o, gibbs::write_instance(gibbs::build_model(o.model)) + "\n");
    } else if (*tau) {
      std::vector<long> ds{1, 2, 4, 8, 16, 32, 64, 128, 256, 512};
      if (tau_d > 0) ds = {tau_d};
      std::printf("%6s %12s %12s\n", "d", "tau_rho(d)", "argmin_tau");
      for (long d : ds) {
        const auto t = gibbs::tau_rho(d, tau_rho_value);
        std::printf("%6ld %12.6f %12.6f\n", d, t.value, t.argmin_tau);
      }
    } else if (*lb) {
      const auto inst_lb = q_bar > 0 ? gibbs::build_lower_bound_for_q(q_bar, lb_n, c2)
                                     : gibbs::build_lower_bound(o.model.lb_N, o.model.lb_m);
      const auto rep = gibbs::verify_hardness(inst_lb);
      std::string text = "{\"N\": " + std::to_string(rep.N) + ", \"m\": " + std::to_string(rep.m_grid) +
                         ", \"beta_max\": " + gibbs::format_double(inst_lb.beta_max) +
                         ", \"q_star\": " + gibbs::format_double(rep.q_star) +
                         ", \"q_lower\": " + gibbs::format_double(rep.q_lower) +
                         ", \"q_upper\": " + gibbs::format_double(rep.q_upper) +
                         ", \"sensitivity\": " + gibbs::format_double(rep.sensitivity) +
                         ", \"kappa_bound\": " + gibbs::format_double(rep.kappa_bound) +
                         ", \"kappa_numeric\": " + gibbs::format_double(rep.kappa_numeric) +
                         ", \"ratio\": " + gibbs::format_double(rep.ratio) +
                         ", \"threshold\": " + gibbs::format_double(rep.threshold) + ", \"checks\": [";
      for (std::size_t i = 0; i < rep.checks.size(); ++i) {
        const auto& c = rep.checks[i];
        text += std::string(i ? ", " : "") + "{\"name\": \"" + c.name + "\", \"observed\": " +
                gibbs::format_double(c.observed) + ", \"bound\": " + gibbs::format_double(c.bound) +
                ", \"pass\": " + (c.pass ? "true" : "false") + "}";
      }
      text += std::string("], \"pass\": ") + (rep.pass() ? "true" : "false") + "}\n";
      emit(o, text);
      if (!lb_instance_out.empty()) {
        std::ofstream f(lb_instance_out);
        f << gibbs::write_instance(inst_lb.expanded) << "\n";
      }
      return rep.pass() ? 0 : 1;
    } else if (*suite) {
      const auto rep = gibbs::run_suite(suite_name);
      std::cout << gibbs::format_report(rep);
      return rep.pass() ? 0 : 1;
    }
  } catch (const gibbs::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
