//
// Copyright 2026 The dpsgd-bounds Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

#ifndef DPSGD_CLI_HPP_
#define DPSGD_CLI_HPP_

#include <cstdlib>
#include <fstream>
#include <memory>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "dpsgd/accountant.hpp"
#include "dpsgd/csv.hpp"
#include "dpsgd/errors.hpp"
#include "dpsgd/mia.hpp"
#include "dpsgd/optimizer.hpp"
#include "dpsgd/problems.hpp"
#include "dpsgd/utility.hpp"

// Command-line surface. Subcommands: bound, curve, calibrate, recommend,
// train, mia. Global flags: --config (INI file, sections per subcommand,
// command-line flags win), --out (CSV destination, stdout by default),
// --seed, --quiet. The DPSGD_BOUNDS_CONFIG_DIR environment variable names
// a directory searched for relative --config paths.
//
// Exit codes: 0 success, 1 runtime failure (e.g. unreachable calibration
// target), 2 validation failure (bad flags, bad config, bad parameters).

namespace dpsgd::cli {

namespace detail {

struct MechFlags {
  std::int64_t n = 1, b = 1, t = 0, dim = 1;
  double eta = 0.0, clip_c = 0.0, sigma = 0.0, smooth_l = 0.0;
  double diameter = 0.0;
  CLI::Option* diameter_opt = nullptr;

  MechanismConfig to_config() const {
    MechanismConfig cfg;
    cfg.n = n;
    cfg.b = b;
    cfg.eta = eta;
    cfg.clip_c = clip_c;
    cfg.sigma_dp = sigma;
    cfg.t_iters = t;
    cfg.smooth_l = smooth_l;
    cfg.dim = dim;
    if (diameter_opt != nullptr && diameter_opt->count() > 0)
      cfg.diameter_d = diameter;
    return cfg;
  }
};

inline void add_mech_flags(CLI::App* sub, MechFlags* m,
                           bool with_sigma = true) {
  sub->add_option("--n", m->n, "Dataset size");
  sub->add_option("--b", m->b, "Batch size");
  sub->add_option("--eta", m->eta, "Step size");
  sub->add_option("--C", m->clip_c, "Gradient clip norm");
  m->diameter_opt =
      sub->add_option("--D", m->diameter, "Domain radius (omit for unbounded)");
  if (with_sigma) sub->add_option("--sigma", m->sigma, "Noise scale sigma_dp");
  sub->add_option("--T", m->t, "Iteration count");
  sub->add_option("--L", m->smooth_l, "Smoothness constant");
  sub->add_option("--dim", m->dim, "Model dimension");
}

struct GridFlags {
  double lo = 1.1, hi = 64.0;
  std::size_t size = 50;
};

inline void add_grid_flags(CLI::App* sub, GridFlags* g) {
  sub->add_option("--alpha-grid-min", g->lo, "Smallest alpha in the DP grid");
  sub->add_option("--alpha-grid-max", g->hi, "Largest alpha in the DP grid");
  sub->add_option("--alpha-grid-size", g->size, "Grid size");
}

struct BaselineFlags {
  double lipschitz_m = 0.0, weak_convex_m = 0.0, multiplier = 1.0;

  BaselineParams to_params() const {
    BaselineParams bp;
    bp.lipschitz_m = lipschitz_m;
    bp.weak_convex_m = weak_convex_m;
    bp.multiplier = multiplier;
    return bp;
  }
};

inline void add_baseline_flags(CLI::App* sub, BaselineFlags* b) {
  sub->add_option("--M", b->lipschitz_m,
                  "Lipschitz constant for the feldman/altschuler baselines");
  sub->add_option("--m", b->weak_convex_m,
                  "Weak-convexity constant for the kong baseline");
  sub->add_option("--multiplier", b->multiplier,
                  "Big-O multiplier applied to baseline bounds");
}

struct ProblemFlags {
  std::string kind = "quadratic";
  std::int64_t dim = 2, n = 64;
  std::uint64_t seed = 0;
  double mu = 0.5, smooth_l = 1.0, spread = 1.0;
  double lambda = 1e-3, flip = 0.1, scale = 4.0;
  std::string config_path;

  ProblemSpec build() const {
    if (!config_path.empty()) {
      std::ifstream in(config_path);
      if (!in) throw config_error("cannot open problem config " + config_path);
      return load_problem_config(in);
    }
    if (kind == "quadratic") {
      MakeQuadraticOptions opt;
      opt.dim = dim;
      opt.n = n;
      opt.seed = seed;
      opt.strong_mu = mu;
      opt.smooth_l = smooth_l;
      opt.minimizer_spread = spread;
      return ProblemSpec::quadratic(opt);
    }
    if (kind == "logistic") {
      MakeLogisticOptions opt;
      opt.dim = dim;
      opt.n = n;
      opt.seed = seed;
      opt.ridge = lambda;
      opt.flip_prob = flip;
      opt.weight_scale = scale;
      return ProblemSpec::logistic(opt);
    }
    throw config_error("unknown problem kind: " + kind);
  }
};

inline void add_problem_flags(CLI::App* sub, ProblemFlags* p) {
  sub->add_option("--problem-kind", p->kind, "quadratic or logistic");
  sub->add_option("--problem-dim", p->dim, "Problem dimension");
  sub->add_option("--problem-n", p->n, "Problem sample count");
  sub->add_option("--problem-seed", p->seed, "Problem generation seed");
  sub->add_option("--mu", p->mu, "Strong convexity target (quadratic)");
  sub->add_option("--L-target", p->smooth_l, "Smoothness target (quadratic)");
  sub->add_option("--spread", p->spread, "Minimizer scatter (quadratic)");
  sub->add_option("--lambda", p->lambda, "Ridge coefficient (logistic)");
  sub->add_option("--flip", p->flip, "Label flip probability (logistic)");
  sub->add_option("--scale", p->scale, "Hyperplane scale (logistic)");
  sub->add_option("--problem-config", p->config_path,
                  "Problem definition file (overrides the flags above)");
}

// Writes CSV to --out when set, otherwise to the primary stream.
class CsvSink {
 public:
  CsvSink(const std::string& path, std::ostream& fallback) {
    if (!path.empty()) {
      file_ = std::make_unique<std::ofstream>(path);
      if (!*file_) throw config_error("cannot open output file " + path);
      os_ = file_.get();
    } else {
      os_ = &fallback;
    }
  }
  std::ostream& stream() { return *os_; }

 private:
  std::unique_ptr<std::ofstream> file_;
  std::ostream* os_ = nullptr;
};

inline std::string bool_str(bool v) { return v ? "true" : "false"; }

}  // namespace detail

inline int run_cli(std::vector<std::string> args, std::ostream& out,
                   std::ostream& err) {
  CLI::App app{"Final-iterate RDP accounting and DPSGD experiments"};
  app.require_subcommand(1);
  app.allow_config_extras(CLI::config_extras_mode::error);

  std::string out_path;
  std::uint64_t seed = 0;
  bool quiet = false;
  app.add_option("--out", out_path, "Write CSV output to this path");
  app.add_option("--seed", seed, "Seed for randomized subcommands");
  app.add_flag("--quiet", quiet, "Suppress informational messages");
  CLI::Option* config_opt =
      app.set_config("--config", "", "Read options from an INI file");
  if (const char* dir = std::getenv("DPSGD_BOUNDS_CONFIG_DIR");
      dir != nullptr && *dir != '\0') {
    config_opt->transform(CLI::FileOnDefaultPath(dir));
  }

  // ---- bound ----
  CLI::App* bound = app.add_subcommand(
      "bound", "Evaluate one privacy bound at a single order");
  detail::MechFlags bound_mech;
  detail::BaselineFlags bound_base;
  detail::GridFlags bound_grid;
  std::string bound_family = "gc";
  std::string bound_mode = "general";
  double bound_alpha = 0.0;
  double bound_beta = 0.0;
  double bound_delta = 0.0;
  bool bound_machine = false;
  bound->add_option("--family", bound_family,
                    "gc|dc|trivial|feldman|altschuler|kong|composition");
  bound->add_option("--alpha", bound_alpha, "Renyi order")->required();
  CLI::Option* beta_opt =
      bound->add_option("--beta", bound_beta, "Noise split (default: auto)");
  bound->add_option("--mode", bound_mode, "general or strengthened");
  CLI::Option* bound_delta_opt = bound->add_option(
      "--delta", bound_delta, "Also report (eps, delta)-DP via the grid");
  bound->add_flag("--machine", bound_machine, "Single-line key=value output");
  detail::add_mech_flags(bound, &bound_mech);
  detail::add_baseline_flags(bound, &bound_base);
  detail::add_grid_flags(bound, &bound_grid);

  // ---- curve ----
  CLI::App* curve = app.add_subcommand(
      "curve", "Sweep T and emit one CSV column per bound family");
  detail::MechFlags curve_mech;
  detail::BaselineFlags curve_base;
  std::vector<std::string> curve_families;
  std::string curve_mode = "general";
  double curve_alpha = 1.1;
  std::int64_t curve_t_from = 0, curve_t_to = 0, curve_t_step = 1;
  curve->add_option("--family", curve_families,
                    "Bound family column (repeatable)");
  curve->add_option("--alpha", curve_alpha, "Renyi order");
  curve->add_option("--mode", curve_mode, "general or strengthened");
  curve->add_option("--T-from", curve_t_from, "First iteration count");
  curve->add_option("--T-to", curve_t_to, "Last iteration count")->required();
  curve->add_option("--T-step", curve_t_step, "Sweep stride");
  detail::add_mech_flags(curve, &curve_mech);
  detail::add_baseline_flags(curve, &curve_base);

  // ---- calibrate ----
  CLI::App* calibrate = app.add_subcommand(
      "calibrate", "Smallest sigma_dp meeting a DP target");
  detail::MechFlags cal_mech;
  detail::BaselineFlags cal_base;
  detail::GridFlags cal_grid;
  std::string cal_family = "gc";
  std::string cal_mode = "general";
  double cal_target = 0.0, cal_delta = 1e-5;
  calibrate->add_option("--family", cal_family, "Bound family to invert");
  calibrate->add_option("--target-eps", cal_target, "Target epsilon (DP)")
      ->required();
  calibrate->add_option("--delta", cal_delta, "Target delta");
  calibrate->add_option("--mode", cal_mode, "general or strengthened");
  detail::add_mech_flags(calibrate, &cal_mech, /*with_sigma=*/false);
  detail::add_baseline_flags(calibrate, &cal_base);
  detail::add_grid_flags(calibrate, &cal_grid);

  // ---- recommend ----
  CLI::App* recommend_cmd = app.add_subcommand(
      "recommend", "Regime-based (C, eta, T) recommendation");
  detail::MechFlags rec_mech;
  std::string rec_target = "gc";
  double rec_eps = 0.0, rec_delta = 1e-5, rec_mu = 0.0, rec_sigma_sgd = 0.0;
  recommend_cmd->add_option("--target", rec_target, "gc or dc");
  recommend_cmd->add_option("--eps", rec_eps, "Privacy budget epsilon (DP)")
      ->required();
  recommend_cmd->add_option("--delta", rec_delta, "Privacy budget delta");
  recommend_cmd->add_option("--sigma-sgd", rec_sigma_sgd,
                            "Per-sample gradient deviation");
  recommend_cmd->add_option("--mu", rec_mu, "Strong convexity constant (dc)");
  detail::add_mech_flags(recommend_cmd, &rec_mech);

  // ---- train ----
  CLI::App* train_cmd =
      app.add_subcommand("train", "Run DPSGD and emit the trace CSV");
  detail::MechFlags train_mech;
  detail::ProblemFlags train_problem;
  std::int64_t train_record_every = 1;
  std::string train_sampling = "uniform";
  detail::add_mech_flags(train_cmd, &train_mech);
  detail::add_problem_flags(train_cmd, &train_problem);
  train_cmd->add_option("--record-every", train_record_every,
                        "Trace recording stride");
  train_cmd->add_option("--sampling", train_sampling, "uniform or poisson");

  // ---- mia ----
  CLI::App* mia_cmd = app.add_subcommand(
      "mia", "Membership-inference experiment, CSV of eps_hat per epoch");
  detail::MechFlags mia_mech;
  detail::ProblemFlags mia_problem;
  AttackConfig mia_attack;
  CLI::Option* mia_problem_n_opt = nullptr;
  mia_problem.kind = "logistic";
  mia_problem.dim = 16;
  mia_cmd->add_option("--pool", mia_attack.pool_size,
                      "Member/non-member pool size");
  mia_cmd->add_option("--shadows", mia_attack.n_shadows, "Shadow model count");
  mia_cmd->add_option("--trials", mia_attack.trials, "Monte Carlo trials");
  mia_cmd->add_option("--epochs", mia_attack.epochs, "Training epochs");
  mia_cmd->add_option("--delta", mia_attack.delta, "Delta in eps_hat");
  mia_cmd->add_flag("--shuffle-labels", mia_attack.shuffle_labels,
                    "Null experiment: scramble membership before scoring");
  detail::add_mech_flags(mia_cmd, &mia_mech);
  detail::add_problem_flags(mia_cmd, &mia_problem);
  mia_problem_n_opt = mia_cmd->get_option("--problem-n");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(std::move(reversed));
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }

  try {
    const auto make_grid = [](const detail::GridFlags& g) {
      return log_spaced_alpha_grid(g.lo, g.hi, g.size);
    };

    if (app.got_subcommand(bound)) {
      MechanismConfig cfg = bound_mech.to_config();
      BaselineParams bp = bound_base.to_params();
      const BoundFamily family = parse_family(bound_family);
      const RdpMode mode = bound_mode == "strengthened"
                               ? RdpMode::strengthened
                               : RdpMode::general;
      RdpResult r;
      if (family == BoundFamily::gc_linear || family == BoundFamily::dc) {
        RdpQuery q;
        q.alpha = bound_alpha;
        q.mode = mode;
        if (beta_opt->count() > 0) q.beta = bound_beta;
        r = family == BoundFamily::gc_linear ? gc_bound(cfg, q)
                                             : dc_bound(cfg, q);
      } else {
        r = evaluate_bound(cfg, family, bound_alpha, mode, &bp);
      }
      std::optional<BestDp> dp;
      if (bound_delta_opt->count() > 0) {
        const auto grid = make_grid(bound_grid);
        dp = best_dp(cfg, family, bound_delta, grid, mode, &bp);
      }
      if (bound_machine) {
        out << "epsilon_rdp=" << fmt12(r.epsilon)
            << " family=" << to_string(r.family);
        if (r.regime) out << " regime=" << to_string(*r.regime);
        out << " beta_used=" << fmt12(r.beta_used)
            << " constraints_ok=" << (r.constraints_ok ? 1 : 0);
        if (dp) {
          out << " epsilon_dp=" << fmt12(dp->epsilon_dp)
              << " alpha_dp=" << fmt12(dp->alpha);
        }
        out << "\n";
      } else {
        out << "epsilon_rdp = " << fmt12(r.epsilon) << "\n";
        out << "family = " << to_string(r.family) << "\n";
        if (r.regime) out << "regime = " << to_string(*r.regime) << "\n";
        out << "beta_used = " << fmt12(r.beta_used) << "\n";
        out << "constraints_ok = " << detail::bool_str(r.constraints_ok)
            << "\n";
        if (dp) {
          out << "epsilon_dp = " << fmt12(dp->epsilon_dp) << " (alpha = "
              << fmt12(dp->alpha) << ", delta = " << fmt12(bound_delta)
              << ")\n";
        }
      }
      return 0;
    }

    if (app.got_subcommand(curve)) {
      if (curve_t_step < 1) throw parameter_error("--T-step must be >= 1");
      if (curve_t_to < curve_t_from)
        throw parameter_error("--T-to must be >= --T-from");
      MechanismConfig cfg = curve_mech.to_config();
      BaselineParams bp = curve_base.to_params();
      const RdpMode mode = curve_mode == "strengthened"
                               ? RdpMode::strengthened
                               : RdpMode::general;
      std::vector<BoundFamily> families;
      for (const auto& name : curve_families)
        families.push_back(parse_family(name));

      detail::CsvSink sink(out_path, out);
      std::vector<std::string> header{"T"};
      for (const auto& name : curve_families) header.push_back(name);
      write_csv_row(sink.stream(), header);
      if (families.empty()) return 0;  // header-only sweep
      for (std::int64_t t = curve_t_from; t <= curve_t_to;
           t += curve_t_step) {
        cfg.t_iters = t;
        std::vector<std::string> row{std::to_string(t)};
        for (const BoundFamily family : families) {
          const RdpResult r =
              evaluate_bound(cfg, family, curve_alpha, mode, &bp);
          row.push_back(fmt12(r.epsilon));
        }
        write_csv_row(sink.stream(), row);
      }
      return 0;
    }

    if (app.got_subcommand(calibrate)) {
      MechanismConfig cfg = cal_mech.to_config();
      BaselineParams bp = cal_base.to_params();
      const BoundFamily family = parse_family(cal_family);
      const RdpMode mode = cal_mode == "strengthened" ? RdpMode::strengthened
                                                      : RdpMode::general;
      const auto grid = make_grid(cal_grid);
      const double sigma =
          calibrate_sigma(cfg, family, cal_target, cal_delta, grid, mode, &bp);
      cfg.sigma_dp = sigma;
      const BestDp achieved = best_dp(cfg, family, cal_delta, grid, mode, &bp);
      detail::CsvSink sink(out_path, out);
      write_csv_row(sink.stream(),
                    {"family", "target_eps_dp", "delta", "sigma_dp", "alpha",
                     "epsilon_dp"});
      write_csv_row(sink.stream(),
                    {to_string(family), fmt12(cal_target), fmt12(cal_delta),
                     fmt12(sigma), fmt12(achieved.alpha),
                     fmt12(achieved.epsilon_dp)});
      if (!quiet)
        err << "calibrated sigma_dp = " << fmt12(sigma) << " (epsilon_dp = "
            << fmt12(achieved.epsilon_dp) << ")\n";
      return 0;
    }

    if (app.got_subcommand(recommend_cmd)) {
      UtilityQuery q;
      q.mech = rec_mech.to_config();
      q.strong_mu = rec_mu;
      q.sgd_sigma = rec_sigma_sgd;
      q.target = rec_target == "dc" ? UtilityTarget::dc_optimality_gap
                                    : UtilityTarget::gc_gradient_norm;
      if (rec_target != "dc" && rec_target != "gc")
        throw parameter_error("--target must be gc or dc");
      const Recommendation rec = recommend(q, rec_eps, rec_delta);
      detail::CsvSink sink(out_path, out);
      write_csv_row(sink.stream(),
                    {"regime", "eta", "clip_c", "t_iters",
                     "predicted_utility"});
      write_csv_row(sink.stream(),
                    {to_string(rec.regime), fmt12(rec.eta), fmt12(rec.clip_c),
                     fmt12(rec.t_iters), fmt12(rec.predicted_utility)});
      if (!quiet)
        err << "regime " << to_string(rec.regime) << ": C = "
            << fmt12(rec.clip_c) << ", eta = " << fmt12(rec.eta)
            << ", T = " << fmt12(rec.t_iters) << "\n";
      return 0;
    }

    if (app.got_subcommand(train_cmd)) {
      const ProblemSpec problem = train_problem.build();
      TrainConfig cfg;
      cfg.mech = train_mech.to_config();
      cfg.mech.n = problem.n_samples();
      cfg.mech.dim = problem.dim();
      cfg.seed = seed;
      cfg.record_every = train_record_every;
      if (train_sampling == "poisson") {
        cfg.sampling = SamplingScheme::poisson;
      } else if (train_sampling != "uniform") {
        throw parameter_error("--sampling must be uniform or poisson");
      }
      const TrainTrace trace = train(problem, cfg);
      detail::CsvSink sink(out_path, out);
      trace.write_csv(sink.stream());
      if (!quiet)
        err << "final loss_gap = " << fmt12(trace.final_record().loss_gap)
            << ", min loss_gap = " << fmt12(trace.min_loss_gap()) << "\n";
      return 0;
    }

    if (app.got_subcommand(mia_cmd)) {
      // Default the pool problem to exactly the sample budget the
      // disjoint pools need.
      if (mia_problem_n_opt->count() == 0 && mia_problem.config_path.empty()) {
        mia_problem.n =
            (1 + mia_attack.n_shadows) * 2 * mia_attack.pool_size;
      }
      mia_problem.seed = seed;
      const ProblemSpec problem = mia_problem.build();
      TrainConfig recipe;
      recipe.mech = mia_mech.to_config();
      recipe.mech.n = mia_attack.pool_size;
      recipe.mech.dim = problem.dim();
      recipe.seed = seed;
      const AttackReport report = run_attack(problem, recipe, mia_attack);
      detail::CsvSink sink(out_path, out);
      report.write_csv(sink.stream());
      if (!quiet)
        err << "final-epoch eps_hat median = "
            << fmt12(report.eps_median.back()) << "\n";
      return 0;
    }
  } catch (const parameter_error& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const config_error& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

}  // namespace dpsgd::cli

#endif  // DPSGD_CLI_HPP_
