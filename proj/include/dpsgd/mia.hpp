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

#ifndef DPSGD_MIA_HPP_
#define DPSGD_MIA_HPP_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <ostream>
#include <string>
#include <vector>

#include "dpsgd/csv.hpp"
#include "dpsgd/errors.hpp"
#include "dpsgd/optimizer.hpp"
#include "dpsgd/problems.hpp"
#include "dpsgd/random.hpp"

// Desk-scale membership-inference experiment. The target is trained with
// DPSGD on a member pool; at each epoch every member and non-member is
// scored by its per-sample loss and classified against a threshold
// calibrated on shadow runs (same recipe, disjoint data). The attack's
// false positive and false negative rates convert into an empirical
// privacy estimate eps_hat, a lower-bound companion to the theoretical
// accountant values.

namespace dpsgd {

// eps_hat = max{ log((1-delta-FPR)/FNR), log((1-delta-FNR)/FPR) },
// clamped below at 0. A zero denominator with a positive numerator is a
// perfect attack direction and yields the +infinity sentinel; a
// non-positive numerator removes its branch (worse than chance).
inline double mia_epsilon(double fpr, double fnr, double delta) {
  if (!(fpr >= 0.0) || !(fpr <= 1.0))
    throw parameter_error("fpr must lie in [0, 1]");
  if (!(fnr >= 0.0) || !(fnr <= 1.0))
    throw parameter_error("fnr must lie in [0, 1]");
  if (!(delta >= 0.0) || !(delta < 1.0))
    throw parameter_error("delta must lie in [0, 1)");
  const auto branch = [](double num, double den) {
    if (num <= 0.0) return -std::numeric_limits<double>::infinity();
    if (den == 0.0) return std::numeric_limits<double>::infinity();
    return std::log(num / den);
  };
  const double value = std::max(branch(1.0 - delta - fpr, fnr),
                                branch(1.0 - delta - fnr, fpr));
  return std::max(0.0, value);
}

struct AttackConfig {
  std::int64_t pool_size = 256;  // members == non-members == pool_size
  std::int64_t n_shadows = 2;
  std::int64_t trials = 10;
  std::int64_t epochs = 20;
  double delta = 1e-5;
  bool shuffle_labels = false;  // null experiment: scramble membership
  std::string attack_kind = "loss_threshold";
};

struct EpochStat {
  std::int64_t epoch = 0;
  double fpr = 0.0;
  double fnr = 0.0;
  double eps_hat = 0.0;
};

struct AttackReport {
  std::vector<std::int64_t> epochs;
  std::vector<double> fpr_median;
  std::vector<double> fnr_median;
  std::vector<double> eps_median;
  std::vector<double> eps_lo95;
  std::vector<double> eps_hi95;
  std::vector<std::vector<EpochStat>> trials;  // raw per-trial series
  double delta = 0.0;
  std::int64_t trial_count = 0;
  std::string attack_kind;
  std::int64_t steps_per_epoch = 0;

  // Columns: epoch, fpr, fnr, eps_hat_median, eps_hat_lo95, eps_hat_hi95.
  void write_csv(std::ostream& os) const {
    write_csv_row(os, {"epoch", "fpr", "fnr", "eps_hat_median",
                       "eps_hat_lo95", "eps_hat_hi95"});
    for (std::size_t i = 0; i < epochs.size(); ++i) {
      write_csv_row(os, {std::to_string(epochs[i]), fmt12(fpr_median[i]),
                         fmt12(fnr_median[i]), fmt12(eps_median[i]),
                         fmt12(eps_lo95[i]), fmt12(eps_hi95[i])});
    }
  }
};

namespace detail {

inline double quantile(std::vector<double> v, double p) {
  std::sort(v.begin(), v.end());
  const double pos = p * static_cast<double>(v.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = static_cast<std::size_t>(std::ceil(pos));
  const double frac = pos - std::floor(pos);
  return v[lo] + frac * (v[hi] - v[lo]);
}

inline double median(std::vector<double> v) { return quantile(std::move(v), 0.5); }

// Threshold maximizing accuracy of "member iff loss <= tau" over the
// calibration scores. Candidates are midpoints between adjacent distinct
// scores plus the two outer extremes.
inline double calibrate_threshold(std::vector<double> member_losses,
                                  std::vector<double> outsider_losses) {
  std::vector<std::pair<double, int>> scored;  // (loss, is_member)
  scored.reserve(member_losses.size() + outsider_losses.size());
  for (double v : member_losses) scored.emplace_back(v, 1);
  for (double v : outsider_losses) scored.emplace_back(v, 0);
  std::sort(scored.begin(), scored.end());

  const auto n_out = static_cast<std::int64_t>(outsider_losses.size());
  // Sweep tau from -inf upward; below every score, all predicted
  // non-member: correct on outsiders only.
  std::int64_t members_below = 0, outsiders_below = 0;
  std::int64_t best_correct = n_out;
  double best_tau = scored.front().first - 1.0;
  for (std::size_t i = 0; i < scored.size(); ++i) {
    if (scored[i].second == 1) {
      ++members_below;
    } else {
      ++outsiders_below;
    }
    if (i + 1 < scored.size() && scored[i + 1].first == scored[i].first)
      continue;
    const std::int64_t correct = members_below + (n_out - outsiders_below);
    if (correct > best_correct) {
      best_correct = correct;
      best_tau = (i + 1 < scored.size())
                     ? 0.5 * (scored[i].first + scored[i + 1].first)
                     : scored[i].first + 1.0;
    }
  }
  return best_tau;
}

}  // namespace detail

// Runs the full attack protocol on disjoint pools drawn from the given
// problem. The recipe's mechanism is reused with n set to the pool size
// and T to epochs * ceil(pool/b). Pools must not overlap: the problem
// needs (1 + n_shadows) * 2 * pool_size samples.
inline AttackReport run_attack(const ProblemSpec& problem,
                               const TrainConfig& recipe,
                               const AttackConfig& acfg) {
  if (acfg.pool_size < 2) throw config_error("pool_size must be >= 2");
  if (acfg.n_shadows < 1) throw config_error("n_shadows must be >= 1");
  if (acfg.trials < 1) throw config_error("trials must be >= 1");
  if (acfg.epochs < 1) throw config_error("epochs must be >= 1");
  if (!(acfg.delta >= 0.0) || !(acfg.delta < 1.0))
    throw config_error("delta must lie in [0, 1)");
  const std::int64_t needed = (1 + acfg.n_shadows) * 2 * acfg.pool_size;
  if (needed > problem.n_samples()) {
    throw config_error("attack needs " + std::to_string(needed) +
                       " samples for disjoint pools, problem has " +
                       std::to_string(problem.n_samples()));
  }

  TrainConfig cfg = recipe;
  cfg.mech.n = acfg.pool_size;
  if (cfg.mech.b > cfg.mech.n)
    throw config_error("batch size exceeds pool size");
  const std::int64_t steps_per_epoch =
      (acfg.pool_size + cfg.mech.b - 1) / cfg.mech.b;
  cfg.mech.t_iters = acfg.epochs * steps_per_epoch;

  AttackReport report;
  report.delta = acfg.delta;
  report.trial_count = acfg.trials;
  report.attack_kind = acfg.attack_kind;
  report.steps_per_epoch = steps_per_epoch;
  for (std::int64_t e = 1; e <= acfg.epochs; ++e) report.epochs.push_back(e);
  report.trials.resize(static_cast<std::size_t>(acfg.trials));

  struct Model {
    ProblemSpec spec;
    TrainState state;
    std::vector<std::int64_t> members;
    std::vector<std::int64_t> outsiders;
  };

  for (std::int64_t trial = 0; trial < acfg.trials; ++trial) {
    // Trials are independent; each owns a generator seeded seed + trial.
    Prng trial_rng(recipe.seed + static_cast<std::uint64_t>(trial));
    std::vector<std::int64_t> perm(problem.n_samples());
    for (std::int64_t i = 0; i < problem.n_samples(); ++i) perm[i] = i;
    trial_rng.shuffle(&perm);

    std::vector<Model> models;
    std::size_t cursor = 0;
    const auto pool = static_cast<std::size_t>(acfg.pool_size);
    for (std::int64_t mdl = 0; mdl < 1 + acfg.n_shadows; ++mdl) {
      std::vector<std::int64_t> members(perm.begin() + cursor,
                                        perm.begin() + cursor + pool);
      cursor += pool;
      std::vector<std::int64_t> outsiders(perm.begin() + cursor,
                                          perm.begin() + cursor + pool);
      cursor += pool;
      ProblemSpec spec = problem.subset(members);
      TrainState state(problem.dim(), trial_rng.next_u64());
      models.push_back(Model{std::move(spec), std::move(state),
                             std::move(members), std::move(outsiders)});
    }

    TrainConfig model_cfg = cfg;
    auto& trial_stats = report.trials[static_cast<std::size_t>(trial)];
    trial_stats.reserve(static_cast<std::size_t>(acfg.epochs));

    const auto scores_of = [&](const Model& m,
                               const std::vector<std::int64_t>& idx) {
      std::vector<double> out(idx.size());
      for (std::size_t i = 0; i < idx.size(); ++i)
        out[i] = problem.sample_loss(m.state.theta, idx[i]);
      return out;
    };

    for (std::int64_t epoch = 1; epoch <= acfg.epochs; ++epoch) {
      for (auto& m : models) {
        for (std::int64_t s = 0; s < steps_per_epoch; ++s)
          step(&m.state, m.spec, model_cfg);
      }
      // Threshold from the pooled shadow scores of this epoch.
      std::vector<double> shadow_members, shadow_outsiders;
      for (std::size_t mdl = 1; mdl < models.size(); ++mdl) {
        const auto ms = scores_of(models[mdl], models[mdl].members);
        const auto os = scores_of(models[mdl], models[mdl].outsiders);
        shadow_members.insert(shadow_members.end(), ms.begin(), ms.end());
        shadow_outsiders.insert(shadow_outsiders.end(), os.begin(), os.end());
      }
      const double tau =
          detail::calibrate_threshold(shadow_members, shadow_outsiders);

      std::vector<std::int64_t> eval_members = models[0].members;
      std::vector<std::int64_t> eval_outsiders = models[0].outsiders;
      if (acfg.shuffle_labels) {
        std::vector<std::int64_t> all = eval_members;
        all.insert(all.end(), eval_outsiders.begin(), eval_outsiders.end());
        trial_rng.shuffle(&all);
        eval_members.assign(all.begin(), all.begin() + pool);
        eval_outsiders.assign(all.begin() + pool, all.end());
      }
      const auto member_scores = scores_of(models[0], eval_members);
      const auto outsider_scores = scores_of(models[0], eval_outsiders);
      std::int64_t false_negatives = 0, false_positives = 0;
      for (double v : member_scores)
        if (v > tau) ++false_negatives;
      for (double v : outsider_scores)
        if (v <= tau) ++false_positives;
      EpochStat st;
      st.epoch = epoch;
      st.fnr = static_cast<double>(false_negatives) / static_cast<double>(pool);
      st.fpr = static_cast<double>(false_positives) / static_cast<double>(pool);
      st.eps_hat = mia_epsilon(st.fpr, st.fnr, acfg.delta);
      trial_stats.push_back(st);
    }
  }

  for (std::size_t e = 0; e < report.epochs.size(); ++e) {
    std::vector<double> fprs, fnrs, eps;
    for (const auto& t : report.trials) {
      fprs.push_back(t[e].fpr);
      fnrs.push_back(t[e].fnr);
      eps.push_back(t[e].eps_hat);
    }
    report.fpr_median.push_back(detail::median(fprs));
    report.fnr_median.push_back(detail::median(fnrs));
    report.eps_median.push_back(detail::median(eps));
    report.eps_lo95.push_back(detail::quantile(eps, 0.025));
    report.eps_hi95.push_back(detail::quantile(eps, 0.975));
  }
  return report;
}

}  // namespace dpsgd

#endif  // DPSGD_MIA_HPP_
