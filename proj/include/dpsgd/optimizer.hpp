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

#ifndef DPSGD_OPTIMIZER_HPP_
#define DPSGD_OPTIMIZER_HPP_

#include <cmath>
#include <cstdint>
#include <ostream>
#include <span>
#include <vector>

#include "dpsgd/csv.hpp"
#include "dpsgd/errors.hpp"
#include "dpsgd/mechanism.hpp"
#include "dpsgd/problems.hpp"
#include "dpsgd/random.hpp"

// Deterministic, seedable DPSGD with per-sample gradient clipping and,
// when the mechanism has a bounded domain, projection of the iterate onto
// the ball of radius D after every update (double clipping). Exactly
// t_iters updates run from theta_0 = 0.

namespace dpsgd {

enum class SamplingScheme {
  uniform_without_replacement,  // exactly b distinct samples per step
  poisson,                      // each sample independently with prob b/n
};

struct TrainConfig {
  MechanismConfig mech;
  std::uint64_t seed = 0;
  SamplingScheme sampling = SamplingScheme::uniform_without_replacement;
  std::int64_t record_every = 1;

  void validate(const ProblemSpec& problem) const {
    mech.validate();
    if (record_every < 1) throw parameter_error("record_every must be >= 1");
    if (mech.n != problem.n_samples())
      throw parameter_error("mech.n must equal the problem sample count");
    if (!(mech.clip_c > 0.0))
      throw parameter_error("training requires clip_c > 0");
  }
};

struct TraceRecord {
  std::int64_t t = 0;
  std::vector<double> theta;
  double loss_gap = 0.0;
  double grad_norm = 0.0;
  double clip_fraction = 0.0;  // of the step that produced this iterate
  bool projected = false;
};

struct TrainTrace {
  std::vector<TraceRecord> records;

  const TraceRecord& final_record() const { return records.back(); }

  double min_loss_gap() const {
    double best = records.front().loss_gap;
    for (const auto& r : records) best = std::min(best, r.loss_gap);
    return best;
  }

  double min_grad_norm() const {
    double best = records.front().grad_norm;
    for (const auto& r : records) best = std::min(best, r.grad_norm);
    return best;
  }

  // Columns: t, loss_gap, grad_norm, clip_fraction, projected.
  void write_csv(std::ostream& os) const {
    write_csv_row(os, {"t", "loss_gap", "grad_norm", "clip_fraction",
                       "projected"});
    for (const auto& r : records) {
      write_csv_row(os, {std::to_string(r.t), fmt12(r.loss_gap),
                         fmt12(r.grad_norm), fmt12(r.clip_fraction),
                         r.projected ? "1" : "0"});
    }
  }
};

// x * min(1, c / ||x||); the zero vector maps to itself.
inline std::vector<double> clip(std::span<const double> g, double c) {
  if (!(c > 0.0)) throw parameter_error("clip threshold must be > 0");
  std::vector<double> out(g.begin(), g.end());
  const double len = linalg::norm(g);
  if (len > c) linalg::scale(c / len, out);
  return out;
}

// Euclidean projection onto the ball of the given radius.
inline std::vector<double> project(std::span<const double> theta,
                                   double d_radius) {
  if (!(d_radius > 0.0)) throw parameter_error("projection radius must be > 0");
  std::vector<double> out(theta.begin(), theta.end());
  const double len = linalg::norm(theta);
  if (len > d_radius) linalg::scale(d_radius / len, out);
  return out;
}

struct StepStats {
  double clip_fraction = 0.0;
  bool projected = false;
};

struct TrainState {
  std::vector<double> theta;
  std::int64_t t = 0;
  Prng rng;
  StepStats last;
  std::vector<std::size_t> batch;  // scratch, reused across steps

  TrainState(std::int64_t dim, std::uint64_t seed)
      : theta(static_cast<std::size_t>(dim), 0.0), rng(seed) {}
};

namespace detail {

inline void sample_batch(TrainState* state, const TrainConfig& cfg,
                         std::vector<std::size_t>* batch) {
  const auto n = static_cast<std::size_t>(cfg.mech.n);
  if (cfg.sampling == SamplingScheme::uniform_without_replacement) {
    state->rng.sample_without_replacement(
        n, static_cast<std::size_t>(cfg.mech.b), batch);
    return;
  }
  // Poisson: include each sample independently with probability b/n; the
  // update still normalizes by the nominal batch size b.
  const double q = static_cast<double>(cfg.mech.b) / static_cast<double>(n);
  batch->clear();
  for (std::size_t i = 0; i < n; ++i) {
    if (state->rng.uniform01() < q) batch->push_back(i);
  }
}

}  // namespace detail

// One update: sample a mini-batch, average the clipped per-sample
// gradients, perturb with per-coordinate Gaussian noise of scale
// sigma_dp, take the eta-scaled step, and project when the domain is
// bounded. Deterministic given (seed, t).
inline void step(TrainState* state, const ProblemSpec& problem,
                 const TrainConfig& cfg) {
  const auto dim = static_cast<std::size_t>(problem.dim());
  std::vector<std::size_t>& batch = state->batch;
  detail::sample_batch(state, cfg, &batch);

  std::vector<double> update(dim, 0.0);
  std::vector<double> g(dim);
  std::int64_t clipped = 0;
  const double inv_b = 1.0 / static_cast<double>(cfg.mech.b);
  for (const std::size_t xi : batch) {
    std::fill(g.begin(), g.end(), 0.0);
    problem.add_sample_gradient(state->theta, static_cast<std::int64_t>(xi),
                                1.0, g);
    const double len = linalg::norm(g);
    if (len > cfg.mech.clip_c) {
      linalg::scale(cfg.mech.clip_c / len, g);
      ++clipped;
    }
    linalg::axpy(inv_b, g, update);
  }
  if (cfg.mech.sigma_dp > 0.0) {
    for (std::size_t i = 0; i < dim; ++i)
      update[i] += state->rng.normal(cfg.mech.sigma_dp);
  }
  linalg::axpy(-cfg.mech.eta, update, state->theta);

  state->last.projected = false;
  if (cfg.mech.bounded_domain()) {
    const double len = linalg::norm(state->theta);
    if (len > *cfg.mech.diameter_d) {
      linalg::scale(*cfg.mech.diameter_d / len, state->theta);
      state->last.projected = true;
    }
  }
  state->last.clip_fraction =
      batch.empty() ? 0.0
                    : static_cast<double>(clipped) /
                          static_cast<double>(batch.size());
  ++state->t;
}

// Runs t_iters updates from theta_0 = 0, recording every record_every
// steps plus the final iterate.
inline TrainTrace train(const ProblemSpec& problem, const TrainConfig& cfg) {
  cfg.validate(problem);
  TrainState state(problem.dim(), cfg.seed);
  TrainTrace trace;

  const auto record = [&]() {
    TraceRecord r;
    r.t = state.t;
    r.theta = state.theta;
    r.loss_gap = problem.loss_gap(state.theta);
    r.grad_norm = linalg::norm(problem.population_gradient(state.theta));
    r.clip_fraction = state.last.clip_fraction;
    r.projected = state.last.projected;
    trace.records.push_back(std::move(r));
  };

  record();  // theta_0
  for (std::int64_t t = 0; t < cfg.mech.t_iters; ++t) {
    step(&state, problem, cfg);
    if (state.t % cfg.record_every == 0 || state.t == cfg.mech.t_iters)
      record();
  }
  return trace;
}

}  // namespace dpsgd

#endif  // DPSGD_OPTIMIZER_HPP_
