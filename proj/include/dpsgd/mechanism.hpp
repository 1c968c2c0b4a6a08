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

#ifndef DPSGD_MECHANISM_HPP_
#define DPSGD_MECHANISM_HPP_

#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>

#include "dpsgd/errors.hpp"

namespace dpsgd {

// Hyperparameters of one DPSGD mechanism. An absent diameter_d means the
// parameter domain is unbounded (gradient clipping only); a present
// diameter_d means iterates are projected onto the ball of that radius
// (double clipping).
struct MechanismConfig {
  std::int64_t n = 0;        // dataset size
  std::int64_t b = 0;        // batch size
  double eta = 0.0;          // step size
  double clip_c = 0.0;       // per-sample gradient clip norm
  std::optional<double> diameter_d;  // domain radius, absent = unbounded
  double sigma_dp = 0.0;     // per-coordinate Gaussian noise scale
  std::int64_t t_iters = 0;  // iteration count
  double smooth_l = 0.0;     // smoothness constant of the loss
  std::int64_t dim = 1;      // model dimension

  bool bounded_domain() const { return diameter_d.has_value(); }

  // Structural validation. Fields whose formulas require strict
  // positivity (eta, sigma_dp, clip_c) are checked by the operation that
  // divides by them; degenerate zero values are legal states here (e.g.
  // a noiseless training run, or the zero-sensitivity naive bound).
  void validate() const {
    if (n < 1) throw parameter_error("n must be >= 1");
    if (b < 1 || b > n) throw parameter_error("b must satisfy 1 <= b <= n");
    if (dim < 1) throw parameter_error("dim must be >= 1");
    if (t_iters < 0) throw parameter_error("t_iters must be >= 0");
    if (!(eta >= 0.0) || !std::isfinite(eta))
      throw parameter_error("eta must be finite and >= 0");
    if (!(clip_c >= 0.0) || !std::isfinite(clip_c))
      throw parameter_error("clip_c must be finite and >= 0");
    if (!(sigma_dp >= 0.0) || !std::isfinite(sigma_dp))
      throw parameter_error("sigma_dp must be finite and >= 0");
    if (!(smooth_l >= 0.0) || !std::isfinite(smooth_l))
      throw parameter_error("smooth_l must be finite and >= 0");
    if (diameter_d && (!(*diameter_d >= 0.0) || !std::isfinite(*diameter_d)))
      throw parameter_error("diameter_d must be finite and >= 0");
  }
};

enum class RdpMode { general, strengthened };

// Query for one RDP evaluation. An unset beta means "auto": 1 for the
// single-branch bounds, the optimal split for the converged branch.
struct RdpQuery {
  double alpha = 0.0;
  std::optional<double> beta;  // in (0, 1] when explicit
  RdpMode mode = RdpMode::general;

  void validate() const {
    if (!(alpha > 1.0) || !std::isfinite(alpha))
      throw parameter_error("alpha must be finite and > 1");
    if (beta && (!(*beta > 0.0) || !(*beta <= 1.0)))
      throw parameter_error("beta must lie in (0, 1]");
  }
};

enum class BoundFamily {
  gc_linear,
  dc,
  trivial,
  feldman,
  altschuler,
  kong,
  composition,
};

enum class DcRegime { linear, converged };

inline std::string to_string(BoundFamily f) {
  switch (f) {
    case BoundFamily::gc_linear: return "gc_linear";
    case BoundFamily::dc: return "dc";
    case BoundFamily::trivial: return "trivial";
    case BoundFamily::feldman: return "feldman";
    case BoundFamily::altschuler: return "altschuler";
    case BoundFamily::kong: return "kong";
    case BoundFamily::composition: return "composition";
  }
  return "unknown";
}

inline BoundFamily parse_family(const std::string& name) {
  if (name == "gc" || name == "gc_linear") return BoundFamily::gc_linear;
  if (name == "dc") return BoundFamily::dc;
  if (name == "trivial") return BoundFamily::trivial;
  if (name == "feldman") return BoundFamily::feldman;
  if (name == "altschuler") return BoundFamily::altschuler;
  if (name == "kong") return BoundFamily::kong;
  if (name == "composition") return BoundFamily::composition;
  throw parameter_error("unknown bound family: " + name);
}

inline std::string to_string(DcRegime r) {
  return r == DcRegime::linear ? "linear" : "converged";
}

// Outcome of the subsampled-Gaussian admissibility checks attached to the
// strengthened bounds (and to the composition baseline, where they are
// informative rather than binding).
struct SgmChecks {
  bool checked = false;   // true when the strengthened path was evaluated
  bool batch_ok = false;  // b <= n/5
  bool sigma_ok = false;  // sigma_dp > 8C/(b sqrt(beta))
  bool alpha_ok = false;  // alpha <= alpha_star(b/n, b sqrt(beta) sigma/(2C))
  double alpha_star = std::numeric_limits<double>::quiet_NaN();

  bool all_ok() const { return batch_ok && sigma_ok && alpha_ok; }
};

// A computed (alpha, epsilon)-RDP value plus how it was obtained.
struct RdpResult {
  double epsilon = 0.0;
  BoundFamily family = BoundFamily::gc_linear;
  std::optional<DcRegime> regime;  // present iff family == dc
  double beta_used = 1.0;
  bool constraints_ok = true;
  SgmChecks checks;
};

// Constants required by the comparison baselines: the Lipschitz bound M
// (Feldman, Altschuler rows) and the weak-convexity constant m (Kong
// row). The paper states those rows only up to unspecified big-O
// constants; `multiplier` scales the whole expression and defaults to 1.
struct BaselineParams {
  double lipschitz_m = 0.0;
  double weak_convex_m = 0.0;
  double multiplier = 1.0;
};

}  // namespace dpsgd

#endif  // DPSGD_MECHANISM_HPP_
