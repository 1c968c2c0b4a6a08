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

#ifndef DPSGD_ACCOUNTANT_HPP_
#define DPSGD_ACCOUNTANT_HPP_

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "dpsgd/errors.hpp"
#include "dpsgd/mechanism.hpp"

// Closed-form final-iterate RDP bounds for DPSGD with gradient clipping
// (unbounded domain) and with double clipping (bounded domain), the
// baseline bounds they are compared against, the optimal noise split, the
// subsampled-Gaussian order limit alpha*, RDP -> DP conversion, and noise
// calibration. Every function here is a pure function of its arguments.

namespace dpsgd {

// Largest Renyi order alpha for which the closed-form subsampled-Gaussian
// divergence bound 2*alpha*q^2/sigma^2 is valid, i.e. the largest alpha
// satisfying both
//   alpha <= K*sigma^2/2 - 2*log(sigma)
//   alpha <= (K^2*sigma^2/2 - log 5 - 2*log(sigma))
//            / (K + log(q*alpha) + 1/(2*sigma^2))
// with K = log(1 + 1/(q*(alpha - 1))). K depends on alpha, so the system
// is implicit; it is solved by a dense grid scan with step 1e-3 over
// (1 + 1e-3, 1e4]. The first constraint crosses from satisfied to violated
// exactly once (its right side decreases in alpha), which bounds the scan.
inline double alpha_star(double q_sample, double sigma) {
  if (!(q_sample > 0.0) || q_sample > 0.2)
    throw parameter_error("alpha_star requires 0 < q <= 1/5");
  if (!(sigma > 4.0))
    throw parameter_error("alpha_star requires sigma > 4");

  constexpr double kStep = 1e-3;
  constexpr long kMaxSteps = 9'999'000;  // alpha = 1 + i*kStep, up to 1e4
  const double sigma_sq = sigma * sigma;
  const double two_log_sigma = 2.0 * std::log(sigma);
  const double log5 = std::log(5.0);

  double best = std::numeric_limits<double>::quiet_NaN();
  for (long i = 1; i <= kMaxSteps; ++i) {
    const double alpha = 1.0 + static_cast<double>(i) * kStep;
    const double k = std::log1p(1.0 / (q_sample * (alpha - 1.0)));
    const double first = k * sigma_sq / 2.0 - two_log_sigma;
    if (alpha > first) break;  // fails for all larger alpha too
    const double denom = k + std::log(q_sample * alpha) + 0.5 / sigma_sq;
    const double second = (k * k * sigma_sq / 2.0 - log5 - two_log_sigma) / denom;
    if (alpha <= second) best = alpha;
  }
  if (std::isnan(best))
    throw parameter_error("alpha_star: no admissible alpha on the grid");
  return best;
}

namespace detail {

// Both inequalities of the alpha* system, evaluated at a single point.
inline bool sgm_order_admissible(double q, double sigma, double alpha) {
  const double k = std::log1p(1.0 / (q * (alpha - 1.0)));
  const double sigma_sq = sigma * sigma;
  const double first = k * sigma_sq / 2.0 - 2.0 * std::log(sigma);
  if (alpha > first) return false;
  const double denom = k + std::log(q * alpha) + 0.5 / sigma_sq;
  const double second =
      (k * k * sigma_sq / 2.0 - std::log(5.0) - 2.0 * std::log(sigma)) / denom;
  return alpha <= second;
}

// Checks of the strengthened per-step bound: b <= n/5, sigma_dp >
// 8C/(b sqrt(beta)), alpha <= alpha*(b/n, b sqrt(beta) sigma_dp / (2C)).
// The first two are exactly the preconditions under which alpha* is
// defined, so alpha* is only evaluated once they hold.
inline SgmChecks run_sgm_checks(const MechanismConfig& cfg, double alpha,
                                double beta) {
  SgmChecks checks;
  checks.checked = true;
  checks.batch_ok = 5 * cfg.b <= cfg.n;
  const double root_beta = std::sqrt(beta);
  checks.sigma_ok =
      cfg.clip_c > 0.0 &&
      cfg.sigma_dp > 8.0 * cfg.clip_c / (static_cast<double>(cfg.b) * root_beta);
  if (checks.batch_ok && checks.sigma_ok) {
    const double q = static_cast<double>(cfg.b) / static_cast<double>(cfg.n);
    const double sigma_sgm = static_cast<double>(cfg.b) * root_beta *
                             cfg.sigma_dp / (2.0 * cfg.clip_c);
    checks.alpha_star = alpha_star(q, sigma_sgm);
    checks.alpha_ok = alpha <= checks.alpha_star;
  }
  return checks;
}

// Per-step RDP increment of the noisy clipped update: 2*alpha*C^2 /
// (beta*n*b*sigma^2) in general, 8*alpha*C^2/(beta*n^2*sigma^2) when the
// subsampled-Gaussian constraints hold.
inline double per_step_increment(const MechanismConfig& cfg, double alpha,
                                 double beta, RdpMode mode) {
  const double c_sq = cfg.clip_c * cfg.clip_c;
  const double sigma_sq = cfg.sigma_dp * cfg.sigma_dp;
  if (mode == RdpMode::strengthened) {
    return 8.0 * alpha * c_sq /
           (beta * static_cast<double>(cfg.n) * static_cast<double>(cfg.n) *
            sigma_sq);
  }
  return 2.0 * alpha * c_sq /
         (beta * static_cast<double>(cfg.n) * static_cast<double>(cfg.b) *
          sigma_sq);
}

// Shift-absorption term of the converged branch:
// alpha*(1+eta*L)^2*D^2 / (2*eta^2*sigma^2*(1-beta)), stated here at
// beta = 0 (the caller divides by 1-beta).
inline double shift_term(const MechanismConfig& cfg, double alpha) {
  const double growth = 1.0 + cfg.eta * cfg.smooth_l;
  const double d = *cfg.diameter_d;
  return alpha * growth * growth * d * d /
         (2.0 * cfg.eta * cfg.eta * cfg.sigma_dp * cfg.sigma_dp);
}

inline void require_accounting_fields(const MechanismConfig& cfg,
                                      bool needs_eta) {
  cfg.validate();
  if (!(cfg.sigma_dp > 0.0))
    throw parameter_error("sigma_dp must be > 0 for privacy accounting");
  if (needs_eta && !(cfg.eta > 0.0))
    throw parameter_error("eta must be > 0 for this bound");
}

}  // namespace detail

// Final-iterate RDP bound for DPSGD-GC (unbounded domain), linear in T.
// General mode: 2*alpha*C^2*T/(beta*n*b*sigma^2) with beta resolving to 1
// when unset (the shift term is unused on an unbounded domain, so the
// full noise budget goes to the per-step term). Strengthened mode swaps
// in the 8*alpha*C^2/(beta*n^2*sigma^2) increment when the
// subsampled-Gaussian checks pass, and otherwise falls back to the
// general value with constraints_ok = false.
inline RdpResult gc_bound(const MechanismConfig& cfg, const RdpQuery& q) {
  q.validate();
  RdpResult out;
  out.family = BoundFamily::gc_linear;
  out.beta_used = q.beta.value_or(1.0);
  if (cfg.t_iters == 0) {
    cfg.validate();
    return out;  // zero iterations leak nothing
  }
  detail::require_accounting_fields(cfg, /*needs_eta=*/false);
  const double t = static_cast<double>(cfg.t_iters);
  if (q.mode == RdpMode::strengthened) {
    out.checks = detail::run_sgm_checks(cfg, q.alpha, out.beta_used);
    out.constraints_ok = out.checks.all_ok();
    const RdpMode effective =
        out.constraints_ok ? RdpMode::strengthened : RdpMode::general;
    out.epsilon =
        detail::per_step_increment(cfg, q.alpha, out.beta_used, effective) * t;
    return out;
  }
  out.epsilon =
      detail::per_step_increment(cfg, q.alpha, out.beta_used, RdpMode::general) *
      t;
  return out;
}

namespace detail {

struct DcBranches {
  double linear;      // per-step increment at beta = 1, times T
  double converged;   // g(beta) at the evaluation split
  double beta_split;  // split the converged branch was evaluated at
};

// Evaluates both branches of the bounded-domain bound. With beta unset the
// converged branch is evaluated at its minimizer
//   beta* = sqrt(a) / (sqrt(a) + sqrt(s)),   g(beta*) = (sqrt(a)+sqrt(s))^2,
// where a is the per-step increment at beta = 1 and s the shift term.
// With beta set explicitly, g(beta) = a/beta + s/(1-beta) is used as
// given (beta = 1 sends the branch to infinity and the linear branch
// attains the min).
inline DcBranches dc_branches(const MechanismConfig& cfg, double alpha,
                              RdpMode mode, std::optional<double> beta) {
  const double a = per_step_increment(cfg, alpha, 1.0, mode);
  const double s = shift_term(cfg, alpha);
  DcBranches br;
  br.linear = a * static_cast<double>(cfg.t_iters);
  if (beta.has_value()) {
    br.beta_split = *beta;
    br.converged = (*beta < 1.0)
                       ? a / *beta + s / (1.0 - *beta)
                       : std::numeric_limits<double>::infinity();
    return br;
  }
  const double root_a = std::sqrt(a);
  const double root_s = std::sqrt(s);
  br.beta_split = (root_a + root_s) > 0.0 ? root_a / (root_a + root_s) : 1.0;
  br.converged = (root_a + root_s) * (root_a + root_s);
  return br;
}

}  // namespace detail

// Final-iterate RDP bound for DPSGD-DC (bounded domain): the minimum of
// the linear branch and the converged branch, with the regime tag naming
// whichever attains it. Strengthened mode substitutes the strengthened
// per-step increment into both branches and re-optimizes the split; its
// admissibility checks run at the resulting beta*, and on failure the
// general-mode value is returned with constraints_ok = false.
inline RdpResult dc_bound(const MechanismConfig& cfg, const RdpQuery& q) {
  q.validate();
  if (!cfg.bounded_domain())
    throw parameter_error("dc_bound requires diameter_d");
  RdpResult out;
  out.family = BoundFamily::dc;
  if (cfg.t_iters == 0) {
    cfg.validate();
    out.regime = DcRegime::linear;
    return out;
  }
  detail::require_accounting_fields(cfg, /*needs_eta=*/true);

  RdpMode effective = q.mode;
  if (q.mode == RdpMode::strengthened) {
    const detail::DcBranches probe =
        detail::dc_branches(cfg, q.alpha, RdpMode::strengthened, q.beta);
    out.checks = detail::run_sgm_checks(cfg, q.alpha, probe.beta_split);
    out.constraints_ok = out.checks.all_ok();
    if (!out.constraints_ok) effective = RdpMode::general;
  }
  const detail::DcBranches br =
      detail::dc_branches(cfg, q.alpha, effective, q.beta);
  if (br.linear <= br.converged) {
    out.epsilon = br.linear;
    out.regime = DcRegime::linear;
    out.beta_used = 1.0;
  } else {
    out.epsilon = br.converged;
    out.regime = DcRegime::converged;
    out.beta_used = br.beta_split;
  }
  return out;
}

// Closed-form minimizer of g(beta) for the converged branch (general
// mode). Degenerates to 0 as D grows and to 1 as D -> 0.
inline double optimal_beta(const MechanismConfig& cfg, double alpha) {
  if (!(alpha > 1.0)) throw parameter_error("alpha must be > 1");
  if (!cfg.bounded_domain())
    throw parameter_error("optimal_beta requires diameter_d");
  detail::require_accounting_fields(cfg, /*needs_eta=*/true);
  const double root_a =
      std::sqrt(detail::per_step_increment(cfg, alpha, 1.0, RdpMode::general));
  const double root_s = std::sqrt(detail::shift_term(cfg, alpha));
  if (root_a + root_s == 0.0) return 1.0;
  return root_a / (root_a + root_s);
}

// Per-release composition baseline: the subsampled-Gaussian divergence
// bound 2*alpha*q^2/sigma_sgm^2 composed T times, with q = b/n and
// sigma_sgm = b*sigma_dp/(2C) (noise measured in units of the batch-mean
// sensitivity 2C/b). The admissibility of that closed form is reported in
// the checks, not enforced.
inline RdpResult composition_bound(const MechanismConfig& cfg, double alpha) {
  if (!(alpha > 1.0)) throw parameter_error("alpha must be > 1");
  RdpResult out;
  out.family = BoundFamily::composition;
  if (cfg.t_iters == 0) {
    cfg.validate();
    return out;
  }
  detail::require_accounting_fields(cfg, /*needs_eta=*/false);
  if (cfg.clip_c == 0.0) return out;  // zero sensitivity
  const double q = static_cast<double>(cfg.b) / static_cast<double>(cfg.n);
  const double sigma_sgm =
      static_cast<double>(cfg.b) * cfg.sigma_dp / (2.0 * cfg.clip_c);
  out.epsilon = static_cast<double>(cfg.t_iters) * 2.0 * alpha * q * q /
                (sigma_sgm * sigma_sgm);
  out.checks.checked = true;
  out.checks.batch_ok = 5 * cfg.b <= cfg.n;
  out.checks.sigma_ok = sigma_sgm > 4.0;
  if (out.checks.batch_ok && out.checks.sigma_ok) {
    out.checks.alpha_star = alpha_star(q, sigma_sgm);
    out.checks.alpha_ok = alpha <= out.checks.alpha_star;
  }
  out.constraints_ok = out.checks.all_ok();
  return out;
}

// Naive convergent bound from post-processing plus the Gaussian
// mechanism: 2*alpha*(D + eta*C/b)^2 / (eta*sigma_dp)^2. The denominator
// uses the output-level noise scale eta*sigma_dp, since the update adds
// eta*(gradient + noise) to the parameters.
inline RdpResult trivial_bound(const MechanismConfig& cfg, double alpha) {
  if (!(alpha > 1.0)) throw parameter_error("alpha must be > 1");
  if (!cfg.bounded_domain())
    throw parameter_error("trivial_bound requires diameter_d");
  RdpResult out;
  out.family = BoundFamily::trivial;
  if (cfg.t_iters == 0) {
    cfg.validate();
    return out;
  }
  detail::require_accounting_fields(cfg, /*needs_eta=*/true);
  const double sens =
      *cfg.diameter_d + cfg.eta * cfg.clip_c / static_cast<double>(cfg.b);
  out.epsilon = 2.0 * alpha * sens * sens /
                (cfg.eta * cfg.eta * cfg.sigma_dp * cfg.sigma_dp);
  return out;
}

// Amplification-by-iteration baseline for convex M-Lipschitz losses:
// alpha*M^2*T/(b^2*sigma^2), up to the multiplier.
inline RdpResult feldman_bound(const MechanismConfig& cfg, double alpha,
                               const BaselineParams& bp) {
  if (!(alpha > 1.0)) throw parameter_error("alpha must be > 1");
  if (!(bp.lipschitz_m > 0.0))
    throw parameter_error("feldman_bound requires lipschitz_m > 0");
  RdpResult out;
  out.family = BoundFamily::feldman;
  if (cfg.t_iters == 0) {
    cfg.validate();
    return out;
  }
  detail::require_accounting_fields(cfg, /*needs_eta=*/false);
  out.epsilon = bp.multiplier * alpha * bp.lipschitz_m * bp.lipschitz_m *
                static_cast<double>(cfg.t_iters) /
                (static_cast<double>(cfg.b) * static_cast<double>(cfg.b) *
                 cfg.sigma_dp * cfg.sigma_dp);
  return out;
}

// Burn-in baseline for convex Lipschitz losses on a bounded domain:
// alpha*M^2/(n^2*sigma^2) * min{T, D*n/(eta*M)}, up to the multiplier.
inline RdpResult altschuler_bound(const MechanismConfig& cfg, double alpha,
                                  const BaselineParams& bp) {
  if (!(alpha > 1.0)) throw parameter_error("alpha must be > 1");
  if (!(bp.lipschitz_m > 0.0))
    throw parameter_error("altschuler_bound requires lipschitz_m > 0");
  if (!cfg.bounded_domain())
    throw parameter_error("altschuler_bound requires diameter_d");
  RdpResult out;
  out.family = BoundFamily::altschuler;
  if (cfg.t_iters == 0) {
    cfg.validate();
    return out;
  }
  detail::require_accounting_fields(cfg, /*needs_eta=*/true);
  const double cap =
      *cfg.diameter_d * static_cast<double>(cfg.n) / (cfg.eta * bp.lipschitz_m);
  const double effective_t =
      std::min(static_cast<double>(cfg.t_iters), cap);
  out.epsilon = bp.multiplier * alpha * bp.lipschitz_m * bp.lipschitz_m *
                effective_t /
                (static_cast<double>(cfg.n) * static_cast<double>(cfg.n) *
                 cfg.sigma_dp * cfg.sigma_dp);
  return out;
}

// Cyclic-traversal baseline for m-weakly-convex losses:
// alpha/(eta^2*sigma^2) * (D*sqrt(1 + 2*eta*m*(1 + m/(2(L+m)))) +
// eta*C/b)^2, up to the multiplier.
inline RdpResult kong_bound(const MechanismConfig& cfg, double alpha,
                            const BaselineParams& bp) {
  if (!(alpha > 1.0)) throw parameter_error("alpha must be > 1");
  if (!(bp.weak_convex_m > 0.0))
    throw parameter_error("kong_bound requires weak_convex_m > 0");
  if (!cfg.bounded_domain())
    throw parameter_error("kong_bound requires diameter_d");
  RdpResult out;
  out.family = BoundFamily::kong;
  if (cfg.t_iters == 0) {
    cfg.validate();
    return out;
  }
  detail::require_accounting_fields(cfg, /*needs_eta=*/true);
  const double m = bp.weak_convex_m;
  const double growth =
      std::sqrt(1.0 + 2.0 * cfg.eta * m * (1.0 + m / (2.0 * (cfg.smooth_l + m))));
  const double base = *cfg.diameter_d * growth +
                      cfg.eta * cfg.clip_c / static_cast<double>(cfg.b);
  out.epsilon = bp.multiplier * alpha * base * base /
                (cfg.eta * cfg.eta * cfg.sigma_dp * cfg.sigma_dp);
  return out;
}

// (alpha, eps)-RDP to (eps', delta)-DP: eps' = eps + log(1/delta)/(alpha-1).
inline double rdp_to_dp(double epsilon_rdp, double alpha, double delta) {
  if (!(alpha > 1.0)) throw parameter_error("alpha must be > 1");
  if (!(delta > 0.0) || !(delta < 1.0))
    throw parameter_error("delta must lie in (0, 1)");
  if (!(epsilon_rdp >= 0.0))
    throw parameter_error("epsilon_rdp must be >= 0");
  return epsilon_rdp + std::log(1.0 / delta) / (alpha - 1.0);
}

// Dispatch to one family at a fixed order.
inline RdpResult evaluate_bound(const MechanismConfig& cfg, BoundFamily family,
                                double alpha, RdpMode mode = RdpMode::general,
                                const BaselineParams* bp = nullptr) {
  RdpQuery q;
  q.alpha = alpha;
  q.mode = mode;
  switch (family) {
    case BoundFamily::gc_linear: return gc_bound(cfg, q);
    case BoundFamily::dc: return dc_bound(cfg, q);
    case BoundFamily::trivial: return trivial_bound(cfg, alpha);
    case BoundFamily::composition: return composition_bound(cfg, alpha);
    case BoundFamily::feldman:
      if (!bp) throw parameter_error("feldman_bound requires BaselineParams");
      return feldman_bound(cfg, alpha, *bp);
    case BoundFamily::altschuler:
      if (!bp)
        throw parameter_error("altschuler_bound requires BaselineParams");
      return altschuler_bound(cfg, alpha, *bp);
    case BoundFamily::kong:
      if (!bp) throw parameter_error("kong_bound requires BaselineParams");
      return kong_bound(cfg, alpha, *bp);
  }
  throw parameter_error("unknown bound family");
}

struct BestDp {
  double alpha = 0.0;
  double epsilon_dp = 0.0;
};

// Optimizes the RDP -> DP conversion over a grid of orders and returns
// the minimizing (alpha, epsilon_dp) pair.
inline BestDp best_dp(const MechanismConfig& cfg, BoundFamily family,
                      double delta, std::span<const double> alpha_grid,
                      RdpMode mode = RdpMode::general,
                      const BaselineParams* bp = nullptr) {
  if (alpha_grid.empty()) throw parameter_error("alpha grid must be nonempty");
  BestDp best;
  best.epsilon_dp = std::numeric_limits<double>::infinity();
  for (double alpha : alpha_grid) {
    if (!(alpha > 1.0))
      throw parameter_error("alpha grid entries must be > 1");
    const RdpResult r = evaluate_bound(cfg, family, alpha, mode, bp);
    const double eps_dp = rdp_to_dp(r.epsilon, alpha, delta);
    if (eps_dp < best.epsilon_dp) {
      best.epsilon_dp = eps_dp;
      best.alpha = alpha;
    }
  }
  return best;
}

inline std::vector<double> log_spaced_alpha_grid(double lo, double hi,
                                                 std::size_t count) {
  if (!(lo > 1.0) || !(hi > lo) || count < 2)
    throw parameter_error("alpha grid requires 1 < lo < hi and count >= 2");
  std::vector<double> grid(count);
  const double log_lo = std::log(lo);
  const double step = (std::log(hi) - log_lo) / static_cast<double>(count - 1);
  for (std::size_t i = 0; i < count; ++i)
    grid[i] = std::exp(log_lo + step * static_cast<double>(i));
  grid.front() = lo;
  grid.back() = hi;
  return grid;
}

// Smallest sigma_dp (to relative tolerance 1e-6, bracket [1e-6, 1e6])
// whose best achievable (epsilon, delta)-DP meets the target. Every
// implemented family is nonincreasing in sigma_dp, so bisection applies.
inline double calibrate_sigma(const MechanismConfig& cfg_without_sigma,
                              BoundFamily family, double target_eps_dp,
                              double delta, std::span<const double> alpha_grid,
                              RdpMode mode = RdpMode::general,
                              const BaselineParams* bp = nullptr) {
  if (!(target_eps_dp > 0.0))
    throw parameter_error("target_eps_dp must be > 0");
  constexpr double kLo = 1e-6;
  constexpr double kHi = 1e6;
  constexpr double kRelTol = 1e-6;

  MechanismConfig cfg = cfg_without_sigma;
  const auto eps_at = [&](double sigma) {
    cfg.sigma_dp = sigma;
    return best_dp(cfg, family, delta, alpha_grid, mode, bp).epsilon_dp;
  };

  if (eps_at(kHi) > target_eps_dp)
    throw calibration_error("target epsilon unreachable within sigma bracket");
  if (eps_at(kLo) <= target_eps_dp) return kLo;

  double lo = kLo, hi = kHi;  // eps(lo) > target >= eps(hi)
  while (hi - lo > kRelTol * hi) {
    const double mid = 0.5 * (lo + hi);
    if (eps_at(mid) <= target_eps_dp) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return hi;
}

}  // namespace dpsgd

#endif  // DPSGD_ACCOUNTANT_HPP_
