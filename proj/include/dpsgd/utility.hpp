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

#ifndef DPSGD_UTILITY_HPP_
#define DPSGD_UTILITY_HPP_

#include <algorithm>
#include <cmath>
#include <string>

#include "dpsgd/errors.hpp"
#include "dpsgd/mechanism.hpp"

// Evaluators for the utility upper bounds of DPSGD-GC (minimum expected
// population gradient norm) and DPSGD-DC (minimum expected square root of
// the optimality gap), their privacy-constrained variants, and the
// regime-based parameter recommender. Every Theta/O constant is set to 1;
// constant_c scales the whole expression.

namespace dpsgd {

enum class UtilityTarget { gc_gradient_norm, dc_optimality_gap };

struct UtilityQuery {
  MechanismConfig mech;     // uses n, b, eta, clip_c, sigma_dp, t_iters,
                            // smooth_l, dim, and diameter_d for dc
  double strong_mu = 0.0;   // required for the dc target
  double sgd_sigma = 0.0;   // per-sample gradient deviation sigma_sgd
  double constant_c = 1.0;
  UtilityTarget target = UtilityTarget::gc_gradient_norm;
  // The bounds are stated under a step-size ceiling (1/(9L) for gc,
  // 9/(20L) for dc). Violations throw unless this flag is set, in which
  // case the expression is evaluated as-is.
  bool allow_eta_violation = false;
};

namespace detail {

inline void require_utility_basics(const UtilityQuery& q) {
  q.mech.validate();
  if (!(q.constant_c > 0.0)) throw parameter_error("constant_c must be > 0");
  if (!(q.sgd_sigma >= 0.0)) throw parameter_error("sgd_sigma must be >= 0");
  if (q.mech.t_iters < 1) throw parameter_error("utility bounds need T >= 1");
  if (!(q.mech.eta > 0.0)) throw parameter_error("utility bounds need eta > 0");
  if (!(q.mech.clip_c > 0.0))
    throw parameter_error("utility bounds need clip_c > 0");
}

inline void require_eta_ceiling(const UtilityQuery& q, double ceiling_factor) {
  if (q.allow_eta_violation || q.mech.smooth_l == 0.0) return;
  const double ceiling = ceiling_factor / q.mech.smooth_l;
  if (q.mech.eta > ceiling) {
    throw parameter_error("eta exceeds the step-size ceiling " +
                          std::to_string(ceiling) +
                          " required by this bound");
  }
}

}  // namespace detail

// Six-term bound on min_t E||grad l(theta_t)|| for DPSGD-GC:
//   1/(eta C T) + 1/sqrt(eta T) + min(s, s^2/C) + sqrt(eta L) s/sqrt(b)
//   + d L eta sigma_dp^2 / C + sqrt(d L eta) sigma_dp,    s = sigma_sgd.
inline double gc_utility_bound(const UtilityQuery& q) {
  detail::require_utility_basics(q);
  detail::require_eta_ceiling(q, 1.0 / 9.0);
  const auto& m = q.mech;
  const double t = static_cast<double>(m.t_iters);
  const double d = static_cast<double>(m.dim);
  const double s = q.sgd_sigma;
  const double sum =
      1.0 / (m.eta * m.clip_c * t) + 1.0 / std::sqrt(m.eta * t) +
      std::min(s, s * s / m.clip_c) +
      std::sqrt(m.eta * m.smooth_l) * s / std::sqrt(static_cast<double>(m.b)) +
      d * m.smooth_l * m.eta / m.clip_c * m.sigma_dp * m.sigma_dp +
      std::sqrt(d * m.smooth_l * m.eta) * m.sigma_dp;
  return q.constant_c * sum;
}

// Six-term bound on min_t E sqrt(l(theta_t) - l*) for DPSGD-DC:
//   sqrt(L) D^2/(eta C T) + D/sqrt(eta T)
//   + min(L^{3/4}/mu^{5/4} s, sqrt(s^3/(mu C))) + sqrt(eta) s/sqrt(b)
//   + d eta sigma_dp^2 sqrt(L)/C + sqrt(d eta) sigma_dp.
inline double dc_utility_bound(const UtilityQuery& q) {
  detail::require_utility_basics(q);
  detail::require_eta_ceiling(q, 9.0 / 20.0);
  if (!q.mech.bounded_domain())
    throw parameter_error("dc utility bound requires diameter_d");
  if (!(q.strong_mu > 0.0))
    throw parameter_error("dc utility bound requires strong_mu > 0");
  const auto& m = q.mech;
  const double t = static_cast<double>(m.t_iters);
  const double d = static_cast<double>(m.dim);
  const double s = q.sgd_sigma;
  const double dd = *m.diameter_d;
  const double bias =
      std::min(std::pow(m.smooth_l, 0.75) / std::pow(q.strong_mu, 1.25) * s,
               std::sqrt(s * s * s / (q.strong_mu * m.clip_c)));
  const double sum =
      std::sqrt(m.smooth_l) * dd * dd / (m.eta * m.clip_c * t) +
      dd / std::sqrt(m.eta * t) + bias +
      std::sqrt(m.eta) * s / std::sqrt(static_cast<double>(m.b)) +
      d * m.eta * m.sigma_dp * m.sigma_dp * std::sqrt(m.smooth_l) / m.clip_c +
      std::sqrt(d * m.eta) * m.sigma_dp;
  return q.constant_c * sum;
}

// Saturation point of the dc privacy bound:
// T_bar = (1 + eta L)^2 n b D^2 / (eta^2 C^2).
inline double dc_saturation_iters(const MechanismConfig& m) {
  if (!m.bounded_domain())
    throw parameter_error("dc_saturation_iters requires diameter_d");
  const double growth = 1.0 + m.eta * m.smooth_l;
  const double dd = *m.diameter_d;
  return growth * growth * static_cast<double>(m.n) *
         static_cast<double>(m.b) * dd * dd /
         (m.eta * m.eta * m.clip_c * m.clip_c);
}

// gc utility at the noise level its privacy bound requires:
// sigma_dp^2 = alpha C^2 T / (eps_rdp n b), constant 1.
inline double tradeoff_bound_gc(UtilityQuery q, double alpha,
                                double eps_rdp) {
  if (!(eps_rdp > 0.0)) throw parameter_error("eps_rdp must be > 0");
  if (!(alpha > 1.0)) throw parameter_error("alpha must be > 1");
  const auto& m = q.mech;
  const double sigma_sq = alpha * m.clip_c * m.clip_c *
                          static_cast<double>(m.t_iters) /
                          (eps_rdp * static_cast<double>(m.n) *
                           static_cast<double>(m.b));
  q.mech.sigma_dp = std::sqrt(sigma_sq);
  return gc_utility_bound(q);
}

// dc utility at sigma_dp^2 = alpha C^2 min{T, T_bar} / (eps_rdp n b).
inline double tradeoff_bound_dc(UtilityQuery q, double alpha,
                                double eps_rdp) {
  if (!(eps_rdp > 0.0)) throw parameter_error("eps_rdp must be > 0");
  if (!(alpha > 1.0)) throw parameter_error("alpha must be > 1");
  const auto& m = q.mech;
  const double effective_t =
      std::min(static_cast<double>(m.t_iters), dc_saturation_iters(m));
  const double sigma_sq =
      alpha * m.clip_c * m.clip_c * effective_t /
      (eps_rdp * static_cast<double>(m.n) * static_cast<double>(m.b));
  q.mech.sigma_dp = std::sqrt(sigma_sq);
  return dc_utility_bound(q);
}

enum class RecommendRegime {
  gc_small_noise,
  gc_large_noise,
  dc_small_noise,
  dc_large_noise,
  dc_large_t,
};

inline std::string to_string(RecommendRegime r) {
  switch (r) {
    case RecommendRegime::gc_small_noise: return "gc_small_noise";
    case RecommendRegime::gc_large_noise: return "gc_large_noise";
    case RecommendRegime::dc_small_noise: return "dc_small_noise";
    case RecommendRegime::dc_large_noise: return "dc_large_noise";
    case RecommendRegime::dc_large_t: return "dc_large_T";
  }
  return "unknown";
}

struct Recommendation {
  RecommendRegime regime = RecommendRegime::gc_small_noise;
  double eta = 0.0;
  double clip_c = 0.0;
  double t_iters = 0.0;
  double predicted_utility = 0.0;  // squared utility metric of the regime
};

// Regime-based (C, eta, T) recommendation for a target (eps, delta)-DP
// level, with all Theta constants set to 1. The regime is picked by the
// stochastic-noise inequality (ties go to small noise):
//   gc: d L log(1/delta)/(eps^2 n^2) >= sigma_sgd^2
//   dc: D^2 d L log(1/delta)/(eps^2 n^2) >= L^{3/2} sigma_sgd^2 / mu^{5/2}
// For dc the candidate is then checked against the saturation point
// T_bar(C, eta); if T exceeds it, the large-T regime applies: eta =
// D sqrt(b d log(1/delta))/(eps sigma_sgd), C kept from the noise
// subcase, and T the smallest value that saturates the bound.
inline Recommendation recommend(const UtilityQuery& q, double eps_dp,
                                double delta) {
  q.mech.validate();
  if (!(eps_dp > 0.0)) throw parameter_error("eps_dp must be > 0");
  if (!(delta > 0.0) || !(delta < 1.0))
    throw parameter_error("delta must lie in (0, 1)");
  if (!(q.mech.smooth_l > 0.0))
    throw parameter_error("recommend requires smooth_l > 0");
  if (!(q.sgd_sigma >= 0.0)) throw parameter_error("sgd_sigma must be >= 0");

  const double log_delta = std::log(1.0 / delta);
  const double l = q.mech.smooth_l;
  const double d = static_cast<double>(q.mech.dim);
  const double n = static_cast<double>(q.mech.n);
  const double b = static_cast<double>(q.mech.b);
  const double s = q.sgd_sigma;
  const double noise_ratio = d * l * log_delta / (eps_dp * eps_dp * n * n);

  Recommendation rec;
  if (q.target == UtilityTarget::gc_gradient_norm) {
    if (noise_ratio >= s * s) {
      rec.regime = RecommendRegime::gc_small_noise;
      rec.clip_c = std::sqrt(d * l * log_delta) / (eps_dp * n);
      rec.eta = b / l;
      rec.t_iters = eps_dp * eps_dp * n * n / (b * d * log_delta);
      rec.predicted_utility = noise_ratio;
    } else {
      rec.regime = RecommendRegime::gc_large_noise;
      rec.clip_c = std::pow(s, 4.0 / 3.0) * std::cbrt(eps_dp * n) /
                   std::pow(d * l * log_delta, 1.0 / 6.0);
      rec.eta = b / (l * std::pow(s, 2.0 / 3.0)) * std::cbrt(noise_ratio);
      rec.t_iters = std::pow(eps_dp * n, 4.0 / 3.0) * l /
                    (b * std::pow(d * l * log_delta, 2.0 / 3.0) *
                     std::pow(s, 2.0 / 3.0));
      rec.predicted_utility =
          std::pow(s, 4.0 / 3.0) * std::cbrt(noise_ratio);
    }
    return rec;
  }

  if (!q.mech.bounded_domain())
    throw parameter_error("dc recommendation requires diameter_d");
  if (!(q.strong_mu > 0.0))
    throw parameter_error("dc recommendation requires strong_mu > 0");
  const double dd = *q.mech.diameter_d;
  if (!(dd > 0.0))
    throw parameter_error("dc recommendation requires diameter_d > 0");
  const double mu = q.strong_mu;
  const double lhs = dd * dd * noise_ratio;
  const double rhs = std::pow(l, 1.5) * s * s / std::pow(mu, 2.5);

  if (lhs >= rhs) {
    rec.regime = RecommendRegime::dc_small_noise;
    rec.clip_c = dd * l * std::sqrt(d * log_delta) / (eps_dp * n);
    rec.eta = b * std::pow(l, 1.5) / std::pow(mu, 2.5);
    rec.t_iters =
        eps_dp * eps_dp * n * n * std::pow(mu, 2.5) /
        (b * std::pow(l, 1.5) * log_delta);
    rec.predicted_utility = lhs;
  } else {
    rec.regime = RecommendRegime::dc_large_noise;
    rec.clip_c = std::pow(s, 1.5) * std::sqrt(eps_dp * n) /
                 (std::sqrt(mu * dd) * std::pow(d * l * log_delta, 0.25));
    rec.eta = b * std::sqrt(dd) / std::sqrt(mu * s) *
              std::cbrt(noise_ratio);
    rec.t_iters = std::pow(eps_dp * n, 7.0 / 6.0) * mu * dd /
                  (b * std::pow(d * l * log_delta, 2.0 / 3.0) * s);
    rec.predicted_utility =
        std::pow(s, 1.5) * std::sqrt(dd) / std::sqrt(mu) *
        std::pow(noise_ratio, 0.25);
  }

  // sigma_sgd = 0 always stays small-noise; the large-T step size would
  // divide by it.
  if (s > 0.0) {
    MechanismConfig probe = q.mech;
    probe.eta = rec.eta;
    probe.clip_c = rec.clip_c;
    const double t_bar = dc_saturation_iters(probe);
    if (rec.t_iters > t_bar) {
      rec.regime = RecommendRegime::dc_large_t;
      rec.eta = dd * std::sqrt(b * d * log_delta) / (eps_dp * s);
      probe.eta = rec.eta;
      rec.t_iters = dc_saturation_iters(probe);
      rec.predicted_utility =
          s * dd * std::sqrt(d * log_delta) / (std::sqrt(b) * eps_dp);
    }
  }
  return rec;
}

}  // namespace dpsgd

#endif  // DPSGD_UTILITY_HPP_
