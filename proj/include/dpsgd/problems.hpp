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

#ifndef DPSGD_PROBLEMS_HPP_
#define DPSGD_PROBLEMS_HPP_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <istream>
#include <map>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "dpsgd/errors.hpp"
#include "dpsgd/linalg.hpp"
#include "dpsgd/random.hpp"

// Synthetic objectives with exact per-sample gradients, known optima and
// certified constants (L, mu, sigma_sgd). Two kinds:
//
//  - quadratic: l_xi(theta) = 1/2 theta' A_xi theta - c_xi' theta, where
//    every A_xi shares one random orthogonal eigenbasis Q and per-sample
//    eigenvalues in [mu, L], with the extreme coordinates pinned to L and
//    mu for every sample. The mean Hessian then has largest eigenvalue
//    exactly L and smallest exactly mu, and every per-sample gradient is
//    L-Lipschitz.
//
//  - logistic: l_xi(theta) = log(1 + exp(-y_xi x_xi' theta))
//    + ridge/2 ||theta||^2 on synthetic linearly-separable-with-flips
//    data; ridge-strongly convex, optimum found once by Newton.

namespace dpsgd {

enum class ProblemKind { quadratic, logistic };

struct ProblemConstants {
  double smooth_l = 0.0;
  double strong_mu = 0.0;
  double sgd_sigma = 0.0;  // sqrt of the probe-estimated gradient variance
  std::vector<double> optimum;
  double optimum_loss = 0.0;
};

struct MakeQuadraticOptions {
  std::int64_t dim = 2;
  std::int64_t n = 64;
  std::uint64_t seed = 0;
  double strong_mu = 0.5;
  double smooth_l = 1.0;
  double minimizer_spread = 1.0;  // scatter of the per-sample minimizers
  std::optional<std::vector<double>> optimum;  // exact population optimum
};

struct MakeLogisticOptions {
  std::int64_t dim = 8;
  std::int64_t n = 256;
  std::uint64_t seed = 0;
  double ridge = 1e-3;
  double flip_prob = 0.1;     // label noise, the source of a membership gap
  double weight_scale = 4.0;  // margin scale of the generating hyperplane
};

namespace detail {

struct QuadraticData {
  std::vector<double> q;       // dim x dim, row-major, orthogonal
  std::vector<double> lambda;  // n x dim per-sample eigenvalues
  std::vector<double> c;       // n x dim per-sample linear terms
  std::vector<double> lambda_mean;
  std::vector<double> c_mean;
};

struct LogisticData {
  std::vector<double> x;  // n x dim features
  std::vector<double> y;  // labels in {-1, +1}
  double ridge = 0.0;
};

// Random orthogonal matrix via modified Gram-Schmidt on Gaussian rows.
inline std::vector<double> random_orthogonal(std::int64_t dim, Prng* prng) {
  const auto d = static_cast<std::size_t>(dim);
  std::vector<double> q(d * d);
  for (std::size_t r = 0; r < d; ++r) {
    for (;;) {
      for (std::size_t c = 0; c < d; ++c) q[r * d + c] = prng->normal();
      std::span<double> row(q.data() + r * d, d);
      for (std::size_t p = 0; p < r; ++p) {
        std::span<const double> prev(q.data() + p * d, d);
        linalg::axpy(-linalg::dot(prev, row), prev, row);
      }
      const double len = linalg::norm(row);
      if (len > 1e-8) {
        linalg::scale(1.0 / len, row);
        break;
      }
    }
  }
  return q;
}

inline double sigmoid(double z) {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

// log(1 + exp(z)) without overflow.
inline double log1pexp(double z) {
  if (z > 35.0) return z;
  return std::log1p(std::exp(z));
}

}  // namespace detail

class ProblemSpec {
 public:
  ProblemKind kind() const { return kind_; }
  std::int64_t dim() const { return dim_; }
  std::int64_t n_samples() const { return n_; }
  const ProblemConstants& constants() const { return constants_; }
  const std::vector<double>& optimum() const { return constants_.optimum; }

  double sample_loss(std::span<const double> theta, std::int64_t xi) const {
    check_index(xi);
    if (kind_ == ProblemKind::quadratic) {
      const auto& d = quad();
      const std::vector<double> u = rotated(theta);
      double loss = 0.0;
      const double* lam = row(d.lambda, xi);
      const double* cx = row(d.c, xi);
      for (std::int64_t i = 0; i < dim_; ++i) {
        loss += 0.5 * lam[i] * u[i] * u[i] - cx[i] * theta[i];
      }
      return loss;
    }
    const auto& d = logit();
    const double* x = row(d.x, xi);
    const double z = linalg::dot({x, static_cast<std::size_t>(dim_)}, theta);
    const double margin_loss = detail::log1pexp(-d.y[xi] * z);
    return margin_loss + 0.5 * d.ridge * linalg::dot(theta, theta);
  }

  std::vector<double> sample_gradient(std::span<const double> theta,
                                      std::int64_t xi) const {
    check_index(xi);
    std::vector<double> g(static_cast<std::size_t>(dim_));
    add_sample_gradient(theta, xi, 1.0, g);
    return g;
  }

  // g += weight * grad l_xi(theta). Batch loops use this to avoid
  // reallocating.
  void add_sample_gradient(std::span<const double> theta, std::int64_t xi,
                           double weight, std::span<double> g) const {
    if (kind_ == ProblemKind::quadratic) {
      const auto& d = quad();
      const std::vector<double> u = rotated(theta);
      const double* lam = row(d.lambda, xi);
      const double* cx = row(d.c, xi);
      // Q (lambda o u) - c
      std::vector<double> lu(static_cast<std::size_t>(dim_));
      for (std::int64_t i = 0; i < dim_; ++i) lu[i] = lam[i] * u[i];
      for (std::int64_t r = 0; r < dim_; ++r) {
        double s = 0.0;
        for (std::int64_t i = 0; i < dim_; ++i)
          s += d.q[static_cast<std::size_t>(i * dim_ + r)] * lu[i];
        g[r] += weight * (s - cx[r]);
      }
      return;
    }
    const auto& d = logit();
    const double* x = row(d.x, xi);
    const double z = linalg::dot({x, static_cast<std::size_t>(dim_)}, theta);
    const double coeff = -d.y[xi] * detail::sigmoid(-d.y[xi] * z);
    for (std::int64_t i = 0; i < dim_; ++i)
      g[i] += weight * (coeff * x[i] + d.ridge * theta[i]);
  }

  double population_loss(std::span<const double> theta) const {
    if (kind_ == ProblemKind::quadratic) {
      const auto& d = quad();
      const std::vector<double> u = rotated(theta);
      double loss = 0.0;
      for (std::int64_t i = 0; i < dim_; ++i) {
        loss += 0.5 * d.lambda_mean[i] * u[i] * u[i] -
                d.c_mean[i] * theta[i];
      }
      return loss;
    }
    double loss = 0.0;
    for (std::int64_t xi = 0; xi < n_; ++xi) loss += sample_loss(theta, xi);
    return loss / static_cast<double>(n_);
  }

  std::vector<double> population_gradient(std::span<const double> theta) const {
    std::vector<double> g(static_cast<std::size_t>(dim_));
    if (kind_ == ProblemKind::quadratic) {
      const auto& d = quad();
      const std::vector<double> u = rotated(theta);
      std::vector<double> lu(static_cast<std::size_t>(dim_));
      for (std::int64_t i = 0; i < dim_; ++i) lu[i] = d.lambda_mean[i] * u[i];
      for (std::int64_t r = 0; r < dim_; ++r) {
        double s = 0.0;
        for (std::int64_t i = 0; i < dim_; ++i)
          s += d.q[static_cast<std::size_t>(i * dim_ + r)] * lu[i];
        g[r] = s - d.c_mean[r];
      }
      return g;
    }
    const double w = 1.0 / static_cast<double>(n_);
    for (std::int64_t xi = 0; xi < n_; ++xi)
      add_sample_gradient(theta, xi, w, g);
    return g;
  }

  double loss_gap(std::span<const double> theta) const {
    return population_loss(theta) - constants_.optimum_loss;
  }

  // Per-sample minimizer A_xi^{-1} c_xi (quadratic only).
  std::vector<double> sample_minimizer(std::int64_t xi) const {
    if (kind_ != ProblemKind::quadratic)
      throw parameter_error("sample_minimizer is quadratic-only");
    check_index(xi);
    const auto& d = quad();
    const double* lam = row(d.lambda, xi);
    const double* cx = row(d.c, xi);
    std::vector<double> u(static_cast<std::size_t>(dim_));
    for (std::int64_t i = 0; i < dim_; ++i) {
      double s = 0.0;
      for (std::int64_t c = 0; c < dim_; ++c)
        s += d.q[static_cast<std::size_t>(i * dim_ + c)] * cx[c];
      u[i] = s / lam[i];
    }
    return unrotated(u);
  }

  // Dense mean Hessian (quadratic only); used by eigenvalue oracles.
  std::vector<double> mean_hessian() const {
    if (kind_ != ProblemKind::quadratic)
      throw parameter_error("mean_hessian is quadratic-only");
    const auto& d = quad();
    const auto dd = static_cast<std::size_t>(dim_);
    std::vector<double> h(dd * dd, 0.0);
    for (std::size_t i = 0; i < dd; ++i) {
      for (std::size_t r = 0; r < dd; ++r) {
        for (std::size_t c = 0; c < dd; ++c) {
          h[r * dd + c] += d.q[i * dd + r] * d.lambda_mean[i] * d.q[i * dd + c];
        }
      }
    }
    return h;
  }

  const std::vector<double>& mean_linear_term() const {
    return quad().c_mean;
  }

  double ridge() const { return logit().ridge; }
  std::span<const double> feature(std::int64_t xi) const {
    return {row(logit().x, xi), static_cast<std::size_t>(dim_)};
  }
  double label(std::int64_t xi) const { return logit().y[xi]; }

  // New problem restricted to the given sample indices; constants and the
  // optimum are recomputed for the restricted population.
  ProblemSpec subset(std::span<const std::int64_t> indices) const {
    if (indices.empty()) throw parameter_error("subset needs >= 1 index");
    ProblemSpec sub;
    sub.kind_ = kind_;
    sub.dim_ = dim_;
    sub.n_ = static_cast<std::int64_t>(indices.size());
    const auto dd = static_cast<std::size_t>(dim_);
    if (kind_ == ProblemKind::quadratic) {
      const auto& src = quad();
      detail::QuadraticData d;
      d.q = src.q;
      d.lambda.reserve(indices.size() * dd);
      d.c.reserve(indices.size() * dd);
      for (std::int64_t xi : indices) {
        check_index(xi);
        d.lambda.insert(d.lambda.end(), row(src.lambda, xi),
                        row(src.lambda, xi) + dd);
        d.c.insert(d.c.end(), row(src.c, xi), row(src.c, xi) + dd);
      }
      sub.data_ = std::move(d);
    } else {
      const auto& src = logit();
      detail::LogisticData d;
      d.ridge = src.ridge;
      d.x.reserve(indices.size() * dd);
      d.y.reserve(indices.size());
      for (std::int64_t xi : indices) {
        check_index(xi);
        d.x.insert(d.x.end(), row(src.x, xi), row(src.x, xi) + dd);
        d.y.push_back(src.y[xi]);
      }
      sub.data_ = std::move(d);
    }
    sub.finalize();
    return sub;
  }

  static ProblemSpec quadratic(const MakeQuadraticOptions& opt);
  static ProblemSpec logistic(const MakeLogisticOptions& opt);

 private:
  friend double estimate_sgd_sigma(const ProblemSpec&,
                                   std::span<const std::vector<double>>);

  void check_index(std::int64_t xi) const {
    if (xi < 0 || xi >= n_)
      throw parameter_error("sample index out of range");
  }
  const detail::QuadraticData& quad() const {
    return std::get<detail::QuadraticData>(data_);
  }
  const detail::LogisticData& logit() const {
    return std::get<detail::LogisticData>(data_);
  }
  const double* row(const std::vector<double>& m, std::int64_t r) const {
    return m.data() + r * dim_;
  }
  std::vector<double> rotated(std::span<const double> theta) const {
    // u = Q^T theta with Q rows as the eigenbasis.
    const auto& d = quad();
    std::vector<double> u(static_cast<std::size_t>(dim_));
    linalg::matvec(d.q, static_cast<std::size_t>(dim_),
                   static_cast<std::size_t>(dim_), theta, u);
    return u;
  }
  std::vector<double> unrotated(std::span<const double> u) const {
    const auto& d = quad();
    std::vector<double> theta(static_cast<std::size_t>(dim_), 0.0);
    for (std::int64_t r = 0; r < dim_; ++r) {
      double s = 0.0;
      for (std::int64_t i = 0; i < dim_; ++i)
        s += d.q[static_cast<std::size_t>(i * dim_ + r)] * u[i];
      theta[r] = s;
    }
    return theta;
  }

  void finalize();  // recompute means, optimum, constants

  ProblemKind kind_ = ProblemKind::quadratic;
  std::int64_t dim_ = 0;
  std::int64_t n_ = 0;
  std::variant<detail::QuadraticData, detail::LogisticData> data_;
  ProblemConstants constants_;
};

// Max over probe points of the exact per-sample gradient variance
// (1/n) sum_xi ||grad l_xi(theta) - grad l(theta)||^2. This is computable
// by full enumeration and lower-bounds any valid sigma_sgd^2.
inline double estimate_sgd_sigma(const ProblemSpec& spec,
                                 std::span<const std::vector<double>> probes) {
  if (probes.empty()) throw parameter_error("estimate_sgd_sigma needs probes");
  double worst = 0.0;
  for (const auto& theta : probes) {
    const std::vector<double> g_pop = spec.population_gradient(theta);
    double var = 0.0;
    for (std::int64_t xi = 0; xi < spec.n_samples(); ++xi) {
      const std::vector<double> g = spec.sample_gradient(theta, xi);
      double dev = 0.0;
      for (std::size_t i = 0; i < g.size(); ++i) {
        const double diff = g[i] - g_pop[i];
        dev += diff * diff;
      }
      var += dev;
    }
    worst = std::max(worst, var / static_cast<double>(spec.n_samples()));
  }
  return worst;
}

inline void ProblemSpec::finalize() {
  const auto dd = static_cast<std::size_t>(dim_);
  if (kind_ == ProblemKind::quadratic) {
    auto& d = std::get<detail::QuadraticData>(data_);
    d.lambda_mean.assign(dd, 0.0);
    d.c_mean.assign(dd, 0.0);
    for (std::int64_t xi = 0; xi < n_; ++xi) {
      for (std::size_t i = 0; i < dd; ++i) {
        d.lambda_mean[i] += d.lambda[static_cast<std::size_t>(xi) * dd + i];
        d.c_mean[i] += d.c[static_cast<std::size_t>(xi) * dd + i];
      }
    }
    for (std::size_t i = 0; i < dd; ++i) {
      d.lambda_mean[i] /= static_cast<double>(n_);
      d.c_mean[i] /= static_cast<double>(n_);
    }
    constants_.smooth_l =
        *std::max_element(d.lambda_mean.begin(), d.lambda_mean.end());
    constants_.strong_mu =
        *std::min_element(d.lambda_mean.begin(), d.lambda_mean.end());
    // theta* = mean_hessian^{-1} c_mean, solved in the eigenbasis.
    std::vector<double> u(dd);
    linalg::matvec(d.q, dd, dd, d.c_mean, u);
    for (std::size_t i = 0; i < dd; ++i) u[i] /= d.lambda_mean[i];
    constants_.optimum = unrotated(u);
  } else {
    auto& d = std::get<detail::LogisticData>(data_);
    if (!(d.ridge > 0.0))
      throw parameter_error("logistic problems require ridge > 0");
    double max_x_sq = 0.0;
    for (std::int64_t xi = 0; xi < n_; ++xi) {
      const std::span<const double> x(d.x.data() + xi * dim_, dd);
      max_x_sq = std::max(max_x_sq, linalg::dot(x, x));
    }
    constants_.smooth_l = max_x_sq / 4.0 + d.ridge;
    constants_.strong_mu = d.ridge;
    // Newton with exact Hessian; ridge keeps it positive definite.
    std::vector<double> theta(dd, 0.0);
    for (int it = 0; it < 200; ++it) {
      const std::vector<double> g = population_gradient(theta);
      if (linalg::norm(g) <= 1e-10) break;
      std::vector<double> h(dd * dd, 0.0);
      for (std::int64_t xi = 0; xi < n_; ++xi) {
        const double* x = d.x.data() + xi * dim_;
        const double z =
            linalg::dot({x, dd}, theta);
        const double s = detail::sigmoid(z);
        const double w = s * (1.0 - s) / static_cast<double>(n_);
        for (std::size_t r = 0; r < dd; ++r)
          for (std::size_t c = 0; c < dd; ++c) h[r * dd + c] += w * x[r] * x[c];
      }
      for (std::size_t i = 0; i < dd; ++i) h[i * dd + i] += d.ridge;
      const std::vector<double> delta = linalg::cholesky_solve(h, dd, g);
      for (std::size_t i = 0; i < dd; ++i) theta[i] -= delta[i];
    }
    constants_.optimum = std::move(theta);
  }
  constants_.optimum_loss = population_loss(constants_.optimum);

  // Probe-based variance constant: the assumption quantifies over all
  // theta, so this is a certified lower bound used as the working value.
  std::vector<std::vector<double>> probes;
  probes.emplace_back(dd, 0.0);
  probes.push_back(constants_.optimum);
  std::vector<double> scaled = constants_.optimum;
  for (auto& v : scaled) v *= 1.5;
  probes.push_back(scaled);
  std::vector<double> ones(dd, 1.0 / std::sqrt(static_cast<double>(dd)));
  probes.push_back(ones);
  constants_.sgd_sigma = std::sqrt(estimate_sgd_sigma(*this, probes));
}

inline ProblemSpec ProblemSpec::quadratic(const MakeQuadraticOptions& opt) {
  if (opt.dim < 1 || opt.n < 1)
    throw parameter_error("quadratic problem needs dim >= 1 and n >= 1");
  if (!(opt.strong_mu > 0.0) || !(opt.smooth_l >= opt.strong_mu))
    throw parameter_error("quadratic problem needs 0 < mu <= L");
  ProblemSpec spec;
  spec.kind_ = ProblemKind::quadratic;
  spec.dim_ = opt.dim;
  spec.n_ = opt.n;
  Prng prng(opt.seed);
  detail::QuadraticData d;
  d.q = detail::random_orthogonal(opt.dim, &prng);
  const auto dd = static_cast<std::size_t>(opt.dim);
  d.lambda.resize(static_cast<std::size_t>(opt.n) * dd);
  d.c.resize(static_cast<std::size_t>(opt.n) * dd);
  for (std::int64_t xi = 0; xi < opt.n; ++xi) {
    double* lam = d.lambda.data() + xi * opt.dim;
    lam[0] = opt.smooth_l;  // pins the largest mean eigenvalue to L
    if (opt.dim > 1) lam[dd - 1] = opt.strong_mu;  // and the smallest to mu
    for (std::size_t i = 1; i + 1 < dd; ++i) {
      lam[i] =
          opt.strong_mu + (opt.smooth_l - opt.strong_mu) * prng.uniform01();
    }
  }
  spec.data_ = std::move(d);
  auto& dq = std::get<detail::QuadraticData>(spec.data_);
  // c_xi = A_xi m_xi for scattered per-sample minimizers m_xi.
  std::vector<double> m(dd);
  std::vector<double> um(dd);
  for (std::int64_t xi = 0; xi < opt.n; ++xi) {
    for (auto& v : m) v = opt.minimizer_spread * prng.normal();
    linalg::matvec(dq.q, dd, dd, m, um);
    const double* lam = dq.lambda.data() + xi * opt.dim;
    for (std::size_t i = 0; i < dd; ++i) um[i] *= lam[i];
    double* c = dq.c.data() + xi * opt.dim;
    for (std::size_t r = 0; r < dd; ++r) {
      double s = 0.0;
      for (std::size_t i = 0; i < dd; ++i) s += dq.q[i * dd + r] * um[i];
      c[r] = s;
    }
  }
  spec.finalize();
  if (opt.optimum) {
    if (opt.optimum->size() != dd)
      throw parameter_error("optimum target has wrong dimension");
    // Shift every c_xi by A_mean (target - theta*); the population
    // optimum lands exactly on the target, per-sample curvature intact.
    std::vector<double> diff(dd);
    for (std::size_t i = 0; i < dd; ++i)
      diff[i] = (*opt.optimum)[i] - spec.constants_.optimum[i];
    std::vector<double> u(dd);
    linalg::matvec(dq.q, dd, dd, diff, u);
    for (std::size_t i = 0; i < dd; ++i) u[i] *= dq.lambda_mean[i];
    std::vector<double> shift(dd, 0.0);
    for (std::size_t r = 0; r < dd; ++r) {
      double s = 0.0;
      for (std::size_t i = 0; i < dd; ++i) s += dq.q[i * dd + r] * u[i];
      shift[r] = s;
    }
    for (std::int64_t xi = 0; xi < opt.n; ++xi) {
      double* c = dq.c.data() + xi * opt.dim;
      for (std::size_t i = 0; i < dd; ++i) c[i] += shift[i];
    }
    spec.finalize();
  }
  return spec;
}

inline ProblemSpec ProblemSpec::logistic(const MakeLogisticOptions& opt) {
  if (opt.dim < 1 || opt.n < 1)
    throw parameter_error("logistic problem needs dim >= 1 and n >= 1");
  if (!(opt.ridge > 0.0))
    throw parameter_error("logistic problem needs ridge > 0");
  if (opt.flip_prob < 0.0 || opt.flip_prob >= 0.5)
    throw parameter_error("flip_prob must lie in [0, 0.5)");
  ProblemSpec spec;
  spec.kind_ = ProblemKind::logistic;
  spec.dim_ = opt.dim;
  spec.n_ = opt.n;
  Prng prng(opt.seed);
  detail::LogisticData d;
  d.ridge = opt.ridge;
  const auto dd = static_cast<std::size_t>(opt.dim);
  std::vector<double> w(dd);
  for (auto& v : w) v = prng.normal();
  linalg::scale(opt.weight_scale / linalg::norm(w), w);
  d.x.resize(static_cast<std::size_t>(opt.n) * dd);
  d.y.resize(static_cast<std::size_t>(opt.n));
  const double x_scale = 1.0 / std::sqrt(static_cast<double>(opt.dim));
  for (std::int64_t xi = 0; xi < opt.n; ++xi) {
    double* x = d.x.data() + xi * opt.dim;
    for (std::size_t i = 0; i < dd; ++i) x[i] = x_scale * prng.normal();
    const double z = linalg::dot({x, dd}, w);
    double label = z >= 0.0 ? 1.0 : -1.0;
    if (prng.uniform01() < opt.flip_prob) label = -label;
    d.y[xi] = label;
  }
  spec.data_ = std::move(d);
  spec.finalize();
  return spec;
}

// Loads a problem definition from flat "key = value" text. Schema:
//   kind  = quadratic | logistic     (required)
//   dim   = <int>, n = <int>, seed = <uint>
//   mu, L, spread                    (quadratic)
//   lambda, flip, scale              (logistic)
// Lines starting with '#' and an optional [problem] header are ignored;
// unknown keys are rejected.
inline ProblemSpec load_problem_config(std::istream& in) {
  std::map<std::string, std::string> kv;
  std::string line;
  const auto trim = [](std::string s) {
    const auto b = s.find_first_not_of(" \t\r");
    const auto e = s.find_last_not_of(" \t\r");
    return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
  };
  while (std::getline(in, line)) {
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    if (t.front() == '[' && t.back() == ']') {
      if (t != "[problem]")
        throw config_error("unexpected section in problem config: " + t);
      continue;
    }
    const auto eq = t.find('=');
    if (eq == std::string::npos)
      throw config_error("malformed problem config line: " + t);
    kv[trim(t.substr(0, eq))] = trim(t.substr(eq + 1));
  }
  const auto take = [&kv](const std::string& key) -> std::optional<std::string> {
    auto it = kv.find(key);
    if (it == kv.end()) return std::nullopt;
    std::string v = it->second;
    kv.erase(it);
    return v;
  };
  const auto as_double = [](const std::string& v, const std::string& key) {
    try {
      std::size_t pos = 0;
      const double out = std::stod(v, &pos);
      if (pos != v.size()) throw std::invalid_argument(v);
      return out;
    } catch (const std::exception&) {
      throw config_error("bad numeric value for " + key + ": " + v);
    }
  };

  const auto kind = take("kind");
  if (!kind) throw config_error("problem config requires kind=");
  const auto dim = take("dim"), n = take("n"), seed = take("seed");
  if (*kind == "quadratic") {
    MakeQuadraticOptions opt;
    if (dim) opt.dim = static_cast<std::int64_t>(as_double(*dim, "dim"));
    if (n) opt.n = static_cast<std::int64_t>(as_double(*n, "n"));
    if (seed) opt.seed = static_cast<std::uint64_t>(as_double(*seed, "seed"));
    if (auto v = take("mu")) opt.strong_mu = as_double(*v, "mu");
    if (auto v = take("L")) opt.smooth_l = as_double(*v, "L");
    if (auto v = take("spread")) opt.minimizer_spread = as_double(*v, "spread");
    if (!kv.empty())
      throw config_error("unknown problem config key: " + kv.begin()->first);
    return ProblemSpec::quadratic(opt);
  }
  if (*kind == "logistic") {
    MakeLogisticOptions opt;
    if (dim) opt.dim = static_cast<std::int64_t>(as_double(*dim, "dim"));
    if (n) opt.n = static_cast<std::int64_t>(as_double(*n, "n"));
    if (seed) opt.seed = static_cast<std::uint64_t>(as_double(*seed, "seed"));
    if (auto v = take("lambda")) opt.ridge = as_double(*v, "lambda");
    if (auto v = take("flip")) opt.flip_prob = as_double(*v, "flip");
    if (auto v = take("scale")) opt.weight_scale = as_double(*v, "scale");
    if (!kv.empty())
      throw config_error("unknown problem config key: " + kv.begin()->first);
    return ProblemSpec::logistic(opt);
  }
  throw config_error("unknown problem kind: " + *kind);
}

}  // namespace dpsgd

#endif  // DPSGD_PROBLEMS_HPP_
