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

#ifndef DPSGD_RANDOM_HPP_
#define DPSGD_RANDOM_HPP_

#include <cmath>
#include <cstdint>
#include <numeric>
#include <random>
#include <vector>

namespace dpsgd {

// Seeded generator with fully specified transforms, so that a given seed
// produces the same stream on every platform:
//  - uniforms take the top 53 bits of one mt19937_64 output;
//  - Gaussians use the Box-Muller transform on two uniforms (the spare
//    value is cached and returned by the next call);
//  - bounded integers use rejection sampling, never a bare modulus;
//  - subsets are partial Fisher-Yates over the index range.
// std::normal_distribution and friends are deliberately not used: their
// output is implementation-defined.
class Prng {
 public:
  explicit Prng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  // Uniform in [0, 1).
  double uniform01() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  // Standard normal draw.
  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    const double u1 =
        (static_cast<double>(engine_() >> 11) + 1.0) * 0x1.0p-53;  // (0, 1]
    const double u2 = uniform01();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * M_PI * u2;
    spare_ = r * std::sin(angle);
    has_spare_ = true;
    return r * std::cos(angle);
  }

  double normal(double stddev) { return stddev * normal(); }

  // Uniform in [0, bound). Rejection keeps the draw unbiased.
  std::uint64_t uniform_index(std::uint64_t bound) {
    if (bound <= 1) return 0;
    const std::uint64_t reject_below = (-bound) % bound;  // 2^64 mod bound
    for (;;) {
      const std::uint64_t x = engine_();
      if (x >= reject_below) return x % bound;
    }
  }

  // Uniform subset of size k from {0, ..., n-1}, without replacement.
  void sample_without_replacement(std::size_t n, std::size_t k,
                                  std::vector<std::size_t>* out) {
    scratch_.resize(n);
    std::iota(scratch_.begin(), scratch_.end(), std::size_t{0});
    out->resize(k);
    for (std::size_t i = 0; i < k; ++i) {
      const std::size_t j =
          i + static_cast<std::size_t>(uniform_index(n - i));
      std::swap(scratch_[i], scratch_[j]);
      (*out)[i] = scratch_[i];
    }
  }

  // In-place Fisher-Yates shuffle.
  template <typename T>
  void shuffle(std::vector<T>* v) {
    for (std::size_t i = v->size(); i > 1; --i) {
      const std::size_t j = static_cast<std::size_t>(uniform_index(i));
      std::swap((*v)[i - 1], (*v)[j]);
    }
  }

 private:
  std::mt19937_64 engine_;
  std::vector<std::size_t> scratch_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace dpsgd

#endif  // DPSGD_RANDOM_HPP_
