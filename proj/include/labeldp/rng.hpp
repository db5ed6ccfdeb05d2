// Copyright 2026 The LabelDP Authors
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

#ifndef LABELDP_RNG_HPP
#define LABELDP_RNG_HPP

#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <vector>

namespace labeldp {

// Counter-based seeded random stream (SplitMix64 core).
//
// The output sequence is a pure function of (seed, stream_id): draw i is
// mix64(key + (i+1) * 0x9e3779b97f4a7c15) with key = mix64(seed ^
// mix64(stream_id + 0xd1b54a32d192ed03)). This layout is frozen; outputs are
// stable across platforms and releases so that seeded pipelines reproduce
// byte-identical results.
//
// derive() produces statistically independent child streams keyed by integer
// ids, so per-cluster / per-user work can run in any order (or in parallel)
// without changing results.
class RngStream {
 public:
  RngStream(std::uint64_t seed, std::uint64_t stream_id = 0)
      : key_(mix64(seed ^ mix64(stream_id + 0xd1b54a32d192ed03ULL))),
        counter_(0) {}

  // Child stream for entity `id` within domain `tag`. Tags keep streams for
  // different pipeline stages disjoint even when entity ids overlap.
  RngStream derive(std::uint64_t tag, std::uint64_t id = 0) const {
    std::uint64_t child = mix64(key_ ^ mix64(tag + 0x9e3779b97f4a7c15ULL));
    child = mix64(child ^ mix64(id + 0xbf58476d1ce4e5b9ULL));
    return RngStream(FromKey{}, child);
  }

  std::uint64_t next_u64() {
    counter_ += 0x9e3779b97f4a7c15ULL;
    return mix64(key_ + counter_);
  }

  // Uniform draw strictly inside (0, 1): (k + 0.5) / 2^53 for a 53-bit k.
  double uniform() {
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
  }

  // Uniform integer in [0, n) via the 128-bit multiply trick.
  std::uint64_t uniform_index(std::uint64_t n) {
    if (n == 0) throw std::invalid_argument("uniform_index: n must be > 0");
    return static_cast<std::uint64_t>(
        (static_cast<unsigned __int128>(next_u64()) * n) >> 64);
  }

  bool bernoulli(double p) { return uniform() < p; }

  // Laplace(0, scale) via inverse CDF: u in (-1/2, 1/2),
  // z = -scale * sign(u) * ln(1 - 2|u|).
  double laplace(double scale) {
    if (!(scale > 0.0) || !std::isfinite(scale)) {
      throw std::invalid_argument(
          "laplace: scale must be positive and finite");
    }
    const double u = uniform() - 0.5;
    const double mag = std::log(1.0 - 2.0 * std::fabs(u));
    return u < 0.0 ? scale * mag : -scale * mag;
  }

  double gaussian() {
    // Box-Muller; two uniforms per draw, no cached spare (keeps the stream
    // position a pure function of the number of calls).
    const double u1 = uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) *
           std::cos(2.0 * 3.141592653589793238462643383279502884 * u2);
  }

 private:
  struct FromKey {};
  RngStream(FromKey, std::uint64_t key) : key_(key), counter_(0) {}

  static std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  std::uint64_t key_;
  std::uint64_t counter_;
};

// Stage tags for derived streams. Values are part of the frozen layout.
namespace rng_tag {
inline constexpr std::uint64_t kClusterNoise = 1;
inline constexpr std::uint64_t kLabelResample = 2;
inline constexpr std::uint64_t kP2PUser = 3;
inline constexpr std::uint64_t kKMeans = 4;
inline constexpr std::uint64_t kShuffle = 5;
inline constexpr std::uint64_t kLapTruth = 6;
inline constexpr std::uint64_t kLapNeighbor = 7;
inline constexpr std::uint64_t kLapBits = 8;
inline constexpr std::uint64_t kTrial = 9;
inline constexpr std::uint64_t kSynthetic = 10;
}  // namespace rng_tag

}  // namespace labeldp

#endif  // LABELDP_RNG_HPP
