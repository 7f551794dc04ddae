// Copyright 2026 The SFL Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef SFL_COMMON_H_
#define SFL_COMMON_H_

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <iterator>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace sfl {

// Equality tolerance for oracle values and cost comparisons.
inline constexpr double kEpsNum = 1e-9;

// Errors. The CLI maps CapError to exit code 2 and InvariantError to 3.
class DomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class CapError : public std::length_error {
 public:
  using std::length_error::length_error;
};

class UnsupportedVariantError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

class InvariantError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define SFL_CHECK_INVARIANT(cond, msg)                                \
  do {                                                                \
    if (!(cond)) throw ::sfl::InvariantError(std::string(msg));       \
  } while (0)

// A set of client ids, kept sorted and duplicate free.
using ClientSet = std::vector<int>;

inline void Normalize(ClientSet& s) {
  std::sort(s.begin(), s.end());
  s.erase(std::unique(s.begin(), s.end()), s.end());
}

inline ClientSet Union(std::span<const int> a, std::span<const int> b) {
  ClientSet out;
  out.reserve(a.size() + b.size());
  std::set_union(a.begin(), a.end(), b.begin(), b.end(),
                 std::back_inserter(out));
  return out;
}

inline ClientSet Difference(std::span<const int> a, std::span<const int> b) {
  ClientSet out;
  std::set_difference(a.begin(), a.end(), b.begin(), b.end(),
                      std::back_inserter(out));
  return out;
}

inline ClientSet Intersection(std::span<const int> a, std::span<const int> b) {
  ClientSet out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(),
                        std::back_inserter(out));
  return out;
}

inline bool Contains(std::span<const int> s, int c) {
  return std::binary_search(s.begin(), s.end(), c);
}

inline bool IsSubset(std::span<const int> a, std::span<const int> b) {
  return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

// Bitmask <-> ClientSet over a ground of at most 32 clients.
inline ClientSet MaskToSet(uint32_t mask) {
  ClientSet out;
  while (mask != 0) {
    out.push_back(std::countr_zero(mask));
    mask &= mask - 1;
  }
  return out;
}

inline uint32_t SetToMask(std::span<const int> s) {
  uint32_t mask = 0;
  for (int c : s) mask |= uint32_t{1} << c;
  return mask;
}

// SplitMix64 (Steele, Lea, Flood 2014). Used everywhere randomness enters so
// that results are bit-reproducible across platforms and standard libraries.
class SplitMix64 {
 public:
  explicit SplitMix64(uint64_t seed) : state_(seed) {}

  uint64_t Next() {
    uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  // Uniform in [0, 1) with 53 random bits.
  double Uniform() { return static_cast<double>(Next() >> 11) * 0x1.0p-53; }

  double Uniform(double lo, double hi) { return lo + (hi - lo) * Uniform(); }

  // Uniform integer in [0, bound). Lemire-free modulo reduction; the bias is
  // below 2^-40 for every bound used here.
  uint64_t Below(uint64_t bound) { return Next() % bound; }

  static uint64_t Mix(uint64_t x) {
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
  }

  // Independent substream for a (seed, a, b) triple.
  static SplitMix64 Stream(uint64_t seed, uint64_t a, uint64_t b = 0) {
    return SplitMix64(Mix(seed ^ Mix(a * 0x9E3779B97F4A7C15ULL + 1) ^
                          Mix(b + 0xD1B54A32D192ED03ULL)));
  }

 private:
  uint64_t state_;
};

// Fisher-Yates driven by SplitMix64.
template <typename T>
void Shuffle(std::vector<T>& v, SplitMix64& rng) {
  for (size_t i = v.size(); i > 1; --i) {
    size_t j = rng.Below(i);
    std::swap(v[i - 1], v[j]);
  }
}

inline bool NearlyEqual(double a, double b, double tol = kEpsNum) {
  return std::abs(a - b) <= tol * std::max(1.0, std::max(std::abs(a), std::abs(b)));
}

}  // namespace sfl

#endif  // SFL_COMMON_H_
