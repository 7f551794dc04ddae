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

#ifndef SFL_LOVASZ_H_
#define SFL_LOVASZ_H_

#include <algorithm>
#include <numeric>
#include <span>
#include <vector>

#include "sfl/common.h"

namespace sfl {

// Lovász extension of a set function h with h({}) = 0, evaluated with the
// sorted telescoping sum
//
//   sum_k h({c_1..c_k}) (y_{c_k} - y_{c_{k+1}}) + h(C) y_{c_n},
//
// y_{c_1} >= ... >= y_{c_n}, ties broken by ascending client id. Terms whose
// coefficient is zero are skipped, so the cost is one oracle call per distinct
// positive value of y.
template <typename SetFn>
double Lovasz(const SetFn& h, std::span<const double> y) {
  for (double v : y) {
    if (!(v >= 0.0 && v <= 1.0)) {
      throw DomainError("lovasz: component outside [0,1]");
    }
  }
  std::vector<int> order;
  order.reserve(y.size());
  for (size_t c = 0; c < y.size(); ++c) {
    if (y[c] > 0.0) order.push_back(static_cast<int>(c));
  }
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    return y[a] != y[b] ? y[a] > y[b] : a < b;
  });
  ClientSet prefix;
  prefix.reserve(order.size());
  double value = 0.0;
  for (size_t k = 0; k < order.size(); ++k) {
    const int c = order[k];
    prefix.insert(std::upper_bound(prefix.begin(), prefix.end(), c), c);
    const double next = k + 1 < order.size() ? y[order[k + 1]] : 0.0;
    const double step = y[c] - next;
    if (step > 0.0) value += h(std::span<const int>(prefix)) * step;
  }
  return value;
}

// Lovász extension of min(z, theta) componentwise.
template <typename SetFn>
double LovaszTruncated(const SetFn& h, std::span<const double> z,
                       double theta) {
  if (!(theta >= 0.0 && theta <= 1.0)) {
    throw DomainError("lovasz_truncated: theta outside [0,1]");
  }
  for (double v : z) {
    if (!(v >= 0.0 && v <= 1.0)) {
      throw DomainError("lovasz_truncated: component outside [0,1]");
    }
  }
  std::vector<double> capped(z.begin(), z.end());
  for (double& v : capped) v = std::min(v, theta);
  return Lovasz(h, capped);
}

}  // namespace sfl

#endif  // SFL_LOVASZ_H_
