// Copyright 2026 The SHDH Authors.
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

// Deliberately naive reimplementations used as test oracles. They share no
// code with the library beyond the public types.

#ifndef SHDH_TESTS_ORACLES_HPP_
#define SHDH_TESTS_ORACLES_HPP_

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <vector>

namespace shdh::testing {

// Child -> parent map read straight from edge text.
class ParentChains {
 public:
  explicit ParentChains(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
      if (line.empty() || line[0] == '#') continue;
      const auto tab = line.find('\t');
      parent_[line.substr(tab + 1)] = line.substr(0, tab);
    }
  }

  // Root-first chain of ancestors including `node`.
  std::vector<std::string> chain(const std::string& node) const {
    std::vector<std::string> out{node};
    for (auto it = parent_.find(node); it != parent_.end(); it = parent_.find(it->second)) {
      out.push_back(it->second);
    }
    std::reverse(out.begin(), out.end());
    return out;
  }

  // Number of layers (root included) on which the two chains agree.
  int shared_layers(const std::string& a, const std::string& b) const {
    const auto ca = chain(a);
    const auto cb = chain(b);
    int k = 0;
    for (std::size_t i = 0; i < std::min(ca.size(), cb.size()); ++i) {
      if (ca[i] == cb[i]) k = static_cast<int>(i) + 1;
    }
    return k;
  }

  // 2 * sum_{k=2..c} u_k - 1 evaluated as one rational, u_k = 2(K+1-k)/(K(K-1)).
  double similarity(const std::string& a, const std::string& b, int height) const {
    const int c = shared_layers(a, b);
    long long num = 0;
    for (int k = 2; k <= c; ++k) num += height + 1 - k;
    const long long den = static_cast<long long>(height) * (height - 1);
    return static_cast<double>(4 * num - den) / static_cast<double>(den);
  }

 private:
  std::map<std::string, std::string> parent_;
};

inline double naive_acg(const std::vector<double>& r, std::size_t n) {
  double s = 0;
  for (std::size_t i = 1; i <= n; ++i) s += r[i - 1];
  return s / n;
}

inline double naive_dcg(const std::vector<double>& r, std::size_t n) {
  double s = 0;
  for (std::size_t i = 1; i <= n; ++i) s += (std::pow(2.0, r[i - 1]) - 1.0) / (std::log(i + 1.0) / std::log(2.0));
  return s;
}

inline double naive_ndcg(const std::vector<double>& r, std::size_t n) {
  std::vector<double> best = r;
  std::sort(best.begin(), best.end(), std::greater<>());
  const double ideal = naive_dcg(best, n);
  return ideal == 0 ? 1.0 : naive_dcg(r, n) / ideal;
}

inline double naive_weighted_recall(const std::vector<double>& r, std::size_t n) {
  double top = 0, all = 0;
  for (std::size_t i = 0; i < r.size(); ++i) {
    all += r[i];
    if (i < n) top += r[i];
  }
  return top / all;
}

}  // namespace shdh::testing

#endif  // SHDH_TESTS_ORACLES_HPP_
