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

// Shared taxonomies and random generators for tests.

#ifndef SHDH_TESTS_FIXTURES_HPP_
#define SHDH_TESTS_FIXTURES_HPP_

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "shdh/codes.hpp"
#include "shdh/error.hpp"
#include "shdh/hierarchy.hpp"
#include "shdh/random.hpp"

namespace shdh::testing {

// K=3: root -> {P, A}, P -> {rose, sun}, A -> {tiger, oak}.
inline constexpr const char* kGarden =
    "root\tP\nroot\tA\nP\trose\nP\tsun\nA\ttiger\nA\toak\n";

// K=4: plant/animal at layer 2, flower at layer 3, rose/sunflower below it.
inline constexpr const char* kFigure =
    "# four-layer tree\n"
    "root\tplant\nroot\tanimal\n"
    "plant\tflower\nplant\ttree\n"
    "animal\tcat\nanimal\tbird\n"
    "flower\trose\nflower\tsunflower\n"
    "tree\toak\n"
    "cat\ttiger\n"
    "bird\tsparrow\n";

// Random complete-depth tree of height `height` with every internal node
// having 1..max_children children and at most `max_leaves` leaves.
inline std::string random_taxonomy_text(Rng& rng, int height, int max_children, std::size_t max_leaves) {
  std::string text;
  std::vector<std::string> frontier{"n0"};
  int next = 1;
  for (int depth = 1; depth < height; ++depth) {
    std::vector<std::string> children;
    for (std::size_t p = 0; p < frontier.size(); ++p) {
      const std::size_t parents_after = frontier.size() - p - 1;
      std::size_t count = 1 + static_cast<std::size_t>(rng.index(static_cast<std::uint64_t>(max_children)));
      // One child per parent once branching would exceed the leaf budget.
      if (children.size() + count + parents_after > max_leaves) count = 1;
      for (std::size_t c = 0; c < count; ++c) {
        std::string name = "n" + std::to_string(next++);
        text += frontier[p] + "\t" + name + "\n";
        children.push_back(std::move(name));
      }
    }
    frontier = std::move(children);
  }
  return text;
}

inline std::vector<std::int8_t> random_logical(Rng& rng, int bits) {
  std::vector<std::int8_t> v(static_cast<std::size_t>(bits));
  for (auto& x : v) x = (rng.next() & 1) ? 1 : -1;
  return v;
}

template <typename Fn>
ErrorCode error_of(Fn&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  throw std::logic_error("expected shdh::Error");
}

}  // namespace shdh::testing

#endif  // SHDH_TESTS_FIXTURES_HPP_
