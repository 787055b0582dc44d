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

// Seeded hierarchical Gaussian mixture with a three-layer taxonomy
// root -> superclass -> subclass. Superclass means are drawn around the
// origin, subclass means around their superclass mean, and items around their
// subclass mean.

#ifndef SHDH_SYNTHETIC_HPP_
#define SHDH_SYNTHETIC_HPP_

#include <cstddef>
#include <cstdint>
#include <string>

#include "shdh/features.hpp"
#include "shdh/hierarchy.hpp"

namespace shdh {

struct SyntheticConfig {
  int superclasses = 4;
  int subclasses = 4;  // per superclass
  std::size_t dim = 64;
  std::size_t train = 2000;
  std::size_t query = 200;
  double superclass_spread = 1.0;
  double subclass_spread = 0.6;
  double noise = 0.5;
  std::uint64_t seed = 1;
};

struct SyntheticData {
  std::string taxonomy_text;
  Taxonomy taxonomy;
  FeatureMatrix train_features;
  LabeledItems train_labels;
  FeatureMatrix query_features;
  LabeledItems query_labels;
};

SyntheticData make_synthetic(const SyntheticConfig& config);

/// "item-id<TAB>leaf-label" lines.
std::string labels_to_tsv(const LabeledItems& items, const Taxonomy& tax);

}  // namespace shdh

#endif  // SHDH_SYNTHETIC_HPP_
