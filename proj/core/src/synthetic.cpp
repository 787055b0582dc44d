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

#include "shdh/synthetic.hpp"

#include <vector>

#include "shdh/error.hpp"
#include "shdh/random.hpp"

namespace shdh {

namespace {

std::string superclass_name(int s) { return "super" + std::to_string(s); }
std::string subclass_name(int s, int c) { return "super" + std::to_string(s) + "_sub" + std::to_string(c); }

}  // namespace

SyntheticData make_synthetic(const SyntheticConfig& config) {
  if (config.superclasses < 1 || config.subclasses < 1 || config.dim == 0) {
    throw Error(ErrorCode::kInvalidArgument, "synthetic data needs >= 1 class per layer and dim >= 1");
  }
  SyntheticData data;
  for (int s = 0; s < config.superclasses; ++s) data.taxonomy_text += "root\t" + superclass_name(s) + "\n";
  for (int s = 0; s < config.superclasses; ++s) {
    for (int c = 0; c < config.subclasses; ++c) {
      data.taxonomy_text += superclass_name(s) + "\t" + subclass_name(s, c) + "\n";
    }
  }
  data.taxonomy = parse_taxonomy(data.taxonomy_text);

  Rng rng(config.seed);
  const std::size_t classes = static_cast<std::size_t>(config.superclasses) * config.subclasses;
  std::vector<std::vector<double>> means(classes, std::vector<double>(config.dim));
  std::vector<NodeId> leaf_of(classes);
  for (int s = 0; s < config.superclasses; ++s) {
    std::vector<double> center(config.dim);
    for (double& v : center) v = config.superclass_spread * rng.normal();
    for (int c = 0; c < config.subclasses; ++c) {
      const std::size_t k = static_cast<std::size_t>(s) * config.subclasses + c;
      for (std::size_t j = 0; j < config.dim; ++j) means[k][j] = center[j] + config.subclass_spread * rng.normal();
      leaf_of[k] = data.taxonomy.id_of(subclass_name(s, c));
    }
  }

  auto draw = [&](std::size_t n, const std::string& prefix, FeatureMatrix& features, LabeledItems& labels) {
    features = FeatureMatrix(n, config.dim);
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t k = static_cast<std::size_t>(rng.index(classes));
      auto row = features.row(i);
      for (std::size_t j = 0; j < config.dim; ++j) {
        row[j] = static_cast<float>(means[k][j] + config.noise * rng.normal());
      }
      labels.ids.push_back(prefix + std::to_string(i));
      labels.labels.push_back(leaf_of[k]);
    }
  };
  draw(config.train, "train", data.train_features, data.train_labels);
  draw(config.query, "query", data.query_features, data.query_labels);
  return data;
}

std::string labels_to_tsv(const LabeledItems& items, const Taxonomy& tax) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    out += items.ids[i];
    out += '\t';
    out += tax.name(items.labels[i]);
    out += '\n';
  }
  return out;
}

}  // namespace shdh
