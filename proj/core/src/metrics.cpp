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

#include "shdh/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <utility>

#include "format.hpp"
#include "shdh/error.hpp"

namespace shdh {

std::string_view relevance_mode_name(RelevanceMode mode) noexcept {
  return mode == RelevanceMode::kHierSimilarity ? "hier-similarity" : "shared-layers";
}

RelevanceMode parse_relevance_mode(std::string_view name) {
  if (name == "shared-layers") return RelevanceMode::kSharedLayers;
  if (name == "hier-similarity") return RelevanceMode::kHierSimilarity;
  throw Error(ErrorCode::kInvalidArgument, "unknown relevance mode '" + std::string(name) +
                                               "' (expected 'shared-layers' or 'hier-similarity')");
}

double relevance(const Taxonomy& tax, NodeId query_label, NodeId item_label, RelevanceMode mode) {
  if (mode == RelevanceMode::kHierSimilarity) return hier_similarity(tax, query_label, item_label);
  if (!tax.is_leaf(query_label) || !tax.is_leaf(item_label)) {
    throw Error(ErrorCode::kUnknownLabel, "relevance is defined on leaf labels only");
  }
  // Paths agree on a prefix; the root always matches but carries no credit.
  return static_cast<double>(tax.shared_depth(query_label, item_label) - 1);
}

namespace {

void check_rank(std::span<const double> relevances, std::size_t n) {
  if (n < 1 || n > relevances.size()) {
    throw Error(ErrorCode::kRankTooLarge, "cutoff " + std::to_string(n) + " outside [1, " +
                                              std::to_string(relevances.size()) + "]");
  }
}

}  // namespace

double acg_at(std::span<const double> relevances, std::size_t n) {
  check_rank(relevances, n);
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) sum += relevances[i];
  return sum / static_cast<double>(n);
}

double dcg_at(std::span<const double> relevances, std::size_t n) {
  check_rank(relevances, n);
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sum += (std::exp2(relevances[i]) - 1.0) / std::log2(static_cast<double>(i) + 2.0);
  }
  return sum;
}

std::vector<double> ideal_order(std::span<const double> relevances) {
  std::vector<double> ideal(relevances.begin(), relevances.end());
  std::sort(ideal.begin(), ideal.end(), std::greater<>());
  return ideal;
}

double ndcg_at(std::span<const double> relevances, std::span<const double> ideal, std::size_t n) {
  check_rank(relevances, n);
  if (ideal.size() != relevances.size() || !std::ranges::equal(ideal_order(relevances), ideal)) {
    throw Error(ErrorCode::kIdealMismatch, "ideal ranking is not the descending order of the same relevances");
  }
  const double best = dcg_at(ideal, n);
  if (best == 0.0) return 1.0;
  return dcg_at(relevances, n) / best;
}

double weighted_recall_at(std::span<const double> relevances, std::size_t n) {
  check_rank(relevances, n);
  double total = 0.0;
  for (const double s : relevances) total += s;
  if (total == 0.0) throw Error(ErrorCode::kZeroTotalRelevance, "query has zero total relevance");
  double top = 0.0;
  for (std::size_t i = 0; i < n; ++i) top += relevances[i];
  return top / total;
}

QueryRanking to_ranking(std::string query_id, NodeId label, const SearchResult& hits) {
  QueryRanking q{std::move(query_id), label, {}, {}};
  q.ranking.reserve(hits.size());
  q.distances.reserve(hits.size());
  for (const SearchHit& h : hits) {
    q.ranking.push_back(h.position);
    q.distances.push_back(h.distance);
  }
  return q;
}

std::vector<double> ranked_relevances(const QueryRanking& query, std::span<const NodeId> db_labels,
                                      const Taxonomy& tax, RelevanceMode mode) {
  if (query.ranking.size() != db_labels.size()) {
    throw Error(ErrorCode::kShapeMismatch, "ranking for query '" + query.query_id + "' covers " +
                                               std::to_string(query.ranking.size()) + " of " +
                                               std::to_string(db_labels.size()) + " items");
  }
  std::vector<double> rel;
  rel.reserve(query.ranking.size());
  for (const std::size_t pos : query.ranking) {
    if (pos >= db_labels.size()) throw Error(ErrorCode::kShapeMismatch, "ranking position out of range");
    rel.push_back(relevance(tax, query.label, db_labels[pos], mode));
  }
  return rel;
}

MetricReport eval_queries(std::span<const QueryRanking> queries, std::span<const NodeId> db_labels,
                          const Taxonomy& tax, RelevanceMode mode, std::span<const std::size_t> ns) {
  MetricReport report;
  report.mode = mode;
  report.ns.assign(ns.begin(), ns.end());
  for (const std::size_t n : ns) {
    if (n < 1 || n > db_labels.size()) {
      throw Error(ErrorCode::kRankTooLarge, "cutoff " + std::to_string(n) + " outside [1, " +
                                                std::to_string(db_labels.size()) + "]");
    }
  }

  std::vector<double> wr_sum(ns.size(), 0.0);
  report.mean.assign(ns.size(), MetricValues{});
  for (const QueryRanking& q : queries) {
    const std::vector<double> rel = ranked_relevances(q, db_labels, tax, mode);
    const std::vector<double> ideal = ideal_order(rel);
    double total = 0.0;
    for (const double s : rel) total += s;
    const bool excluded = total == 0.0;
    if (excluded) ++report.weighted_recall_excluded;

    QueryMetrics qm{q.query_id, {}};
    for (std::size_t j = 0; j < ns.size(); ++j) {
      MetricValues v;
      v.acg = acg_at(rel, ns[j]);
      v.dcg = dcg_at(rel, ns[j]);
      v.ndcg = ndcg_at(rel, ideal, ns[j]);
      if (!excluded) {
        v.weighted_recall = weighted_recall_at(rel, ns[j]);
        wr_sum[j] += *v.weighted_recall;
      }
      report.mean[j].acg += v.acg;
      report.mean[j].dcg += v.dcg;
      report.mean[j].ndcg += v.ndcg;
      qm.at.push_back(v);
    }
    report.queries.push_back(std::move(qm));
  }

  const auto count = static_cast<double>(queries.size());
  const std::size_t included = queries.size() - report.weighted_recall_excluded;
  for (std::size_t j = 0; j < ns.size(); ++j) {
    if (!queries.empty()) {
      report.mean[j].acg /= count;
      report.mean[j].dcg /= count;
      report.mean[j].ndcg /= count;
    }
    if (included > 0) report.mean[j].weighted_recall = wr_sum[j] / static_cast<double>(included);
  }
  return report;
}

std::string MetricReport::to_csv() const {
  std::string out = "# relevance=" + std::string(relevance_mode_name(mode)) + "; " + std::string(kDcgFormula) +
                    "; weighted_recall_excluded=" + std::to_string(weighted_recall_excluded) + "\n";
  out += "query_id,n,metric,value\n";
  auto emit = [&out](const std::string& id, std::size_t n, const MetricValues& v) {
    const std::string prefix = id + "," + std::to_string(n) + ",";
    out += prefix + "ACG," + internal::format_double(v.acg) + "\n";
    out += prefix + "DCG," + internal::format_double(v.dcg) + "\n";
    out += prefix + "NDCG," + internal::format_double(v.ndcg) + "\n";
    if (v.weighted_recall) out += prefix + "WR," + internal::format_double(*v.weighted_recall) + "\n";
  };
  for (const auto& q : queries) {
    for (std::size_t j = 0; j < ns.size(); ++j) emit(q.query_id, ns[j], q.at[j]);
  }
  for (std::size_t j = 0; j < ns.size(); ++j) emit("mean", ns[j], mean[j]);
  return out;
}

std::vector<CurvePoint> weighted_recall_by_rank(std::span<const QueryRanking> queries,
                                                std::span<const NodeId> db_labels, const Taxonomy& tax,
                                                RelevanceMode mode, std::span<const std::size_t> ns) {
  const MetricReport report = eval_queries(queries, db_labels, tax, mode, ns);
  std::vector<CurvePoint> curve;
  for (std::size_t j = 0; j < ns.size(); ++j) {
    curve.push_back({static_cast<double>(ns[j]), report.mean[j].weighted_recall.value_or(std::nan(""))});
  }
  return curve;
}

std::vector<CurvePoint> weighted_recall_by_radius(std::span<const QueryRanking> queries,
                                                  std::span<const NodeId> db_labels, const Taxonomy& tax,
                                                  RelevanceMode mode, std::span<const double> radii) {
  std::vector<double> sums(radii.size(), 0.0);
  std::size_t included = 0;
  for (const QueryRanking& q : queries) {
    if (q.distances.size() != q.ranking.size()) {
      throw Error(ErrorCode::kShapeMismatch, "ranking for query '" + q.query_id + "' has no distances");
    }
    const std::vector<double> rel = ranked_relevances(q, db_labels, tax, mode);
    double total = 0.0;
    for (const double s : rel) total += s;
    if (total == 0.0) continue;
    ++included;
    for (std::size_t r = 0; r < radii.size(); ++r) {
      double within = 0.0;
      for (std::size_t i = 0; i < rel.size() && q.distances[i] <= radii[r]; ++i) within += rel[i];
      sums[r] += within / total;
    }
  }
  std::vector<CurvePoint> curve;
  for (std::size_t r = 0; r < radii.size(); ++r) {
    curve.push_back({radii[r], included > 0 ? sums[r] / static_cast<double>(included) : std::nan("")});
  }
  return curve;
}

std::string curve_to_csv(std::span<const CurvePoint> curve, std::string_view x_name, std::string_view y_name) {
  std::string out = std::string(x_name) + "," + std::string(y_name) + "\n";
  for (const auto& p : curve) out += internal::format_double(p.x) + "," + internal::format_double(p.value) + "\n";
  return out;
}

}  // namespace shdh
