// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The orqa Authors

#include "orqa/fusion.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <unordered_map>
#include <unordered_set>

#include "orqa/error.hpp"

namespace orqa {

bool is_valid_ranking(const Ranking& ranking) {
  std::unordered_set<std::string_view> seen;
  for (std::size_t i = 0; i < ranking.size(); ++i) {
    if (!std::isfinite(ranking[i].score)) return false;
    if (i > 0 && ranking[i].score > ranking[i - 1].score) return false;
    if (!seen.insert(ranking[i].passage_id).second) return false;
  }
  return true;
}

void validate(const FusionConfig& config) {
  if (!(config.sparse_weight >= 0.0 && config.sparse_weight <= 1.0)) throw Error("sparse weight must lie in [0, 1]");
  if (config.candidate_depth < 1) throw Error("candidate depth must be >= 1");
}

std::vector<double> l2_normalize(std::span<const double> scores) {
  double sq = 0.0;
  for (double s : scores) sq += s * s;
  std::vector<double> out(scores.begin(), scores.end());
  if (sq == 0.0) return out;
  const double norm = std::sqrt(sq);
  for (auto& s : out) s /= norm;
  return out;
}

Ranking combine(const Ranking& rank_a, const Ranking& rank_b, double weight_a, const Rescorer& rescore_a,
                const Rescorer& rescore_b) {
  if (!(weight_a >= 0.0 && weight_a <= 1.0)) throw Error("combination weight must lie in [0, 1]");

  std::vector<std::string_view> ids;
  std::unordered_map<std::string_view, std::size_t> slot;
  for (const auto* r : {&rank_a, &rank_b})
    for (const auto& e : *r)
      if (slot.emplace(e.passage_id, ids.size()).second) ids.push_back(e.passage_id);

  auto side_scores = [&](const Ranking& r, const Rescorer& rescore) {
    std::vector<double> s(ids.size(), 0.0);
    std::vector<bool> present(ids.size(), false);
    for (const auto& e : r) {
      auto i = slot.at(e.passage_id);
      s[i] = e.score;
      present[i] = true;
    }
    if (rescore)
      for (std::size_t i = 0; i < ids.size(); ++i)
        if (!present[i])
          if (auto v = rescore(ids[i])) s[i] = *v;
    return l2_normalize(s);
  };
  const auto a = side_scores(rank_a, rescore_a);
  const auto b = side_scores(rank_b, rescore_b);

  Ranking out;
  out.reserve(ids.size());
  for (std::size_t i = 0; i < ids.size(); ++i)
    out.push_back({std::string(ids[i]), weight_a * a[i] + (1.0 - weight_a) * b[i]});
  std::sort(out.begin(), out.end(), [](const ScoredPassage& x, const ScoredPassage& y) {
    return x.score > y.score || (x.score == y.score && x.passage_id < y.passage_id);
  });
  return out;
}

HybridSearcher::HybridSearcher(const SparseIndex& sparse, const DenseIndex& dense, const EmbeddingProvider& provider,
                               FusionConfig config)
    : sparse_(sparse), dense_(dense), provider_(provider), config_(config) {
  validate(config_);
  if (sparse_.passage_ids() != dense_.passage_ids())
    throw Error("sparse and dense indices cover different passage id spaces");
  dense_.check_provider(provider_);
}

Ranking HybridSearcher::search(std::string_view query, std::size_t k) const {
  const auto qvec = provider_.embed_query(query);
  const std::span<const float> q(qvec);
  auto sparse_hits = sparse_.search(query, config_.candidate_depth);
  auto dense_hits = dense_.search(q, config_.candidate_depth);

  const auto terms = sparse_.analyzer().analyze(query);
  Rescorer sparse_rescore = [&](std::string_view id) -> std::optional<double> {
    auto ord = sparse_.ordinal_of(id);
    if (!ord) return std::nullopt;
    double total = 0.0;
    for (const auto& t : terms)
      total += sparse_.term_weight(sparse_.term_frequency(t, *ord), static_cast<std::uint32_t>(sparse_.postings(t).size()),
                                   sparse_.doc_lengths()[*ord]);
    return total;
  };
  Rescorer dense_rescore = [&](std::string_view id) -> std::optional<double> {
    auto ord = dense_.ordinal_of(id);
    if (!ord) return std::nullopt;
    return dense_.score(q, *ord);
  };
  auto fused = combine(sparse_hits, dense_hits, config_.sparse_weight, sparse_rescore, dense_rescore);
  if (fused.size() > k) fused.resize(k);
  return fused;
}

Ranking hybrid_search(const SparseIndex& sparse, const DenseIndex& dense, const EmbeddingProvider& provider,
                      std::string_view query, std::size_t k, const FusionConfig& config) {
  return HybridSearcher(sparse, dense, provider, config).search(query, k);
}

std::size_t overlap_at_k(const Ranking& rank_a, const Ranking& rank_b, std::size_t k) {
  std::unordered_set<std::string_view> top_a;
  for (std::size_t i = 0; i < std::min(k, rank_a.size()); ++i) top_a.insert(rank_a[i].passage_id);
  std::size_t n = 0;
  std::unordered_set<std::string_view> counted;
  for (std::size_t i = 0; i < std::min(k, rank_b.size()); ++i)
    if (top_a.count(rank_b[i].passage_id) && counted.insert(rank_b[i].passage_id).second) ++n;
  return n;
}

}  // namespace orqa
