// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The orqa Authors

#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "orqa/dense.hpp"
#include "orqa/ranking.hpp"
#include "orqa/sparse.hpp"

namespace orqa {

struct FusionConfig {
  double sparse_weight = 0.3;
  std::size_t candidate_depth = 100;
};

void validate(const FusionConfig& config);

// Divides by the L2 norm; a zero vector comes back unchanged.
std::vector<double> l2_normalize(std::span<const double> scores);

// Exact score for a passage missing from one side, or nullopt if unknown.
using Rescorer = std::function<std::optional<double>(std::string_view passage_id)>;

/// Convex combination of two rankings over the union of their candidates.
/// Missing candidates are rescored when a rescorer is given, else 0. Each
/// side is L2-normalized over the union; ties are broken by passage id.
Ranking combine(const Ranking& rank_a, const Ranking& rank_b, double weight_a, const Rescorer& rescore_a = {},
                const Rescorer& rescore_b = {});

/// Sparse + dense retrieval over the same passage id space.
class HybridSearcher {
 public:
  HybridSearcher(const SparseIndex& sparse, const DenseIndex& dense, const EmbeddingProvider& provider,
                 FusionConfig config = {});

  Ranking search(std::string_view query, std::size_t k) const;

  const FusionConfig& config() const { return config_; }

 private:
  const SparseIndex& sparse_;
  const DenseIndex& dense_;
  const EmbeddingProvider& provider_;
  FusionConfig config_;
};

Ranking hybrid_search(const SparseIndex& sparse, const DenseIndex& dense, const EmbeddingProvider& provider,
                      std::string_view query, std::size_t k, const FusionConfig& config = {});

std::size_t overlap_at_k(const Ranking& rank_a, const Ranking& rank_b, std::size_t k);

}  // namespace orqa
