// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The orqa Authors

#pragma once

#include <functional>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "orqa/dense.hpp"
#include "orqa/eval.hpp"
#include "orqa/fusion.hpp"
#include "orqa/reader.hpp"
#include "orqa/sparse.hpp"

namespace orqa {

enum class RetrieverMode { kSparse, kDense, kHybrid };

std::string_view to_string(RetrieverMode mode);
RetrieverMode parse_retriever_mode(std::string_view name);

class Retriever {
 public:
  virtual ~Retriever() = default;
  virtual Ranking retrieve(std::string_view query, std::size_t k) const = 0;
};

class SparseRetriever final : public Retriever {
 public:
  explicit SparseRetriever(const SparseIndex& index) : index_(index) {}
  Ranking retrieve(std::string_view query, std::size_t k) const override { return index_.search(query, k); }

 private:
  const SparseIndex& index_;
};

class DenseRetriever final : public Retriever {
 public:
  DenseRetriever(const DenseIndex& index, const EmbeddingProvider& provider);
  Ranking retrieve(std::string_view query, std::size_t k) const override;

 private:
  const DenseIndex& index_;
  const EmbeddingProvider& provider_;
};

class HybridRetriever final : public Retriever {
 public:
  HybridRetriever(const SparseIndex& sparse, const DenseIndex& dense, const EmbeddingProvider& provider,
                  FusionConfig config = {})
      : searcher_(sparse, dense, provider, config) {}
  Ranking retrieve(std::string_view query, std::size_t k) const override { return searcher_.search(query, k); }

 private:
  HybridSearcher searcher_;
};

inline constexpr double kDefaultIrWeight = 0.7;
inline constexpr std::size_t kDefaultSparseK = 100;
inline constexpr std::size_t kDefaultHybridK = 40;

struct OrqaConfig {
  RetrieverMode mode = RetrieverMode::kHybrid;
  std::size_t k = kDefaultHybridK;
  double ir_weight = kDefaultIrWeight;
  FusionConfig fusion;
};

// K = 100 for sparse-only retrieval, 40 when a dense retriever is involved.
std::size_t default_k(RetrieverMode mode);
void validate(const OrqaConfig& config);

/// Combines retrieval and reader scores for one question. `candidates[i]`
/// is the reader's answer for `ranking[i]`. Both score vectors are
/// L2-normalized over these candidates; answers are sorted by combined
/// score, ties by passage id.
std::vector<RankedAnswer> rank_answers(const Ranking& ranking, std::span<const AnswerCandidate> candidates,
                                       double ir_weight);

/// Retrieve the top K passages, read each, normalize and combine the two
/// score vectors, sort. An empty retrieval gives an empty list.
std::vector<RankedAnswer> answer(std::string_view question, const Retriever& retriever, const ReaderProvider& reader,
                                 const PassageLookup& passages, const OrqaConfig& config, std::size_t threads = 1);

using Objective = std::function<double(std::span<const OpenQAExample>, std::span<const std::vector<RankedAnswer>>)>;

// Mean Top-1 F1.
double top1_f1_objective(std::span<const OpenQAExample> dev, std::span<const std::vector<RankedAnswer>> answers);

struct TuneResult {
  OrqaConfig best;
  double best_objective = 0.0;
  struct Cell {
    std::size_t k;
    double ir_weight;
    double objective;
  };
  std::vector<Cell> grid;
};

/// Exhaustive search over K x ir_weight maximizing `objective`; ties go to
/// the smaller K, then the smaller weight. Retrieval and reading run once at
/// the largest K and every cell is scored from that prefix.
TuneResult tune(std::span<const OpenQAExample> dev, const Retriever& retriever, const ReaderProvider& reader,
                const PassageLookup& passages, const OrqaConfig& base, std::span<const std::size_t> k_grid,
                std::span<const double> weight_grid, const Objective& objective = top1_f1_objective,
                std::size_t threads = 1);

}  // namespace orqa
