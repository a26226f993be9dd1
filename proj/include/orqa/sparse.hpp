// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The orqa Authors

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "orqa/analyzer.hpp"
#include "orqa/corpus.hpp"
#include "orqa/ranking.hpp"

namespace orqa {

struct Bm25Params {
  double k1 = 1.2;
  double b = 0.75;
};

struct Posting {
  std::uint32_t ordinal = 0;
  std::uint32_t tf = 0;

  friend bool operator==(const Posting&, const Posting&) = default;
};

/// Okapi BM25 inverted index over passages. Immutable after build; searches
/// may run concurrently.
///
///   score(q, d) = sum_t idf(t) * tf (k1 + 1) / (tf + k1 (1 - b + b |d| / avgdl))
///   idf(t)      = ln(1 + (N - df + 0.5) / (df + 0.5))
class SparseIndex {
 public:
  static constexpr std::uint32_t kFormatVersion = 1;

  static SparseIndex build(std::span<const Passage> passages, Bm25Params params = {},
                           AnalyzerConfig analyzer = {});

  static SparseIndex load(const std::filesystem::path& path);
  void save(const std::filesystem::path& path) const;

  double score(std::string_view query, std::size_t ordinal) const;
  Ranking search(std::string_view query, std::size_t k) const;

  // Per-term contribution; exposed so oracles can recompute scores.
  double term_weight(std::uint32_t tf, std::uint32_t doc_freq, std::uint32_t doc_length) const;

  std::span<const Posting> postings(std::string_view term) const;
  std::uint32_t term_frequency(std::string_view term, std::size_t ordinal) const;

  std::size_t size() const { return passage_ids_.size(); }
  std::size_t vocabulary_size() const { return terms_.size(); }
  const std::vector<std::string>& passage_ids() const { return passage_ids_; }
  const std::vector<std::uint32_t>& doc_lengths() const { return doc_lengths_; }
  double avg_doc_length() const { return avg_doc_length_; }
  const Bm25Params& params() const { return params_; }
  const Analyzer& analyzer() const { return analyzer_; }
  std::optional<std::size_t> ordinal_of(std::string_view passage_id) const;

 private:
  SparseIndex() = default;
  void finalize();

  Bm25Params params_;
  Analyzer analyzer_;
  std::vector<std::string> passage_ids_;
  std::vector<std::uint32_t> doc_lengths_;
  double avg_doc_length_ = 0.0;
  std::vector<std::string> terms_;  // sorted
  std::vector<std::vector<Posting>> postings_;
  std::unordered_map<std::string, std::uint32_t> term_ids_;
  std::unordered_map<std::string, std::size_t> ordinals_;
};

SparseIndex build_sparse_index(std::span<const Passage> passages, Bm25Params params = {},
                               AnalyzerConfig analyzer = {});
double bm25_score(const SparseIndex& index, std::string_view query, std::size_t ordinal);
Ranking sparse_search(const SparseIndex& index, std::string_view query, std::size_t k);

}  // namespace orqa
