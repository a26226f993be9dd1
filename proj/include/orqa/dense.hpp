// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The orqa Authors

#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
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

using Vector = std::vector<float>;

/// Dual-encoder boundary. Implementations must be deterministic, always
/// return dim() finite values, and report a fingerprint that changes
/// whenever the embedding function does.
class EmbeddingProvider {
 public:
  virtual ~EmbeddingProvider() = default;
  virtual std::size_t dim() const = 0;
  virtual std::string fingerprint() const = 0;
  virtual Vector embed_query(std::string_view text) const = 0;
  virtual Vector embed_passage(std::string_view title, std::string_view text) const = 0;
};

/// Signed feature hashing over analyzed tokens, L2-normalized. Passage
/// titles are ignored so a query equal to a passage's text scores 1.
class HashEmbedder final : public EmbeddingProvider {
 public:
  static constexpr std::uint64_t kSeed = 0x9E3779B97F4A7C15ull;

  explicit HashEmbedder(std::size_t dim, AnalyzerConfig analyzer = {});

  std::size_t dim() const override { return dim_; }
  std::string fingerprint() const override;
  Vector embed_query(std::string_view text) const override { return embed(text); }
  Vector embed_passage(std::string_view, std::string_view text) const override { return embed(text); }

  Vector embed(std::string_view text) const;

 private:
  std::size_t dim_;
  Analyzer analyzer_;
};

Vector hash_embed(std::string_view text, std::size_t dim);

/// Embeds a fixed probe twice through both entry points and checks length,
/// finiteness and repeatability. Throws orqa::ProviderError otherwise.
void verify_provider(const EmbeddingProvider& provider);

double inner_product(std::span<const float> a, std::span<const float> b);

/// Exact maximum-inner-product index. Row i holds the embedding of
/// passage_ids()[i]. Loaded indices memory-map the matrix.
class DenseIndex {
 public:
  static constexpr std::uint32_t kFormatVersion = 1;

  DenseIndex(DenseIndex&&) noexcept;
  DenseIndex& operator=(DenseIndex&&) noexcept;
  ~DenseIndex();

  static DenseIndex build(std::span<const Passage> passages, const EmbeddingProvider& provider);
  // Rows supplied directly (e.g. from a precomputed vectors file).
  static DenseIndex from_rows(std::vector<std::string> passage_ids, std::size_t dim, std::vector<float> matrix,
                              std::string fingerprint);

  static DenseIndex load(const std::filesystem::path& path);
  void save(const std::filesystem::path& path) const;

  /// Top-k rows by inner product with `query`, ties by ascending ordinal.
  Ranking search(std::span<const float> query, std::size_t k) const;
  Ranking search(std::string_view query, std::size_t k, const EmbeddingProvider& provider) const;

  double score(std::span<const float> query, std::size_t ordinal) const { return inner_product(query, row(ordinal)); }

  std::span<const float> row(std::size_t ordinal) const;
  std::size_t size() const { return passage_ids_.size(); }
  std::size_t dim() const { return dim_; }
  const std::vector<std::string>& passage_ids() const { return passage_ids_; }
  const std::string& fingerprint() const { return fingerprint_; }
  std::optional<std::size_t> ordinal_of(std::string_view passage_id) const;

  void check_provider(const EmbeddingProvider& provider) const;

 private:
  struct Mapping;
  DenseIndex() = default;
  void finalize();

  std::size_t dim_ = 0;
  std::vector<std::string> passage_ids_;
  std::string fingerprint_;
  std::vector<float> owned_;
  std::unique_ptr<Mapping> mapping_;
  const float* data_ = nullptr;
  std::unordered_map<std::string, std::size_t> ordinals_;
};

DenseIndex build_dense_index(std::span<const Passage> passages, const EmbeddingProvider& provider);
Ranking dense_search(const DenseIndex& index, std::string_view query, std::size_t k,
                     const EmbeddingProvider& provider);

/// Precomputed passage vectors: a header line `{"dim": N, "fingerprint": S}`
/// followed by one `{"id": ..., "vector": [...]}` record per passage.
DenseIndex load_vectors_file(const std::filesystem::path& path, std::span<const Passage> passages);

}  // namespace orqa
