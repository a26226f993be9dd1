// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The orqa Authors

#pragma once

#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "orqa/analyzer.hpp"
#include "orqa/corpus.hpp"
#include "orqa/synthgen.hpp"

namespace orqa {

// Span [start, end) is a byte range of the passage text.
struct AnswerCandidate {
  std::string text;
  std::size_t start = 0;
  std::size_t end = 0;
  double reader_score = 0.0;
  std::string passage_id;
};

// Reader answer scored against retrieval; see answer() in pipeline.hpp.
struct RankedAnswer {
  AnswerCandidate candidate;
  double ir_score = 0.0;
  double mrc_score = 0.0;
  double ir_score_norm = 0.0;
  double mrc_score_norm = 0.0;
  double combined = 0.0;
};

/// Extractive reader boundary. score_span on the span returned by read must
/// reproduce read's score.
class ReaderProvider {
 public:
  virtual ~ReaderProvider() = default;
  virtual AnswerCandidate read(std::string_view question, const Passage& passage) const = 0;
  virtual double score_span(std::string_view question, const Passage& passage, std::size_t start,
                            std::size_t end) const = 0;
};

/// Picks the sentence sharing the most distinct analyzed terms with the
/// question (earliest on ties) and scores by that overlap count.
class LexicalReader final : public ReaderProvider {
 public:
  explicit LexicalReader(AnalyzerConfig analyzer = {}) : analyzer_(std::move(analyzer)) {}

  AnswerCandidate read(std::string_view question, const Passage& passage) const override;
  double score_span(std::string_view question, const Passage& passage, std::size_t start,
                    std::size_t end) const override;

 private:
  Analyzer analyzer_;
};

AnswerCandidate lexical_read(std::string_view question, const Passage& passage);

inline constexpr double kDefaultRoundtripThreshold = 7.0;

struct RoundtripOptions {
  double threshold = kDefaultRoundtripThreshold;
  // Also require the reader's own top answer to equal the candidate answer
  // (after answer normalization).
  bool strict = false;
  std::size_t threads = 1;
};

struct DroppedExample {
  SyntheticExample example;
  // "below_threshold", "strict_mismatch" or "error: <message>".
  std::string reason;
};

struct RoundtripResult {
  std::vector<SyntheticExample> kept;
  std::vector<DroppedExample> dropped;
};

using PassageLookup = std::function<const Passage*(std::string_view passage_id)>;

/// Scores every example's own answer span with `reader`; an example is kept
/// iff that score is >= threshold. Input order is preserved in both parts.
RoundtripResult roundtrip_filter(std::span<const SyntheticExample> examples, const PassageLookup& passages,
                                 const ReaderProvider& reader, const RoundtripOptions& options = {});

}  // namespace orqa
