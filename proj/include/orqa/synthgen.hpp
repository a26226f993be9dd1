// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The orqa Authors

#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "orqa/corpus.hpp"

namespace orqa {

inline constexpr std::string_view kSeparator = "[SEP]";

// Generator output of the form "s_f s_l [SEP] answer [SEP] question".
struct ParsedTriple {
  std::string s_first;
  std::string s_last;
  std::string answer_text;
  std::string question;

  friend bool operator==(const ParsedTriple&, const ParsedTriple&) = default;
};

struct SyntheticExample {
  std::string passage_id;
  std::string question;
  std::string answer_text;
  std::size_t answer_start = 0;  // byte offset into the passage text
  std::size_t sentence_start = 0;
  std::size_t sentence_end = 0;
  std::optional<double> roundtrip_score;
  // More than one sentence matched (s_first, s_last); the first was used.
  bool ambiguous_sentence = false;
  // The answer occurs more than once in the matched sentence.
  bool repeated_answer = false;
};

/// Sampling-based question generator (external neural model or the built-in
/// template double). Returns at most `n` raw sequences.
class GeneratorProvider {
 public:
  virtual ~GeneratorProvider() = default;
  virtual std::vector<std::string> generate(std::string_view passage_text, std::size_t n, std::size_t top_k,
                                            double top_p) const = 0;
};

/// Template generator for desk-scale runs: picks a sentence, chooses an
/// answer word by simple type heuristics (number, capitalized name, other)
/// and turns the sentence into a cloze-style "How many / Who / What"
/// question. Only sentences whose (first, last) word pair is unique within
/// the passage are used, so every output localizes. Deterministic in
/// (seed, passage text); top_k caps the answer candidates per sentence and
/// top_p is ignored.
class TemplateGenerator final : public GeneratorProvider {
 public:
  explicit TemplateGenerator(std::uint64_t seed = 0) : seed_(seed) {}

  std::vector<std::string> generate(std::string_view passage_text, std::size_t n, std::size_t top_k,
                                    double top_p) const override;

 private:
  std::uint64_t seed_;
};

std::string format_generated(const ParsedTriple& triple);

/// Throws orqa::ParseError on a separator count other than two, a first
/// segment that is not exactly two words, or an empty answer or question.
ParsedTriple parse_generated(std::string_view sequence);

/// Anchors the answer inside the first sentence whose first and last words
/// match (case-insensitive, punctuation-stripped). Throws
/// orqa::LocalizationError when no sentence matches or the answer is absent
/// from it.
SyntheticExample locate_answer(const Passage& passage, const ParsedTriple& triple);

struct GenerationConfig {
  std::size_t n_per_passage = 5;
  std::size_t top_k = 10;
  double top_p = 0.95;
  std::size_t retries = 2;
  std::size_t threads = 1;
};

struct SkipRecord {
  std::string passage_id;
  std::size_t generation_index = 0;
  std::string reason;
  std::string raw;
};

struct GenerationResult {
  std::vector<SyntheticExample> examples;
  std::vector<SkipRecord> skips;
};

/// Output order is canonical: by passage id, then generation index.
GenerationResult generate_examples(std::span<const Passage> passages, const GeneratorProvider& provider,
                                   const GenerationConfig& config = {});

struct IctPair {
  std::string query;
  std::string context;
};

IctPair make_ict_pair(const Passage& passage, std::size_t sentence_index);
IctPair sample_ict_pair(const Passage& passage, std::mt19937_64& rng);

}  // namespace orqa
