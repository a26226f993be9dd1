// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The orqa Authors

#pragma once

#include <filesystem>
#include <map>
#include <ostream>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "orqa/corpus.hpp"
#include "orqa/ranking.hpp"
#include "orqa/reader.hpp"
#include "orqa/synthgen.hpp"

namespace orqa {

// Passages file: one JSON object per line with id, doc_id, title, text,
// position, word_count, hard_split.
void write_passages(const std::filesystem::path& path, std::span<const Passage> passages);
std::vector<Passage> load_passages(const std::filesystem::path& path);

class PassageStore {
 public:
  explicit PassageStore(std::vector<Passage> passages);

  const Passage* find(std::string_view id) const;
  PassageLookup lookup() const {
    return [this](std::string_view id) { return find(id); };
  }
  const std::vector<Passage>& passages() const { return passages_; }

 private:
  std::vector<Passage> passages_;
  std::unordered_map<std::string, std::size_t> index_;
};

// {"query_id","rank","passage_id","score"} per line; rank is 1-based.
void write_ranking_jsonl(std::ostream& out, const std::string& query_id, const Ranking& ranking);
// "qid Q0 pid rank score tag"
void write_ranking_trec(std::ostream& out, const std::string& query_id, const Ranking& ranking,
                        const std::string& tag);
// Either format, detected per line. Entries are ordered by rank.
std::map<std::string, Ranking> load_rankings(const std::filesystem::path& path);

// {"question_id","rank","answer","passage_id","start","end","combined","ir_score","mrc_score"}
void write_answers(std::ostream& out, const std::string& question_id, std::span<const RankedAnswer> answers);
std::map<std::string, std::vector<RankedAnswer>> load_answers(const std::filesystem::path& path);

// MRC records {passage_id, question, answer_text, answer_start} plus
// sentence span, flags and roundtrip score when present.
void write_mrc_examples(const std::filesystem::path& path, std::span<const SyntheticExample> examples);
std::vector<SyntheticExample> load_mrc_examples(const std::filesystem::path& path);
// Retrieval pairs {question, positive_passage_id}.
void write_retrieval_pairs(const std::filesystem::path& path, std::span<const SyntheticExample> examples);
void write_skips(const std::filesystem::path& path, std::span<const SkipRecord> skips);
void write_dropped(const std::filesystem::path& path, std::span<const DroppedExample> dropped);

// Formats a double the way every output file does (shortest round-trip).
std::string format_score(double v);

}  // namespace orqa
