// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The orqa Authors

#pragma once

#include <cstddef>
#include <filesystem>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

namespace orqa {

struct Document {
  std::string id;
  std::string title;
  std::string text;
};

// Half-open byte range [start, end) into the parent text.
struct Sentence {
  std::string text;
  std::size_t start = 0;
  std::size_t end = 0;
};

struct Passage {
  std::string id;  // "<doc_id>#<position>"
  std::string doc_id;
  std::string title;
  std::string text;
  std::size_t position = 0;
  std::size_t word_count = 0;
  // Piece of a single sentence that exceeded the chunk limit.
  bool hard_split = false;
};

// Counts tokenizer units in a piece of text. The default counts
// whitespace-delimited words.
using TokenCounter = std::function<std::size_t(std::string_view)>;

inline constexpr std::size_t kDefaultMaxWords = 120;
inline constexpr std::size_t kDefaultGenerationMaxTokens = 288;

/// Rule-based sentence splitter. A boundary falls after '.', '!' or '?'
/// (optionally followed by closing quotes or brackets) when the next
/// non-space character is an uppercase ASCII letter or a digit, unless the
/// token ending there is a known abbreviation ("Dr.", "Fig.", "et al.", ...).
std::vector<Sentence> segment_sentences(std::string_view text);

bool is_abbreviation(std::string_view token);

std::vector<Passage> chunk_document(const Document& doc, std::size_t max_words = kDefaultMaxWords);

/// Same packing as chunk_document, measured with `counter` (whitespace words
/// when empty). Passage::word_count still holds the whitespace word count.
std::vector<Passage> chunk_for_generation(const Document& doc,
                                          std::size_t max_tokens = kDefaultGenerationMaxTokens,
                                          const TokenCounter& counter = {});

std::string passage_id(std::string_view doc_id, std::size_t position);

/// Reads a line-delimited JSON corpus (`id`, `title`, `text`). Throws
/// orqa::ParseError naming the line on malformed records and orqa::Error on
/// duplicate ids.
std::vector<Document> load_corpus(const std::filesystem::path& path);

}  // namespace orqa
