// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The orqa Authors

#include "orqa/analyzer.hpp"

#include "orqa/error.hpp"
#include "orqa/text.hpp"

namespace orqa {
namespace {

constexpr std::string_view kEnglishStopwords[] = {
    "a",     "about", "above", "after", "again", "all",   "am",    "an",    "and",   "any",  "are",
    "as",    "at",    "be",    "been",  "before", "being", "below", "between", "both", "but", "by",
    "can",   "did",   "do",    "does",  "doing", "down",  "during", "each",  "few",   "for",  "from",
    "further", "had", "has",   "have",  "having", "he",   "her",   "here",  "hers",  "him",  "his",
    "how",   "i",     "if",    "in",    "into",  "is",    "it",    "its",   "itself", "just", "me",
    "more",  "most",  "my",    "no",    "nor",   "not",   "now",   "of",    "off",   "on",   "once",
    "only",  "or",    "other", "our",   "ours",  "out",   "over",  "own",   "same",  "she",  "should",
    "so",    "some",  "such",  "than",  "that",  "the",   "their", "theirs", "them", "then", "there",
    "these", "they",  "this",  "those", "through", "to",  "too",   "under", "until", "up",   "very",
    "was",   "we",    "were",  "what",  "when",  "where", "which", "while", "who",   "whom", "why",
    "will",  "with",  "you",   "your",  "yours"};

}  // namespace

Analyzer::Analyzer(AnalyzerConfig config) : config_(std::move(config)) {
  if (config_.stopwords == "english") {
    for (auto w : kEnglishStopwords) stopwords_.emplace(w);
  } else if (config_.stopwords != "none") {
    throw Error("unknown stop-word list: " + config_.stopwords);
  }
}

std::vector<std::string> Analyzer::analyze(std::string_view s) const {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && !text::is_word_byte(s[i])) ++i;
    std::size_t start = i;
    while (i < s.size() && text::is_word_byte(s[i])) ++i;
    if (i == start) continue;
    std::string tok(s.substr(start, i - start));
    if (config_.lowercase) tok = text::to_lower(tok);
    if (!stopwords_.empty() && stopwords_.count(config_.lowercase ? tok : text::to_lower(tok))) continue;
    out.push_back(std::move(tok));
  }
  return out;
}

}  // namespace orqa
