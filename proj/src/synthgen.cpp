// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The orqa Authors

#include "orqa/synthgen.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <utility>

#include "orqa/digest.hpp"
#include "orqa/error.hpp"
#include "orqa/parallel.hpp"
#include "orqa/text.hpp"

namespace orqa {
namespace {

bool has_digit(std::string_view s) {
  return std::any_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; });
}

bool is_capitalized(std::string_view s) { return !s.empty() && s[0] >= 'A' && s[0] <= 'Z'; }

// Strips leading/trailing ASCII punctuation without changing case.
std::string_view strip_punct(std::string_view w) {
  while (!w.empty() && text::is_ascii_punct(w.front())) w.remove_prefix(1);
  while (!w.empty() && text::is_ascii_punct(w.back())) w.remove_suffix(1);
  return w;
}

std::size_t find_case_insensitive(std::string_view haystack, std::string_view needle, std::size_t from = 0) {
  auto h = text::to_lower(haystack);
  auto n = text::to_lower(needle);
  return h.find(n, from);
}

std::pair<std::string, std::string> boundary_words(std::string_view sentence) {
  auto words = text::split_whitespace(sentence);
  if (words.empty()) return {};
  return {text::normalize_word(words.front()), text::normalize_word(words.back())};
}

}  // namespace

std::string format_generated(const ParsedTriple& t) {
  std::string out;
  out.append(t.s_first).append(" ").append(t.s_last);
  out.append(" ").append(kSeparator).append(" ").append(t.answer_text);
  out.append(" ").append(kSeparator).append(" ").append(t.question);
  return out;
}

ParsedTriple parse_generated(std::string_view seq) {
  std::vector<std::string_view> segments;
  std::size_t from = 0;
  while (true) {
    auto pos = seq.find(kSeparator, from);
    if (pos == std::string_view::npos) {
      segments.push_back(seq.substr(from));
      break;
    }
    segments.push_back(seq.substr(from, pos - from));
    from = pos + kSeparator.size();
  }
  if (segments.size() != 3)
    throw ParseError("expected exactly 2 separators, found " + std::to_string(segments.size() - 1));
  auto head = text::split_whitespace(segments[0]);
  if (head.size() != 2)
    throw ParseError("first segment must hold exactly two words, found " + std::to_string(head.size()));
  ParsedTriple t;
  t.s_first = std::string(head[0]);
  t.s_last = std::string(head[1]);
  t.answer_text = std::string(text::trim(segments[1]));
  t.question = std::string(text::trim(segments[2]));
  if (t.answer_text.empty()) throw ParseError("empty answer segment");
  if (t.question.empty()) throw ParseError("empty question segment");
  return t;
}

SyntheticExample locate_answer(const Passage& passage, const ParsedTriple& triple) {
  const auto want_first = text::normalize_word(triple.s_first);
  const auto want_last = text::normalize_word(triple.s_last);
  const auto sentences = segment_sentences(passage.text);

  const Sentence* match = nullptr;
  std::size_t matches = 0;
  for (const auto& s : sentences) {
    auto [first, last] = boundary_words(s.text);
    if (first == want_first && last == want_last) {
      if (!match) match = &s;
      ++matches;
    }
  }
  if (!match)
    throw LocalizationError("no sentence in " + passage.id + " starts with '" + triple.s_first + "' and ends with '" +
                            triple.s_last + "'");

  const std::string_view sentence = match->text;
  std::size_t pos = sentence.find(triple.answer_text);
  bool exact = pos != std::string_view::npos;
  if (!exact) pos = find_case_insensitive(sentence, triple.answer_text);
  if (pos == std::string_view::npos)
    throw LocalizationError("answer '" + triple.answer_text + "' not found in matched sentence of " + passage.id);

  SyntheticExample ex;
  ex.passage_id = passage.id;
  ex.question = triple.question;
  ex.answer_start = match->start + pos;
  // The example carries the passage's own spelling of the answer.
  ex.answer_text = passage.text.substr(ex.answer_start, triple.answer_text.size());
  ex.sentence_start = match->start;
  ex.sentence_end = match->end;
  ex.ambiguous_sentence = matches > 1;
  const std::size_t again = exact ? sentence.find(triple.answer_text, pos + 1)
                                  : find_case_insensitive(sentence, triple.answer_text, pos + 1);
  ex.repeated_answer = again != std::string_view::npos;
  return ex;
}

std::vector<std::string> TemplateGenerator::generate(std::string_view passage_text, std::size_t n, std::size_t top_k,
                                                     double /*top_p*/) const {
  const auto sentences = segment_sentences(passage_text);
  std::set<std::pair<std::string, std::string>> seen;
  std::vector<const Sentence*> eligible;
  for (const auto& s : sentences) {
    auto key = boundary_words(s.text);
    if (key.first.empty() || key.second.empty()) continue;
    if (s.text.find(kSeparator) != std::string::npos) continue;
    if (seen.insert(key).second) eligible.push_back(&s);
  }
  std::vector<std::string> out;
  if (eligible.empty() || n == 0) return out;

  std::mt19937_64 rng(seed_ ^ fnv1a64(passage_text));
  for (std::size_t i = 0; i < n; ++i) {
    const Sentence& s = *eligible[std::uniform_int_distribution<std::size_t>(0, eligible.size() - 1)(rng)];
    auto words = text::split_whitespace(s.text);

    std::vector<std::string_view> numbers, names, others;
    for (std::size_t w = 0; w < words.size(); ++w) {
      auto core = strip_punct(words[w]);
      if (core.empty()) continue;
      if (has_digit(core)) {
        numbers.push_back(core);
      } else if (w > 0 && is_capitalized(core)) {
        names.push_back(core);
      } else {
        others.push_back(core);
      }
    }
    std::string_view wh = "What";
    std::vector<std::string_view>* pool = &others;
    if (!numbers.empty()) {
      wh = "How many";
      pool = &numbers;
    } else if (!names.empty()) {
      wh = "Who";
      pool = &names;
    } else if (others.empty()) {
      continue;
    }
    const std::size_t cap = std::max<std::size_t>(1, std::min(top_k, pool->size()));
    const auto answer = (*pool)[std::uniform_int_distribution<std::size_t>(0, cap - 1)(rng)];

    std::string cloze = s.text;
    auto at = cloze.find(answer);
    cloze.replace(at, answer.size(), "___");
    while (!cloze.empty() && (cloze.back() == '.' || cloze.back() == '!' || cloze.back() == '?')) cloze.pop_back();

    ParsedTriple t{std::string(words.front()), std::string(words.back()), std::string(answer),
                   std::string(wh) + ": " + cloze + "?"};
    out.push_back(format_generated(t));
  }
  return out;
}

GenerationResult generate_examples(std::span<const Passage> passages, const GeneratorProvider& provider,
                                   const GenerationConfig& config) {
  struct PerPassage {
    std::vector<SyntheticExample> examples;
    std::vector<SkipRecord> skips;
  };
  std::vector<PerPassage> slots(passages.size());

  parallel_for(passages.size(), config.threads, [&](std::size_t i) {
    const Passage& passage = passages[i];
    std::vector<std::string> sequences;
    for (std::size_t attempt = 0;; ++attempt) {
      try {
        sequences = provider.generate(passage.text, config.n_per_passage, config.top_k, config.top_p);
        break;
      } catch (const std::exception& e) {
        if (attempt >= config.retries)
          throw ProviderError("generator failed for passage " + passage.id + " after " + std::to_string(attempt + 1) +
                              " attempts: " + e.what());
      }
    }
    if (sequences.size() > config.n_per_passage) sequences.resize(config.n_per_passage);
    auto& slot = slots[i];
    for (std::size_t g = 0; g < sequences.size(); ++g) {
      try {
        slot.examples.push_back(locate_answer(passage, parse_generated(sequences[g])));
      } catch (const ParseError& e) {
        slot.skips.push_back({passage.id, g, std::string("parse: ") + e.what(), sequences[g]});
      } catch (const LocalizationError& e) {
        slot.skips.push_back({passage.id, g, std::string("localize: ") + e.what(), sequences[g]});
      }
    }
  });

  std::vector<std::size_t> order(passages.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return passages[a].id < passages[b].id; });

  GenerationResult result;
  for (auto i : order) {
    for (auto& e : slots[i].examples) result.examples.push_back(std::move(e));
    for (auto& s : slots[i].skips) result.skips.push_back(std::move(s));
  }
  return result;
}

IctPair make_ict_pair(const Passage& passage, std::size_t sentence_index) {
  const auto sentences = segment_sentences(passage.text);
  if (sentences.size() < 2) throw Error("ICT pair needs a passage with at least two sentences: " + passage.id);
  if (sentence_index >= sentences.size()) throw Error("ICT sentence index out of range for " + passage.id);
  IctPair pair;
  pair.query = sentences[sentence_index].text;
  for (std::size_t i = 0; i < sentences.size(); ++i) {
    if (i == sentence_index) continue;
    if (!pair.context.empty()) pair.context.push_back(' ');
    pair.context.append(text::collapse_whitespace(sentences[i].text));
  }
  return pair;
}

IctPair sample_ict_pair(const Passage& passage, std::mt19937_64& rng) {
  const auto count = segment_sentences(passage.text).size();
  if (count < 2) throw Error("ICT pair needs a passage with at least two sentences: " + passage.id);
  return make_ict_pair(passage, std::uniform_int_distribution<std::size_t>(0, count - 1)(rng));
}

}  // namespace orqa
