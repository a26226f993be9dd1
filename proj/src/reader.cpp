// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The orqa Authors

#include "orqa/reader.hpp"

#include <unordered_set>

#include "orqa/error.hpp"
#include "orqa/eval.hpp"
#include "orqa/parallel.hpp"

namespace orqa {
namespace {

double overlap(const Analyzer& analyzer, const std::unordered_set<std::string>& question_terms, std::string_view span) {
  std::unordered_set<std::string> seen;
  for (auto& t : analyzer.analyze(span))
    if (question_terms.count(t)) seen.insert(std::move(t));
  return static_cast<double>(seen.size());
}

std::unordered_set<std::string> term_set(const Analyzer& analyzer, std::string_view s) {
  auto terms = analyzer.analyze(s);
  return {std::make_move_iterator(terms.begin()), std::make_move_iterator(terms.end())};
}

}  // namespace

AnswerCandidate LexicalReader::read(std::string_view question, const Passage& passage) const {
  const auto sentences = segment_sentences(passage.text);
  if (sentences.empty()) throw Error("cannot read an empty passage: " + passage.id);
  const auto q = term_set(analyzer_, question);
  std::size_t best = 0;
  double best_score = -1.0;
  for (std::size_t i = 0; i < sentences.size(); ++i) {
    const double s = overlap(analyzer_, q, sentences[i].text);
    if (s > best_score) {
      best_score = s;
      best = i;
    }
  }
  return {sentences[best].text, sentences[best].start, sentences[best].end, best_score, passage.id};
}

double LexicalReader::score_span(std::string_view question, const Passage& passage, std::size_t start,
                                 std::size_t end) const {
  if (start >= end || end > passage.text.size()) throw Error("span out of range for passage " + passage.id);
  return overlap(analyzer_, term_set(analyzer_, question), std::string_view(passage.text).substr(start, end - start));
}

AnswerCandidate lexical_read(std::string_view question, const Passage& passage) {
  return LexicalReader().read(question, passage);
}

RoundtripResult roundtrip_filter(std::span<const SyntheticExample> examples, const PassageLookup& passages,
                                 const ReaderProvider& reader, const RoundtripOptions& options) {
  struct Outcome {
    SyntheticExample example;
    std::string reason;  // empty when kept
  };
  std::vector<Outcome> outcomes(examples.size());

  parallel_for(examples.size(), options.threads, [&](std::size_t i) {
    Outcome& out = outcomes[i];
    out.example = examples[i];
    try {
      const Passage* passage = passages ? passages(out.example.passage_id) : nullptr;
      if (!passage) throw Error("unknown passage id " + out.example.passage_id);
      const std::size_t start = out.example.answer_start;
      const std::size_t end = start + out.example.answer_text.size();
      if (end > passage->text.size() || passage->text.compare(start, out.example.answer_text.size(),
                                                              out.example.answer_text) != 0)
        throw Error("answer span does not match passage text");
      const double score = reader.score_span(out.example.question, *passage, start, end);
      out.example.roundtrip_score = score;
      if (!(score >= options.threshold)) {
        out.reason = "below_threshold";
      } else if (options.strict) {
        auto predicted = reader.read(out.example.question, *passage);
        if (normalize_answer(predicted.text) != normalize_answer(out.example.answer_text)) out.reason = "strict_mismatch";
      }
    } catch (const std::exception& e) {
      out.reason = std::string("error: ") + e.what();
    }
  });

  RoundtripResult result;
  for (auto& o : outcomes) {
    if (o.reason.empty()) {
      result.kept.push_back(std::move(o.example));
    } else {
      result.dropped.push_back({std::move(o.example), std::move(o.reason)});
    }
  }
  return result;
}

}  // namespace orqa
