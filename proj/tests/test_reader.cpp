// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The orqa Authors

#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <map>
#include <random>

#include "orqa/error.hpp"
#include "orqa/reader.hpp"
#include "test_util.hpp"

namespace orqa {
namespace {

using testing::passage;

TEST(LexicalRead, Examples) {
  auto p = passage("p", "The sky is blue. Grass is green.");
  auto a = lexical_read("what color is the sky", p);
  EXPECT_EQ(a.text, "The sky is blue.");
  EXPECT_EQ(a.start, 0u);
  EXPECT_EQ(a.end, 16u);
  EXPECT_EQ(a.reader_score, 3.0);
  EXPECT_EQ(a.passage_id, "p");

  auto none = lexical_read("xylophone", p);
  EXPECT_EQ(none.text, "The sky is blue.");
  EXPECT_EQ(none.reader_score, 0.0);

  auto later = lexical_read("green grass", p);
  EXPECT_EQ(later.text, "Grass is green.");
  EXPECT_EQ(later.start, 17u);
  EXPECT_EQ(later.reader_score, 2.0);

  EXPECT_EQ(lexical_read("anything", passage("q", "Just one sentence here")).text, "Just one sentence here");
}

TEST(LexicalRead, SpanValidityAndSelfConsistency) {
  std::mt19937_64 rng(31);
  LexicalReader reader;
  for (int i = 0; i < 300; ++i) {
    auto p = passage("p", testing::random_prose(rng, 1 + rng() % 5));
    const auto q = testing::random_prose(rng, 1);
    auto a = reader.read(q, p);
    ASSERT_LT(a.start, a.end);
    ASSERT_LE(a.end, p.text.size());
    EXPECT_EQ(p.text.substr(a.start, a.end - a.start), a.text);
    EXPECT_NEAR(reader.score_span(q, p, a.start, a.end), a.reader_score, 1e-6);
    auto again = reader.read(q, p);
    EXPECT_EQ(again.start, a.start);
    EXPECT_EQ(again.reader_score, a.reader_score);
  }
}

// Returns a fixed score per question; throws on "boom".
class StubReader : public ReaderProvider {
 public:
  std::map<std::string, double> scores;
  AnswerCandidate read(std::string_view, const Passage& p) const override { return {p.text, 0, p.text.size(), 0, p.id}; }
  double score_span(std::string_view question, const Passage&, std::size_t, std::size_t) const override {
    if (question == "boom") throw ProviderError("reader crashed");
    return scores.at(std::string(question));
  }
};

SyntheticExample example(std::string question) {
  SyntheticExample ex;
  ex.passage_id = "p";
  ex.question = std::move(question);
  ex.answer_text = "blue";
  ex.answer_start = 11;
  return ex;
}

TEST(RoundtripFilter, ThresholdComparison) {
  auto p = passage("p", "The sky is blue.");
  PassageLookup lookup = [&](std::string_view id) { return id == "p" ? &p : nullptr; };
  StubReader reader;
  reader.scores = {{"q1", 7.5}, {"q2", 6.9}, {"q3", 7.0}};
  std::vector<SyntheticExample> in{example("q1"), example("q2"), example("q3"), example("boom")};
  auto r = roundtrip_filter(in, lookup, reader);
  ASSERT_EQ(r.kept.size(), 2u);
  EXPECT_EQ(r.kept[0].question, "q1");
  EXPECT_EQ(r.kept[1].question, "q3");
  EXPECT_EQ(r.kept[0].roundtrip_score, 7.5);
  ASSERT_EQ(r.dropped.size(), 2u);
  EXPECT_EQ(r.dropped[0].example.question, "q2");
  EXPECT_EQ(r.dropped[0].reason, "below_threshold");
  EXPECT_EQ(r.dropped[1].example.question, "boom");
  EXPECT_EQ(r.dropped[1].reason.rfind("error", 0), 0u);
  EXPECT_DOUBLE_EQ(RoundtripOptions{}.threshold, 7.0);

  const double inf = std::numeric_limits<double>::infinity();
  std::vector<SyntheticExample> ok{example("q1"), example("q2"), example("q3")};
  EXPECT_EQ(roundtrip_filter(ok, lookup, reader, {-inf}).kept.size(), 3u);
  EXPECT_EQ(roundtrip_filter(ok, lookup, reader, {inf}).kept.size(), 0u);
}

TEST(RoundtripFilter, UnknownPassageIsDropped) {
  PassageLookup lookup = [](std::string_view) -> const Passage* { return nullptr; };
  StubReader reader;
  reader.scores = {{"q1", 9}};
  auto r = roundtrip_filter(std::vector<SyntheticExample>{example("q1")}, lookup, reader);
  EXPECT_TRUE(r.kept.empty());
  ASSERT_EQ(r.dropped.size(), 1u);
  EXPECT_EQ(r.dropped[0].reason.rfind("error", 0), 0u);
}

TEST(RoundtripFilter, StrictModeRequiresReaderAgreement) {
  auto p = passage("p", "The sky is blue. Grass is green.");
  PassageLookup lookup = [&](std::string_view) { return &p; };
  SyntheticExample agree{"p", "what color is the sky", "The sky is blue.", 0, 0, 16};
  SyntheticExample disagree{"p", "what color is the sky", "blue", 11, 0, 16};
  LexicalReader reader;
  std::vector<SyntheticExample> in{agree, disagree};
  auto loose = roundtrip_filter(in, lookup, reader, {0.0});
  EXPECT_EQ(loose.kept.size(), 2u);
  auto strict = roundtrip_filter(in, lookup, reader, {0.0, true});
  ASSERT_EQ(strict.kept.size(), 1u);
  EXPECT_EQ(strict.kept[0].answer_text, "The sky is blue.");
  EXPECT_EQ(strict.dropped[0].reason, "strict_mismatch");
}

TEST(RoundtripFilter, PartitionAndMonotonicity) {
  std::mt19937_64 rng(8);
  std::vector<Passage> ps;
  for (int i = 0; i < 20; ++i) ps.push_back(passage("p" + std::to_string(i), testing::random_prose(rng, 3)));
  PassageLookup lookup = [&](std::string_view id) { return &ps[std::stoi(std::string(id.substr(1)))]; };
  std::vector<SyntheticExample> in;
  for (int i = 0; i < 200; ++i) {
    const auto& p = ps[rng() % ps.size()];
    const std::size_t start = rng() % (p.text.size() - 1);
    const std::size_t len = 1 + rng() % std::min<std::size_t>(10, p.text.size() - start);
    in.push_back({p.id, testing::random_prose(rng, 1), p.text.substr(start, len), start, 0, p.text.size()});
  }
  LexicalReader reader;
  std::size_t previous = in.size() + 1;
  for (double t : {-1.0, 0.0, 1.0, 2.0, 3.0, 5.0, 8.0}) {
    RoundtripOptions opts{t};
    opts.threads = 4;
    auto r = roundtrip_filter(in, lookup, reader, opts);
    ASSERT_EQ(r.kept.size() + r.dropped.size(), in.size());
    EXPECT_LE(r.kept.size(), previous);
    previous = r.kept.size();
    // Order preserved: merging by original index reproduces the input.
    std::size_t ki = 0, di = 0;
    for (const auto& ex : in) {
      if (ki < r.kept.size() && r.kept[ki].question == ex.question && r.kept[ki].answer_start == ex.answer_start &&
          *r.kept[ki].roundtrip_score >= t)
        ++ki;
      else if (di < r.dropped.size() && r.dropped[di].example.question == ex.question)
        ++di;
      else
        ADD_FAILURE() << "order not preserved at threshold " << t;
    }
  }
}

}  // namespace
}  // namespace orqa
