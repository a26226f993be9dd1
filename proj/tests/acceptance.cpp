// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The orqa Authors

// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any
// failure. Tolerances and fixture sizes are fixed below.

#include <algorithm>
#include <boost/math/distributions/students_t.hpp>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <iomanip>
#include <iostream>
#include <map>
#include <random>
#include <sstream>

#include "bm25_oracle.hpp"
#include "orqa/cli.hpp"
#include "orqa/error.hpp"
#include "orqa/eval.hpp"
#include "orqa/fusion.hpp"
#include "orqa/pipeline.hpp"
#include "orqa/reader.hpp"
#include "orqa/synthgen.hpp"
#include "test_util.hpp"

namespace {

using namespace orqa;
using Clock = std::chrono::steady_clock;

constexpr double kBm25HandTol = 1e-3;
constexpr double kBm25Seconds = 5.0;
constexpr double kDenseSeconds = 10.0;
constexpr double kFusionTol = 1e-9;
constexpr double kOrqaTol = 1e-4;
constexpr double kTTol = 1e-3;
constexpr double kPTol = 1e-4;
constexpr double kScaleMedianMs = 50.0;
constexpr std::size_t kScalePassages = 100000;

// Collects failed checks for one criterion.
class Check {
 public:
  void expect(bool ok, const std::string& what) {
    if (!ok && failures_.size() < 5) failures_.push_back(what);
    if (!ok) ++count_;
  }
  bool ok() const { return count_ == 0; }
  std::string summary() const {
    std::string s;
    for (const auto& f : failures_) s += (s.empty() ? "" : "; ") + f;
    if (count_ > failures_.size()) s += "; +" + std::to_string(count_ - failures_.size()) + " more";
    return s;
  }

 private:
  std::vector<std::string> failures_;
  std::size_t count_ = 0;
};

double seconds_since(Clock::time_point t) { return std::chrono::duration<double>(Clock::now() - t).count(); }

std::string fmt(double v, int precision = 6) {
  std::ostringstream os;
  os << std::setprecision(precision) << v;
  return os.str();
}

Ranking sorted_ranking(std::vector<std::pair<std::string, double>> e) {
  std::sort(e.begin(), e.end(), [](auto& a, auto& b) { return a.second > b.second || (a.second == b.second && a.first < b.first); });
  Ranking r;
  for (auto& [id, s] : e) r.push_back({id, s});
  return r;
}

std::vector<std::string> ids_of(const Ranking& r) {
  std::vector<std::string> out;
  for (const auto& sp : r) out.push_back(sp.passage_id);
  return out;
}

// ---------------------------------------------------------------------------

std::string bm25_oracle(Check& c) {
  const auto start = Clock::now();
  std::mt19937_64 rng(20260101);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 1 + rng() % 50, vocab = 1 + rng() % 20;
    std::vector<std::string> texts;
    testing::Bm25Oracle oracle;
    for (std::size_t i = 0; i < n; ++i) {
      std::vector<std::string> toks;
      std::string t;
      for (std::size_t w = 0, len = rng() % 20; w < len; ++w) {
        toks.push_back("v" + std::to_string(rng() % vocab));
        t += toks.back() + " ";
      }
      texts.push_back(t);
      oracle.docs.push_back(toks);
    }
    auto index = build_sparse_index(testing::passages(texts));
    for (int q = 0; q < 5; ++q) {
      std::string query;
      std::vector<std::string> qtoks;
      for (std::size_t w = 0, len = 1 + rng() % 4; w < len; ++w) {
        qtoks.push_back("v" + std::to_string(rng() % (vocab + 2)));
        query += qtoks.back() + " ";
      }
      std::vector<std::pair<double, std::size_t>> brute;
      for (std::size_t d = 0; d < n; ++d) {
        const double s = bm25_score(index, query, d);
        c.expect(std::fabs(s - oracle.score(qtoks, d)) <= 1e-9, "bm25_score disagrees with formula");
        if (s > 0) brute.emplace_back(-s, d);
      }
      std::sort(brute.begin(), brute.end());
      auto got = sparse_search(index, query, n);
      c.expect(got.size() == brute.size(), "result count differs from brute force");
      for (std::size_t i = 0; i < std::min(got.size(), brute.size()); ++i)
        c.expect(got[i].passage_id == "p" + std::to_string(brute[i].second) && got[i].score == -brute[i].first,
                 "ranking differs from brute force");
    }
  }
  const double elapsed = seconds_since(start);
  auto hand = build_sparse_index(testing::passages({"a b a", "b c"}));
  const double s = bm25_score(hand, "a", 0);
  c.expect(std::fabs(s - 0.9023) <= kBm25HandTol, "hand example " + fmt(s));
  c.expect(elapsed < kBm25Seconds, "runtime " + fmt(elapsed, 3) + " s");
  return "200 corpora, hand example " + fmt(s, 5) + ", " + fmt(elapsed, 3) + " s";
}

std::string dense_oracle(Check& c) {
  const auto start = Clock::now();
  std::mt19937_64 rng(20260102);
  static const std::vector<std::string> vocab = {"fever", "cough", "virus", "cell", "lung", "dose", "trial",
                                                 "mask",  "ace2",  "spike", "rna",  "icu",  "risk", "age"};
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 1 + rng() % 1000, dim = 1 + rng() % 64;
    std::vector<std::string> texts;
    for (std::size_t i = 0; i < n; ++i) {
      std::string t;
      for (std::size_t w = 0, len = rng() % 6; w < len; ++w) t += vocab[rng() % vocab.size()] + " ";
      texts.push_back(t);
    }
    HashEmbedder e(dim);
    auto index = build_dense_index(testing::passages(texts), e);
    std::string query;
    for (std::size_t w = 0, len = rng() % 4; w < len; ++w) query += vocab[rng() % vocab.size()] + " ";
    auto q = e.embed_query(query);
    std::vector<std::pair<double, std::size_t>> brute;
    for (std::size_t d = 0; d < n; ++d) {
      double s = 0;
      for (std::size_t j = 0; j < dim; ++j) s += static_cast<double>(q[j]) * index.row(d)[j];
      brute.emplace_back(-s, d);
    }
    std::sort(brute.begin(), brute.end());
    const std::size_t k = 1 + rng() % n;
    auto got = dense_search(index, query, k, e);
    c.expect(got.size() == k, "result count");
    for (std::size_t i = 0; i < got.size(); ++i)
      c.expect(got[i].passage_id == "p" + std::to_string(brute[i].second) && got[i].score == -brute[i].first,
               "ranking differs from full scan");
  }
  const double elapsed = seconds_since(start);
  c.expect(elapsed < kDenseSeconds, "runtime " + fmt(elapsed, 3) + " s");
  return "100 indices, " + fmt(elapsed, 3) + " s";
}

std::string fusion(Check& c) {
  auto r = combine(sorted_ranking({{"p1", 3}, {"p2", 4}}), sorted_ranking({{"p1", 0.8}, {"p2", 0.6}}), 0.3);
  c.expect(r.size() == 2 && r[0].passage_id == "p1", "worked example order");
  if (r.size() == 2) {
    c.expect(std::fabs(r[0].score - 0.74) <= kFusionTol, "p1 " + fmt(r[0].score, 12));
    c.expect(std::fabs(r[1].score - 0.66) <= kFusionTol, "p2 " + fmt(r[1].score, 12));
  }
  std::mt19937_64 rng(20260103);
  std::uniform_real_distribution<double> score(0.01, 10);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t u = 1 + rng() % 40;
    std::map<std::string, double> sa, sb;
    std::vector<std::pair<std::string, double>> ea, eb;
    for (std::size_t i = 0; i < u; ++i) {
      const std::string id = "p" + std::to_string(i);
      sa[id] = score(rng);
      sb[id] = score(rng);
      ea.emplace_back(id, sa[id]);
      eb.emplace_back(id, sb[id]);
    }
    auto a = sorted_ranking(ea), b = sorted_ranking(eb);
    c.expect(ids_of(combine(a, b, 1.0)) == ids_of(a), "weight 1 order");
    c.expect(ids_of(combine(a, b, 0.0)) == ids_of(b), "weight 0 order");
    const double w = std::uniform_real_distribution<double>(0, 1)(rng);
    const double ca = std::uniform_real_distribution<double>(0.001, 1000)(rng);
    const double cb = std::uniform_real_distribution<double>(0.001, 1000)(rng);
    auto base = combine(a, b, w);
    Ranking a2 = a, b2 = b;
    for (auto& sp : a2) sp.score *= ca;
    for (auto& sp : b2) sp.score *= cb;
    auto scaled_a = combine(a2, b, w), scaled_b = combine(a, b2, w);
    // Equal order up to floating-point near-ties.
    for (const auto* s : {&scaled_a, &scaled_b})
      for (std::size_t i = 0; i < base.size(); ++i)
        c.expect((*s)[i].passage_id == base[i].passage_id || std::fabs((*s)[i].score - base[i].score) <= 1e-12,
                 "scaling changed the order");
  }
  // Hybrid endpoints over a real index pair.
  std::vector<std::string> texts;
  std::mt19937_64 prose(7);
  for (int i = 0; i < 60; ++i) texts.push_back(testing::random_prose(prose, 2));
  auto ps = testing::passages(texts);
  auto sparse = build_sparse_index(ps);
  HashEmbedder e(64);
  auto dense = build_dense_index(ps, e);
  for (const char* q : {"fever cough", "lung trial dose", "virus"}) {
    auto d = dense_search(dense, q, 10, e);
    c.expect(ids_of(hybrid_search(sparse, dense, e, q, 10, {0.0, 100})) == ids_of(d), "hybrid weight 0");
    auto s = sparse_search(sparse, q, 10);
    auto h = hybrid_search(sparse, dense, e, q, s.size(), {1.0, 100});
    c.expect(ids_of(h) == ids_of(s), "hybrid weight 1");
  }
  return r.size() == 2 ? "(" + fmt(r[0].score, 10) + ", " + fmt(r[1].score, 10) + "), 100 scaling cases" : "";
}

std::string orqa_combination(Check& c) {
  Ranking ranking{{"c2", 4}, {"c1", 3}};
  std::vector<AnswerCandidate> cands{{"b", 0, 1, 2, "c2"}, {"a", 0, 1, 1, "c1"}};
  auto out = rank_answers(ranking, cands, 0.7);
  c.expect(out.size() == 2 && out[0].candidate.passage_id == "c2", "c2 not first");
  double c1 = 0, c2 = 0;
  for (const auto& a : out) (a.candidate.passage_id == "c1" ? c1 : c2) = a.combined;
  c.expect(std::fabs(c1 - 0.5542) <= kOrqaTol, "c1 " + fmt(c1));
  c.expect(std::fabs(c2 - 0.8283) <= kOrqaTol, "c2 " + fmt(c2));
  std::mt19937_64 rng(20260104);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = 1 + rng() % 30;
    Ranking r;
    std::vector<AnswerCandidate> cs;
    std::vector<std::pair<std::string, double>> mrc;
    double s = 1000;
    for (std::size_t i = 0; i < n; ++i) {
      s -= std::uniform_real_distribution<double>(0.1, 10)(rng);
      const std::string id = "p" + std::to_string(100 + i);
      r.push_back({id, s});
      const double m = std::uniform_real_distribution<double>(0, 20)(rng);
      cs.push_back({"x", 0, 1, m, id});
      mrc.emplace_back(id, m);
    }
    std::vector<std::string> by_ir, by_mrc;
    for (const auto& a : rank_answers(r, cs, 1.0)) by_ir.push_back(a.candidate.passage_id);
    for (const auto& a : rank_answers(r, cs, 0.0)) by_mrc.push_back(a.candidate.passage_id);
    c.expect(by_ir == ids_of(r), "ir_weight 1 order");
    c.expect(by_mrc == ids_of(sorted_ranking(mrc)), "ir_weight 0 order");
  }
  return "c1 " + fmt(c1, 5) + ", c2 " + fmt(c2, 5);
}

std::string metrics(Check& c) {
  c.expect(token_f1("fever and cough", "dry cough") == 0.4, "token_f1 example");
  std::mt19937_64 rng(20260105);
  for (int trial = 0; trial < 1000; ++trial) {
    std::map<std::string, Passage> store;
    Ranking r;
    const std::size_t n = 1 + rng() % 30;
    for (std::size_t i = 0; i < n; ++i) {
      const std::string id = "p" + std::to_string(i);
      store[id] = testing::passage(id, testing::random_prose(rng, 1));
      r.push_back({id, static_cast<double>(n - i)});
    }
    PassageLookup lookup = [&](std::string_view id) { return &store.at(std::string(id)); };
    std::vector<std::string> golds{testing::random_prose(rng, 1).substr(0, 1 + rng() % 12)};
    int prev = 0;
    for (std::size_t k = 1; k <= n + 1; ++k) {
      const int m = match_at_k(r, golds, k, lookup);
      c.expect(m >= prev, "Match@k decreased");
      prev = m;
    }
    std::vector<RankedAnswer> answers;
    for (std::size_t i = 0; i < 10; ++i) {
      RankedAnswer a;
      a.candidate.text = testing::random_prose(rng, 1);
      answers.push_back(a);
    }
    double prev_f = 0;
    for (std::size_t k = 1; k <= 11; ++k) {
      const double f = top_n_f1(answers, golds, k);
      c.expect(f >= prev_f && f <= 1.0, "Top-n F1 decreased");
      prev_f = f;
    }
  }
  std::vector<MrcExample> three{{"1", "What causes it?", std::nullopt, "p", {{"A1", 0}}},
                                {"2", "Who found it?", std::nullopt, "p", {{"B", 0}}},
                                {"3", "what causes it", std::nullopt, "p", {{"A2", 0}}}};
  auto open = dedup_open(three);
  c.expect(open.size() == 2 && open[0].answers == std::vector<std::string>{"A1", "A2"}, "dedup fixture");

  std::string note = "fixtures ok";
  const char* dev = std::getenv("ORQA_COVIDQA_DEV");
  const char* test = std::getenv("ORQA_COVIDQA_TEST");
  if (dev && test) {
    const auto n_dev = dedup_open(import_squad(dev)).size();
    const auto n_test = dedup_open(import_squad(test)).size();
    c.expect(n_dev == 201, "COVID-QA dev " + std::to_string(n_dev));
    c.expect(n_test == 1775, "COVID-QA test " + std::to_string(n_test));
    note += ", COVID-QA dev " + std::to_string(n_dev) + " / test " + std::to_string(n_test);
  } else {
    note += ", COVID-QA files not supplied (set ORQA_COVIDQA_DEV/ORQA_COVIDQA_TEST)";
  }
  return note;
}

std::string synthgen(Check& c) {
  std::mt19937_64 rng(20260106);
  TemplateGenerator gen(11);
  std::size_t sequences = 0, valid = 0;
  while (sequences < 500) {
    auto p = testing::passage("g" + std::to_string(sequences), testing::random_prose(rng, 2 + rng() % 6));
    for (const auto& seq : gen.generate(p.text, 5, 10, 0.95)) {
      if (sequences == 500) break;
      ++sequences;
      try {
        auto ex = locate_answer(p, parse_generated(seq));
        const bool ok = p.text.compare(ex.answer_start, ex.answer_text.size(), ex.answer_text) == 0 &&
                        ex.answer_start >= ex.sentence_start &&
                        ex.answer_start + ex.answer_text.size() <= ex.sentence_end;
        valid += ok;
        c.expect(ok, "span invariant: " + seq);
      } catch (const std::exception& e) {
        c.expect(false, std::string("mock sequence failed: ") + e.what());
      }
    }
  }
  const std::string passage =
      "Since December 2019, when the first patient with a confirmed case of COVID-19 was reported in Wuhan, China, "
      "over 1,000,000 patients with confirmed cases have been reported worldwide. It has been reported that the most "
      "common symptoms include fever, fatigue, dry cough, anorexia, and dyspnea. Meanwhile, less common symptoms are "
      "nasal congestion ...";
  const std::string answer = "fever, fatigue, dry cough, anorexia, and dyspnea";
  auto ex = locate_answer(testing::passage("covid", passage),
                          parse_generated("It dyspnea. [SEP] " + answer + " [SEP] What are the most common symptoms of COVID-19?"));
  c.expect(passage.compare(ex.sentence_start, 25, "It has been reported that") == 0, "Table 1 sentence");
  c.expect(passage.compare(ex.answer_start, answer.size(), answer) == 0, "Table 1 answer span");
  for (const char* bad : {"a b [SEP] c", "a b [SEP] c [SEP] d [SEP] e", "a b c"}) {
    bool threw = false;
    try {
      parse_generated(bad);
    } catch (const ParseError&) {
      threw = true;
    }
    c.expect(threw, std::string("no ParseError for ") + bad);
  }
  return std::to_string(valid) + "/" + std::to_string(sequences) + " valid spans";
}

class ScoreByQuestion : public ReaderProvider {
 public:
  std::map<std::string, double> scores;
  AnswerCandidate read(std::string_view, const Passage& p) const override { return {p.text, 0, p.text.size(), 0, p.id}; }
  double score_span(std::string_view q, const Passage&, std::size_t, std::size_t) const override {
    return scores.at(std::string(q));
  }
};

std::string roundtrip(Check& c) {
  auto p = testing::passage("p", "The sky is blue.");
  PassageLookup lookup = [&](std::string_view) { return &p; };
  ScoreByQuestion reader;
  std::mt19937_64 rng(20260107);
  std::vector<SyntheticExample> in;
  for (int i = 0; i < 200; ++i) {
    const std::string q = "q" + std::to_string(i);
    reader.scores[q] = i == 0 ? 7.5 : i == 1 ? 6.9 : std::uniform_real_distribution<double>(0, 14)(rng);
    in.push_back({"p", q, "blue", 11, 0, 16});
  }
  auto fixed = roundtrip_filter(std::span(in).first(2), lookup, reader);
  c.expect(RoundtripOptions{}.threshold == 7.0, "default threshold");
  c.expect(fixed.kept.size() == 1 && fixed.kept[0].question == "q0", "7.5 kept");
  c.expect(fixed.dropped.size() == 1 && fixed.dropped[0].example.question == "q1", "6.9 dropped");
  std::size_t prev = in.size();
  for (double t = -1; t <= 15; t += 0.5) {
    auto r = roundtrip_filter(in, lookup, reader, {t});
    c.expect(r.kept.size() + r.dropped.size() == in.size(), "partition size");
    c.expect(r.kept.size() <= prev, "kept set grew with t");
    prev = r.kept.size();
    std::size_t ki = 0, di = 0;
    for (const auto& ex : in) {
      if (ki < r.kept.size() && r.kept[ki].question == ex.question)
        ++ki;
      else if (di < r.dropped.size() && r.dropped[di].example.question == ex.question)
        ++di;
      else
        c.expect(false, "order or partition broken");
    }
  }
  return "7.5 kept, 6.9 dropped, 33 thresholds monotone";
}

std::string t_test(Check& c) {
  std::vector<double> a{0.5, 0.7, 0.9, 0.4}, b{0.4, 0.6, 0.7, 0.5};
  auto r = paired_t_test(a, b);
  c.expect(std::fabs(r.t - 1.192) <= kTTol && r.df == 3, "t " + fmt(r.t) + " df " + std::to_string(r.df));
  auto oracle = [](double t, double df) {
    boost::math::students_t dist(df);
    return 2.0 * boost::math::cdf(boost::math::complement(dist, std::fabs(t)));
  };
  c.expect(std::fabs(r.p - oracle(r.t, 3)) <= kPTol, "p " + fmt(r.p));
  std::mt19937_64 rng(20260108);
  std::normal_distribution<double> noise(0, 1);
  double worst = 0;
  for (int i = 0; i < 500; ++i) {
    const std::size_t n = 2 + rng() % 300;
    std::vector<double> x(n), y(n);
    for (std::size_t j = 0; j < n; ++j) {
      x[j] = noise(rng);
      y[j] = x[j] + 0.3 * noise(rng) + 0.05;
    }
    auto res = paired_t_test(x, y);
    worst = std::max(worst, std::fabs(res.p - oracle(res.t, static_cast<double>(n - 1))));
  }
  c.expect(worst <= kPTol, "random p error " + fmt(worst));
  auto zero = paired_t_test(a, a);
  c.expect(zero.t == 0.0 && zero.p == 1.0, "zero-variance convention");
  return "t " + fmt(r.t, 6) + ", p " + fmt(r.p, 6) + ", max |p - oracle| " + fmt(worst, 3);
}

std::string determinism(Check& c) {
  const std::string data = ORQA_TEST_DATA;
  std::vector<std::string> reference;
  int runs = 0;
  for (const char* threads : {"1", "1", "1", "4"}) {
    testing::TempDir dir;
    auto p = [&](const char* name) { return (dir / name).string(); };
    std::ostringstream out, err;
    auto run = [&](std::vector<std::string> args) {
      args.insert(args.begin(), {"--threads", threads});
      const int code = cli::run(args, out, err);
      c.expect(code == 0, "exit " + std::to_string(code) + ": " + err.str());
    };
    run({"ingest", "--input", data + "/corpus.jsonl", "--output", p("passages.jsonl")});
    run({"index-sparse", "--passages", p("passages.jsonl"), "--out", p("s.spix")});
    run({"index-dense", "--passages", p("passages.jsonl"), "--provider", "hash:128", "--out", p("d.dnix")});
    const std::vector<std::string> retrieval{"--mode", "hybrid", "--index", p("s.spix"), "--dense-index", p("d.dnix"),
                                             "--provider", "hash:128"};
    auto search = retrieval;
    search.insert(search.begin(), "search");
    for (const auto& s : {std::string("--queries"), data + "/questions.jsonl", std::string("--out"), p("run.jsonl")})
      search.push_back(s);
    run(search);
    auto orqa = retrieval;
    orqa.insert(orqa.begin(), "run-orqa");
    for (const auto& s : {std::string("--questions"), data + "/questions.jsonl", std::string("--passages"),
                          p("passages.jsonl"), std::string("--reader"), std::string("lexical"), std::string("--out"),
                          p("answers.jsonl")})
      orqa.push_back(s);
    run(orqa);
    run({"evaluate", "--dataset", data + "/questions.jsonl", "--run", p("run.jsonl"), "--passages",
         p("passages.jsonl"), "--answers", p("answers.jsonl"), "--out", p("report.json"), "--table", p("report.txt")});
    std::vector<std::string> files;
    for (const char* f : {"passages.jsonl", "s.spix", "d.dnix", "run.jsonl", "answers.jsonl", "report.json", "report.txt"})
      files.push_back(testing::read_file(dir / f));
    c.expect(!files[4].empty() && !files[5].empty(), "empty answers or report");
    if (reference.empty())
      reference = files;
    else
      c.expect(files == reference, std::string("outputs differ (threads ") + threads + ")");
    ++runs;
  }
  return std::to_string(runs) + " runs (threads 1,1,1,4), answers+report byte-identical";
}

std::string scale(Check& c) {
  std::mt19937_64 rng(20260109);
  std::vector<std::string> vocab;
  for (int i = 0; i < 5000; ++i) vocab.push_back("t" + std::to_string(i));
  // Zipf-ish word choice so common terms have long postings.
  std::uniform_real_distribution<double> u(0, 1);
  auto word = [&] { return vocab[static_cast<std::size_t>(std::pow(u(rng), 2.5) * vocab.size()) % vocab.size()]; };
  std::vector<Passage> ps;
  ps.reserve(kScalePassages);
  for (std::size_t i = 0; i < kScalePassages; ++i) {
    std::string t;
    for (std::size_t w = 0, len = 20 + rng() % 60; w < len; ++w) t += word() + " ";
    ps.push_back(testing::passage("s" + std::to_string(i), t));
  }
  const auto t0 = Clock::now();
  auto sparse = build_sparse_index(ps);
  HashEmbedder embedder(128);
  auto dense = build_dense_index(ps, embedder);
  const double build_s = seconds_since(t0);
  HybridSearcher searcher(sparse, dense, embedder);
  std::vector<double> ms;
  for (int q = 0; q < 41; ++q) {
    std::string query;
    for (int w = 0; w < 6; ++w) query += word() + " ";
    const auto s = Clock::now();
    auto r = searcher.search(query, 40);
    ms.push_back(seconds_since(s) * 1000.0);
    c.expect(r.size() == 40 && is_valid_ranking(r), "hybrid ranking");
  }
  std::nth_element(ms.begin(), ms.begin() + ms.size() / 2, ms.end());
  const double median = ms[ms.size() / 2];
  c.expect(median < kScaleMedianMs, "median " + fmt(median, 4) + " ms");
  return "100k passages built in " + fmt(build_s, 3) + " s, hybrid median " + fmt(median, 4) + " ms";
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    std::function<std::string(Check&)> fn;
  };
  const std::vector<Criterion> criteria = {
      {"bm25-oracle", bm25_oracle}, {"dense-oracle", dense_oracle}, {"fusion", fusion},
      {"orqa-combination", orqa_combination}, {"metrics", metrics}, {"synthgen", synthgen},
      {"roundtrip-filter", roundtrip}, {"paired-t-test", t_test}, {"e2e-determinism", determinism},
      {"scale-smoke", scale},
  };
  int failed = 0;
  for (const auto& cr : criteria) {
    Check check;
    std::string detail;
    try {
      detail = cr.fn(check);
    } catch (const std::exception& e) {
      check.expect(false, std::string("exception: ") + e.what());
    }
    const bool ok = check.ok();
    failed += !ok;
    std::cout << (ok ? "PASS " : "FAIL ") << cr.name << ": " << (ok ? detail : check.summary()) << std::endl;
  }
  std::cout << (criteria.size() - failed) << "/" << criteria.size() << " criteria passed" << std::endl;
  return failed == 0 ? 0 : 1;
}
