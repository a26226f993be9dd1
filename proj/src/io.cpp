// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The orqa Authors

#include "orqa/io.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "orqa/error.hpp"
#include "orqa/text.hpp"

namespace orqa {
namespace {

using ojson = nlohmann::ordered_json;

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw Error("cannot write " + path.string());
  return out;
}

template <typename Fn>
void for_each_line(const std::filesystem::path& path, Fn&& fn) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path.string());
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (text::trim(line).empty()) continue;
    try {
      fn(line, line_no);
    } catch (const nlohmann::json::exception& e) {
      throw ParseError(path.string() + ":" + std::to_string(line_no) + ": " + e.what());
    }
  }
}

ojson example_json(const SyntheticExample& e) {
  ojson j;
  j["passage_id"] = e.passage_id;
  j["question"] = e.question;
  j["answer_text"] = e.answer_text;
  j["answer_start"] = e.answer_start;
  j["sentence_start"] = e.sentence_start;
  j["sentence_end"] = e.sentence_end;
  if (e.ambiguous_sentence) j["ambiguous_sentence"] = true;
  if (e.repeated_answer) j["repeated_answer"] = true;
  if (e.roundtrip_score) j["roundtrip_score"] = *e.roundtrip_score;
  return j;
}

}  // namespace

std::string format_score(double v) { return ojson(v).dump(); }

void write_passages(const std::filesystem::path& path, std::span<const Passage> passages) {
  auto out = open_out(path);
  for (const auto& p : passages) {
    ojson j;
    j["id"] = p.id;
    j["doc_id"] = p.doc_id;
    j["title"] = p.title;
    j["text"] = p.text;
    j["position"] = p.position;
    j["word_count"] = p.word_count;
    j["hard_split"] = p.hard_split;
    out << j.dump() << "\n";
  }
}

std::vector<Passage> load_passages(const std::filesystem::path& path) {
  std::vector<Passage> out;
  for_each_line(path, [&](const std::string& line, std::size_t) {
    auto j = nlohmann::json::parse(line);
    Passage p;
    p.id = j.at("id").get<std::string>();
    p.text = j.at("text").get<std::string>();
    p.doc_id = j.value("doc_id", std::string());
    p.title = j.value("title", std::string());
    p.position = j.value("position", std::size_t{0});
    p.word_count = j.contains("word_count") ? j.at("word_count").get<std::size_t>() : text::count_words(p.text);
    p.hard_split = j.value("hard_split", false);
    out.push_back(std::move(p));
  });
  return out;
}

PassageStore::PassageStore(std::vector<Passage> passages) : passages_(std::move(passages)) {
  index_.reserve(passages_.size());
  for (std::size_t i = 0; i < passages_.size(); ++i)
    if (!index_.emplace(passages_[i].id, i).second) throw Error("duplicate passage id: " + passages_[i].id);
}

const Passage* PassageStore::find(std::string_view id) const {
  auto it = index_.find(std::string(id));
  return it == index_.end() ? nullptr : &passages_[it->second];
}

void write_ranking_jsonl(std::ostream& out, const std::string& query_id, const Ranking& ranking) {
  for (std::size_t i = 0; i < ranking.size(); ++i) {
    ojson j;
    j["query_id"] = query_id;
    j["rank"] = i + 1;
    j["passage_id"] = ranking[i].passage_id;
    j["score"] = ranking[i].score;
    out << j.dump() << "\n";
  }
}

void write_ranking_trec(std::ostream& out, const std::string& query_id, const Ranking& ranking,
                        const std::string& tag) {
  for (std::size_t i = 0; i < ranking.size(); ++i)
    out << query_id << " Q0 " << ranking[i].passage_id << " " << (i + 1) << " " << format_score(ranking[i].score) << " "
        << tag << "\n";
}

std::map<std::string, Ranking> load_rankings(const std::filesystem::path& path) {
  std::map<std::string, std::vector<std::pair<std::size_t, ScoredPassage>>> rows;
  for_each_line(path, [&](const std::string& line, std::size_t line_no) {
    auto body = text::trim(line);
    if (body.front() == '{') {
      auto j = nlohmann::json::parse(body);
      rows[j.at("query_id").get<std::string>()].push_back(
          {j.at("rank").get<std::size_t>(), {j.at("passage_id").get<std::string>(), j.at("score").get<double>()}});
      return;
    }
    auto f = text::split_whitespace(body);
    if (f.size() != 6) throw ParseError(path.string() + ":" + std::to_string(line_no) + ": expected 6 TREC run fields");
    std::size_t rank = 0;
    double score = 0.0;
    std::from_chars(f[3].data(), f[3].data() + f[3].size(), rank);
    auto res = std::from_chars(f[4].data(), f[4].data() + f[4].size(), score);
    if (res.ec != std::errc()) throw ParseError(path.string() + ":" + std::to_string(line_no) + ": bad score");
    rows[std::string(f[0])].push_back({rank, {std::string(f[2]), score}});
  });
  std::map<std::string, Ranking> out;
  for (auto& [qid, list] : rows) {
    std::stable_sort(list.begin(), list.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    auto& r = out[qid];
    for (auto& [rank, sp] : list) r.push_back(std::move(sp));
  }
  return out;
}

void write_answers(std::ostream& out, const std::string& question_id, std::span<const RankedAnswer> answers) {
  for (std::size_t i = 0; i < answers.size(); ++i) {
    const auto& a = answers[i];
    ojson j;
    j["question_id"] = question_id;
    j["rank"] = i + 1;
    j["answer"] = a.candidate.text;
    j["passage_id"] = a.candidate.passage_id;
    j["start"] = a.candidate.start;
    j["end"] = a.candidate.end;
    j["combined"] = a.combined;
    j["ir_score"] = a.ir_score;
    j["mrc_score"] = a.mrc_score;
    out << j.dump() << "\n";
  }
}

std::map<std::string, std::vector<RankedAnswer>> load_answers(const std::filesystem::path& path) {
  std::map<std::string, std::vector<std::pair<std::size_t, RankedAnswer>>> rows;
  for_each_line(path, [&](const std::string& line, std::size_t) {
    auto j = nlohmann::json::parse(line);
    RankedAnswer a;
    a.candidate.text = j.at("answer").get<std::string>();
    a.candidate.passage_id = j.value("passage_id", std::string());
    a.candidate.start = j.value("start", std::size_t{0});
    a.candidate.end = j.value("end", std::size_t{0});
    a.combined = j.value("combined", 0.0);
    a.ir_score = j.value("ir_score", 0.0);
    a.mrc_score = j.value("mrc_score", 0.0);
    a.candidate.reader_score = a.mrc_score;
    rows[j.at("question_id").get<std::string>()].push_back({j.at("rank").get<std::size_t>(), std::move(a)});
  });
  std::map<std::string, std::vector<RankedAnswer>> out;
  for (auto& [qid, list] : rows) {
    std::stable_sort(list.begin(), list.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    auto& v = out[qid];
    for (auto& [rank, a] : list) v.push_back(std::move(a));
  }
  return out;
}

void write_mrc_examples(const std::filesystem::path& path, std::span<const SyntheticExample> examples) {
  auto out = open_out(path);
  for (const auto& e : examples) out << example_json(e).dump() << "\n";
}

std::vector<SyntheticExample> load_mrc_examples(const std::filesystem::path& path) {
  std::vector<SyntheticExample> out;
  for_each_line(path, [&](const std::string& line, std::size_t) {
    auto j = nlohmann::json::parse(line);
    SyntheticExample e;
    e.passage_id = j.at("passage_id").get<std::string>();
    e.question = j.at("question").get<std::string>();
    e.answer_text = j.at("answer_text").get<std::string>();
    e.answer_start = j.at("answer_start").get<std::size_t>();
    e.sentence_start = j.value("sentence_start", e.answer_start);
    e.sentence_end = j.value("sentence_end", e.answer_start + e.answer_text.size());
    e.ambiguous_sentence = j.value("ambiguous_sentence", false);
    e.repeated_answer = j.value("repeated_answer", false);
    if (j.contains("roundtrip_score")) e.roundtrip_score = j.at("roundtrip_score").get<double>();
    out.push_back(std::move(e));
  });
  return out;
}

void write_retrieval_pairs(const std::filesystem::path& path, std::span<const SyntheticExample> examples) {
  auto out = open_out(path);
  for (const auto& e : examples) {
    ojson j;
    j["question"] = e.question;
    j["positive_passage_id"] = e.passage_id;
    out << j.dump() << "\n";
  }
}

void write_skips(const std::filesystem::path& path, std::span<const SkipRecord> skips) {
  auto out = open_out(path);
  for (const auto& s : skips) {
    ojson j;
    j["passage_id"] = s.passage_id;
    j["generation_index"] = s.generation_index;
    j["reason"] = s.reason;
    j["raw"] = s.raw;
    out << j.dump() << "\n";
  }
}

void write_dropped(const std::filesystem::path& path, std::span<const DroppedExample> dropped) {
  auto out = open_out(path);
  for (const auto& d : dropped) {
    auto j = example_json(d.example);
    j["reason"] = d.reason;
    out << j.dump() << "\n";
  }
}

}  // namespace orqa
