// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The orqa Authors

#include "orqa/corpus.hpp"

#include <algorithm>
#include <fstream>
#include <iterator>
#include <unordered_set>

#include "json.hpp"
#include "orqa/error.hpp"
#include "orqa/text.hpp"

namespace orqa {
namespace {

// Lowercased, including the trailing period.
constexpr std::string_view kAbbreviations[] = {
    "dr.",  "mr.",  "mrs.", "ms.",  "prof.", "sr.",  "jr.",   "st.",  "fig.", "figs.",
    "eq.",  "eqs.", "ref.", "refs.", "al.",  "e.g.", "i.e.",  "cf.",  "vs.",  "ca.",
    "approx.", "vol.", "pp.", "tab.", "sec.", "ch.", "dept.", "inc."};

bool is_closer(char c) { return c == '"' || c == '\'' || c == ')' || c == ']' || c == '}'; }

bool starts_sentence(char c) { return (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9'); }

std::size_t whitespace_count(std::string_view s) { return text::count_words(s); }

// Greedy sentence packing shared by both chunkers.
std::vector<Passage> pack(const Document& doc, std::size_t limit, const TokenCounter& count) {
  std::vector<Passage> out;
  const std::string& body = doc.text;

  auto emit = [&](std::size_t start, std::size_t end, bool hard_split) {
    Passage p;
    p.doc_id = doc.id;
    p.title = doc.title;
    p.position = out.size();
    p.id = passage_id(doc.id, p.position);
    p.text = body.substr(start, end - start);
    p.word_count = text::count_words(p.text);
    p.hard_split = hard_split;
    out.push_back(std::move(p));
  };

  bool open = false;
  std::size_t chunk_start = 0, chunk_end = 0;
  std::size_t chunk_units = 0;

  for (const auto& sentence : segment_sentences(body)) {
    const std::size_t units = count(sentence.text);
    if (units > limit) {
      if (open) emit(chunk_start, chunk_end, false);
      open = false;
      // Hard-split at the limit: take the longest word prefix that fits.
      auto words = text::split_whitespace(sentence.text);
      std::size_t i = 0;
      while (i < words.size()) {
        std::size_t j = i + 1;
        auto span_of = [&](std::size_t a, std::size_t b) {
          auto s = static_cast<std::size_t>(words[a].data() - sentence.text.data());
          auto e = static_cast<std::size_t>(words[b - 1].data() + words[b - 1].size() - sentence.text.data());
          return std::string_view(sentence.text).substr(s, e - s);
        };
        while (j < words.size() && count(span_of(i, j + 1)) <= limit) ++j;
        auto piece = span_of(i, j);
        auto offset = sentence.start + static_cast<std::size_t>(piece.data() - sentence.text.data());
        emit(offset, offset + piece.size(), true);
        i = j;
      }
      continue;
    }
    if (open && chunk_units + units > limit) {
      emit(chunk_start, chunk_end, false);
      open = false;
    }
    if (!open) {
      open = true;
      chunk_start = sentence.start;
      chunk_units = 0;
    }
    chunk_end = sentence.end;
    chunk_units += units;
  }
  if (open) emit(chunk_start, chunk_end, false);
  return out;
}

}  // namespace

bool is_abbreviation(std::string_view token) {
  auto lower = text::to_lower(token);
  return std::find(std::begin(kAbbreviations), std::end(kAbbreviations), lower) != std::end(kAbbreviations);
}

std::vector<Sentence> segment_sentences(std::string_view body) {
  std::vector<Sentence> out;
  const std::size_t n = body.size();
  std::size_t i = 0;
  while (i < n && text::is_space(body[i])) ++i;
  std::size_t start = i;

  auto close = [&](std::size_t end) {
    // `end` is exclusive and never points past trailing whitespace.
    if (end > start) out.push_back({std::string(body.substr(start, end - start)), start, end});
  };

  while (i < n) {
    char c = body[i];
    if (c == '.' || c == '!' || c == '?') {
      std::size_t end = i + 1;
      while (end < n && (body[end] == '.' || body[end] == '!' || body[end] == '?')) ++end;
      while (end < n && is_closer(body[end])) ++end;
      std::size_t next = end;
      while (next < n && text::is_space(body[next])) ++next;
      bool boundary = next > end && next < n && starts_sentence(body[next]);
      if (boundary && c == '.') {
        std::size_t tok_start = i;
        while (tok_start > start && !text::is_space(body[tok_start - 1])) --tok_start;
        if (is_abbreviation(body.substr(tok_start, i + 1 - tok_start))) boundary = false;
      }
      if (boundary) {
        close(end);
        start = next;
        i = next;
        continue;
      }
      i = end;
      continue;
    }
    ++i;
  }
  std::size_t end = n;
  while (end > start && text::is_space(body[end - 1])) --end;
  close(end);
  return out;
}

std::string passage_id(std::string_view doc_id, std::size_t position) {
  std::string id(doc_id);
  id.push_back('#');
  id.append(std::to_string(position));
  return id;
}

std::vector<Passage> chunk_document(const Document& doc, std::size_t max_words) {
  return pack(doc, std::max<std::size_t>(max_words, 1), whitespace_count);
}

std::vector<Passage> chunk_for_generation(const Document& doc, std::size_t max_tokens, const TokenCounter& counter) {
  return pack(doc, std::max<std::size_t>(max_tokens, 1), counter ? counter : TokenCounter(whitespace_count));
}

std::vector<Document> load_corpus(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open corpus file: " + path.string());
  std::vector<Document> docs;
  std::unordered_set<std::string> seen;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (text::trim(line).empty()) continue;
    auto fail = [&](const std::string& why) {
      return ParseError(path.string() + ":" + std::to_string(line_no) + ": " + why);
    };
    nlohmann::json rec;
    try {
      rec = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
      throw fail(std::string("malformed record: ") + e.what());
    }
    if (!rec.is_object()) throw fail("record is not an object");
    Document doc;
    try {
      doc.id = rec.at("id").get<std::string>();
      doc.text = rec.at("text").get<std::string>();
      if (auto t = rec.find("title"); t != rec.end() && !t->is_null()) doc.title = t->get<std::string>();
    } catch (const nlohmann::json::exception& e) {
      throw fail(std::string("bad field: ") + e.what());
    }
    if (doc.id.empty()) throw fail("empty id");
    if (text::trim(doc.text).empty()) throw fail("empty text for document " + doc.id);
    if (!seen.insert(doc.id).second) throw Error("duplicate document id: " + doc.id);
    docs.push_back(std::move(doc));
  }
  return docs;
}

}  // namespace orqa
