// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The orqa Authors

#include "orqa/sparse.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>

#include "binary_io.hpp"
#include "orqa/error.hpp"

namespace orqa {
namespace {

constexpr char kMagic[4] = {'S', 'P', 'I', 'X'};

bool better(double sa, std::size_t oa, double sb, std::size_t ob) { return sa > sb || (sa == sb && oa < ob); }

}  // namespace

SparseIndex SparseIndex::build(std::span<const Passage> passages, Bm25Params params, AnalyzerConfig analyzer) {
  if (passages.empty()) throw Error("cannot build a sparse index over zero passages");
  if (!(params.k1 > 0.0)) throw Error("BM25 k1 must be positive");
  if (!(params.b >= 0.0 && params.b <= 1.0)) throw Error("BM25 b must lie in [0, 1]");

  SparseIndex index;
  index.params_ = params;
  index.analyzer_ = Analyzer(std::move(analyzer));

  std::map<std::string, std::vector<Posting>> postings;
  index.passage_ids_.reserve(passages.size());
  index.doc_lengths_.reserve(passages.size());
  for (std::size_t ord = 0; ord < passages.size(); ++ord) {
    auto tokens = index.analyzer_.analyze(passages[ord].text);
    std::map<std::string, std::uint32_t> tf;
    for (auto& t : tokens) ++tf[std::move(t)];
    for (auto& [term, count] : tf) postings[term].push_back({static_cast<std::uint32_t>(ord), count});
    index.passage_ids_.push_back(passages[ord].id);
    index.doc_lengths_.push_back(static_cast<std::uint32_t>(tokens.size()));
  }
  index.terms_.reserve(postings.size());
  index.postings_.reserve(postings.size());
  for (auto& [term, list] : postings) {
    index.terms_.push_back(term);
    index.postings_.push_back(std::move(list));
  }
  index.finalize();
  if (index.ordinals_.size() != index.passage_ids_.size()) throw Error("duplicate passage ids in sparse index input");
  return index;
}

void SparseIndex::finalize() {
  double total = 0.0;
  for (auto len : doc_lengths_) total += len;
  avg_doc_length_ = doc_lengths_.empty() ? 0.0 : total / static_cast<double>(doc_lengths_.size());
  term_ids_.clear();
  term_ids_.reserve(terms_.size());
  for (std::uint32_t i = 0; i < terms_.size(); ++i) term_ids_.emplace(terms_[i], i);
  ordinals_.clear();
  ordinals_.reserve(passage_ids_.size());
  for (std::size_t i = 0; i < passage_ids_.size(); ++i) ordinals_.emplace(passage_ids_[i], i);
}

double SparseIndex::term_weight(std::uint32_t tf, std::uint32_t doc_freq, std::uint32_t doc_length) const {
  if (tf == 0 || doc_freq == 0) return 0.0;
  const double n = static_cast<double>(passage_ids_.size());
  const double df = doc_freq;
  const double idf = std::log(1.0 + (n - df + 0.5) / (df + 0.5));
  const double rel_len = avg_doc_length_ > 0.0 ? doc_length / avg_doc_length_ : 0.0;
  const double norm = params_.k1 * (1.0 - params_.b + params_.b * rel_len);
  return idf * (tf * (params_.k1 + 1.0)) / (tf + norm);
}

std::span<const Posting> SparseIndex::postings(std::string_view term) const {
  auto it = term_ids_.find(std::string(term));
  if (it == term_ids_.end()) return {};
  return postings_[it->second];
}

std::uint32_t SparseIndex::term_frequency(std::string_view term, std::size_t ordinal) const {
  auto list = postings(term);
  auto it = std::lower_bound(list.begin(), list.end(), ordinal,
                             [](const Posting& p, std::size_t ord) { return p.ordinal < ord; });
  return (it != list.end() && it->ordinal == ordinal) ? it->tf : 0;
}

double SparseIndex::score(std::string_view query, std::size_t ordinal) const {
  if (ordinal >= passage_ids_.size()) throw Error("passage ordinal out of range");
  double total = 0.0;
  for (const auto& term : analyzer_.analyze(query)) {
    auto list = postings(term);
    auto tf = term_frequency(term, ordinal);
    total += term_weight(tf, static_cast<std::uint32_t>(list.size()), doc_lengths_[ordinal]);
  }
  return total;
}

Ranking SparseIndex::search(std::string_view query, std::size_t k) const {
  if (k == 0) return {};
  std::vector<double> acc(passage_ids_.size(), 0.0);
  std::vector<std::uint32_t> touched;
  for (const auto& term : analyzer_.analyze(query)) {
    auto list = postings(term);
    const auto df = static_cast<std::uint32_t>(list.size());
    for (const auto& p : list) {
      if (acc[p.ordinal] == 0.0) touched.push_back(p.ordinal);
      acc[p.ordinal] += term_weight(p.tf, df, doc_lengths_[p.ordinal]);
    }
  }
  std::sort(touched.begin(), touched.end());
  touched.erase(std::unique(touched.begin(), touched.end()), touched.end());
  std::erase_if(touched, [&](std::uint32_t ord) { return !(acc[ord] > 0.0); });

  auto cmp = [&](std::uint32_t a, std::uint32_t b) { return better(acc[a], a, acc[b], b); };
  const std::size_t n = std::min(k, touched.size());
  std::partial_sort(touched.begin(), touched.begin() + static_cast<std::ptrdiff_t>(n), touched.end(), cmp);

  Ranking out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) out.push_back({passage_ids_[touched[i]], acc[touched[i]]});
  return out;
}

std::optional<std::size_t> SparseIndex::ordinal_of(std::string_view passage_id) const {
  auto it = ordinals_.find(std::string(passage_id));
  if (it == ordinals_.end()) return std::nullopt;
  return it->second;
}

// Layout (little-endian, varints are LEB128):
//   "SPIX" u32:version u8:lowercase str:stopwords f64:k1 f64:b
//   varint:N  N x (str:passage_id varint:doc_length)
//   varint:T  T x (str:term varint:count count x (varint:ordinal_delta varint:tf))
void SparseIndex::save(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write sparse index: " + path.string());
  detail::BinaryWriter w(out);
  w.bytes(kMagic, 4);
  w.pod(kFormatVersion);
  w.pod(static_cast<std::uint8_t>(analyzer_.config().lowercase ? 1 : 0));
  w.string(analyzer_.config().stopwords);
  w.pod(params_.k1);
  w.pod(params_.b);
  w.varint(passage_ids_.size());
  for (std::size_t i = 0; i < passage_ids_.size(); ++i) {
    w.string(passage_ids_[i]);
    w.varint(doc_lengths_[i]);
  }
  w.varint(terms_.size());
  for (std::size_t t = 0; t < terms_.size(); ++t) {
    w.string(terms_[t]);
    w.varint(postings_[t].size());
    std::uint32_t prev = 0;
    for (const auto& p : postings_[t]) {
      w.varint(p.ordinal - prev);
      w.varint(p.tf);
      prev = p.ordinal;
    }
  }
  if (!out) throw Error("failed writing sparse index: " + path.string());
}

SparseIndex SparseIndex::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open sparse index: " + path.string());
  detail::BinaryReader r(in);
  char magic[4];
  r.bytes(magic, 4);
  if (!std::equal(magic, magic + 4, kMagic)) throw Error("not a sparse index file (bad magic): " + path.string());
  auto version = r.pod<std::uint32_t>();
  if (version != kFormatVersion) throw Error("unsupported sparse index version " + std::to_string(version));

  SparseIndex index;
  AnalyzerConfig cfg;
  cfg.lowercase = r.pod<std::uint8_t>() != 0;
  cfg.stopwords = r.string();
  index.analyzer_ = Analyzer(cfg);
  index.params_.k1 = r.pod<double>();
  index.params_.b = r.pod<double>();
  const auto n = r.varint();
  index.passage_ids_.reserve(n);
  index.doc_lengths_.reserve(n);
  for (std::uint64_t i = 0; i < n; ++i) {
    index.passage_ids_.push_back(r.string());
    index.doc_lengths_.push_back(static_cast<std::uint32_t>(r.varint()));
  }
  const auto t = r.varint();
  index.terms_.reserve(t);
  index.postings_.reserve(t);
  for (std::uint64_t i = 0; i < t; ++i) {
    index.terms_.push_back(r.string());
    const auto count = r.varint();
    std::vector<Posting> list;
    list.reserve(count);
    std::uint64_t ord = 0;
    for (std::uint64_t j = 0; j < count; ++j) {
      ord += r.varint();
      if (ord >= n) throw Error("corrupt sparse index: posting ordinal out of range");
      list.push_back({static_cast<std::uint32_t>(ord), static_cast<std::uint32_t>(r.varint())});
    }
    index.postings_.push_back(std::move(list));
  }
  index.finalize();
  return index;
}

SparseIndex build_sparse_index(std::span<const Passage> passages, Bm25Params params, AnalyzerConfig analyzer) {
  return SparseIndex::build(passages, params, std::move(analyzer));
}

double bm25_score(const SparseIndex& index, std::string_view query, std::size_t ordinal) {
  return index.score(query, ordinal);
}

Ranking sparse_search(const SparseIndex& index, std::string_view query, std::size_t k) {
  return index.search(query, k);
}

}  // namespace orqa
