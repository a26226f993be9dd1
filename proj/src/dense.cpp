// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The orqa Authors

#include "orqa/dense.hpp"

#include <fcntl.h>
#include <sys/mman.h>
#include <sys/stat.h>
#include <unistd.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <unordered_set>

#include "binary_io.hpp"
#include "json.hpp"
#include "orqa/digest.hpp"
#include "orqa/error.hpp"
#include "orqa/text.hpp"

namespace orqa {
namespace {

constexpr char kMagic[4] = {'D', 'N', 'I', 'X'};
constexpr std::size_t kMatrixAlignment = 64;

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

bool all_finite(const Vector& v) {
  return std::all_of(v.begin(), v.end(), [](float x) { return std::isfinite(x); });
}

}  // namespace

struct DenseIndex::Mapping {
  void* addr = MAP_FAILED;
  std::size_t length = 0;

  ~Mapping() {
    if (addr != MAP_FAILED) ::munmap(addr, length);
  }
};

HashEmbedder::HashEmbedder(std::size_t dim, AnalyzerConfig analyzer) : dim_(dim), analyzer_(std::move(analyzer)) {
  if (dim_ == 0) throw Error("hash embedder dimension must be >= 1");
}

std::string HashEmbedder::fingerprint() const {
  return "hash-embed/v1 dim=" + std::to_string(dim_) + " lowercase=" + (analyzer_.config().lowercase ? "1" : "0") +
         " stopwords=" + analyzer_.config().stopwords;
}

Vector HashEmbedder::embed(std::string_view text) const {
  std::vector<double> acc(dim_, 0.0);
  for (const auto& tok : analyzer_.analyze(text)) {
    const std::uint64_t h = splitmix64(fnv1a64(tok) ^ kSeed);
    const double sign = (h >> 63) ? -1.0 : 1.0;
    acc[h % dim_] += sign;
  }
  double norm = 0.0;
  for (double x : acc) norm += x * x;
  norm = std::sqrt(norm);
  Vector out(dim_, 0.0f);
  if (norm > 0.0)
    for (std::size_t i = 0; i < dim_; ++i) out[i] = static_cast<float>(acc[i] / norm);
  return out;
}

Vector hash_embed(std::string_view text, std::size_t dim) { return HashEmbedder(dim).embed(text); }

void verify_provider(const EmbeddingProvider& provider) {
  constexpr std::string_view probe = "Provider determinism probe: fever, cough and 42 results.";
  const std::size_t dim = provider.dim();
  if (dim == 0) throw ProviderError("embedding provider reports dim 0");
  auto q1 = provider.embed_query(probe), q2 = provider.embed_query(probe);
  auto p1 = provider.embed_passage("probe", probe), p2 = provider.embed_passage("probe", probe);
  for (const auto* v : {&q1, &q2, &p1, &p2}) {
    if (v->size() != dim)
      throw ProviderError("embedding dimension mismatch: expected " + std::to_string(dim) + ", got " +
                          std::to_string(v->size()));
    if (!all_finite(*v)) throw ProviderError("embedding provider returned non-finite values");
  }
  if (q1 != q2 || p1 != p2) throw ProviderError("embedding provider is not deterministic");
}

double inner_product(std::span<const float> a, std::span<const float> b) {
  double s = 0.0;
  const std::size_t n = std::min(a.size(), b.size());
  for (std::size_t i = 0; i < n; ++i) s += static_cast<double>(a[i]) * static_cast<double>(b[i]);
  return s;
}

DenseIndex::DenseIndex(DenseIndex&&) noexcept = default;
DenseIndex& DenseIndex::operator=(DenseIndex&&) noexcept = default;
DenseIndex::~DenseIndex() = default;

void DenseIndex::finalize() {
  if (!mapping_) data_ = owned_.data();
  ordinals_.clear();
  ordinals_.reserve(passage_ids_.size());
  for (std::size_t i = 0; i < passage_ids_.size(); ++i)
    if (!ordinals_.emplace(passage_ids_[i], i).second) throw Error("duplicate passage id in dense index: " + passage_ids_[i]);
}

DenseIndex DenseIndex::build(std::span<const Passage> passages, const EmbeddingProvider& provider) {
  if (passages.empty()) throw Error("cannot build a dense index over zero passages");
  verify_provider(provider);
  const std::size_t dim = provider.dim();
  std::vector<float> matrix;
  matrix.reserve(passages.size() * dim);
  std::vector<std::string> ids;
  ids.reserve(passages.size());
  for (const auto& p : passages) {
    Vector v;
    try {
      v = provider.embed_passage(p.title, p.text);
    } catch (const std::exception& e) {
      throw ProviderError("embedding failed for passage " + p.id + ": " + e.what());
    }
    if (v.size() != dim)
      throw ProviderError("embedding dimension mismatch for passage " + p.id + ": expected " + std::to_string(dim) +
                          ", got " + std::to_string(v.size()));
    if (!all_finite(v)) throw ProviderError("non-finite embedding for passage " + p.id);
    matrix.insert(matrix.end(), v.begin(), v.end());
    ids.push_back(p.id);
  }
  return from_rows(std::move(ids), dim, std::move(matrix), provider.fingerprint());
}

DenseIndex DenseIndex::from_rows(std::vector<std::string> passage_ids, std::size_t dim, std::vector<float> matrix,
                                 std::string fingerprint) {
  if (dim == 0) throw Error("dense index dimension must be >= 1");
  if (matrix.size() != passage_ids.size() * dim) throw Error("dense matrix shape does not match passage count");
  DenseIndex index;
  index.dim_ = dim;
  index.passage_ids_ = std::move(passage_ids);
  index.owned_ = std::move(matrix);
  index.fingerprint_ = std::move(fingerprint);
  index.finalize();
  return index;
}

std::span<const float> DenseIndex::row(std::size_t ordinal) const {
  if (ordinal >= passage_ids_.size()) throw Error("dense row out of range");
  return {data_ + ordinal * dim_, dim_};
}

std::optional<std::size_t> DenseIndex::ordinal_of(std::string_view passage_id) const {
  auto it = ordinals_.find(std::string(passage_id));
  if (it == ordinals_.end()) return std::nullopt;
  return it->second;
}

void DenseIndex::check_provider(const EmbeddingProvider& provider) const {
  if (provider.fingerprint() != fingerprint_)
    throw ProviderError("provider fingerprint mismatch: index built with '" + fingerprint_ + "', query provider is '" +
                        provider.fingerprint() + "'");
  if (provider.dim() != dim_) throw ProviderError("provider dimension does not match dense index");
}

Ranking DenseIndex::search(std::span<const float> query, std::size_t k) const {
  if (query.size() != dim_) throw ProviderError("query vector dimension does not match dense index");
  const std::size_t n = passage_ids_.size();
  k = std::min(k, n);
  if (k == 0) return {};
  // Min-heap of the best k (score, ordinal); "worse" sits on top.
  using Entry = std::pair<double, std::size_t>;
  auto worse = [](const Entry& a, const Entry& b) { return a.first > b.first || (a.first == b.first && a.second < b.second); };
  std::vector<Entry> heap;
  heap.reserve(k + 1);
  for (std::size_t i = 0; i < n; ++i) {
    const double s = inner_product(query, {data_ + i * dim_, dim_});
    if (heap.size() < k) {
      heap.emplace_back(s, i);
      std::push_heap(heap.begin(), heap.end(), worse);
    } else if (s > heap.front().first) {  // equal score loses to the smaller ordinal already held
      std::pop_heap(heap.begin(), heap.end(), worse);
      heap.back() = {s, i};
      std::push_heap(heap.begin(), heap.end(), worse);
    }
  }
  std::sort_heap(heap.begin(), heap.end(), worse);
  Ranking out;
  out.reserve(heap.size());
  for (const auto& [s, i] : heap) out.push_back({passage_ids_[i], s});
  return out;
}

Ranking DenseIndex::search(std::string_view query, std::size_t k, const EmbeddingProvider& provider) const {
  check_provider(provider);
  auto q = provider.embed_query(query);
  if (q.size() != dim_) throw ProviderError("query embedding has wrong dimension");
  if (!all_finite(q)) throw ProviderError("query embedding has non-finite values");
  return search(std::span<const float>(q), k);
}

// Layout (little-endian):
//   "DNIX" u32:version u64:rows u64:dim str:fingerprint rows x str:passage_id
//   zero padding to a 64-byte boundary, then rows*dim float32 row-major.
void DenseIndex::save(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write dense index: " + path.string());
  detail::BinaryWriter w(out);
  w.bytes(kMagic, 4);
  w.pod(kFormatVersion);
  w.pod(static_cast<std::uint64_t>(passage_ids_.size()));
  w.pod(static_cast<std::uint64_t>(dim_));
  w.string(fingerprint_);
  for (const auto& id : passage_ids_) w.string(id);
  const auto pos = static_cast<std::size_t>(out.tellp());
  const std::size_t pad = (kMatrixAlignment - pos % kMatrixAlignment) % kMatrixAlignment;
  const char zeros[kMatrixAlignment] = {};
  w.bytes(zeros, pad);
  w.bytes(data_, passage_ids_.size() * dim_ * sizeof(float));
  if (!out) throw Error("failed writing dense index: " + path.string());
}

DenseIndex DenseIndex::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open dense index: " + path.string());
  detail::BinaryReader r(in);
  char magic[4];
  r.bytes(magic, 4);
  if (!std::equal(magic, magic + 4, kMagic)) throw Error("not a dense index file (bad magic): " + path.string());
  auto version = r.pod<std::uint32_t>();
  if (version != kFormatVersion) throw Error("unsupported dense index version " + std::to_string(version));
  DenseIndex index;
  const auto rows = r.pod<std::uint64_t>();
  index.dim_ = r.pod<std::uint64_t>();
  index.fingerprint_ = r.string();
  index.passage_ids_.reserve(rows);
  for (std::uint64_t i = 0; i < rows; ++i) index.passage_ids_.push_back(r.string());
  const auto pos = static_cast<std::size_t>(in.tellg());
  const std::size_t offset = pos + (kMatrixAlignment - pos % kMatrixAlignment) % kMatrixAlignment;
  const std::size_t bytes = rows * index.dim_ * sizeof(float);
  in.close();

  int fd = ::open(path.c_str(), O_RDONLY);
  if (fd < 0) throw Error("cannot open dense index: " + path.string());
  struct stat st {};
  if (::fstat(fd, &st) != 0 || static_cast<std::size_t>(st.st_size) < offset + bytes) {
    ::close(fd);
    throw Error("truncated dense index: " + path.string());
  }
  index.mapping_ = std::make_unique<Mapping>();
  index.mapping_->length = static_cast<std::size_t>(st.st_size);
  index.mapping_->addr = ::mmap(nullptr, index.mapping_->length, PROT_READ, MAP_PRIVATE, fd, 0);
  ::close(fd);
  if (index.mapping_->addr == MAP_FAILED) throw Error("cannot map dense index: " + path.string());
  index.data_ = reinterpret_cast<const float*>(static_cast<const char*>(index.mapping_->addr) + offset);
  index.finalize();
  return index;
}

DenseIndex build_dense_index(std::span<const Passage> passages, const EmbeddingProvider& provider) {
  return DenseIndex::build(passages, provider);
}

Ranking dense_search(const DenseIndex& index, std::string_view query, std::size_t k,
                     const EmbeddingProvider& provider) {
  return index.search(query, k, provider);
}

DenseIndex load_vectors_file(const std::filesystem::path& path, std::span<const Passage> passages) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open vectors file: " + path.string());
  std::string line;
  if (!std::getline(in, line)) throw ParseError(path.string() + ": missing header line");
  std::size_t dim = 0;
  std::string fingerprint;
  try {
    auto header = nlohmann::json::parse(line);
    dim = header.at("dim").get<std::size_t>();
    fingerprint = header.value("fingerprint", std::string("vectors:") + path.filename().string());
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(path.string() + ":1: bad header: " + e.what());
  }
  if (dim == 0) throw ParseError(path.string() + ":1: dim must be >= 1");

  std::unordered_map<std::string, Vector> by_id;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (text::trim(line).empty()) continue;
    try {
      auto rec = nlohmann::json::parse(line);
      auto id = rec.at("id").get<std::string>();
      auto vec = rec.at("vector").get<Vector>();
      if (vec.size() != dim) throw ProviderError("dimension mismatch for passage " + id);
      if (!all_finite(vec)) throw ProviderError("non-finite vector for passage " + id);
      by_id[id] = std::move(vec);
    } catch (const nlohmann::json::exception& e) {
      throw ParseError(path.string() + ":" + std::to_string(line_no) + ": " + e.what());
    }
  }
  std::vector<float> matrix;
  matrix.reserve(passages.size() * dim);
  std::vector<std::string> ids;
  for (const auto& p : passages) {
    auto it = by_id.find(p.id);
    if (it == by_id.end()) throw Error("vectors file has no vector for passage " + p.id);
    matrix.insert(matrix.end(), it->second.begin(), it->second.end());
    ids.push_back(p.id);
  }
  return DenseIndex::from_rows(std::move(ids), dim, std::move(matrix), std::move(fingerprint));
}

}  // namespace orqa
