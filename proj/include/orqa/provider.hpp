// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The orqa Authors

#pragma once

#include <sys/types.h>

#include <chrono>
#include <cstdint>
#include <mutex>
#include <string>
#include <string_view>

#include "json.hpp"
#include "orqa/dense.hpp"
#include "orqa/reader.hpp"
#include "orqa/synthgen.hpp"

namespace orqa {

inline constexpr const char* kProviderTimeoutEnv = "ORQA_PROVIDER_TIMEOUT_MS";
inline constexpr std::chrono::milliseconds kDefaultProviderTimeout{30000};

// Reads kProviderTimeoutEnv, falling back to kDefaultProviderTimeout.
std::chrono::milliseconds provider_timeout_from_env();

/// A provider subprocess speaking line-delimited JSON over stdin/stdout.
/// The first line the process writes is its handshake
/// (`{"protocol": "orqa-provider/1", "fingerprint": ..., "dim": ...}`);
/// every request carries an "id" that the response echoes. A response with
/// an "error" member is raised as orqa::ProviderError. Requests are
/// serialized, so one process may be shared across threads.
class ProviderProcess {
 public:
  explicit ProviderProcess(std::string command, std::chrono::milliseconds timeout = provider_timeout_from_env());
  ~ProviderProcess();
  ProviderProcess(const ProviderProcess&) = delete;
  ProviderProcess& operator=(const ProviderProcess&) = delete;

  const nlohmann::json& handshake() const { return handshake_; }
  nlohmann::json request(nlohmann::json message) const;

 private:
  void shutdown();
  std::string read_line() const;
  void write_line(const std::string& line) const;

  std::string command_;
  std::chrono::milliseconds timeout_;
  pid_t pid_ = -1;
  int to_child_ = -1;
  int from_child_ = -1;
  nlohmann::json handshake_;
  mutable std::string buffer_;
  mutable std::mutex mutex_;
  mutable std::uint64_t next_id_ = 0;
};

class SubprocessEmbeddingProvider final : public EmbeddingProvider {
 public:
  explicit SubprocessEmbeddingProvider(std::string command);

  std::size_t dim() const override { return dim_; }
  std::string fingerprint() const override { return fingerprint_; }
  Vector embed_query(std::string_view text) const override;
  Vector embed_passage(std::string_view title, std::string_view text) const override;

 private:
  Vector embed(std::string_view op, std::string_view title, std::string_view text) const;

  ProviderProcess process_;
  std::size_t dim_ = 0;
  std::string fingerprint_;
};

class SubprocessGenerator final : public GeneratorProvider {
 public:
  explicit SubprocessGenerator(std::string command) : process_(std::move(command)) {}

  std::vector<std::string> generate(std::string_view passage_text, std::size_t n, std::size_t top_k,
                                    double top_p) const override;

 private:
  ProviderProcess process_;
};

class SubprocessReader final : public ReaderProvider {
 public:
  explicit SubprocessReader(std::string command) : process_(std::move(command)) {}

  AnswerCandidate read(std::string_view question, const Passage& passage) const override;
  double score_span(std::string_view question, const Passage& passage, std::size_t start,
                    std::size_t end) const override;

 private:
  ProviderProcess process_;
};

/// Serves `provider`-style requests on the given streams; the loop behind
/// the bundled mock provider executable. Any of the three may be null, in
/// which case the matching ops answer with an error.
void serve_provider(std::istream& in, std::ostream& out, const EmbeddingProvider* embedder,
                    const GeneratorProvider* generator, const ReaderProvider* reader, const std::string& fingerprint);

}  // namespace orqa
