// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The orqa Authors

#include "orqa/provider.hpp"

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <spawn.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <cstring>
#include <istream>
#include <ostream>
#include <thread>

#include "orqa/error.hpp"

extern char** environ;

namespace orqa {
namespace {

using json = nlohmann::json;
using Clock = std::chrono::steady_clock;

void ignore_sigpipe() {
  static std::once_flag once;
  std::call_once(once, [] { ::signal(SIGPIPE, SIG_IGN); });
}

}  // namespace

std::chrono::milliseconds provider_timeout_from_env() {
  if (const char* v = std::getenv(kProviderTimeoutEnv)) {
    char* end = nullptr;
    long long ms = std::strtoll(v, &end, 10);
    if (end != v && ms > 0) return std::chrono::milliseconds(ms);
  }
  return kDefaultProviderTimeout;
}

ProviderProcess::ProviderProcess(std::string command, std::chrono::milliseconds timeout)
    : command_(std::move(command)), timeout_(timeout) {
  ignore_sigpipe();
  int in_pipe[2], out_pipe[2];
  if (::pipe2(in_pipe, O_CLOEXEC) != 0) throw ProviderError("pipe() failed");
  if (::pipe2(out_pipe, O_CLOEXEC) != 0) {
    ::close(in_pipe[0]);
    ::close(in_pipe[1]);
    throw ProviderError("pipe() failed");
  }
  posix_spawn_file_actions_t actions;
  posix_spawn_file_actions_init(&actions);
  posix_spawn_file_actions_adddup2(&actions, in_pipe[0], STDIN_FILENO);
  posix_spawn_file_actions_adddup2(&actions, out_pipe[1], STDOUT_FILENO);
  // Own process group, so a wedged provider and its children die together.
  posix_spawnattr_t attr;
  posix_spawnattr_init(&attr);
  posix_spawnattr_setflags(&attr, POSIX_SPAWN_SETPGROUP);
  posix_spawnattr_setpgroup(&attr, 0);
  const char* argv[] = {"/bin/sh", "-c", command_.c_str(), nullptr};
  int rc = ::posix_spawn(&pid_, "/bin/sh", &actions, &attr, const_cast<char* const*>(argv), environ);
  posix_spawn_file_actions_destroy(&actions);
  posix_spawnattr_destroy(&attr);
  ::close(in_pipe[0]);
  ::close(out_pipe[1]);
  to_child_ = in_pipe[1];
  from_child_ = out_pipe[0];
  if (rc != 0) {
    ::close(to_child_);
    ::close(from_child_);
    throw ProviderError("cannot launch provider '" + command_ + "': " + std::strerror(rc));
  }
  try {
    handshake_ = json::parse(read_line());
  } catch (const json::exception& e) {
    shutdown();
    throw ProviderError("provider '" + command_ + "' sent a malformed handshake: " + e.what());
  } catch (...) {
    shutdown();
    throw;
  }
  if (!handshake_.is_object() || !handshake_.contains("fingerprint")) {
    shutdown();
    throw ProviderError("provider '" + command_ + "' handshake lacks a fingerprint");
  }
}

ProviderProcess::~ProviderProcess() { shutdown(); }

void ProviderProcess::shutdown() {
  if (to_child_ >= 0) ::close(to_child_);
  if (from_child_ >= 0) ::close(from_child_);
  to_child_ = from_child_ = -1;
  if (pid_ > 0) {
    // EOF on stdin asks the provider to exit; give it a moment, then kill.
    int status = 0;
    const auto deadline = Clock::now() + std::chrono::seconds(2);
    while (::waitpid(pid_, &status, WNOHANG) == 0) {
      if (Clock::now() > deadline) {
        ::kill(-pid_, SIGKILL);
        ::waitpid(pid_, &status, 0);
        break;
      }
      std::this_thread::sleep_for(std::chrono::milliseconds(2));
    }
    pid_ = -1;
  }
}

void ProviderProcess::write_line(const std::string& line) const {
  std::string data = line;
  data.push_back('\n');
  std::size_t off = 0;
  while (off < data.size()) {
    ssize_t n = ::write(to_child_, data.data() + off, data.size() - off);
    if (n < 0) {
      if (errno == EINTR) continue;
      throw ProviderError("provider '" + command_ + "' closed its input: " + std::strerror(errno));
    }
    off += static_cast<std::size_t>(n);
  }
}

std::string ProviderProcess::read_line() const {
  const auto deadline = Clock::now() + timeout_;
  while (true) {
    if (auto nl = buffer_.find('\n'); nl != std::string::npos) {
      std::string line = buffer_.substr(0, nl);
      buffer_.erase(0, nl + 1);
      return line;
    }
    auto left = std::chrono::duration_cast<std::chrono::milliseconds>(deadline - Clock::now()).count();
    if (left <= 0) {
      ::kill(-pid_, SIGKILL);
      throw ProviderError("provider '" + command_ + "' timed out after " + std::to_string(timeout_.count()) + " ms");
    }
    pollfd pfd{from_child_, POLLIN, 0};
    int rc = ::poll(&pfd, 1, static_cast<int>(left));
    if (rc < 0) {
      if (errno == EINTR) continue;
      throw ProviderError("poll() failed on provider output");
    }
    if (rc == 0) continue;
    char chunk[65536];
    ssize_t n = ::read(from_child_, chunk, sizeof chunk);
    if (n < 0) {
      if (errno == EINTR) continue;
      throw ProviderError("reading from provider failed: " + std::string(std::strerror(errno)));
    }
    if (n == 0) throw ProviderError("provider '" + command_ + "' exited unexpectedly");
    buffer_.append(chunk, static_cast<std::size_t>(n));
  }
}

json ProviderProcess::request(json message) const {
  std::lock_guard lock(mutex_);
  const std::string id = std::to_string(next_id_++);
  message["id"] = id;
  write_line(message.dump());
  json response;
  try {
    response = json::parse(read_line());
  } catch (const json::exception& e) {
    throw ProviderError("provider '" + command_ + "' sent a malformed response: " + e.what());
  }
  if (!response.is_object()) throw ProviderError("provider response is not an object");
  if (auto err = response.find("error"); err != response.end())
    throw ProviderError("provider error: " + (err->is_string() ? err->get<std::string>() : err->dump()));
  if (response.value("id", std::string()) != id) throw ProviderError("provider response id does not match request");
  return response;
}

SubprocessEmbeddingProvider::SubprocessEmbeddingProvider(std::string command) : process_(std::move(command)) {
  const auto& hs = process_.handshake();
  try {
    dim_ = hs.at("dim").get<std::size_t>();
    fingerprint_ = hs.at("fingerprint").get<std::string>();
  } catch (const json::exception& e) {
    throw ProviderError(std::string("embedding provider handshake: ") + e.what());
  }
  if (dim_ == 0) throw ProviderError("embedding provider declared dim 0");
}

Vector SubprocessEmbeddingProvider::embed(std::string_view op, std::string_view title, std::string_view text) const {
  auto resp = process_.request({{"op", op}, {"text", text}, {"title", title}});
  try {
    return resp.at("vector").get<Vector>();
  } catch (const json::exception& e) {
    throw ProviderError(std::string("embedding response: ") + e.what());
  }
}

Vector SubprocessEmbeddingProvider::embed_query(std::string_view text) const { return embed("embed_query", "", text); }

Vector SubprocessEmbeddingProvider::embed_passage(std::string_view title, std::string_view text) const {
  return embed("embed_passage", title, text);
}

std::vector<std::string> SubprocessGenerator::generate(std::string_view passage_text, std::size_t n, std::size_t top_k,
                                                       double top_p) const {
  auto resp = process_.request({{"op", "generate"}, {"text", passage_text}, {"n", n}, {"k", top_k}, {"p", top_p}});
  try {
    return resp.at("sequences").get<std::vector<std::string>>();
  } catch (const json::exception& e) {
    throw ProviderError(std::string("generator response: ") + e.what());
  }
}

AnswerCandidate SubprocessReader::read(std::string_view question, const Passage& passage) const {
  auto resp = process_.request({{"op", "read"}, {"question", question}, {"title", passage.title}, {"text", passage.text}});
  AnswerCandidate c;
  try {
    c.start = resp.at("start").get<std::size_t>();
    c.end = resp.at("end").get<std::size_t>();
    c.reader_score = resp.at("score").get<double>();
    c.text = resp.value("text", std::string());
  } catch (const json::exception& e) {
    throw ProviderError(std::string("reader response: ") + e.what());
  }
  if (c.start >= c.end || c.end > passage.text.size()) throw ProviderError("reader span outside passage " + passage.id);
  if (!std::isfinite(c.reader_score)) throw ProviderError("reader returned a non-finite score");
  c.text = passage.text.substr(c.start, c.end - c.start);
  c.passage_id = passage.id;
  return c;
}

double SubprocessReader::score_span(std::string_view question, const Passage& passage, std::size_t start,
                                    std::size_t end) const {
  auto resp = process_.request({{"op", "score_span"},
                                {"question", question},
                                {"title", passage.title},
                                {"text", passage.text},
                                {"start", start},
                                {"end", end}});
  try {
    return resp.at("score").get<double>();
  } catch (const json::exception& e) {
    throw ProviderError(std::string("reader response: ") + e.what());
  }
}

void serve_provider(std::istream& in, std::ostream& out, const EmbeddingProvider* embedder,
                    const GeneratorProvider* generator, const ReaderProvider* reader, const std::string& fingerprint) {
  json hs = {{"protocol", "orqa-provider/1"}, {"fingerprint", fingerprint}};
  if (embedder) hs["dim"] = embedder->dim();
  out << hs.dump() << "\n" << std::flush;

  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    json resp;
    try {
      auto req = json::parse(line);
      resp["id"] = req.value("id", std::string());
      const auto op = req.at("op").get<std::string>();
      const auto text = req.value("text", std::string());
      if ((op == "embed_query" || op == "embed_passage") && embedder) {
        resp["vector"] = op == "embed_query" ? embedder->embed_query(text)
                                             : embedder->embed_passage(req.value("title", std::string()), text);
      } else if (op == "generate" && generator) {
        resp["sequences"] = generator->generate(text, req.value("n", std::size_t{5}), req.value("k", std::size_t{10}),
                                                req.value("p", 0.95));
      } else if ((op == "read" || op == "score_span") && reader) {
        Passage p;
        p.title = req.value("title", std::string());
        p.text = text;
        const auto question = req.at("question").get<std::string>();
        if (op == "read") {
          auto c = reader->read(question, p);
          resp["text"] = c.text;
          resp["start"] = c.start;
          resp["end"] = c.end;
          resp["score"] = c.reader_score;
        } else {
          resp["score"] = reader->score_span(question, p, req.at("start").get<std::size_t>(), req.at("end").get<std::size_t>());
        }
      } else {
        resp["error"] = "unsupported op: " + op;
      }
    } catch (const std::exception& e) {
      resp["error"] = e.what();
    }
    out << resp.dump() << "\n" << std::flush;
  }
}

}  // namespace orqa
