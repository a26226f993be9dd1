// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The orqa Authors

#pragma once

#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

namespace orqa {

struct AnalyzerConfig {
  bool lowercase = true;
  // "none" or "english".
  std::string stopwords = "none";

  friend bool operator==(const AnalyzerConfig&, const AnalyzerConfig&) = default;
};

// tokenize (split on non-alphanumeric) -> lowercase -> stop-word removal.
// Identical at index and query time.
class Analyzer {
 public:
  explicit Analyzer(AnalyzerConfig config = {});

  std::vector<std::string> analyze(std::string_view text) const;

  const AnalyzerConfig& config() const { return config_; }

 private:
  AnalyzerConfig config_;
  std::unordered_set<std::string> stopwords_;
};

}  // namespace orqa
