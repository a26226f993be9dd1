// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The orqa Authors

#pragma once

#include <string>
#include <vector>

namespace orqa {

struct ScoredPassage {
  std::string passage_id;
  double score = 0.0;

  friend bool operator==(const ScoredPassage&, const ScoredPassage&) = default;
};

// Scores non-increasing, ids unique, scores finite.
using Ranking = std::vector<ScoredPassage>;

bool is_valid_ranking(const Ranking& ranking);

}  // namespace orqa
