// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The orqa Authors

#pragma once

// Brute-force BM25 straight from the formula, over pre-tokenized passages.
// Shares nothing with the inverted index.

#include <algorithm>
#include <cmath>
#include <map>
#include <string>
#include <vector>

namespace orqa::testing {

struct Bm25Oracle {
  std::vector<std::vector<std::string>> docs;
  double k1 = 1.2;
  double b = 0.75;

  double score(const std::vector<std::string>& query, std::size_t d) const {
    const double n = static_cast<double>(docs.size());
    double avg = 0.0;
    for (const auto& doc : docs) avg += static_cast<double>(doc.size());
    avg /= n;
    double total = 0.0;
    for (const auto& t : query) {
      double df = 0.0;
      for (const auto& doc : docs)
        if (std::find(doc.begin(), doc.end(), t) != doc.end()) df += 1.0;
      const double tf = static_cast<double>(std::count(docs[d].begin(), docs[d].end(), t));
      if (tf == 0.0) continue;
      const double idf = std::log(1.0 + (n - df + 0.5) / (df + 0.5));
      const double len = static_cast<double>(docs[d].size());
      total += idf * tf * (k1 + 1.0) / (tf + k1 * (1.0 - b + b * len / avg));
    }
    return total;
  }
};

}  // namespace orqa::testing
