// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The orqa Authors

#include "orqa/pipeline.hpp"

#include <algorithm>

#include "orqa/error.hpp"
#include "orqa/parallel.hpp"

namespace orqa {

std::string_view to_string(RetrieverMode mode) {
  switch (mode) {
    case RetrieverMode::kSparse:
      return "sparse";
    case RetrieverMode::kDense:
      return "dense";
    case RetrieverMode::kHybrid:
      return "hybrid";
  }
  return "hybrid";
}

RetrieverMode parse_retriever_mode(std::string_view name) {
  if (name == "sparse") return RetrieverMode::kSparse;
  if (name == "dense") return RetrieverMode::kDense;
  if (name == "hybrid") return RetrieverMode::kHybrid;
  throw Error("unknown retriever mode: " + std::string(name));
}

DenseRetriever::DenseRetriever(const DenseIndex& index, const EmbeddingProvider& provider)
    : index_(index), provider_(provider) {
  index_.check_provider(provider_);
}

Ranking DenseRetriever::retrieve(std::string_view query, std::size_t k) const {
  return index_.search(query, k, provider_);
}

std::size_t default_k(RetrieverMode mode) {
  return mode == RetrieverMode::kSparse ? kDefaultSparseK : kDefaultHybridK;
}

void validate(const OrqaConfig& config) {
  if (config.k < 1) throw Error("K must be >= 1");
  if (!(config.ir_weight >= 0.0 && config.ir_weight <= 1.0)) throw Error("IR weight must lie in [0, 1]");
  validate(config.fusion);
}

std::vector<RankedAnswer> rank_answers(const Ranking& ranking, std::span<const AnswerCandidate> candidates,
                                       double ir_weight) {
  if (candidates.size() != ranking.size()) throw Error("one reader answer per retrieved passage is required");
  std::vector<double> ir(ranking.size()), mrc(ranking.size());
  for (std::size_t i = 0; i < ranking.size(); ++i) {
    ir[i] = ranking[i].score;
    mrc[i] = candidates[i].reader_score;
  }
  const auto ir_norm = l2_normalize(ir);
  const auto mrc_norm = l2_normalize(mrc);
  std::vector<RankedAnswer> out;
  out.reserve(ranking.size());
  for (std::size_t i = 0; i < ranking.size(); ++i) {
    RankedAnswer a;
    a.candidate = candidates[i];
    a.candidate.passage_id = ranking[i].passage_id;
    a.ir_score = ir[i];
    a.mrc_score = mrc[i];
    a.ir_score_norm = ir_norm[i];
    a.mrc_score_norm = mrc_norm[i];
    a.combined = ir_weight * ir_norm[i] + (1.0 - ir_weight) * mrc_norm[i];
    out.push_back(std::move(a));
  }
  std::stable_sort(out.begin(), out.end(), [](const RankedAnswer& x, const RankedAnswer& y) {
    return x.combined > y.combined || (x.combined == y.combined && x.candidate.passage_id < y.candidate.passage_id);
  });
  return out;
}

namespace {

std::vector<AnswerCandidate> read_all(std::string_view question, const Ranking& ranking, const ReaderProvider& reader,
                                      const PassageLookup& passages, std::size_t threads) {
  std::vector<AnswerCandidate> out(ranking.size());
  parallel_for(ranking.size(), threads, [&](std::size_t i) {
    const Passage* p = passages ? passages(ranking[i].passage_id) : nullptr;
    if (!p) throw Error("retrieved passage not found in passage store: " + ranking[i].passage_id);
    out[i] = reader.read(question, *p);
  });
  return out;
}

}  // namespace

std::vector<RankedAnswer> answer(std::string_view question, const Retriever& retriever, const ReaderProvider& reader,
                                 const PassageLookup& passages, const OrqaConfig& config, std::size_t threads) {
  validate(config);
  const auto ranking = retriever.retrieve(question, config.k);
  if (ranking.empty()) return {};
  const auto candidates = read_all(question, ranking, reader, passages, threads);
  return rank_answers(ranking, candidates, config.ir_weight);
}

double top1_f1_objective(std::span<const OpenQAExample> dev, std::span<const std::vector<RankedAnswer>> answers) {
  std::vector<double> scores;
  scores.reserve(dev.size());
  for (std::size_t i = 0; i < dev.size(); ++i) scores.push_back(top_n_f1(answers[i], dev[i].answers, 1));
  return compensated_mean(scores);
}

TuneResult tune(std::span<const OpenQAExample> dev, const Retriever& retriever, const ReaderProvider& reader,
                const PassageLookup& passages, const OrqaConfig& base, std::span<const std::size_t> k_grid,
                std::span<const double> weight_grid, const Objective& objective, std::size_t threads) {
  if (dev.empty()) throw Error("cannot tune on an empty dev set");
  if (k_grid.empty() || weight_grid.empty()) throw Error("tuning grids must be non-empty");
  std::vector<std::size_t> ks(k_grid.begin(), k_grid.end());
  std::vector<double> ws(weight_grid.begin(), weight_grid.end());
  std::sort(ks.begin(), ks.end());
  ks.erase(std::unique(ks.begin(), ks.end()), ks.end());
  std::sort(ws.begin(), ws.end());
  ws.erase(std::unique(ws.begin(), ws.end()), ws.end());
  for (auto k : ks)
    if (k < 1) throw Error("K grid values must be >= 1");
  for (auto w : ws)
    if (!(w >= 0.0 && w <= 1.0)) throw Error("weight grid values must lie in [0, 1]");

  const std::size_t max_k = ks.back();
  std::vector<Ranking> rankings(dev.size());
  std::vector<std::vector<AnswerCandidate>> reads(dev.size());
  parallel_for(dev.size(), threads, [&](std::size_t q) {
    rankings[q] = retriever.retrieve(dev[q].question, max_k);
    reads[q] = read_all(dev[q].question, rankings[q], reader, passages, 1);
  });

  TuneResult result;
  bool have_best = false;
  std::vector<std::vector<RankedAnswer>> answers(dev.size());
  for (auto k : ks) {
    for (auto w : ws) {
      for (std::size_t q = 0; q < dev.size(); ++q) {
        const std::size_t depth = std::min(k, rankings[q].size());
        Ranking prefix(rankings[q].begin(), rankings[q].begin() + static_cast<std::ptrdiff_t>(depth));
        answers[q] = rank_answers(prefix, std::span<const AnswerCandidate>(reads[q]).first(depth), w);
      }
      const double value = objective(dev, answers);
      result.grid.push_back({k, w, value});
      if (!have_best || value > result.best_objective) {
        have_best = true;
        result.best_objective = value;
        result.best = base;
        result.best.k = k;
        result.best.ir_weight = w;
      }
    }
  }
  return result;
}

}  // namespace orqa
