// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The orqa Authors

#pragma once

#include <filesystem>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "orqa/ranking.hpp"
#include "orqa/reader.hpp"

namespace orqa {

struct MrcAnswer {
  std::string text;
  std::size_t start = 0;  // byte offset into the context
};

struct MrcExample {
  std::string id;
  std::string question;
  std::optional<std::string> context;
  std::optional<std::string> passage_id;
  std::vector<MrcAnswer> answers;
};

struct OpenQAExample {
  std::string question_id;
  std::string question;
  std::vector<std::string> answers;
};

/// lowercase -> drop ASCII punctuation -> drop articles (a, an, the) ->
/// collapse whitespace.
std::string normalize_answer(std::string_view s);

int exact_match(std::string_view pred, std::string_view gold);
double token_f1(std::string_view pred, std::string_view gold);

/// 1 iff a normalized gold answer occurs inside the normalized text of one of
/// the top-k passages. Throws orqa::Error for ids the lookup cannot resolve.
int match_at_k(const Ranking& ranking, std::span<const std::string> golds, std::size_t k,
               const PassageLookup& passages);

/// Max token F1 over the first n distinct (by normalized string) answers and
/// all golds.
double top_n_f1(std::span<const RankedAnswer> answers, std::span<const std::string> golds, std::size_t n);

/// Groups examples by normalized question; answers of a group are unioned
/// (unique after normalization) in first-seen order.
std::vector<OpenQAExample> dedup_open(std::span<const MrcExample> examples);

class EvalReport {
 public:
  explicit EvalReport(std::vector<std::string> metrics) : metrics_(std::move(metrics)) {}

  void add_query(std::string question_id, std::vector<double> values);

  const std::vector<std::string>& metrics() const { return metrics_; }
  const std::vector<std::string>& question_ids() const { return question_ids_; }
  const std::vector<std::vector<double>>& per_query() const { return per_query_; }
  // Mean per metric (compensated summation in query order).
  std::vector<double> aggregates() const;
  double aggregate(std::string_view metric) const;

  std::string to_json() const;
  std::string to_table(std::string_view title = {}) const;

 private:
  std::vector<std::string> metrics_;
  std::vector<std::string> question_ids_;
  std::vector<std::vector<double>> per_query_;
};

using RetrieveFn = std::function<Ranking(const OpenQAExample&)>;
using AnswerFn = std::function<std::vector<RankedAnswer>(const OpenQAExample&)>;

// Metrics "M@<k>" per cutoff.
EvalReport evaluate_retrieval(std::span<const OpenQAExample> dataset, const RetrieveFn& retrieve,
                              std::span<const std::size_t> ks, const PassageLookup& passages);
// Metrics "Top-<n> F1" per cutoff.
EvalReport evaluate_orqa(std::span<const OpenQAExample> dataset, const AnswerFn& answer,
                         std::span<const std::size_t> ns);

struct TTestResult {
  double t = 0.0;
  double p = 1.0;
  std::size_t df = 0;
};

/// Two-tailed paired t-test on a - b. All-zero differences give (0, 1).
TTestResult paired_t_test(std::span<const double> a, std::span<const double> b);

// Regularized incomplete beta I_x(a, b).
double incomplete_beta(double a, double b, double x);
// P(|T| >= |t|) for Student's t with `df` degrees of freedom.
double student_t_two_tailed(double t, double df);

double compensated_mean(std::span<const double> values);

std::vector<OpenQAExample> load_open_qa(const std::filesystem::path& path);
void write_open_qa(const std::filesystem::path& path, std::span<const OpenQAExample> examples);
std::vector<MrcExample> load_mrc(const std::filesystem::path& path);
/// SQuAD-style JSON archive (data/paragraphs/qas). Code-point answer offsets
/// are converted to byte offsets.
std::vector<MrcExample> import_squad(const std::filesystem::path& path);

}  // namespace orqa
