// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The orqa Authors

#include "orqa/eval.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "json.hpp"
#include "orqa/error.hpp"
#include "orqa/text.hpp"

namespace orqa {

std::string normalize_answer(std::string_view s) {
  std::string stripped;
  stripped.reserve(s.size());
  for (char c : s)
    if (!text::is_ascii_punct(c)) stripped.push_back(text::ascii_lower(c));
  std::string out;
  for (auto tok : text::split_whitespace(stripped)) {
    if (tok == "a" || tok == "an" || tok == "the") continue;
    if (!out.empty()) out.push_back(' ');
    out.append(tok);
  }
  return out;
}

int exact_match(std::string_view pred, std::string_view gold) {
  return normalize_answer(pred) == normalize_answer(gold) ? 1 : 0;
}

double token_f1(std::string_view pred, std::string_view gold) {
  const auto p = normalize_answer(pred);
  const auto g = normalize_answer(gold);
  const auto pt = text::split_whitespace(p);
  const auto gt = text::split_whitespace(g);
  if (pt.empty() && gt.empty()) return 1.0;
  if (pt.empty() || gt.empty()) return 0.0;
  std::unordered_map<std::string_view, int> counts;
  for (auto t : gt) ++counts[t];
  std::size_t common = 0;
  for (auto t : pt) {
    auto it = counts.find(t);
    if (it != counts.end() && it->second > 0) {
      --it->second;
      ++common;
    }
  }
  if (common == 0) return 0.0;
  // Harmonic mean of common/|pred| and common/|gold|.
  return 2.0 * static_cast<double>(common) / static_cast<double>(pt.size() + gt.size());
}

int match_at_k(const Ranking& ranking, std::span<const std::string> golds, std::size_t k,
               const PassageLookup& passages) {
  std::vector<std::string> wanted;
  for (const auto& g : golds)
    if (auto n = normalize_answer(g); !n.empty()) wanted.push_back(std::move(n));
  const std::size_t depth = std::min(k, ranking.size());
  for (std::size_t i = 0; i < depth; ++i) {
    const Passage* p = passages ? passages(ranking[i].passage_id) : nullptr;
    if (!p) throw Error("unknown passage id in ranking: " + ranking[i].passage_id);
    const auto body = normalize_answer(p->text);
    for (const auto& w : wanted)
      if (body.find(w) != std::string::npos) return 1;
  }
  return 0;
}

double top_n_f1(std::span<const RankedAnswer> answers, std::span<const std::string> golds, std::size_t n) {
  std::unordered_set<std::string> seen;
  double best = 0.0;
  for (const auto& a : answers) {
    if (seen.size() >= n) break;
    if (!seen.insert(normalize_answer(a.candidate.text)).second) continue;
    for (const auto& g : golds) best = std::max(best, token_f1(a.candidate.text, g));
  }
  return best;
}

std::vector<OpenQAExample> dedup_open(std::span<const MrcExample> examples) {
  std::vector<OpenQAExample> out;
  std::unordered_map<std::string, std::size_t> group;
  std::vector<std::unordered_set<std::string>> answer_keys;
  for (std::size_t i = 0; i < examples.size(); ++i) {
    const auto& ex = examples[i];
    auto key = normalize_answer(ex.question);
    auto [it, inserted] = group.emplace(key, out.size());
    if (inserted) {
      out.push_back({ex.id.empty() ? "q" + std::to_string(i) : ex.id, ex.question, {}});
      answer_keys.emplace_back();
    }
    auto& target = out[it->second];
    for (const auto& a : ex.answers)
      if (answer_keys[it->second].insert(normalize_answer(a.text)).second) target.answers.push_back(a.text);
  }
  return out;
}

double compensated_mean(std::span<const double> values) {
  if (values.empty()) return 0.0;
  // Neumaier summation.
  double sum = 0.0, c = 0.0;
  for (double v : values) {
    double t = sum + v;
    if (std::abs(sum) >= std::abs(v)) {
      c += (sum - t) + v;
    } else {
      c += (v - t) + sum;
    }
    sum = t;
  }
  return (sum + c) / static_cast<double>(values.size());
}

void EvalReport::add_query(std::string question_id, std::vector<double> values) {
  if (values.size() != metrics_.size()) throw Error("metric count mismatch in evaluation report");
  question_ids_.push_back(std::move(question_id));
  per_query_.push_back(std::move(values));
}

std::vector<double> EvalReport::aggregates() const {
  std::vector<double> out;
  std::vector<double> column(per_query_.size());
  for (std::size_t m = 0; m < metrics_.size(); ++m) {
    for (std::size_t q = 0; q < per_query_.size(); ++q) column[q] = per_query_[q][m];
    out.push_back(compensated_mean(column));
  }
  return out;
}

double EvalReport::aggregate(std::string_view metric) const {
  auto it = std::find(metrics_.begin(), metrics_.end(), metric);
  if (it == metrics_.end()) throw Error("unknown metric: " + std::string(metric));
  return aggregates()[static_cast<std::size_t>(it - metrics_.begin())];
}

std::string EvalReport::to_json() const {
  nlohmann::ordered_json j;
  j["metrics"] = metrics_;
  j["num_queries"] = per_query_.size();
  auto agg = aggregates();
  nlohmann::ordered_json a = nlohmann::ordered_json::object();
  for (std::size_t m = 0; m < metrics_.size(); ++m) a[metrics_[m]] = agg[m];
  j["aggregates"] = a;
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (std::size_t q = 0; q < per_query_.size(); ++q) {
    nlohmann::ordered_json row;
    row["question_id"] = question_ids_[q];
    for (std::size_t m = 0; m < metrics_.size(); ++m) row[metrics_[m]] = per_query_[q][m];
    rows.push_back(row);
  }
  j["per_query"] = rows;
  return j.dump(2) + "\n";
}

std::string EvalReport::to_table(std::string_view title) const {
  const auto agg = aggregates();
  std::vector<std::string> cells;
  for (double v : agg) {
    std::ostringstream os;
    os << std::fixed << std::setprecision(2) << v * 100.0;
    cells.push_back(os.str());
  }
  std::size_t first = std::max<std::size_t>(title.size(), 6);
  std::ostringstream out;
  out << std::left << std::setw(static_cast<int>(first)) << (title.empty() ? "System" : title);
  std::vector<std::size_t> widths;
  for (std::size_t m = 0; m < metrics_.size(); ++m) {
    widths.push_back(std::max(metrics_[m].size(), cells[m].size()));
    out << " | " << std::right << std::setw(static_cast<int>(widths[m])) << metrics_[m];
  }
  out << "\n" << std::string(first, '-');
  for (auto w : widths) out << "-+-" << std::string(w, '-');
  out << "\n" << std::left << std::setw(static_cast<int>(first)) << ("n=" + std::to_string(per_query_.size()));
  for (std::size_t m = 0; m < metrics_.size(); ++m)
    out << " | " << std::right << std::setw(static_cast<int>(widths[m])) << cells[m];
  out << "\n";
  return out.str();
}

EvalReport evaluate_retrieval(std::span<const OpenQAExample> dataset, const RetrieveFn& retrieve,
                              std::span<const std::size_t> ks, const PassageLookup& passages) {
  if (dataset.empty()) throw Error("cannot evaluate on an empty dataset");
  std::vector<std::string> names;
  for (auto k : ks) names.push_back("M@" + std::to_string(k));
  EvalReport report(names);
  for (const auto& ex : dataset) {
    const auto ranking = retrieve(ex);
    std::vector<double> row;
    for (auto k : ks) row.push_back(match_at_k(ranking, ex.answers, k, passages));
    report.add_query(ex.question_id, std::move(row));
  }
  return report;
}

EvalReport evaluate_orqa(std::span<const OpenQAExample> dataset, const AnswerFn& answer,
                         std::span<const std::size_t> ns) {
  if (dataset.empty()) throw Error("cannot evaluate on an empty dataset");
  std::vector<std::string> names;
  for (auto n : ns) names.push_back("Top-" + std::to_string(n) + " F1");
  EvalReport report(names);
  for (const auto& ex : dataset) {
    const auto answers = answer(ex);
    std::vector<double> row;
    for (auto n : ns) row.push_back(top_n_f1(answers, ex.answers, n));
    report.add_query(ex.question_id, std::move(row));
  }
  return report;
}

namespace {

// Continued fraction for the incomplete beta (modified Lentz).
double beta_continued_fraction(double a, double b, double x) {
  constexpr int kMaxIter = 10000;
  constexpr double kEps = 1e-16;
  constexpr double kTiny = 1e-300;
  const double qab = a + b, qap = a + 1.0, qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::abs(d) < kTiny) d = kTiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kMaxIter; ++m) {
    const double m2 = 2.0 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < kEps) break;
  }
  return h;
}

}  // namespace

double incomplete_beta(double a, double b, double x) {
  if (!(a > 0.0 && b > 0.0)) throw Error("incomplete beta needs positive shape parameters");
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  const double log_front =
      std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) + a * std::log(x) + b * std::log1p(-x);
  const double front = std::exp(log_front);
  if (x < (a + 1.0) / (a + b + 2.0)) return front * beta_continued_fraction(a, b, x) / a;
  return 1.0 - front * beta_continued_fraction(b, a, 1.0 - x) / b;
}

double student_t_two_tailed(double t, double df) {
  if (std::isinf(t)) return 0.0;
  return incomplete_beta(df / 2.0, 0.5, df / (df + t * t));
}

TTestResult paired_t_test(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw Error("paired t-test needs equal-length samples");
  if (a.size() < 2) throw Error("paired t-test needs at least two pairs");
  const std::size_t n = a.size();
  std::vector<double> d(n);
  for (std::size_t i = 0; i < n; ++i) d[i] = a[i] - b[i];
  TTestResult r;
  r.df = n - 1;
  if (std::all_of(d.begin(), d.end(), [](double x) { return x == 0.0; })) return r;
  const double mean = compensated_mean(d);
  std::vector<double> sq(n);
  for (std::size_t i = 0; i < n; ++i) sq[i] = (d[i] - mean) * (d[i] - mean);
  const double var = compensated_mean(sq) * static_cast<double>(n) / static_cast<double>(n - 1);
  if (var == 0.0) {
    r.t = mean > 0 ? std::numeric_limits<double>::infinity() : -std::numeric_limits<double>::infinity();
    r.p = 0.0;
    return r;
  }
  r.t = mean / (std::sqrt(var) / std::sqrt(static_cast<double>(n)));
  r.p = student_t_two_tailed(r.t, static_cast<double>(r.df));
  return r;
}

namespace {

template <typename Fn>
void for_each_record(const std::filesystem::path& path, Fn&& fn) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path.string());
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (text::trim(line).empty()) continue;
    try {
      fn(nlohmann::json::parse(line), line_no);
    } catch (const nlohmann::json::exception& e) {
      throw ParseError(path.string() + ":" + std::to_string(line_no) + ": " + e.what());
    }
  }
}

}  // namespace

std::vector<OpenQAExample> load_open_qa(const std::filesystem::path& path) {
  std::vector<OpenQAExample> out;
  for_each_record(path, [&](const nlohmann::json& rec, std::size_t line_no) {
    OpenQAExample ex;
    ex.question_id = rec.contains("question_id") ? rec.at("question_id").get<std::string>() : "q" + std::to_string(line_no);
    ex.question = rec.at("question").get<std::string>();
    if (auto it = rec.find("answers"); it != rec.end()) ex.answers = it->get<std::vector<std::string>>();
    out.push_back(std::move(ex));
  });
  return out;
}

void write_open_qa(const std::filesystem::path& path, std::span<const OpenQAExample> examples) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw Error("cannot write " + path.string());
  for (const auto& ex : examples) {
    nlohmann::ordered_json j;
    j["question_id"] = ex.question_id;
    j["question"] = ex.question;
    j["answers"] = ex.answers;
    out << j.dump() << "\n";
  }
}

std::vector<MrcExample> load_mrc(const std::filesystem::path& path) {
  std::vector<MrcExample> out;
  for_each_record(path, [&](const nlohmann::json& rec, std::size_t line_no) {
    MrcExample ex;
    ex.id = rec.value("id", std::string());
    ex.question = rec.at("question").get<std::string>();
    if (rec.contains("context")) ex.context = rec.at("context").get<std::string>();
    if (rec.contains("passage_id")) ex.passage_id = rec.at("passage_id").get<std::string>();
    for (const auto& a : rec.at("answers")) ex.answers.push_back({a.at("text").get<std::string>(), a.value("start", std::size_t{0})});
    if (ex.context)
      for (const auto& a : ex.answers)
        if (ex.context->compare(a.start, a.text.size(), a.text) != 0)
          throw ParseError(path.string() + ":" + std::to_string(line_no) + ": answer offset does not match context");
    out.push_back(std::move(ex));
  });
  return out;
}

std::vector<MrcExample> import_squad(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path.string());
  nlohmann::json root;
  try {
    root = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
  std::vector<MrcExample> out;
  try {
    for (const auto& article : root.at("data")) {
      for (const auto& para : article.at("paragraphs")) {
        const auto context = para.at("context").get<std::string>();
        for (const auto& qa : para.at("qas")) {
          MrcExample ex;
          if (qa.contains("id")) ex.id = qa.at("id").is_string() ? qa.at("id").get<std::string>() : qa.at("id").dump();
          ex.question = qa.at("question").get<std::string>();
          ex.context = context;
          for (const auto& a : qa.value("answers", nlohmann::json::array())) {
            MrcAnswer ans{a.at("text").get<std::string>(), 0};
            auto cp = a.value("answer_start", std::size_t{0});
            ans.start = text::utf8_byte_offset(context, cp);
            ex.answers.push_back(std::move(ans));
          }
          out.push_back(std::move(ex));
        }
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(path.string() + ": unexpected SQuAD structure: " + e.what());
  }
  return out;
}

}  // namespace orqa
