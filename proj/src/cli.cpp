// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The orqa Authors

#include "orqa/cli.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <random>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "orqa/corpus.hpp"
#include "orqa/dense.hpp"
#include "orqa/digest.hpp"
#include "orqa/error.hpp"
#include "orqa/eval.hpp"
#include "orqa/fusion.hpp"
#include "orqa/io.hpp"
#include "orqa/parallel.hpp"
#include "orqa/pipeline.hpp"
#include "orqa/provider.hpp"
#include "orqa/reader.hpp"
#include "orqa/sparse.hpp"
#include "orqa/synthgen.hpp"
#include "orqa/text.hpp"

namespace orqa {

namespace cli {
namespace {

using ojson = nlohmann::ordered_json;
namespace fs = std::filesystem;

// Effective settings of one run, recorded in its manifest.
class Manifest {
 public:
  explicit Manifest(std::string command) : command_(std::move(command)) {}

  template <typename T>
  void set(const std::string& key, const T& value) {
    config_[key] = value;
  }
  void input(const std::string& path) {
    if (!path.empty() && fs::is_regular_file(path)) inputs_[path] = file_digest(path);
  }
  void output(const std::string& path) {
    if (!path.empty()) outputs_.push_back(path);
  }

  // Written next to `primary` as "<primary>.manifest.json".
  void write(const std::string& primary) const {
    if (primary.empty()) return;
    ojson j;
    j["tool"] = "orqa";
    j["manifest_version"] = 1;
    j["command"] = command_;
    j["config"] = config_;
    j["config_hash"] = "fnv1a64:" + hex64(fnv1a64(config_.dump()));
    j["inputs"] = inputs_;
    ojson outs = ojson::object();
    for (const auto& o : outputs_)
      if (fs::is_regular_file(o)) outs[o] = file_digest(o);
    j["outputs"] = outs;
    std::ofstream f(primary + ".manifest.json", std::ios::trunc);
    if (!f) throw Error("cannot write manifest for " + primary);
    f << j.dump(2) << "\n";
  }

 private:
  std::string command_;
  ojson config_ = ojson::object();
  ojson inputs_ = ojson::object();
  std::vector<std::string> outputs_;
};

void require_file(const std::string& path, const std::string& what) {
  if (!fs::is_regular_file(path)) throw Error(what + " not found: " + path);
}

std::unique_ptr<EmbeddingProvider> make_embedder(const std::string& spec) {
  if (spec == "hash") return std::make_unique<HashEmbedder>(256);
  if (spec.rfind("hash:", 0) == 0) return std::make_unique<HashEmbedder>(std::stoul(spec.substr(5)));
  if (fs::is_regular_file(spec))
    throw Error("a vectors file cannot embed queries; pass an embedding command or built-in provider: " + spec);
  return std::make_unique<SubprocessEmbeddingProvider>(spec);
}

std::unique_ptr<GeneratorProvider> make_generator(const std::string& spec, std::uint64_t seed) {
  if (spec == "template") return std::make_unique<TemplateGenerator>(seed);
  if (spec.rfind("template:", 0) == 0) return std::make_unique<TemplateGenerator>(std::stoull(spec.substr(9)));
  return std::make_unique<SubprocessGenerator>(spec);
}

std::unique_ptr<ReaderProvider> make_reader(const std::string& spec) {
  if (spec == "lexical") return std::make_unique<LexicalReader>();
  return std::make_unique<SubprocessReader>(spec);
}

bool has_magic(const std::string& path, std::string_view magic) {
  std::ifstream in(path, std::ios::binary);
  std::string head(magic.size(), '\0');
  in.read(head.data(), static_cast<std::streamsize>(head.size()));
  return in && head == magic;
}

// Indices, provider and retriever for search / run-orqa / tune.
struct RetrievalStack {
  std::optional<SparseIndex> sparse;
  std::optional<DenseIndex> dense;
  std::unique_ptr<EmbeddingProvider> provider;
  std::unique_ptr<Retriever> retriever;
};

struct RetrievalOptions {
  std::string mode = "sparse";
  std::string index;
  std::string dense_index;
  std::string provider;
  double weight = FusionConfig{}.sparse_weight;
  std::size_t depth = FusionConfig{}.candidate_depth;

  void bind(CLI::App* app, const std::string& default_mode) {
    mode = default_mode;
    app->add_option("--mode", mode, "Retriever: sparse, dense or hybrid")
        ->check(CLI::IsMember({"sparse", "dense", "hybrid"}))
        ->capture_default_str();
    app->add_option("--index", index, "Sparse index (dense index in --mode dense)")->required();
    app->add_option("--dense-index", dense_index, "Dense index for --mode hybrid");
    app->add_option("--provider", provider, "Query embedding provider: hash[:DIM] or a command");
    app->add_option("--weight", weight, "BM25 weight in the hybrid combination")
        ->check(CLI::Range(0.0, 1.0))
        ->capture_default_str();
    app->add_option("--depth", depth, "Per-retriever candidate depth before fusion")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
  }

  void record(Manifest& m) const {
    m.set("mode", mode);
    m.set("index", index);
    m.set("dense_index", dense_index);
    m.set("provider", provider);
    m.set("weight", weight);
    m.set("depth", depth);
    m.input(index);
    m.input(dense_index);
  }

  // Heap-allocated: the retriever refers to the indices next to it.
  std::unique_ptr<RetrievalStack> open() const {
    auto stack = std::make_unique<RetrievalStack>();
    RetrievalStack& s = *stack;
    const auto m = parse_retriever_mode(mode);
    require_file(index, "index");
    if (m == RetrieverMode::kSparse || m == RetrieverMode::kHybrid) {
      if (!has_magic(index, "SPIX")) throw Error("--index is not a sparse index: " + index);
      s.sparse = SparseIndex::load(index);
    }
    if (m == RetrieverMode::kDense || m == RetrieverMode::kHybrid) {
      const std::string& dense_path = m == RetrieverMode::kDense ? index : dense_index;
      if (dense_path.empty()) throw Error("--mode hybrid needs --dense-index");
      require_file(dense_path, "dense index");
      if (!has_magic(dense_path, "DNIX")) throw Error("not a dense index: " + dense_path);
      if (provider.empty()) throw Error("--mode " + mode + " needs --provider");
      s.dense = DenseIndex::load(dense_path);
      s.provider = make_embedder(provider);
    }
    switch (m) {
      case RetrieverMode::kSparse:
        s.retriever = std::make_unique<SparseRetriever>(*s.sparse);
        break;
      case RetrieverMode::kDense:
        s.retriever = std::make_unique<DenseRetriever>(*s.dense, *s.provider);
        break;
      case RetrieverMode::kHybrid:
        s.retriever = std::make_unique<HybridRetriever>(*s.sparse, *s.dense, *s.provider, FusionConfig{weight, depth});
        break;
    }
    return stack;
  }
};

std::vector<std::size_t> sorted_unique(std::vector<std::size_t> v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

std::vector<OpenQAExample> load_questions(const std::string& path) {
  require_file(path, "questions file");
  auto qs = load_open_qa(path);
  return qs;
}

std::ostream& open_or(std::ofstream& file, const std::string& path, std::ostream& fallback) {
  if (path.empty() || path == "-") return fallback;
  file.open(path, std::ios::trunc);
  if (!file) throw Error("cannot write " + path);
  return file;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"orqa: hybrid sparse+dense open-retrieval question answering"};
  app.set_config("--config", "", "TOML configuration file (command-line flags take precedence)");
  app.require_subcommand(1);
  std::size_t threads = default_threads();
  app.add_option("--threads", threads, "Worker threads (default: available cores)")->check(CLI::PositiveNumber);

  std::function<void()> action;
  const auto workers = [&] { return std::max<std::size_t>(threads, 1); };

  // ingest ------------------------------------------------------------------
  auto* ingest = app.add_subcommand("ingest", "Split a corpus into sentence-aligned passages");
  std::string ingest_in, ingest_out;
  std::size_t max_words = kDefaultMaxWords, max_tokens = kDefaultGenerationMaxTokens;
  bool for_generation = false;
  ingest->add_option("--input", ingest_in, "Corpus file (JSON lines: id, title, text)")->required();
  ingest->add_option("--output", ingest_out, "Passages file to write")->required();
  ingest->add_option("--max-words", max_words, "Passage word limit")->check(CLI::PositiveNumber)->capture_default_str();
  ingest->add_flag("--for-generation", for_generation, "Chunk for the question generator instead (--max-tokens)");
  ingest->add_option("--max-tokens", max_tokens, "Generator chunk limit in tokenizer units")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  ingest->callback([&] {
    action = [&] {
      require_file(ingest_in, "corpus");
      const auto docs = load_corpus(ingest_in);
      std::vector<std::vector<Passage>> per_doc(docs.size());
      parallel_for(docs.size(), workers(), [&](std::size_t i) {
        per_doc[i] = for_generation ? chunk_for_generation(docs[i], max_tokens) : chunk_document(docs[i], max_words);
      });
      std::vector<Passage> passages;
      for (auto& v : per_doc)
        for (auto& p : v) passages.push_back(std::move(p));
      write_passages(ingest_out, passages);
      Manifest m("ingest");
      m.set("input", ingest_in);
      m.set("max_words", max_words);
      m.set("for_generation", for_generation);
      m.set("max_tokens", max_tokens);
      m.input(ingest_in);
      m.output(ingest_out);
      m.write(ingest_out);
      err << "ingest: " << docs.size() << " documents -> " << passages.size() << " passages\n";
    };
  });

  // index-sparse --------------------------------------------------------------
  auto* index_sparse = app.add_subcommand("index-sparse", "Build a BM25 index");
  std::string sp_passages, sp_out, stopwords = "none";
  Bm25Params bm25;
  bool no_lowercase = false;
  index_sparse->add_option("--passages", sp_passages, "Passages file")->required();
  index_sparse->add_option("--out", sp_out, "Index file to write")->required();
  index_sparse->add_option("--k1", bm25.k1, "BM25 term-frequency saturation")->capture_default_str();
  index_sparse->add_option("--b", bm25.b, "BM25 length normalization")->check(CLI::Range(0.0, 1.0))->capture_default_str();
  index_sparse->add_option("--stopwords", stopwords, "Stop-word list: none or english")
      ->check(CLI::IsMember({"none", "english"}))
      ->capture_default_str();
  index_sparse->add_flag("--no-lowercase", no_lowercase, "Keep token case");
  index_sparse->callback([&] {
    action = [&] {
      require_file(sp_passages, "passages file");
      const auto passages = load_passages(sp_passages);
      auto index = build_sparse_index(passages, bm25, AnalyzerConfig{!no_lowercase, stopwords});
      index.save(sp_out);
      Manifest m("index-sparse");
      m.set("passages", sp_passages);
      m.set("k1", bm25.k1);
      m.set("b", bm25.b);
      m.set("stopwords", stopwords);
      m.set("lowercase", !no_lowercase);
      m.input(sp_passages);
      m.output(sp_out);
      m.write(sp_out);
      err << "index-sparse: " << index.size() << " passages, " << index.vocabulary_size() << " terms\n";
    };
  });

  // index-dense ---------------------------------------------------------------
  auto* index_dense = app.add_subcommand("index-dense", "Build an exact inner-product index");
  std::string dn_passages, dn_provider, dn_out;
  index_dense->add_option("--passages", dn_passages, "Passages file")->required();
  index_dense->add_option("--provider", dn_provider, "hash[:DIM], a provider command, or a vectors file")->required();
  index_dense->add_option("--out", dn_out, "Index file to write")->required();
  index_dense->callback([&] {
    action = [&] {
      require_file(dn_passages, "passages file");
      const auto passages = load_passages(dn_passages);
      std::optional<DenseIndex> index;
      if (fs::is_regular_file(dn_provider)) {
        index = load_vectors_file(dn_provider, passages);
      } else {
        index = build_dense_index(passages, *make_embedder(dn_provider));
      }
      index->save(dn_out);
      Manifest m("index-dense");
      m.set("passages", dn_passages);
      m.set("provider", dn_provider);
      m.set("fingerprint", index->fingerprint());
      m.input(dn_passages);
      m.input(dn_provider);
      m.output(dn_out);
      m.write(dn_out);
      err << "index-dense: " << index->size() << " x " << index->dim() << "\n";
    };
  });

  // search --------------------------------------------------------------------
  auto* search = app.add_subcommand("search", "Retrieve passages for one query or a questions file");
  RetrievalOptions search_opts;
  search_opts.bind(search, "sparse");
  std::string query, queries_path, search_out, format = "jsonl", tag = "orqa";
  std::size_t search_k = 20;
  auto* q_opt = search->add_option("--query", query, "Query text");
  auto* qs_opt = search->add_option("--queries", queries_path, "Questions file (question_id, question)");
  q_opt->excludes(qs_opt);
  search->add_option("--k", search_k, "Passages to return")->check(CLI::PositiveNumber)->capture_default_str();
  search->add_option("--format", format, "Output format: jsonl or trec")
      ->check(CLI::IsMember({"jsonl", "trec"}))
      ->capture_default_str();
  search->add_option("--tag", tag, "Run tag for TREC output")->capture_default_str();
  search->add_option("--out", search_out, "Output file (default: stdout)");
  search->callback([&] {
    if (query.empty() && queries_path.empty()) throw CLI::RequiredError("--query or --queries");
    action = [&] {
      auto stack = search_opts.open();
      std::vector<OpenQAExample> qs;
      if (!queries_path.empty()) {
        qs = load_questions(queries_path);
      } else {
        qs.push_back({"q0", query, {}});
      }
      std::vector<Ranking> results(qs.size());
      parallel_for(qs.size(), workers(), [&](std::size_t i) { results[i] = stack->retriever->retrieve(qs[i].question, search_k); });
      std::ofstream file;
      auto& sink = open_or(file, search_out, out);
      for (std::size_t i = 0; i < qs.size(); ++i) {
        if (format == "trec") {
          write_ranking_trec(sink, qs[i].question_id, results[i], tag);
        } else {
          write_ranking_jsonl(sink, qs[i].question_id, results[i]);
        }
      }
      if (file.is_open()) {
        file.close();
        Manifest m("search");
        search_opts.record(m);
        m.set("query", query);
        m.set("queries", queries_path);
        m.set("k", search_k);
        m.set("format", format);
        m.input(queries_path);
        m.output(search_out);
        m.write(search_out);
      }
    };
  });

  // generate-synthetic --------------------------------------------------------
  auto* gen = app.add_subcommand("generate-synthetic", "Generate synthetic retrieval and MRC examples");
  std::string gen_passages, gen_provider = "template", pairs_out, mrc_out, skips_out, ict_out;
  GenerationConfig gen_cfg;
  std::uint64_t seed = 0;
  gen->add_option("--passages", gen_passages, "Passages file")->required();
  gen->add_option("--generator", gen_provider, "template[:SEED] or a generator command")->capture_default_str();
  gen->add_option("--n", gen_cfg.n_per_passage, "Sequences requested per passage")->capture_default_str();
  gen->add_option("--top-k", gen_cfg.top_k, "Top-k sampling cutoff")->capture_default_str();
  gen->add_option("--top-p", gen_cfg.top_p, "Nucleus sampling mass")->check(CLI::Range(0.0, 1.0))->capture_default_str();
  gen->add_option("--retries", gen_cfg.retries, "Retries per passage on provider failure")->capture_default_str();
  gen->add_option("--seed", seed, "Seed for the template generator and ICT sampling")->capture_default_str();
  gen->add_option("--pairs", pairs_out, "Retrieval pairs output")->required();
  gen->add_option("--mrc", mrc_out, "MRC examples output")->required();
  gen->add_option("--skips", skips_out, "Skip records output");
  gen->add_option("--ict", ict_out, "Also write one seeded ICT pair per multi-sentence passage");
  gen->callback([&] {
    action = [&] {
      require_file(gen_passages, "passages file");
      const auto passages = load_passages(gen_passages);
      auto provider = make_generator(gen_provider, seed);
      gen_cfg.threads = workers();
      auto result = generate_examples(passages, *provider, gen_cfg);
      write_retrieval_pairs(pairs_out, result.examples);
      write_mrc_examples(mrc_out, result.examples);
      if (!skips_out.empty()) write_skips(skips_out, result.skips);
      if (!ict_out.empty()) {
        std::mt19937_64 rng(seed);
        std::ofstream f(ict_out, std::ios::trunc);
        if (!f) throw Error("cannot write " + ict_out);
        for (const auto& p : passages) {
          if (segment_sentences(p.text).size() < 2) continue;
          auto pair = sample_ict_pair(p, rng);
          f << ojson{{"passage_id", p.id}, {"query", pair.query}, {"context", pair.context}}.dump() << "\n";
        }
      }
      Manifest m("generate-synthetic");
      m.set("passages", gen_passages);
      m.set("generator", gen_provider);
      m.set("n", gen_cfg.n_per_passage);
      m.set("top_k", gen_cfg.top_k);
      m.set("top_p", gen_cfg.top_p);
      m.set("seed", seed);
      m.input(gen_passages);
      for (const auto* o : {&pairs_out, &mrc_out, &skips_out, &ict_out}) m.output(*o);
      m.write(mrc_out);
      err << "generate-synthetic: " << result.examples.size() << " examples, " << result.skips.size() << " skipped\n";
    };
  });

  // filter-roundtrip ----------------------------------------------------------
  auto* filt = app.add_subcommand("filter-roundtrip", "Keep synthetic examples the reader scores above a threshold");
  std::string f_examples, f_passages, f_reader = "lexical", kept_out, dropped_out;
  RoundtripOptions rt;
  filt->add_option("--examples", f_examples, "MRC examples file")->required();
  filt->add_option("--passages", f_passages, "Passages file the examples refer to")->required();
  filt->add_option("--reader", f_reader, "lexical or a reader command")->capture_default_str();
  filt->add_option("--threshold", rt.threshold, "Minimum candidate answer score")->capture_default_str();
  filt->add_flag("--strict", rt.strict, "Also require the reader's own answer to match");
  filt->add_option("--kept", kept_out, "Kept examples output")->required();
  filt->add_option("--dropped", dropped_out, "Dropped examples output")->required();
  filt->callback([&] {
    action = [&] {
      require_file(f_examples, "examples file");
      require_file(f_passages, "passages file");
      const auto examples = load_mrc_examples(f_examples);
      PassageStore store(load_passages(f_passages));
      auto reader = make_reader(f_reader);
      rt.threads = workers();
      auto result = roundtrip_filter(examples, store.lookup(), *reader, rt);
      write_mrc_examples(kept_out, result.kept);
      write_dropped(dropped_out, result.dropped);
      Manifest m("filter-roundtrip");
      m.set("examples", f_examples);
      m.set("passages", f_passages);
      m.set("reader", f_reader);
      m.set("threshold", rt.threshold);
      m.set("strict", rt.strict);
      m.input(f_examples);
      m.input(f_passages);
      m.output(kept_out);
      m.output(dropped_out);
      m.write(kept_out);
      err << "filter-roundtrip: kept " << result.kept.size() << ", dropped " << result.dropped.size() << "\n";
    };
  });

  // run-orqa ------------------------------------------------------------------
  auto* orqa_cmd = app.add_subcommand("run-orqa", "Answer questions end to end");
  RetrievalOptions orqa_opts;
  orqa_opts.bind(orqa_cmd, "hybrid");
  std::string o_questions, o_passages, o_reader = "lexical", o_out;
  std::optional<std::size_t> o_k;
  double ir_weight = kDefaultIrWeight;
  orqa_cmd->add_option("--questions", o_questions, "Questions file")->required();
  orqa_cmd->add_option("--passages", o_passages, "Passages file")->required();
  orqa_cmd->add_option("--reader", o_reader, "lexical or a reader command")->capture_default_str();
  orqa_cmd->add_option("--k", o_k, "Passages read per question (default 100 sparse, 40 otherwise)")
      ->check(CLI::PositiveNumber);
  orqa_cmd->add_option("--ir-weight", ir_weight, "Retrieval weight in the answer score")
      ->check(CLI::Range(0.0, 1.0))
      ->capture_default_str();
  orqa_cmd->add_option("--out", o_out, "Answers file")->required();
  orqa_cmd->callback([&] {
    action = [&] {
      auto stack = orqa_opts.open();
      require_file(o_passages, "passages file");
      PassageStore store(load_passages(o_passages));
      const auto questions = load_questions(o_questions);
      auto reader = make_reader(o_reader);
      OrqaConfig cfg;
      cfg.mode = parse_retriever_mode(orqa_opts.mode);
      cfg.k = o_k.value_or(default_k(cfg.mode));
      cfg.ir_weight = ir_weight;
      cfg.fusion = {orqa_opts.weight, orqa_opts.depth};
      std::vector<std::vector<RankedAnswer>> answers(questions.size());
      parallel_for(questions.size(), workers(), [&](std::size_t i) {
        answers[i] = answer(questions[i].question, *stack->retriever, *reader, store.lookup(), cfg);
      });
      std::ofstream f(o_out, std::ios::trunc);
      if (!f) throw Error("cannot write " + o_out);
      for (std::size_t i = 0; i < questions.size(); ++i) write_answers(f, questions[i].question_id, answers[i]);
      f.close();
      Manifest m("run-orqa");
      orqa_opts.record(m);
      m.set("questions", o_questions);
      m.set("passages", o_passages);
      m.set("reader", o_reader);
      m.set("k", cfg.k);
      m.set("ir_weight", cfg.ir_weight);
      m.input(o_questions);
      m.input(o_passages);
      m.output(o_out);
      m.write(o_out);
      err << "run-orqa: answered " << questions.size() << " questions\n";
    };
  });

  // evaluate ------------------------------------------------------------------
  auto* evaluate = app.add_subcommand("evaluate", "Score rankings (Match@k) or answers (Top-n F1)");
  std::string e_dataset, e_squad, e_open_out, e_run, e_answers, e_passages, e_out, e_table, e_base_ans, e_base_run;
  std::vector<std::size_t> ks{20, 40, 100}, ns{1, 5};
  evaluate->add_option("--dataset", e_dataset, "Open-QA dataset (question_id, question, answers)");
  evaluate->add_option("--squad", e_squad, "SQuAD-style file, de-duplicated into an open-QA dataset");
  evaluate->add_option("--open-out", e_open_out, "Write the de-duplicated open-QA dataset here");
  evaluate->add_option("--run", e_run, "Rankings file (JSON lines or TREC run)");
  evaluate->add_option("--passages", e_passages, "Passages file (required with --run)");
  evaluate->add_option("--ks", ks, "Match@k cutoffs")->delimiter(',')->capture_default_str();
  evaluate->add_option("--answers", e_answers, "Answers file from run-orqa");
  evaluate->add_option("--ns", ns, "Top-n F1 cutoffs")->delimiter(',')->capture_default_str();
  evaluate->add_option("--baseline-run", e_base_run, "Second rankings file for a paired t-test");
  evaluate->add_option("--baseline-answers", e_base_ans, "Second answers file for a paired t-test");
  evaluate->add_option("--out", e_out, "Report (JSON)");
  evaluate->add_option("--table", e_table, "Report as a plain-text table");
  evaluate->callback([&] {
    if (e_dataset.empty() == e_squad.empty()) throw CLI::ValidationError("exactly one of --dataset or --squad is required");
    action = [&] {
      ks = sorted_unique(ks);
      ns = sorted_unique(ns);
      std::vector<OpenQAExample> dataset;
      if (!e_squad.empty()) {
        require_file(e_squad, "SQuAD file");
        dataset = dedup_open(import_squad(e_squad));
      } else {
        require_file(e_dataset, "dataset");
        dataset = load_open_qa(e_dataset);
      }
      if (!e_open_out.empty()) write_open_qa(e_open_out, dataset);
      Manifest m("evaluate");
      m.set("dataset", e_dataset);
      m.set("squad", e_squad);
      m.input(e_dataset);
      m.input(e_squad);
      if (e_run.empty() && e_answers.empty()) {
        err << "evaluate: " << dataset.size() << " open-QA examples\n";
        if (!e_open_out.empty()) {
          m.output(e_open_out);
          m.write(e_open_out);
        }
        return;
      }

      ojson report = ojson::object();
      std::string table;
      std::optional<PassageStore> store;
      auto retrieval_report = [&](const std::string& path) {
        auto runs = load_rankings(path);
        return evaluate_retrieval(
            dataset, [&](const OpenQAExample& ex) { return runs.count(ex.question_id) ? runs.at(ex.question_id) : Ranking{}; },
            ks, store->lookup());
      };
      auto answer_report = [&](const std::string& path) {
        auto all = load_answers(path);
        return evaluate_orqa(
            dataset,
            [&](const OpenQAExample& ex) {
              return all.count(ex.question_id) ? all.at(ex.question_id) : std::vector<RankedAnswer>{};
            },
            ns);
      };
      auto t_tests = [&](const EvalReport& a, const EvalReport& b) {
        ojson tests = ojson::object();
        for (std::size_t mi = 0; mi < a.metrics().size(); ++mi) {
          std::vector<double> xa, xb;
          for (std::size_t q = 0; q < a.per_query().size(); ++q) {
            xa.push_back(a.per_query()[q][mi]);
            xb.push_back(b.per_query()[q][mi]);
          }
          auto r = paired_t_test(xa, xb);
          tests[a.metrics()[mi]] = {{"t", r.t}, {"p", r.p}, {"df", r.df}};
        }
        return tests;
      };

      if (!e_run.empty()) {
        require_file(e_run, "run file");
        if (e_passages.empty()) throw Error("--run needs --passages");
        require_file(e_passages, "passages file");
        store.emplace(load_passages(e_passages));
        auto r = retrieval_report(e_run);
        report["retrieval"] = ojson::parse(r.to_json());
        table += r.to_table("Retrieval");
        if (!e_base_run.empty()) report["retrieval_t_test"] = t_tests(r, retrieval_report(e_base_run));
        m.set("run", e_run);
        m.set("ks", ks);
        m.input(e_run);
        m.input(e_passages);
        m.input(e_base_run);
      }
      if (!e_answers.empty()) {
        require_file(e_answers, "answers file");
        auto r = answer_report(e_answers);
        report["orqa"] = ojson::parse(r.to_json());
        if (!table.empty()) table += "\n";
        table += r.to_table("ORQA");
        if (!e_base_ans.empty()) report["orqa_t_test"] = t_tests(r, answer_report(e_base_ans));
        m.set("answers", e_answers);
        m.set("ns", ns);
        m.input(e_answers);
        m.input(e_base_ans);
      }
      const std::string body = report.dump(2) + "\n";
      if (e_out.empty()) {
        out << table;
      } else {
        std::ofstream f(e_out, std::ios::trunc);
        if (!f) throw Error("cannot write " + e_out);
        f << body;
      }
      if (!e_table.empty()) {
        std::ofstream f(e_table, std::ios::trunc);
        if (!f) throw Error("cannot write " + e_table);
        f << table;
      }
      m.output(e_out);
      m.output(e_table);
      m.write(e_out.empty() ? e_table : e_out);
    };
  });

  // tune ----------------------------------------------------------------------
  auto* tune_cmd = app.add_subcommand("tune", "Grid-search K and the IR weight on a dev set");
  RetrievalOptions tune_opts;
  tune_opts.bind(tune_cmd, "hybrid");
  std::string t_dev, t_passages, t_reader = "lexical", t_out;
  std::vector<std::size_t> k_grid{20, 40, 100};
  std::vector<double> w_grid{0.0, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0};
  tune_cmd->add_option("--dev", t_dev, "Dev open-QA dataset")->required();
  tune_cmd->add_option("--passages", t_passages, "Passages file")->required();
  tune_cmd->add_option("--reader", t_reader, "lexical or a reader command")->capture_default_str();
  tune_cmd->add_option("--k-grid", k_grid, "K values")->delimiter(',')->capture_default_str();
  tune_cmd->add_option("--weight-grid", w_grid, "IR weight values")->delimiter(',')->capture_default_str();
  tune_cmd->add_option("--out", t_out, "Result (JSON)")->required();
  tune_cmd->callback([&] {
    action = [&] {
      auto stack = tune_opts.open();
      require_file(t_passages, "passages file");
      PassageStore store(load_passages(t_passages));
      require_file(t_dev, "dev set");
      const auto dev = load_open_qa(t_dev);
      auto reader = make_reader(t_reader);
      OrqaConfig base;
      base.mode = parse_retriever_mode(tune_opts.mode);
      base.fusion = {tune_opts.weight, tune_opts.depth};
      auto result = tune(dev, *stack->retriever, *reader, store.lookup(), base, k_grid, w_grid, top1_f1_objective, workers());
      ojson j;
      j["best"] = {{"mode", std::string(to_string(result.best.mode))},
                   {"k", result.best.k},
                   {"ir_weight", result.best.ir_weight},
                   {"objective", result.best_objective}};
      ojson cells = ojson::array();
      for (const auto& c : result.grid) cells.push_back({{"k", c.k}, {"ir_weight", c.ir_weight}, {"objective", c.objective}});
      j["grid"] = cells;
      std::ofstream f(t_out, std::ios::trunc);
      if (!f) throw Error("cannot write " + t_out);
      f << j.dump(2) << "\n";
      f.close();
      Manifest m("tune");
      tune_opts.record(m);
      m.set("dev", t_dev);
      m.set("passages", t_passages);
      m.set("reader", t_reader);
      m.set("k_grid", k_grid);
      m.set("weight_grid", w_grid);
      m.input(t_dev);
      m.input(t_passages);
      m.output(t_out);
      m.write(t_out);
      out << "best K=" << result.best.k << " ir_weight=" << format_score(result.best.ir_weight)
          << " Top-1 F1=" << format_score(result.best_objective) << "\n";
    };
  });

  // overlap -------------------------------------------------------------------
  auto* overlap = app.add_subcommand("overlap", "Top-k passage overlap between two runs");
  std::string run_a, run_b;
  std::size_t ov_k = 20;
  overlap->add_option("--run-a", run_a, "First rankings file")->required();
  overlap->add_option("--run-b", run_b, "Second rankings file")->required();
  overlap->add_option("--k", ov_k, "Cutoff")->check(CLI::PositiveNumber)->capture_default_str();
  overlap->callback([&] {
    action = [&] {
      require_file(run_a, "run file");
      require_file(run_b, "run file");
      auto a = load_rankings(run_a);
      auto b = load_rankings(run_b);
      std::vector<double> values;
      for (const auto& [qid, ra] : a) {
        auto it = b.find(qid);
        const std::size_t n = overlap_at_k(ra, it == b.end() ? Ranking{} : it->second, ov_k);
        values.push_back(static_cast<double>(n));
        out << qid << "\t" << n << "\n";
      }
      out << "mean\t" << format_score(compensated_mean(values)) << "\n";
    };
  });

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }
  try {
    if (action) action();
  } catch (const CLI::Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitData;
  }
  return kExitOk;
}

}  // namespace cli
}  // namespace orqa
