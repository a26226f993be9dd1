// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The orqa Authors

// Line-protocol provider backed by the built-in deterministic models:
//   orqa-mock-provider [--dim N] [--seed S] [--fingerprint F]
// serves embed_query/embed_passage (hash embedder), generate (template
// generator) and read/score_span (lexical reader).

#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "orqa/dense.hpp"
#include "orqa/provider.hpp"
#include "orqa/reader.hpp"
#include "orqa/synthgen.hpp"

int main(int argc, char** argv) {
  CLI::App app{"orqa mock provider"};
  std::size_t dim = 64;
  std::uint64_t seed = 0;
  std::string fingerprint;
  app.add_option("--dim", dim, "Embedding dimension")->check(CLI::PositiveNumber);
  app.add_option("--seed", seed, "Template generator seed");
  app.add_option("--fingerprint", fingerprint, "Override the reported fingerprint");
  CLI11_PARSE(app, argc, argv);

  orqa::HashEmbedder embedder(dim);
  orqa::TemplateGenerator generator(seed);
  orqa::LexicalReader reader;
  if (fingerprint.empty()) fingerprint = embedder.fingerprint();
  std::ios::sync_with_stdio(false);
  orqa::serve_provider(std::cin, std::cout, &embedder, &generator, &reader, fingerprint);
  return 0;
}
