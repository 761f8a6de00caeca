// Writes the seeded synthetic corpus used for smoke tests and benchmarks.

#include "ctp/io.hpp"
#include "ctp/synthetic.hpp"

#include <CLI11.hpp>

#include <iostream>

int main(int argc, char** argv) {
  CLI::App app{"Generate a synthetic two-topic sentiment corpus"};
  ctp::SyntheticConfig config;
  std::string out = "sample_corpus.csv";
  app.add_option("--n", config.n_docs, "Number of documents")->capture_default_str()->check(CLI::PositiveNumber);
  app.add_option("--seed", config.seed, "Generator seed")->capture_default_str();
  app.add_option("--label-noise", config.label_noise, "Label flip probability")
      ->capture_default_str()
      ->check(CLI::Range(0.0, 0.5));
  app.add_option("--out", out, "Output CSV path")->capture_default_str();
  CLI11_PARSE(app, argc, argv);

  try {
    ctp::write_file_atomic(out, ctp::documents_csv(ctp::generate_synthetic_corpus(config)));
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
