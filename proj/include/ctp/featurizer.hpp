#ifndef CTP_FEATURIZER_HPP
#define CTP_FEATURIZER_HPP

#include "ctp/common.hpp"
#include "ctp/corpus.hpp"

#include <filesystem>
#include <set>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

namespace ctp {

const std::set<std::string>& default_stopwords();

struct TokenizerConfig {
  bool lowercase = true;
  bool strip_urls = true;
  bool strip_mentions = true;
  bool remove_stopwords = true;
  std::set<std::string> stopwords = default_stopwords();
  int min_token_length = 2;
  /// Light suffix stripping (plural/-ing/-ed). Off by default.
  bool stem = false;
};

std::vector<std::string> tokenize(std::string_view text, const TokenizerConfig& config = {});

/// Suffix-stripping stemmer used when `TokenizerConfig::stem` is set.
std::string stem_token(std::string token);

struct Vocabulary {
  std::vector<std::string> terms;  // sorted
  std::unordered_map<std::string, int> index;
  std::vector<int> doc_frequency;  // aligned with terms
  double min_doc_fraction = 0.0;
  std::size_t n_train = 0;

  std::size_t size() const { return terms.size(); }
  /// Column id of `term`, or -1 if out of vocabulary.
  int find(const std::string& term) const;
};

/// Document-frequency cutoff: ceil(fraction * n_train).
std::size_t min_doc_count(double min_doc_fraction, std::size_t n_train);

Vocabulary build_vocabulary(std::span<const LabeledDocument> train_docs, const TokenizerConfig& config,
                            double min_doc_fraction);

/// Rebuilds a vocabulary from a term list (doc frequencies unknown, set to 0).
Vocabulary vocabulary_from_terms(std::vector<std::string> terms);

struct SparseEntry {
  int col = 0;
  int count = 0;
  bool operator==(const SparseEntry&) const = default;
};

using SparseRow = std::vector<SparseEntry>;

struct FeatureMatrix {
  std::size_t n_cols = 0;
  std::vector<SparseRow> rows;
  std::vector<int> row_ids;

  std::size_t n_rows() const { return rows.size(); }
  bool operator==(const FeatureMatrix&) const = default;
};

FeatureMatrix vectorize(std::span<const LabeledDocument> docs, const Vocabulary& vocab,
                        const TokenizerConfig& config, bool binary = false);

MatrixXd to_dense(const FeatureMatrix& m);
VectorXd to_dense(const SparseRow& row, std::size_t n_cols);

/// Counts are rounded to the nearest integer; zeros are dropped.
FeatureMatrix from_dense(const MatrixXd& dense, std::vector<int> row_ids);

/// Row subset, preserving the given order.
FeatureMatrix select_rows(const FeatureMatrix& m, std::span<const std::size_t> indices);

/// Debug export: "row,col,count" CSV and one term per line.
void export_features(const FeatureMatrix& m, const Vocabulary& vocab, const std::filesystem::path& matrix_csv,
                     const std::filesystem::path& vocab_txt);

}  // namespace ctp

#endif  // CTP_FEATURIZER_HPP
