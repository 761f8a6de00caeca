#ifndef CTP_CORPUS_HPP
#define CTP_CORPUS_HPP

#include "ctp/common.hpp"

#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace ctp {

struct LabeledDocument {
  int id = 0;
  std::string text;
  Label label = Label::Negative;
};

/// Literal label strings. Matching is case-insensitive after trimming.
struct StringLabelRule {
  std::vector<std::string> negative{"negative", "neg"};
  std::vector<std::string> positive{"positive", "pos"};
};

/// Numeric score column: Negative iff score <= threshold.
struct ThresholdLabelRule {
  double threshold = 0.0;
};

using LabelRule = std::variant<StringLabelRule, ThresholdLabelRule>;

Label apply_label_rule(const LabelRule& rule, const std::string& value);

struct SplitSpec {
  double train_fraction = 0.7;
  Seed seed = 0;
};

struct TrainTestSplit {
  std::vector<LabeledDocument> train;
  std::vector<LabeledDocument> test;
};

/// RFC-4180 reader. Returns all records including the header.
std::vector<std::vector<std::string>> parse_csv(std::string_view content);

std::vector<LabeledDocument> parse_labeled_csv(std::string_view content, const std::string& text_column,
                                               const std::string& label_column, const LabelRule& rule);

std::vector<LabeledDocument> load_csv(const std::filesystem::path& path, const std::string& text_column,
                                      const std::string& label_column, const LabelRule& rule);

/// Number of training documents for n documents: round-half-up of n * fraction.
std::size_t train_size(std::size_t n, double train_fraction);

TrainTestSplit split_train_test(std::span<const LabeledDocument> docs, const SplitSpec& spec);

std::vector<Label> labels_of(std::span<const LabeledDocument> docs);

}  // namespace ctp

#endif  // CTP_CORPUS_HPP
