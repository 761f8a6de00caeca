#ifndef CTP_SYNTHETIC_HPP
#define CTP_SYNTHETIC_HPP

#include "ctp/corpus.hpp"

#include <string>
#include <vector>

namespace ctp {

/// Two-topic tweet-like corpus. Each topic has its own sentiment keywords,
/// a few words flip polarity between topics, and one dominant negative
/// keyword ("freak") cuts across both.
struct SyntheticConfig {
  std::size_t n_docs = 1200;
  Seed seed = 0;
  double label_noise = 0.08;
  std::string dominant_negative = "freak";
};

std::vector<LabeledDocument> generate_synthetic_corpus(const SyntheticConfig& config);

/// "text,sentiment" CSV with Positive/Negative labels.
std::string documents_csv(const std::vector<LabeledDocument>& docs);

}  // namespace ctp

#endif  // CTP_SYNTHETIC_HPP
