#include "ctp/featurizer.hpp"

#include "ctp/io.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <map>

namespace ctp {

const std::set<std::string>& default_stopwords() {
  static const std::set<std::string> words{
      "a",     "about", "above", "after", "again", "against", "all",   "am",    "an",    "and",   "any",
      "are",   "as",    "at",    "be",    "because", "been",  "before", "being", "below", "between", "both",
      "but",   "by",    "can",   "could", "did",   "do",    "does",  "doing", "down",  "during", "each",
      "few",   "for",   "from",  "further", "had", "has",   "have",  "having", "he",   "her",   "here",
      "hers",  "herself", "him", "himself", "his", "how",   "i",     "if",    "in",    "into",  "is",
      "it",    "its",   "itself", "just", "me",    "more",  "most",  "my",    "myself", "no",   "nor",
      "not",   "now",   "of",    "off",   "on",    "once",  "only",  "or",    "other", "our",   "ours",
      "ourselves", "out", "over", "own",  "rt",    "same",  "she",   "should", "so",   "some",  "such",
      "than",  "that",  "the",   "their", "theirs", "them", "themselves", "then", "there", "these", "they",
      "this",  "those", "through", "to",  "too",   "under", "until", "up",    "very",  "was",   "we",
      "were",  "what",  "when",  "where", "which", "while", "who",   "whom",  "why",   "will",  "with",
      "would", "you",   "your",  "yours", "yourself", "yourselves"};
  return words;
}

namespace {

bool is_word_byte(unsigned char c) { return std::isalnum(c) || c >= 0x80; }

// Length of a URL starting at `pos`, or 0. URLs are "scheme://..." or "www." up to whitespace.
std::size_t url_length(std::string_view text, std::size_t pos) {
  auto lower_at = [&](std::size_t i) { return static_cast<char>(std::tolower(static_cast<unsigned char>(text[i]))); };
  if (pos > 0 && is_word_byte(static_cast<unsigned char>(text[pos - 1]))) return 0;
  std::size_t i = pos;
  if (i + 4 <= text.size() && lower_at(i) == 'w' && lower_at(i + 1) == 'w' && lower_at(i + 2) == 'w' &&
      text[i + 3] == '.') {
    i += 4;
  } else {
    if (i >= text.size() || !std::isalpha(static_cast<unsigned char>(text[i]))) return 0;
    while (i < text.size() && (std::isalnum(static_cast<unsigned char>(text[i])) || text[i] == '+' ||
                               text[i] == '-' || text[i] == '.'))
      ++i;
    if (text.substr(i, 3) != "://") return 0;
    i += 3;
  }
  while (i < text.size() && !std::isspace(static_cast<unsigned char>(text[i]))) ++i;
  return i - pos;
}

std::size_t mention_length(std::string_view text, std::size_t pos) {
  if (text[pos] != '@') return 0;
  if (pos > 0 && is_word_byte(static_cast<unsigned char>(text[pos - 1]))) return 0;
  std::size_t i = pos + 1;
  while (i < text.size() && (std::isalnum(static_cast<unsigned char>(text[i])) || text[i] == '_')) ++i;
  return i > pos + 1 ? i - pos : 0;
}

bool ends_with(const std::string& s, std::string_view suffix) {
  return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

}  // namespace

std::string stem_token(std::string token) {
  if (token.size() > 5 && ends_with(token, "ing")) token.resize(token.size() - 3);
  else if (token.size() > 4 && ends_with(token, "ed")) token.resize(token.size() - 2);
  else if (token.size() > 4 && ends_with(token, "ies")) token.replace(token.size() - 3, 3, "y");
  else if (token.size() > 3 && ends_with(token, "s") && !ends_with(token, "ss")) token.pop_back();
  return token;
}

std::vector<std::string> tokenize(std::string_view text, const TokenizerConfig& config) {
  std::string cleaned;
  cleaned.reserve(text.size());
  for (std::size_t i = 0; i < text.size();) {
    std::size_t skip = 0;
    if (config.strip_urls) skip = url_length(text, i);
    if (skip == 0 && config.strip_mentions) skip = mention_length(text, i);
    if (skip > 0) {
      cleaned.push_back(' ');
      i += skip;
    } else {
      cleaned.push_back(text[i++]);
    }
  }

  std::vector<std::string> tokens;
  std::string current;
  auto flush = [&] {
    if (current.empty()) return;
    if (config.stem) current = stem_token(std::move(current));
    const bool long_enough = static_cast<int>(current.size()) >= config.min_token_length;
    const bool stop = config.remove_stopwords && config.stopwords.contains(current);
    if (long_enough && !stop) tokens.push_back(current);
    current.clear();
  };
  for (char ch : cleaned) {
    auto c = static_cast<unsigned char>(ch);
    if (is_word_byte(c)) {
      current.push_back(config.lowercase ? static_cast<char>(std::tolower(c)) : ch);
    } else {
      flush();
    }
  }
  flush();
  return tokens;
}

int Vocabulary::find(const std::string& term) const {
  auto it = index.find(term);
  return it == index.end() ? -1 : it->second;
}

std::size_t min_doc_count(double min_doc_fraction, std::size_t n_train) {
  // The epsilon keeps products like 0.7 * 10 from rounding up past an integer.
  return static_cast<std::size_t>(std::ceil(min_doc_fraction * static_cast<double>(n_train) - 1e-9));
}

Vocabulary build_vocabulary(std::span<const LabeledDocument> train_docs, const TokenizerConfig& config,
                            double min_doc_fraction) {
  if (train_docs.empty()) throw Error(ErrorCode::EmptyInput, "no training documents");
  if (!(min_doc_fraction >= 0.0 && min_doc_fraction <= 1.0))
    throw Error(ErrorCode::InvalidArgument, "min_doc_fraction must lie in [0,1]");

  std::map<std::string, int> df;
  for (const auto& doc : train_docs) {
    auto tokens = tokenize(doc.text, config);
    std::sort(tokens.begin(), tokens.end());
    tokens.erase(std::unique(tokens.begin(), tokens.end()), tokens.end());
    for (auto& t : tokens) ++df[t];
  }

  const std::size_t cutoff = min_doc_count(min_doc_fraction, train_docs.size());
  Vocabulary vocab;
  vocab.min_doc_fraction = min_doc_fraction;
  vocab.n_train = train_docs.size();
  for (const auto& [term, count] : df) {
    if (static_cast<std::size_t>(count) < cutoff) continue;
    vocab.index.emplace(term, static_cast<int>(vocab.terms.size()));
    vocab.terms.push_back(term);
    vocab.doc_frequency.push_back(count);
  }
  if (vocab.terms.empty())
    throw Error(ErrorCode::EmptyVocabulary, "no term appears in at least " + std::to_string(cutoff) + " of " +
                                                std::to_string(train_docs.size()) + " training documents");
  return vocab;
}

Vocabulary vocabulary_from_terms(std::vector<std::string> terms) {
  Vocabulary vocab;
  std::sort(terms.begin(), terms.end());
  terms.erase(std::unique(terms.begin(), terms.end()), terms.end());
  vocab.terms = std::move(terms);
  for (std::size_t i = 0; i < vocab.terms.size(); ++i) vocab.index.emplace(vocab.terms[i], static_cast<int>(i));
  vocab.doc_frequency.assign(vocab.terms.size(), 0);
  return vocab;
}

FeatureMatrix vectorize(std::span<const LabeledDocument> docs, const Vocabulary& vocab,
                        const TokenizerConfig& config, bool binary) {
  if (vocab.terms.empty()) throw Error(ErrorCode::EmptyVocabulary, "cannot vectorize with an empty vocabulary");
  FeatureMatrix m;
  m.n_cols = vocab.size();
  m.rows.reserve(docs.size());
  m.row_ids.reserve(docs.size());
  for (const auto& doc : docs) {
    std::map<int, int> counts;
    for (const auto& token : tokenize(doc.text, config)) {
      int col = vocab.find(token);
      if (col >= 0) ++counts[col];
    }
    SparseRow row;
    row.reserve(counts.size());
    for (auto [col, count] : counts) row.push_back({col, binary ? 1 : count});
    m.rows.push_back(std::move(row));
    m.row_ids.push_back(doc.id);
  }
  return m;
}

MatrixXd to_dense(const FeatureMatrix& m) {
  MatrixXd dense = MatrixXd::Zero(static_cast<Eigen::Index>(m.n_rows()), static_cast<Eigen::Index>(m.n_cols));
  for (std::size_t r = 0; r < m.rows.size(); ++r)
    for (const auto& e : m.rows[r]) dense(static_cast<Eigen::Index>(r), e.col) = e.count;
  return dense;
}

VectorXd to_dense(const SparseRow& row, std::size_t n_cols) {
  VectorXd v = VectorXd::Zero(static_cast<Eigen::Index>(n_cols));
  for (const auto& e : row) {
    if (e.col < 0 || static_cast<std::size_t>(e.col) >= n_cols)
      throw Error(ErrorCode::DimensionMismatch, "column " + std::to_string(e.col) + " outside " + std::to_string(n_cols));
    v(e.col) = e.count;
  }
  return v;
}

FeatureMatrix from_dense(const MatrixXd& dense, std::vector<int> row_ids) {
  if (row_ids.size() != static_cast<std::size_t>(dense.rows()))
    throw Error(ErrorCode::ShapeMismatch, "row_ids length differs from dense row count");
  FeatureMatrix m;
  m.n_cols = static_cast<std::size_t>(dense.cols());
  m.rows.resize(static_cast<std::size_t>(dense.rows()));
  for (Eigen::Index r = 0; r < dense.rows(); ++r) {
    for (Eigen::Index c = 0; c < dense.cols(); ++c) {
      const auto count = static_cast<int>(std::lround(dense(r, c)));
      if (count != 0) m.rows[static_cast<std::size_t>(r)].push_back({static_cast<int>(c), count});
    }
  }
  m.row_ids = std::move(row_ids);
  return m;
}

FeatureMatrix select_rows(const FeatureMatrix& m, std::span<const std::size_t> indices) {
  FeatureMatrix out;
  out.n_cols = m.n_cols;
  out.rows.reserve(indices.size());
  out.row_ids.reserve(indices.size());
  for (auto i : indices) {
    out.rows.push_back(m.rows.at(i));
    out.row_ids.push_back(m.row_ids.at(i));
  }
  return out;
}

void export_features(const FeatureMatrix& m, const Vocabulary& vocab, const std::filesystem::path& matrix_csv,
                     const std::filesystem::path& vocab_txt) {
  std::string csv = "row,col,count\n";
  for (std::size_t r = 0; r < m.rows.size(); ++r)
    for (const auto& e : m.rows[r]) csv += std::to_string(r) + "," + std::to_string(e.col) + "," + std::to_string(e.count) + "\n";
  std::string terms;
  for (const auto& t : vocab.terms) terms += t + "\n";
  write_file_atomic(matrix_csv, csv);
  write_file_atomic(vocab_txt, terms);
}

}  // namespace ctp
