#include "ctp/corpus.hpp"

#include "ctp/io.hpp"
#include "ctp/random.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>

namespace ctp {

std::string_view label_name(Label l) { return l == Label::Positive ? "Positive" : "Negative"; }

std::string_view error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::MissingColumn: return "MissingColumn";
    case ErrorCode::BadLabel: return "BadLabel";
    case ErrorCode::EmptyCorpus: return "EmptyCorpus";
    case ErrorCode::EmptyText: return "EmptyText";
    case ErrorCode::MalformedCsv: return "MalformedCsv";
    case ErrorCode::TooFewDocuments: return "TooFewDocuments";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::EmptyVocabulary: return "EmptyVocabulary";
    case ErrorCode::KTooLarge: return "KTooLarge";
    case ErrorCode::EmptyMatrix: return "EmptyMatrix";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::EmptyCounts: return "EmptyCounts";
    case ErrorCode::ShapeMismatch: return "ShapeMismatch";
    case ErrorCode::MtryTooLarge: return "MtryTooLarge";
    case ErrorCode::VocabMismatch: return "VocabMismatch";
    case ErrorCode::NonFiniteLoss: return "NonFiniteLoss";
    case ErrorCode::LambdaZero: return "LambdaZero";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::EmptyInput: return "EmptyInput";
    case ErrorCode::OneClassOnly: return "OneClassOnly";
    case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

namespace {

std::string trim_lower(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  std::string out(s.substr(b, e - b));
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

bool is_blank(std::string_view s) {
  return std::all_of(s.begin(), s.end(), [](char c) { return std::isspace(static_cast<unsigned char>(c)); });
}

// Checks that every multi-byte sequence is well-formed UTF-8.
bool valid_utf8(std::string_view s) {
  std::size_t i = 0;
  while (i < s.size()) {
    auto c = static_cast<unsigned char>(s[i]);
    std::size_t extra;
    if (c < 0x80) extra = 0;
    else if ((c & 0xE0) == 0xC0 && c >= 0xC2) extra = 1;
    else if ((c & 0xF0) == 0xE0) extra = 2;
    else if ((c & 0xF8) == 0xF0 && c <= 0xF4) extra = 3;
    else return false;
    if (i + extra >= s.size() && extra > 0) return false;
    for (std::size_t k = 1; k <= extra; ++k) {
      if ((static_cast<unsigned char>(s[i + k]) & 0xC0) != 0x80) return false;
    }
    i += extra + 1;
  }
  return true;
}

}  // namespace

Label apply_label_rule(const LabelRule& rule, const std::string& value) {
  if (const auto* strings = std::get_if<StringLabelRule>(&rule)) {
    const std::string v = trim_lower(value);
    for (const auto& s : strings->negative)
      if (trim_lower(s) == v) return Label::Negative;
    for (const auto& s : strings->positive)
      if (trim_lower(s) == v) return Label::Positive;
    throw Error(ErrorCode::BadLabel, "unrecognized label '" + value + "'");
  }
  const auto& numeric = std::get<ThresholdLabelRule>(rule);
  const std::string v = trim_lower(value);
  double score = 0.0;
  auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), score);
  if (v.empty() || ec != std::errc() || ptr != v.data() + v.size() || !std::isfinite(score))
    throw Error(ErrorCode::BadLabel, "non-numeric label '" + value + "'");
  return score <= numeric.threshold ? Label::Negative : Label::Positive;
}

std::vector<std::vector<std::string>> parse_csv(std::string_view content) {
  if (!valid_utf8(content)) throw Error(ErrorCode::MalformedCsv, "input is not valid UTF-8");
  // Skip a UTF-8 byte order mark.
  if (content.starts_with("\xEF\xBB\xBF")) content.remove_prefix(3);

  std::vector<std::vector<std::string>> records;
  std::vector<std::string> record;
  std::string field;
  std::size_t line = 1;
  std::size_t i = 0;
  bool field_started = false;

  auto end_record = [&] {
    record.push_back(std::move(field));
    field.clear();
    records.push_back(std::move(record));
    record.clear();
    field_started = false;
  };

  while (i < content.size()) {
    char c = content[i];
    if (c == '"' && !field_started) {
      field_started = true;
      ++i;
      bool closed = false;
      while (i < content.size()) {
        if (content[i] == '"') {
          if (i + 1 < content.size() && content[i + 1] == '"') {
            field.push_back('"');
            i += 2;
          } else {
            ++i;
            closed = true;
            break;
          }
        } else {
          if (content[i] == '\n') ++line;
          field.push_back(content[i++]);
        }
      }
      if (!closed) throw Error(ErrorCode::MalformedCsv, "unterminated quoted field starting near line " + std::to_string(line));
      if (i < content.size() && content[i] != ',' && content[i] != '\n' && content[i] != '\r')
        throw Error(ErrorCode::MalformedCsv, "unexpected character after closing quote on line " + std::to_string(line));
      continue;
    }
    if (c == '"') throw Error(ErrorCode::MalformedCsv, "bare quote inside unquoted field on line " + std::to_string(line));
    if (c == ',') {
      record.push_back(std::move(field));
      field.clear();
      field_started = false;
      ++i;
    } else if (c == '\r' || c == '\n') {
      end_record();
      if (c == '\r' && i + 1 < content.size() && content[i + 1] == '\n') ++i;
      ++i;
      ++line;
    } else {
      field_started = true;
      field.push_back(c);
      ++i;
    }
  }
  if (field_started || !record.empty()) end_record();
  return records;
}

std::vector<LabeledDocument> parse_labeled_csv(std::string_view content, const std::string& text_column,
                                               const std::string& label_column, const LabelRule& rule) {
  auto records = parse_csv(content);
  // Blank lines carry no data.
  std::erase_if(records, [](const auto& r) { return r.size() == 1 && is_blank(r[0]); });
  if (records.empty()) throw Error(ErrorCode::MalformedCsv, "missing header row");

  const auto& header = records.front();
  auto column_of = [&](const std::string& name) {
    auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) throw Error(ErrorCode::MissingColumn, "column '" + name + "' not in header");
    return static_cast<std::size_t>(it - header.begin());
  };
  const std::size_t text_idx = column_of(text_column);
  const std::size_t label_idx = column_of(label_column);

  if (records.size() == 1) throw Error(ErrorCode::EmptyCorpus, "no data rows");

  std::vector<LabeledDocument> docs;
  std::vector<std::size_t> empty_rows;
  docs.reserve(records.size() - 1);
  for (std::size_t r = 1; r < records.size(); ++r) {
    const auto& rec = records[r];
    // Data row numbers are 1-based, header excluded.
    if (rec.size() != header.size())
      throw Error(ErrorCode::MalformedCsv, "row " + std::to_string(r) + " has " + std::to_string(rec.size()) +
                                               " fields, header has " + std::to_string(header.size()));
    if (is_blank(rec[text_idx])) {
      empty_rows.push_back(r);
      continue;
    }
    Label label;
    try {
      label = apply_label_rule(rule, rec[label_idx]);
    } catch (const Error& e) {
      throw Error(ErrorCode::BadLabel, "row " + std::to_string(r) + ": unmappable label '" + rec[label_idx] + "'");
    }
    docs.push_back({static_cast<int>(docs.size()), rec[text_idx], label});
  }
  if (!empty_rows.empty()) {
    std::string rows;
    for (std::size_t k = 0; k < empty_rows.size(); ++k) rows += (k ? "," : "") + std::to_string(empty_rows[k]);
    throw Error(ErrorCode::EmptyText, "empty text in rows " + rows);
  }
  return docs;
}

std::vector<LabeledDocument> load_csv(const std::filesystem::path& path, const std::string& text_column,
                                      const std::string& label_column, const LabelRule& rule) {
  return parse_labeled_csv(read_file(path), text_column, label_column, rule);
}

std::size_t train_size(std::size_t n, double train_fraction) {
  return static_cast<std::size_t>(std::floor(static_cast<double>(n) * train_fraction + 0.5));
}

TrainTestSplit split_train_test(std::span<const LabeledDocument> docs, const SplitSpec& spec) {
  if (!(spec.train_fraction > 0.0 && spec.train_fraction < 1.0))
    throw Error(ErrorCode::InvalidArgument, "train_fraction must lie in (0,1)");
  const std::size_t n = docs.size();
  const std::size_t n_train = train_size(n, spec.train_fraction);
  if (n < 2 || n_train == 0 || n_train >= n)
    throw Error(ErrorCode::TooFewDocuments,
                std::to_string(n) + " documents cannot be split with fraction " + std::to_string(spec.train_fraction));

  Rng rng(spec.seed);
  const auto perm = rng.permutation(n);
  TrainTestSplit split;
  split.train.reserve(n_train);
  split.test.reserve(n - n_train);
  for (std::size_t i = 0; i < n; ++i) (i < n_train ? split.train : split.test).push_back(docs[perm[i]]);
  return split;
}

std::vector<Label> labels_of(std::span<const LabeledDocument> docs) {
  std::vector<Label> out;
  out.reserve(docs.size());
  for (const auto& d : docs) out.push_back(d.label);
  return out;
}

}  // namespace ctp
