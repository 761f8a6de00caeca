#include "ctp/synthetic.hpp"

#include "ctp/io.hpp"
#include "ctp/random.hpp"

#include <array>
#include <cctype>

namespace ctp {

namespace {

struct Topic {
  std::vector<std::string> words;
  std::vector<std::string> positive;
  std::vector<std::string> negative;
  double positive_rate;
};

const std::vector<std::string>& filler() {
  static const std::vector<std::string> words{"apple", "iphone", "today", "new", "got", "really",
                                              "think", "still", "time",  "people", "day", "looks"};
  return words;
}

const std::array<Topic, 2>& topics() {
  // "cheap" and "light" read positive in one topic and negative in the other.
  static const std::array<Topic, 2> t{
      Topic{{"battery", "screen", "camera", "charger", "display", "speaker", "glass", "case", "button", "headphones",
             "design", "hardware"},
            {"gorgeous", "sleek", "crisp", "light"},
            {"cracked", "overheats", "flimsy", "cheap"},
            0.58},
      Topic{{"ios", "update", "app", "store", "icloud", "siri", "music", "install", "settings", "software",
             "keynote", "photos"},
            {"smooth", "intuitive", "seamless", "cheap"},
            {"crash", "buggy", "laggy", "light"},
            0.48},
  };
  return t;
}

const std::string& pick(Rng& rng, const std::vector<std::string>& words) { return words[rng.uniform_index(words.size())]; }

std::string rare_word(Rng& rng) {
  static constexpr std::string_view letters = "bcdfghjklmnpqrstvwxz";
  std::string w = "zz";
  for (int i = 0; i < 5; ++i) w += letters[rng.uniform_index(letters.size())];
  return w;
}

}  // namespace

std::vector<LabeledDocument> generate_synthetic_corpus(const SyntheticConfig& config) {
  Rng rng(config.seed);
  std::vector<LabeledDocument> docs;
  docs.reserve(config.n_docs);
  for (std::size_t i = 0; i < config.n_docs; ++i) {
    const auto& topic = topics()[rng.uniform_index(2)];
    const bool positive = rng.bernoulli(topic.positive_rate);

    std::vector<std::string> words;
    const std::size_t n_topic = 3 + rng.uniform_index(4);
    for (std::size_t w = 0; w < n_topic; ++w) words.push_back(pick(rng, topic.words));
    const std::size_t n_filler = 2 + rng.uniform_index(4);
    for (std::size_t w = 0; w < n_filler; ++w) words.push_back(pick(rng, filler()));

    const auto& own = positive ? topic.positive : topic.negative;
    const auto& other = positive ? topic.negative : topic.positive;
    if (rng.bernoulli(0.75)) words.push_back(pick(rng, own));
    if (rng.bernoulli(0.25)) words.push_back(pick(rng, own));
    if (rng.bernoulli(0.08)) words.push_back(pick(rng, other));
    if (rng.bernoulli(positive ? 0.03 : 0.45)) words.push_back(config.dominant_negative);
    if (rng.bernoulli(0.3)) words.push_back(rare_word(rng));

    rng.shuffle(std::span<std::string>(words));
    std::string text;
    if (rng.bernoulli(0.3)) text += "@apple ";
    for (std::size_t w = 0; w < words.size(); ++w) {
      std::string word = words[w];
      if (w == 0) word[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(word[0])));
      text += (w ? " " : "") + word;
    }
    if (rng.bernoulli(0.2)) text += "!";
    if (rng.bernoulli(0.15)) text += " http://t.co/" + rare_word(rng);

    const bool observed = rng.bernoulli(config.label_noise) ? !positive : positive;
    docs.push_back({static_cast<int>(i), std::move(text), from_bool(observed)});
  }
  return docs;
}

std::string documents_csv(const std::vector<LabeledDocument>& docs) {
  std::string csv = "text,sentiment\n";
  for (const auto& d : docs) csv += csv_field(d.text) + "," + std::string(label_name(d.label)) + "\n";
  return csv;
}

}  // namespace ctp
