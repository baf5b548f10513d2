#include "newscat/toy_data.hpp"

#include <array>
#include <memory>
#include <set>

#include <fmt/format.h>

#include "newscat/error.hpp"
#include "newscat/random.hpp"

namespace newscat {

namespace {

constexpr std::size_t kConcepts = 6;
constexpr std::size_t kSynonyms = 4;
constexpr std::size_t kFiller = 40;
constexpr std::uint64_t kLexiconSeed = 20230611;

constexpr std::array<std::string_view, 7> kNoise = {"udkt", "unksz", "unkk", "udkt", "unkk", "unksz", "udkt"};
constexpr std::array<std::pair<std::string_view, std::string_view>, 3> kQuotes = {
    {{"\u201c", "\u201d"}, {"\u2018", "\u2019"}, {"\u00ab", "\u00bb"}}};

struct Lexicon {
  std::vector<std::vector<std::vector<std::string>>> classes;  // class -> topic -> synonyms
  std::vector<std::string> filler;
};

std::string make_word(Rng& rng, std::set<std::string>& used) {
  static constexpr std::array<std::string_view, 24> onsets = {
      "b", "k", "z", "ng", "l", "m", "s", "th", "hl", "nd", "ph", "sh",
      "w", "y", "d", "nk", "mb", "tsh", "f", "g", "n", "kh", "dl", "v"};
  static constexpr std::array<std::string_view, 5> vowels = {"a", "e", "i", "o", "u"};
  for (;;) {
    std::string w = rng.bernoulli(0.5) ? "u" : "i";
    const std::size_t syllables = 2 + rng.index(3);
    for (std::size_t s = 0; s < syllables; ++s) {
      w += onsets[rng.index(onsets.size())];
      w += vowels[rng.index(vowels.size())];
    }
    if (used.insert(w).second) return w;
  }
}

const Lexicon& lexicon(std::size_t n_classes) {
  static std::vector<std::unique_ptr<Lexicon>> cache;
  if (cache.size() <= n_classes) cache.resize(n_classes + 1);
  auto& slot = cache[n_classes];
  if (!slot) {
    slot = std::make_unique<Lexicon>();
    Rng rng(kLexiconSeed);
    std::set<std::string> used{std::string(kNoise[0]), std::string(kNoise[1]), std::string(kNoise[2])};
    slot->classes.resize(n_classes);
    for (auto& cls : slot->classes) {
      cls.resize(kConcepts);
      for (auto& topic : cls) {
        for (std::size_t s = 0; s < kSynonyms; ++s) topic.push_back(make_word(rng, used));
      }
    }
    for (std::size_t i = 0; i < kFiller; ++i) slot->filler.push_back(make_word(rng, used));
  }
  return *slot;
}

// Synonym choice: skewed (1, 1/2, 1/4, 1/8) for labeled text, uniform for pretraining.
std::size_t pick_synonym(Rng& rng, bool skewed) {
  if (!skewed) return rng.index(kSynonyms);
  const double u = rng.uniform() * (1.0 + 0.5 + 0.25 + 0.125);
  if (u < 1.0) return 0;
  if (u < 1.5) return 1;
  if (u < 1.75) return 2;
  return 3;
}

struct DrawParams {
  double class_rate;
  double borrow_rate;
  std::size_t topic_focus;  // topics per text, 0 for all of the class's topics
  bool skewed;
};

std::vector<std::string> draw_tokens(const Lexicon& lex, std::size_t cls, std::size_t n, const DrawParams& p,
                                     Rng& rng) {
  std::vector<std::size_t> topics;
  if (p.topic_focus > 0) {
    for (std::size_t t = 0; t < p.topic_focus; ++t) topics.push_back(rng.index(kConcepts));
  }
  std::vector<std::string> tokens;
  tokens.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (rng.uniform() < p.class_rate) {
      std::size_t c = cls;
      if (rng.uniform() < p.borrow_rate) c = (cls + 1) % lex.classes.size();
      const std::size_t t = topics.empty() ? rng.index(kConcepts) : topics[rng.index(topics.size())];
      tokens.push_back(lex.classes[c][t][pick_synonym(rng, p.skewed)]);
    } else {
      tokens.push_back(lex.filler[rng.index(lex.filler.size())]);
    }
  }
  return tokens;
}

std::string render(std::vector<std::string> tokens, Rng& rng, double noise_rate) {
  if (rng.uniform() < noise_rate) {
    tokens.insert(tokens.begin() + static_cast<std::ptrdiff_t>(rng.index(tokens.size() + 1)),
                  std::string(kNoise[rng.index(kNoise.size())]));
  }
  std::string out;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    std::string w = tokens[i];
    const double u = rng.uniform();
    if (u < 0.05 && w.size() > 2) {
      // one vowel swapped for an accented variant; NFKD folds it back
      const std::size_t pos = w.find_first_of("aeiou", 1);
      if (pos != std::string::npos) {
        static constexpr std::string_view plain = "aeiou";
        const std::array<std::string_view, 5> acc = {"á", "é", "í", "ó", "ú"};
        w.replace(pos, 1, acc[plain.find(w[pos])]);
      }
    } else if (u < 0.08) {
      const auto& [open, close] = kQuotes[rng.index(kQuotes.size())];
      w = std::string(open) + w + std::string(close);
    }
    if (i == 0 && !w.empty() && w[0] >= 'a' && w[0] <= 'z') w[0] = static_cast<char>(w[0] - 'a' + 'A');
    if (!out.empty()) out += rng.uniform() < 0.1 ? ", " : " ";
    out += w;
  }
  if (rng.uniform() < 0.15) out += " - " + std::string(1, static_cast<char>('a' + rng.index(26)));
  out += rng.uniform() < 0.2 ? "!" : ".";
  return out;
}

}  // namespace

ToyCorpusSpec toy_titles_spec() {
  ToyCorpusSpec spec;
  spec.class_token_rate = 0.35;
  return spec;
}

ToyCorpusSpec toy_articles_spec() {
  ToyCorpusSpec spec;
  spec.docs_per_class = 40;
  spec.min_tokens = 60;
  spec.max_tokens = 100;
  spec.class_token_rate = 0.3;
  spec.seed = 11;
  return spec;
}

std::vector<std::string> toy_label_names(std::size_t n_classes) {
  static const std::vector<std::string> names = {"sport", "politics", "health", "economy business and finance",
                                                 "arts culture and entertainment", "crime law and justice",
                                                 "education", "environment"};
  if (n_classes > names.size()) throw ConfigError(fmt::format("toy data: at most {} classes", names.size()));
  return {names.begin(), names.begin() + static_cast<std::ptrdiff_t>(n_classes)};
}

LabeledCorpus generate_toy_corpus(const ToyCorpusSpec& spec) {
  if (spec.n_classes < 2 || spec.docs_per_class == 0 || spec.min_tokens == 0 || spec.max_tokens < spec.min_tokens) {
    throw ConfigError("toy data: bad corpus shape");
  }
  const Lexicon& lex = lexicon(spec.n_classes);
  LabelSet labels(toy_label_names(spec.n_classes));
  std::vector<Document> docs;
  std::vector<Label> y;
  Rng rng(spec.seed);
  // Interleave classes so file order carries no label information.
  for (std::size_t d = 0; d < spec.docs_per_class; ++d) {
    for (std::size_t c = 0; c < spec.n_classes; ++c) {
      const std::size_t n = spec.min_tokens + rng.index(spec.max_tokens - spec.min_tokens + 1);
      auto tokens = draw_tokens(lex, c, n, {spec.class_token_rate, spec.borrow_rate, spec.topic_focus, true}, rng);
      docs.push_back({fmt::format("d{:04}", docs.size() + 1), render(std::move(tokens), rng, spec.noise_word_rate), 0});
      y.push_back(static_cast<Label>(c));
    }
  }
  return LabeledCorpus(std::move(docs), std::move(y), std::move(labels));
}

std::vector<std::string> generate_toy_pretraining(const ToyPretrainSpec& spec) {
  const Lexicon& lex = lexicon(spec.n_classes);
  Rng rng(spec.seed);
  std::vector<std::string> out;
  out.reserve(spec.n_sentences);
  const DrawParams params{spec.class_token_rate, spec.borrow_rate, spec.topic_focus, false};
  for (std::size_t i = 0; i < spec.n_sentences; ++i) {
    const std::size_t cls = rng.index(spec.n_classes);
    const std::size_t n = 8 + rng.index(9);
    out.push_back(render(draw_tokens(lex, cls, n, params, rng), rng, 0.05));
  }
  return out;
}

}  // namespace newscat
