#include "fixtures.hpp"

#include <array>
#include <random>
#include <sstream>

namespace stylo::fixtures {

namespace {

constexpr const char* kWords[] = {
    "the",     "student",  "essay",   "argues",   "that",     "history",   "shapes",   "modern",
    "society", "and",      "culture", "while",    "economic", "policy",    "remains",  "central",
    "to",      "every",    "debate",  "about",    "public",   "health",    "research", "shows",
    "many",    "people",   "believe", "education", "should",  "improve",   "social",   "conditions",
    "however", "critics",  "suggest", "evidence", "from",     "several",   "studies",  "points",
    "toward",  "complex",  "causes",  "including", "family",  "income",    "local",    "government",
    "support", "for",      "young",   "workers",  "in",       "growing",   "cities",   "across",
    "world",   "this",     "notice",  "considers", "both",    "views",     "carefully", "before",
};

}  // namespace

std::string english_text(std::size_t n_words, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  constexpr std::size_t n_vocab = std::size(kWords);
  std::string out;
  std::size_t in_sentence = 0;
  std::size_t sentence_len = 8 + rng() % 10;
  for (std::size_t i = 0; i < n_words; ++i) {
    std::string w = kWords[rng() % n_vocab];
    if (in_sentence == 0) w[0] = static_cast<char>(w[0] - 'a' + 'A');
    if (!out.empty()) out += ' ';
    out += w;
    ++in_sentence;
    if (in_sentence == sentence_len || i + 1 == n_words) {
      out += '.';
      in_sentence = 0;
      sentence_len = 8 + rng() % 10;
    } else if (rng() % 9 == 0) {
      out += ',';
    }
  }
  return out;
}

namespace {

constexpr char kAlphabet[] = "abcdefghijklmnopqrstuvwxyz .,";
constexpr std::size_t kSymbols = 29;
constexpr std::size_t kSpace = 26;
constexpr std::size_t kPeriod = 27;
constexpr std::size_t kComma = 28;

struct Chain {
  // weights[prev2 * kSymbols + prev1][next]
  std::vector<std::array<double, kSymbols>> weights;
};

Chain make_chain(std::size_t author, std::uint64_t family_seed) {
  std::mt19937_64 rng(family_seed);
  Chain c;
  c.weights.resize(kSymbols * kSymbols);
  for (std::size_t s = 0; s < kSymbols * kSymbols; ++s) {
    auto& w = c.weights[s];
    const std::size_t prev1 = s % kSymbols;
    std::array<std::size_t, 26> perm{};
    for (std::size_t i = 0; i < 26; ++i) perm[i] = i;
    std::shuffle(perm.begin(), perm.end(), rng);
    w.fill(0.0);
    if (prev1 == kPeriod || prev1 == kComma) {
      w[kSpace] = 1.0;
      continue;
    }
    for (std::size_t l = 0; l < 26; ++l) w[l] = 1.0;
    for (std::size_t k = 0; k < 3; ++k) w[perm[(3 * author + k) % 26]] += 11.0;
    if (prev1 != kSpace) {
      w[kSpace] = 13.0;
      w[kPeriod] = 1.0;
      w[kComma] = 1.2;
    }
  }
  return c;
}

}  // namespace

std::string markov_text(std::size_t author, std::size_t n_words, std::uint64_t seed, std::uint64_t family_seed) {
  const Chain chain = make_chain(author, family_seed);
  std::mt19937_64 rng(seed);
  std::string out;
  std::size_t prev2 = kSpace;
  std::size_t prev1 = kSpace;
  std::size_t words = 0;
  bool in_word = false;
  while (true) {
    const auto& w = chain.weights[prev2 * kSymbols + prev1];
    std::discrete_distribution<std::size_t> pick(w.begin(), w.end());
    const std::size_t next = pick(rng);
    if (next == kSpace) {
      if (in_word && ++words == n_words) break;
      in_word = false;
    } else if (next < 26) {
      in_word = true;
    }
    out.push_back(kAlphabet[next]);
    prev2 = prev1;
    prev1 = next;
  }
  return out;
}

std::vector<corpus::RawDocument> markov_corpus(const MarkovCorpusOptions& o) {
  std::vector<corpus::RawDocument> docs;
  for (std::size_t a = 0; a < o.n_authors; ++a) {
    for (std::size_t d = 0; d < o.docs_per_author; ++d) {
      std::ostringstream id;
      id << "a" << a << "_d" << d;
      docs.push_back({id.str(),
                      markov_text(a, o.words_per_doc, o.seed * 1'000'003 + a * 100'000 + d, o.seed),
                      corpus::SourceDomain::synthetic,
                      "author" + std::to_string(a)});
    }
  }
  return docs;
}

TempDir::TempDir() {
  std::random_device rd;
  path_ = std::filesystem::temp_directory_path() / ("stylo_test_" + std::to_string(rd()) + std::to_string(rd()));
  std::filesystem::create_directories(path_);
}

TempDir::~TempDir() {
  std::error_code ec;
  std::filesystem::remove_all(path_, ec);
}

std::size_t count_overlapping(const std::string& haystack, const std::string& needle) {
  std::size_t n = 0;
  for (std::size_t i = 0; i + needle.size() <= haystack.size(); ++i) {
    n += haystack.compare(i, needle.size(), needle) == 0;
  }
  return n;
}

double brute_force_s(const std::vector<double>& same, double d_star) {
  std::size_t n = 0;
  for (double x : same) n += x > d_star;
  return static_cast<double>(n) / static_cast<double>(same.size());
}

double brute_force_d(const std::vector<double>& diff, double d_star) {
  std::size_t n = 0;
  for (double x : diff) n += x < d_star;
  return static_cast<double>(n) / static_cast<double>(diff.size());
}

double brute_force_auc(const std::vector<double>& pos, const std::vector<double>& neg) {
  double wins = 0.0;
  for (double p : pos) {
    for (double q : neg) wins += p > q ? 1.0 : (p == q ? 0.5 : 0.0);
  }
  return wins / (static_cast<double>(pos.size()) * static_cast<double>(neg.size()));
}

}  // namespace stylo::fixtures
