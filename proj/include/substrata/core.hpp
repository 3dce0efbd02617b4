#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace substrata {

// Letters are indices into the alphabet. A Word stores one letter index per
// char, so std::string ordering is the lexicographic order induced by the
// alphabet order.
using Letter = int;
using Word = std::string;
using AbelianVector = std::vector<long long>;

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class EnumerationOverflow : public Error {
 public:
  explicit EnumerationOverflow(std::size_t budget);
  std::size_t budget() const { return budget_; }

 private:
  std::size_t budget_;
};

class PreconditionError : public Error {
 public:
  using Error::Error;
};

// Set-size budget for explicit enumeration; SUBSTRATA_MAX_ENUM overrides the
// default of 10^7.
std::size_t enumeration_budget();

class Alphabet {
 public:
  Alphabet() = default;
  explicit Alphabet(std::vector<std::string> symbols);

  std::size_t size() const { return symbols_.size(); }
  const std::string& symbol(Letter a) const { return symbols_.at(a); }
  const std::vector<std::string>& symbols() const { return symbols_; }
  std::optional<Letter> index(std::string_view symbol) const;

  // Greedy longest-match tokenisation; throws Error on unknown symbols.
  Word parse(std::string_view text) const;
  Word parse(const std::vector<std::string>& symbols) const;
  std::string format(const Word& w) const;
  bool contains(const Word& w) const;

 private:
  std::vector<std::string> symbols_;
  std::unordered_map<std::string, Letter> lookup_;
  std::size_t max_symbol_length_ = 0;
};

AbelianVector abelianise(const Word& w, std::size_t alphabet_size);

// Image index per letter.
using Marginal = std::vector<int>;

class RandomSubstitution {
 public:
  RandomSubstitution() = default;
  RandomSubstitution(Alphabet alphabet, std::vector<std::vector<Word>> rules);

  // Convenience constructor over formatted words.
  static RandomSubstitution parse(const std::vector<std::string>& letters,
                                  const std::vector<std::vector<std::string>>& rules);

  const Alphabet& alphabet() const { return alphabet_; }
  std::size_t size() const { return alphabet_.size(); }
  const std::vector<Word>& images(Letter a) const { return rules_.at(a); }
  const std::vector<std::vector<Word>>& rules() const { return rules_; }
  int image_index(Letter a, const Word& v) const;  // -1 if absent

  std::size_t min_image_length() const;
  std::size_t max_image_length() const;
  bool is_deterministic() const;
  // Common image length if every image of every letter has it.
  std::optional<std::size_t> constant_length() const;

  std::vector<Word> apply(const Word& w) const;
  std::vector<Word> apply(const std::vector<Word>& words) const;
  std::vector<Word> iterate(Letter a, int n) const;
  std::vector<Word> iterate_word(const Word& w, int n) const;

  std::string format(const Word& w) const { return alphabet_.format(w); }
  Word word(std::string_view text) const { return alphabet_.parse(text); }

 private:
  Alphabet alphabet_;
  std::vector<std::vector<Word>> rules_;
};

std::size_t marginal_count(const RandomSubstitution& s);
std::vector<Marginal> marginals(const RandomSubstitution& s);
Word apply_marginal(const RandomSubstitution& s, const Marginal& m, const Word& w);

// Legal words of length <= max_len, sorted by (length, lexicographic).
// Computed as the closure of the letters under "subword of an image of a
// legal word"; throws Error when the closure exceeds the enumeration budget.
std::vector<Word> language(const RandomSubstitution& s, std::size_t max_len);

// Conservative alternative: subwords of ϑ^n(a) for every letter a and
// n <= levels.
std::vector<Word> language_by_levels(const RandomSubstitution& s, std::size_t max_len, int levels);

// Splits v into v_1...v_n with v_i in ϑ(u_i). Throws Error("not a
// realisation") if impossible and asserts uniqueness.
std::vector<Word> unique_decomposition(const RandomSubstitution& s, const Word& u, const Word& v);

// All cuts of v into images of u (used where realisation paths may not be
// unique).
std::vector<std::vector<Word>> decompositions(const RandomSubstitution& s, const Word& u,
                                              const Word& v);

}  // namespace substrata
