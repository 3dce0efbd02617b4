#include <cstdlib>
#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "substrata/core.hpp"
#include "substrata/spec_io.hpp"

using namespace substrata;

TEST_CASE("alphabet tokenises greedily") {
  Alphabet A({"a", "a0", "a1", "c"});
  CHECK(A.parse("a0a1ca") == Word{1, 2, 3, 0});
  CHECK(A.parse("a0 a a1") == Word{1, 0, 2});
  CHECK(A.format(Word{1, 0, 3}) == "a0ac");
  CHECK_THROWS_AS(A.parse("ab"), Error);
  CHECK_THROWS_AS(Alphabet({"a", "a"}), Error);
}

TEST_CASE("images are sorted and deduplicated") {
  auto s = RandomSubstitution::parse({"a", "b"}, {{"ba", "ab", "ab"}, {"a"}});
  REQUIRE(s.images(0).size() == 2);
  CHECK(s.format(s.images(0)[0]) == "ab");
  CHECK(s.image_index(0, s.word("ba")) == 1);
  CHECK(s.image_index(0, s.word("aa")) == -1);
  CHECK(s.min_image_length() == 1);
  CHECK(s.max_image_length() == 2);
  CHECK_FALSE(s.constant_length());
  CHECK(marginal_count(s) == 2);
}

TEST_CASE("iterate agrees with brute force on random substitutions") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 40; ++trial) {
    const auto s = oracle::random_substitution(rng, 2 + trial % 2, 3, 2);
    for (std::size_t a = 0; a < s.size(); ++a)
      for (int n = 0; n <= 3; ++n) {
        const auto got = s.iterate(static_cast<Letter>(a), n);
        const auto want = oracle::images(s.rules(), Word(1, static_cast<char>(a)), n);
        CHECK(std::set<Word>(got.begin(), got.end()) == want);
        CHECK(got.size() == want.size());
      }
  }
}

TEST_CASE("language closure matches subwords of inflation words") {
  // Levels (and lengths) low enough for the brute-force oracle yet high
  // enough to reach every legal word.
  struct Case {
    const char* name;
    int levels;
    std::size_t len;
  };
  for (auto [name, levels, len] : {Case{"fibonacci_ac", 7, 6}, Case{"random_fibonacci", 6, 6}, Case{"abb", 3, 6},
                                   Case{"ergodic_abc", 3, 5}}) {
    const auto s = builtin_spec(name).s;
    const auto got = language(s, len);
    const auto want = oracle::language(s.rules(), len, levels);
    CHECK_MESSAGE(std::set<Word>(got.begin(), got.end()) == want, std::string(name));
    CHECK(language_by_levels(s, len, levels) == got);
    for (std::size_t i = 1; i < got.size(); ++i)
      CHECK((got[i - 1].size() < got[i].size() || (got[i - 1].size() == got[i].size() && got[i - 1] < got[i])));
  }
}

TEST_CASE("enumeration budget is honoured and overridable") {
  const auto s = builtin_spec("random_fibonacci").s;
  setenv("SUBSTRATA_MAX_ENUM", "10", 1);
  CHECK(enumeration_budget() == 10);
  CHECK_THROWS_AS(s.iterate(0, 6), EnumerationOverflow);
  unsetenv("SUBSTRATA_MAX_ENUM");
  CHECK(enumeration_budget() == 10'000'000);
  CHECK_NOTHROW(s.iterate(0, 6));
}

TEST_CASE("marginals and decompositions") {
  const auto s = builtin_spec("random_fibonacci").s;
  const auto ms = marginals(s);
  CHECK(ms.size() == 2);
  std::set<Word> seen;
  for (const auto& m : ms) seen.insert(apply_marginal(s, m, s.word("aab")));
  CHECK(seen == std::set<Word>{s.word("ababa"), s.word("babaa")});

  const auto pieces = unique_decomposition(s, s.word("ab"), s.word("baa"));
  CHECK(pieces == std::vector<Word>{s.word("ba"), s.word("a")});
  CHECK_THROWS_AS(unique_decomposition(s, s.word("ab"), s.word("bb")), Error);
  CHECK(decompositions(s, s.word("aa"), s.word("abba")).size() == 1);
  CHECK(decompositions(s, s.word("aa"), s.word("abab")).size() == 1);
}

TEST_CASE("abelianisation counts letters") {
  CHECK(abelianise(Word{0, 2, 2, 1, 2}, 3) == AbelianVector{1, 1, 3});
}
