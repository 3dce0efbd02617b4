#include <cmath>
#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "substrata/counting.hpp"
#include "substrata/derivation.hpp"
#include "substrata/ergodicity.hpp"
#include "substrata/recognisability.hpp"
#include "substrata/spec_io.hpp"
#include "substrata/spectral.hpp"

using namespace substrata;

TEST_CASE("three counting routes agree with brute force where reduced DSC holds") {
  std::mt19937_64 rng(11);
  int tested = 0;
  for (int trial = 0; trial < 120 && tested < 25; ++trial) {
    const auto s = oracle::random_substitution(rng, 2 + trial % 2, 2, 3);
    if (!check_reduced_dsc(s, 3).passed) continue;
    ++tested;
    for (std::size_t a = 0; a < s.size(); ++a)
      for (int n = 1; n <= 3; ++n) {
        const Word root(1, static_cast<char>(a));
        const mpz_class want = oracle::images(s.rules(), root, n).size();
        CHECK(count(s, static_cast<Letter>(a), n, CountMode::kRecurse) == want);
        CHECK(count(s, static_cast<Letter>(a), n, CountMode::kEnumerate) == want);
        CHECK(count(s, static_cast<Letter>(a), n, CountMode::kAutomaton) == want);
      }
  }
  CHECK(tested >= 10);
}

TEST_CASE("automaton counts without any disjointness assumption") {
  const auto s = builtin_spec("random_fibonacci").s;
  for (int n = 1; n <= 5; ++n) {
    const mpz_class want = oracle::images(s.rules(), Word(1, 0), n).size();
    CHECK(count_distinct(s, Word(1, 0), n) == want);
    CHECK(count(s, 0, n, CountMode::kEnumerate) == want);
  }
  CHECK_THROWS_AS(count(s, 0, 3, CountMode::kRecurse), PreconditionError);
  CHECK(derives(s, Word(1, 0), 2, s.word("aba")));
  CHECK_FALSE(derives(s, Word(1, 0), 2, s.word("bab")));
}

TEST_CASE("count table switches to logs past the digit budget") {
  const auto s = builtin_spec("counterexample").s;
  CountTable big(s, 5);
  CountTable small(s, 5, {.digit_budget = 10, .dsc_level = 3});
  CHECK(big.method() == CountMode::kRecurse);
  // #ϑ^4(a0) has 21 digits, so level 5 is the first log-only level.
  CHECK(small.switch_level() == 5);
  CHECK_FALSE(small.has_exact(5));
  for (int n = 0; n <= 5; ++n)
    for (Letter a = 0; a < 5; ++a) {
      REQUIRE(big.has_exact(n));
      CHECK(small.log_count(a, n) == doctest::Approx(log_of(big.exact(a, n))).epsilon(1e-12));
    }
  // log of a product of counts is the sum of logs.
  const Word u = s.word("a0 c");
  CHECK(big.log_word_count(u, 3) == doctest::Approx(log_of(big.exact(0, 3)) + log_of(big.exact(4, 3))));
  CHECK(log_of(mpz_class(1) << 5000) == doctest::Approx(5000 * std::log(2.0)));
}

TEST_CASE("non-DSC examples fall back to enumeration") {
  const auto s = builtin_spec("random_fibonacci").s;
  CountTable t(s, 4);
  CHECK(t.method() == CountMode::kEnumerate);
  CHECK(t.exact(0, 4) == mpz_class(oracle::images(s.rules(), Word(1, 0), 4).size()));
}

TEST_CASE("entropy brackets contain the limit and tighten") {
  const auto s = builtin_spec("fibonacci_ac").s;
  const auto sd = substitution_spectrum(s);
  const double limit = std::log(2.0) / std::pow((1 + std::sqrt(5.0)) / 2, 2);
  const auto rep = geometric_inflation_entropy(s, 0, 20, sd);
  CHECK(rep.levels.size() == 20);
  for (const auto& ap : rep.levels) {
    CHECK(ap.lower <= limit + 1e-12);
    CHECK(ap.upper >= limit - 1e-12);
  }
  CHECK(rep.certified_lower <= limit + 1e-12);
  CHECK(rep.certified_upper >= limit - 1e-12);
  CHECK(rep.levels.back().upper - rep.levels.back().lower < rep.levels[5].upper - rep.levels[5].lower);
  CHECK(hmk_upper_bound(s, CountTable(s, 10), sd, 10, 1) >= limit);
}

TEST_CASE("hmk maximises over level-k inflation words") {
  const auto s = builtin_spec("abb").s;
  const auto spec = builtin_spec("abb");
  const auto sd = substitution_spectrum(s, spec.lengths);
  CountTable t(s, 8);
  // Brute force over u ∈ ϑ(a) ∪ ϑ(b) with L(ϑ^m(u)) = λ^m L(u).
  double best = 0;
  for (Letter a = 0; a < 2; ++a)
    for (const auto& u : s.iterate(a, 1)) {
      double lc = 0, len = 0;
      for (char c : u) {
        lc += log_of(t.exact(static_cast<unsigned char>(c), 4));
        len += sd.L[static_cast<unsigned char>(c)];
      }
      best = std::max(best, lc / (std::pow(sd.lambda, 4) * len));
    }
  CHECK(hmk(s, t, sd, 4, 1) == doctest::Approx(best).epsilon(1e-12));
}

TEST_CASE("patch count from its definition") {
  const auto s = builtin_spec("fibonacci_ac").s;
  const auto L = substitution_spectrum(s).L;
  for (double ell : {1.0, 2.5, 4.0}) {
    std::size_t want = 0;
    for (const auto& w : oracle::language(s.rules(), 8, 7)) {
      double full = 0;
      for (char c : w) full += L[static_cast<unsigned char>(c)];
      const double head = full - L[static_cast<unsigned char>(w.back())];
      want += head < ell && ell <= full;
    }
    CHECK(patch_count(s, L, ell) == want);
  }
}

TEST_CASE("symbolic and geometric entropy bounds") {
  const auto b = symbolic_geometric_bounds(0.5, {{0.5, 0.5}, {0.2, 0.8}}, {1.0, 2.0});
  CHECK(b.min_Leta == doctest::Approx(1.5));
  CHECK(b.max_Leta == doctest::Approx(1.8));
  CHECK(b.lower == doctest::Approx(0.5 / 1.8));
  CHECK(b.upper == doctest::Approx(0.5 / 1.5));
}

TEST_CASE("projective count sequence reproduces r_n") {
  const auto spec = builtin_spec("counterexample");
  CountSequence cs(spec.s, 6);
  CHECK(cs.projective());
  const std::vector<long> r{1, 2, 5, 26, 677, 458330};
  for (int n = 0; n < 6; ++n) {
    REQUIRE(cs.exact(n));
    CHECK(cs.exact_vector(n)[0] / cs.exact_vector(n)[4] == r[n]);
  }
  const auto tr = productivity_ratio_trace(cs, spec.classes, spec.recursion);
  CHECK(tr.classes_ok);
  REQUIRE(tr.recursion);
  CHECK(tr.recursion->validated);
  const auto wrong = productivity_ratio_trace(cs, spec.classes, Recursion::parse("r[n+1] = r[n]^2"));
  CHECK_FALSE(wrong.recursion->validated);
  CHECK(wrong.recursion->first_failure == 1);
}

TEST_CASE("recursion parser") {
  const auto r = Recursion::parse("r[n+1] = 1 + 1/r[n]");
  CHECK(r.next(2) == mpq_class(3, 2));
  CHECK_FALSE(r.polynomial());
  const auto p = Recursion::parse("r[n+1] = (r[n] + 1)^2 - 2*r[n]");
  CHECK(p.next(3) == 10);
  REQUIRE(p.polynomial());
  CHECK(*p.polynomial() == std::vector<mpq_class>{1, 0, 1});
  CHECK_THROWS_AS(Recursion::parse("r[n+1] = "), Error);
  CHECK_THROWS_AS(Recursion::parse("r[n+1] = r[n] +* 2"), Error);
  CHECK_THROWS_AS(Recursion::parse("r[n+1] = 1/(r[n] - r[n])").next(1), Error);
}
