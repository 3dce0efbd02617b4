#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "substrata/counting.hpp"
#include "substrata/spec_io.hpp"
#include "substrata/spectral.hpp"
#include "substrata/stochastic.hpp"

using namespace substrata;

TEST_CASE("probability choices validate column sums") {
  const auto s = builtin_spec("random_fibonacci").s;
  const auto U = uniform_choice<mpq_class>(s);
  CHECK(U.weight(0, s.word("ab")) == mpq_class(1, 2));
  CHECK(U.weight(0, s.word("aa")) == 0);
  CHECK_THROWS_AS(make_choice<mpq_class>(s, {{mpq_class(1, 2), mpq_class(1, 3)}, {1}}), Error);
  CHECK_THROWS_AS(make_choice<double>(s, {{1.5, -0.5}, {1.0}}), Error);
  CHECK_NOTHROW(make_choice<double>(s, {{0.25, 0.75}, {1.0}}));
}

TEST_CASE("extend_to_word equals the brute path sum") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 30; ++trial) {
    const auto s = oracle::random_substitution(rng, 2, 3, 2);
    const auto P = oracle::random_choice<mpq_class>(s, rng);
    for (const auto& u : {Word{0, 1}, Word{1, 0, 0}, Word{0, 0, 1, 1}}) {
      mpq_class total = 0;
      for (const auto& v : oracle::images(s.rules(), u, 1)) {
        const mpq_class want = oracle::path_sum(P.rules, u, v);
        CHECK(extend_to_word(P, u, v) == want);
        total += want;
      }
      CHECK(total == 1);
      mpq_class dist_total = 0;
      for (const auto& [v, p] : image_distribution(P, u)) {
        CHECK(p == oracle::path_sum(P.rules, u, v));
        dist_total += p;
      }
      CHECK(dist_total == 1);
    }
  }
}

TEST_CASE("composition is associative and multiplies substitution matrices exactly") {
  std::mt19937_64 rng(17);
  for (const char* name : {"random_fibonacci", "fibonacci_ac", "abb"}) {
    const auto s = builtin_spec(name).s;
    for (int trial = 0; trial < 10; ++trial) {
      const auto A = oracle::random_choice<mpq_class>(s, rng), B = oracle::random_choice<mpq_class>(s, rng),
                 C = oracle::random_choice<mpq_class>(s, rng);
      const auto AB = compose(A, B);
      CHECK(AB.level == 2);
      validate_choice(AB);
      CHECK(substitution_matrix(AB) == substitution_matrix(A) * substitution_matrix(B));
      CHECK(compose(AB, C).rules == compose(A, compose(B, C)).rules);
    }
    const auto U = uniform_choice<mpq_class>(s);
    CHECK(power(U, 3).rules == compose(U, compose(U, U)).rules);
  }
}

TEST_CASE("geometric matrix and Dobrushin coefficient") {
  const auto spec = builtin_spec("abb");
  const auto M = substitution_matrix(uniform_choice<mpq_class>(spec.s));
  const auto Q = geometric_matrix(M, *spec.lengths, mpq_class(2));
  for (const auto& c : column_sums(Q)) CHECK(c == 1);
  CHECK(dobrushin(Q) == oracle::dobrushin(Q));
  CHECK_THROWS_AS(geometric_matrix(M, std::vector<mpq_class>{1, 1}, mpq_class(2)), Error);

  QMatrix rank_one(2, 2);
  rank_one(0, 0) = rank_one(0, 1) = mpq_class(1, 3);
  rank_one(1, 0) = rank_one(1, 1) = mpq_class(2, 3);
  CHECK(dobrushin(rank_one) == 0);
  CHECK(dobrushin(QMatrix::identity(3)) == 1);
}

TEST_CASE("Dobrushin coefficient is submultiplicative") {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t d = 2 + rng() % 4;
    const auto A = oracle::random_stochastic<mpq_class>(rng, d), B = oracle::random_stochastic<mpq_class>(rng, d);
    CHECK(dobrushin(A) == oracle::dobrushin(A));
    CHECK(dobrushin(QMatrix(A * B)) <= dobrushin(A) * dobrushin(B));
  }
}

TEST_CASE("productivity weights are count ratios") {
  const auto s = builtin_spec("ergodic_abc").s;
  CountSequence cs(s, 4);
  for (int n = 0; n <= 2; ++n) {
    const auto P = productivity(s, cs, n, 1);
    validate_choice(P);
    for (Letter a = 0; a < 3; ++a) {
      const mpq_class denom = oracle::images(s.rules(), Word(1, static_cast<char>(a)), n + 1).size();
      for (const auto& [v, p] : P.rules[a])
        CHECK(p == mpq_class(oracle::images(s.rules(), v, n).size()) / denom);
    }
  }
  CHECK_THROWS_AS(productivity(builtin_spec("fibonacci_ac").s, CountSequence(builtin_spec("fibonacci_ac").s, 3), 0, 1),
                  PreconditionError);
}

TEST_CASE("float productivity matches exact weights") {
  const auto s = builtin_spec("counterexample").s;
  CountSequence cs(s, 5);
  const auto E = to_double(productivity(s, cs, 3, 1));
  const auto F = productivity_float(s, cs, 3, 1);
  for (Letter a = 0; a < 5; ++a)
    for (std::size_t i = 0; i < E.rules[a].size(); ++i)
      CHECK(F.rules[a][i].second == doctest::Approx(E.rules[a][i].second).epsilon(1e-14));
}

TEST_CASE("productivity Q sequence is column stochastic") {
  const auto s = builtin_spec("counterexample").s;
  CountSequence cs(s, 8);
  const auto qs = productivity_q_sequence(s, cs, substitution_spectrum(s), 8);
  REQUIRE(qs.q.size() == 8);
  for (std::size_t n = 0; n < 8; ++n) {
    for (double c : column_sums(qs.q[n])) CHECK(c == doctest::Approx(1).epsilon(1e-14));
    REQUIRE(qs.exact[n]);
    for (const auto& c : column_sums(*qs.exact[n])) CHECK(c == 1);
  }
}
