#include <cmath>
#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "substrata/counting.hpp"
#include "substrata/measures.hpp"
#include "substrata/spec_io.hpp"
#include "substrata/spectral.hpp"

using namespace substrata;

namespace {
const double kTau = (1 + std::sqrt(5.0)) / 2;
}

TEST_CASE("periodic measures count cyclic occurrences") {
  const Word w{0, 1, 0, 0, 1};
  const auto m = periodic_measure<mpq_class>({{w, 1}}, 2, 3);
  for (const auto& [x, p] : m.values) CHECK(p == mpq_class(oracle::cyclic_occurrences(w, x), 5));
  CHECK(consistency_residual(m) == 0);
}

TEST_CASE("periodic measures are Kolmogorov consistent") {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 50; ++trial) {
    std::map<Word, mpq_class> dist;
    const int k = 1 + static_cast<int>(rng() % 4);
    for (int i = 0; i < k; ++i) {
      Word w;
      const int len = 1 + static_cast<int>(rng() % 7);
      for (int j = 0; j < len; ++j) w += static_cast<char>(rng() % 3);
      dist[w] += mpq_class(1 + static_cast<long>(rng() % 5), 7);
    }
    const auto m = periodic_measure(dist, 3, 4);
    CHECK(consistency_residual(m) == 0);
    mpq_class total = 0;
    for (char a = 0; a < 3; ++a) total += m(Word(1, a));
    CHECK(total == 1);
  }
}

TEST_CASE("frequency measure of the Fibonacci substitution") {
  const auto s = RandomSubstitution::parse({"a", "b"}, {{"ab"}, {"a"}});
  const auto mu = frequency_measure(s, uniform_choice<double>(s), 2);
  CHECK(mu(s.word("a")) == doctest::Approx(1 / kTau).epsilon(1e-12));
  CHECK(mu(s.word("b")) == doctest::Approx(1 / (kTau * kTau)).epsilon(1e-12));
  CHECK(mu(s.word("aa")) == doctest::Approx(1 / (kTau * kTau * kTau)).epsilon(1e-12));
  CHECK(mu(s.word("ab")) == doctest::Approx(1 / (kTau * kTau)).epsilon(1e-12));
  CHECK(mu(s.word("bb")) == 0);
  CHECK(consistency_residual(mu) < 1e-14);
}

TEST_CASE("frequency approximants approach the frequency measure") {
  const auto s = builtin_spec("random_fibonacci").s;
  const auto U = uniform_choice<mpq_class>(s);
  const auto limit = frequency_measure(s, to_double(U), 3);
  double prev = 1;
  for (int m = 2; m <= 6; m += 2) {
    const auto ap = to_double(frequency_approximant(s, U, 0, m, 3));
    const double d = max_distance(ap, limit, 3);
    CHECK(d < prev);
    prev = d;
  }
  CHECK(prev < 0.05);
}

TEST_CASE("transfer respects the interval proportion identity on random choices") {
  std::mt19937_64 rng(41);
  const auto s = builtin_spec("counterexample").s;
  const std::vector<mpq_class> L(5, 1);
  for (int trial = 0; trial < 5; ++trial) {
    const auto P = oracle::random_choice<mpq_class>(s, rng);
    const auto mu = frequency_approximant(s, uniform_choice<mpq_class>(s), 4, 2, required_input_level(P, 3));
    const auto Q = geometric_matrix(substitution_matrix(P), L, mpq_class(4));
    CHECK(proportion_vector(transfer(P, mu, 3).letter_frequencies(), L) ==
          Q * proportion_vector(mu.letter_frequencies(), L));
  }
}

TEST_CASE("transfer of a composition is the composition of transfers") {
  std::mt19937_64 rng(43);
  const auto s = builtin_spec("random_fibonacci").s;
  for (int trial = 0; trial < 5; ++trial) {
    const auto P = oracle::random_choice<mpq_class>(s, rng), Pp = oracle::random_choice<mpq_class>(s, rng);
    const std::size_t need = std::max(required_input_level(compose(P, Pp), 2),
                                      required_input_level(Pp, required_input_level(P, 2)));
    const auto mu = frequency_approximant(s, uniform_choice<mpq_class>(s), 0, 5, need);
    const auto c = transfer_composition_check(P, Pp, mu, 2);
    CHECK(c.exact_zero);
    CHECK(c.max_discrepancy == 0);
  }
}

TEST_CASE("transfer checks its input level and agrees across backends") {
  const auto s = builtin_spec("fibonacci_ac").s;
  const auto P = uniform_choice<mpq_class>(s);
  const std::size_t need = required_input_level(P, 3);
  const auto mu = frequency_approximant(s, P, 0, 4, need);
  CHECK_THROWS_AS(transfer(P, mu.truncate(need - 1), 3), PreconditionError);
  const auto a = transfer(P, mu, 3, Backend::kSerial), b = transfer(P, mu, 3, Backend::kOpenMP);
  CHECK(a.values == b.values);
  CHECK(consistency_residual(a) == 0);
  CHECK(lambda_mu(P, mu) > 1);
}

TEST_CASE("the frequency measure is a fixed point of its transfer operator") {
  const auto spec = builtin_spec("random_fibonacci");
  const auto P = to_double(make_choice<mpq_class>(spec.s, *spec.probabilities));
  const auto mu = frequency_measure(spec.s, P, required_input_level(P, 3));
  CHECK(max_distance(transfer(P, mu, 3), mu, 3) < 1e-12);
}

TEST_CASE("Monte Carlo is reproducible and agrees with the exact approximant") {
  const auto s = builtin_spec("random_fibonacci").s;
  const auto P = uniform_choice<mpq_class>(s);
  const auto a = monte_carlo_frequencies(s, to_double(P), 0, 4, 2, 20'000, 99, Backend::kSerial);
  const auto b = monte_carlo_frequencies(s, to_double(P), 0, 4, 2, 20'000, 99, Backend::kOpenMP);
  CHECK(a.mean.values == b.mean.values);
  CHECK(a.stderr_ == b.stderr_);
  const auto c = monte_carlo_frequencies(s, to_double(P), 0, 4, 2, 20'000, 100);
  CHECK(c.mean.values != a.mean.values);
  const auto exact = to_double(frequency_approximant(s, P, 0, 4, 2));
  for (const auto& [w, x] : a.mean.values) {
    const double se = a.stderr_.at(w);
    if (se > 0) CHECK(std::abs(x - exact(w)) <= 5 * se);
  }
  CHECK(consistency_residual(a.mean) < 1e-12);
}

TEST_CASE("entropy sandwich and geometric entropy") {
  const auto s = builtin_spec("random_fibonacci").s;
  const auto es = entropy_sandwich(s, uniform_choice<double>(s), 4);
  CHECK(es.lower <= es.upper);
  CHECK(es.lambda == doctest::Approx(kTau).epsilon(1e-10));
  CHECK(geometric_entropy(1.0, {0.5, 0.5}, {1.0, 3.0}) == doctest::Approx(0.5));
  CHECK_THROWS_AS(geometric_entropy(1.0, {0.5}, {1.0, 3.0}), PreconditionError);
}

TEST_CASE("uniformity approximants of a compatible DSC example converge to the uniform frequency measure") {
  // a -> {abb, bab}, b -> a: compatible, so every productivity choice is uniform.
  const auto s = RandomSubstitution::parse({"a", "b"}, {{"abb", "bab"}, {"a"}});
  CountSequence cs(s, 10);
  const std::size_t K = 2;
  const auto limit = frequency_measure(s, uniform_choice<double>(s), K);
  double prev = 1;
  for (int n = 1; n <= 5; ++n) {
    const std::size_t need = uniformity_seed_level(s, n, K);
    const auto seed = to_double(periodic_measure<mpq_class>({{s.word("ab"), 1}}, 2, need));
    const auto ua = uniformity_approximant(s, cs, n, seed, K);
    const double d = max_distance(ua.measure, limit, K);
    CHECK(d <= prev + 1e-15);
    prev = d;
    if (n > 1) CHECK(ua.change.has_value());
  }
  CHECK(prev < 1e-3);
}
