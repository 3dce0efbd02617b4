#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "substrata/kernels.hpp"
#include "substrata/spec_io.hpp"

using namespace substrata;
using namespace substrata::kernels;

TEST_CASE("splitmix64 reference values") {
  CHECK(splitmix64(0) == 0xE220A8397B1DCDAFULL);
  CHECK(splitmix64(1) != splitmix64(2));
}

TEST_CASE("cylinder index is a bijection onto words of length 1..K") {
  CylinderIndex idx(3, 3);
  CHECK(idx.size() == 3 + 9 + 27);
  std::set<Word> seen;
  for (std::size_t c = 0; c < idx.size(); ++c) {
    const Word w = idx.word(c);
    CHECK(idx.code(w.data(), w.size()) == c);
    seen.insert(w);
  }
  CHECK(seen.size() == idx.size());
}

TEST_CASE("serial and OpenMP samplers return identical sums") {
  for (const char* name : {"random_fibonacci", "ergodic_abc", "counterexample"}) {
    const auto s = builtin_spec(name).s;
    SamplerInput in;
    in.s = &s;
    for (std::size_t a = 0; a < s.size(); ++a)
      in.weights.emplace_back(s.images(static_cast<Letter>(a)).size(), 1.0 / s.images(static_cast<Letter>(a)).size());
    in.level = 2;
    in.K = 2;
    for (std::uint64_t seed : {1ULL, 2ULL, 77ULL}) {
      in.seed = seed;
      in.samples = 3 * kChunk + 17;
      const auto x = serial::sample_frequencies(in), y = omp::sample_frequencies(in);
      CHECK(x.n == in.samples);
      CHECK(x.n == y.n);
      CHECK(x.x == y.x);
      CHECK(x.xx == y.xx);
      CHECK(x.y == y.y);
      CHECK(x.yy == y.yy);
      CHECK(x.xy == y.xy);
    }
  }
}

TEST_CASE("sample sums are consistent with word lengths") {
  const auto s = builtin_spec("random_fibonacci").s;
  SamplerInput in;
  in.s = &s;
  in.weights = {{0.5, 0.5}, {1.0}};
  in.level = 3;
  in.K = 1;
  in.samples = 1000;
  const auto f = serial::sample_frequencies(in);
  // Every position starts exactly one letter occurrence.
  CHECK(f.y[0] + f.y[1] == f.x);
  // Level 3 words of the random Fibonacci substitution have length 5.
  CHECK(f.x == 5 * in.samples);
}

TEST_CASE("serial and OpenMP transfer columns agree") {
  std::mt19937_64 rng(8);
  const auto s = builtin_spec("ergodic_abc").s;
  const auto P = oracle::random_choice<mpq_class>(s, rng);
  std::vector<Word> parents;
  for (const auto& w : language(s, 3))
    if (w.size() == 3) parents.push_back(w);
  CHECK(serial::transfer_columns(P, parents, 3) == omp::transfer_columns(P, parents, 3));
  const auto Pf = to_double(P);
  CHECK(serial::transfer_columns(Pf, parents, 3) == omp::transfer_columns(Pf, parents, 3));
}
