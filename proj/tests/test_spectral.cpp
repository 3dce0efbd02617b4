#include <cmath>

#include "doctest.h"
#include "substrata/spec_io.hpp"
#include "substrata/spectral.hpp"

using namespace substrata;

namespace {
const double kTau = (1 + std::sqrt(5.0)) / 2;
}

TEST_CASE("Perron-Frobenius data of a 2x2 matrix against the closed form") {
  DMatrix M(2, 2);
  M(0, 0) = 3, M(0, 1) = 1, M(1, 0) = 2, M(1, 1) = 4;
  const double tr = 7, det = 10;
  const double lambda = (tr + std::sqrt(tr * tr - 4 * det)) / 2;
  const auto sd = pf_data(M);
  CHECK(sd.lambda == doctest::Approx(lambda).epsilon(1e-13));
  CHECK(sd.R[0] + sd.R[1] == doctest::Approx(1).epsilon(1e-14));
  CHECK(sd.LR() == doctest::Approx(1).epsilon(1e-13));
  // Eigenvector from the first row: (3 - λ) x + y = 0.
  CHECK(sd.R[1] / sd.R[0] == doctest::Approx(lambda - 3).epsilon(1e-12));
  CHECK(sd.residual < 1e-12);
}

TEST_CASE("non-primitive matrices are rejected") {
  DMatrix M(2, 2);
  M(0, 0) = 1, M(1, 1) = 1;
  CHECK_THROWS_AS(pf_data(M), PreconditionError);
  CHECK(primitivity_power(M) == 0);
}

TEST_CASE("primitivity power meets the Wielandt bound") {
  // Wielandt matrix: cycle 0->1->...->d-1->0 plus d-1 -> 1.
  for (std::size_t d = 2; d <= 6; ++d) {
    DMatrix W(d, d);
    for (std::size_t i = 0; i + 1 < d; ++i) W(i + 1, i) = 1;
    W(0, d - 1) = 1;
    W(1, d - 1) = 1;
    CHECK(primitivity_power(W) == static_cast<int>((d - 1) * (d - 1) + 1));
  }
}

TEST_CASE("geometry of the bundled examples") {
  const auto fib = classify_geometry(builtin_spec("fibonacci_ac").s);
  CHECK(fib.geometrically_compatible);
  CHECK_FALSE(fib.constant_length);
  CHECK(fib.lambda == doctest::Approx(kTau).epsilon(1e-12));

  const auto ce = classify_geometry(builtin_spec("counterexample").s);
  CHECK(ce.constant_length);
  CHECK(ce.length == 4);
  CHECK_FALSE(ce.compatible);
  CHECK(ce.geometrically_compatible);
  REQUIRE(ce.lambda_exact);
  CHECK(*ce.lambda_exact == 4);

  const auto abb = classify_geometry(builtin_spec("abb").s);
  CHECK(abb.geometrically_compatible);
  REQUIRE(abb.L_exact);
  CHECK((*abb.L_exact)[0] / (*abb.L_exact)[1] == 2);

  const auto rf = classify_geometry(builtin_spec("random_fibonacci").s);
  CHECK(rf.compatible);

  // Marginals a->aa, b->b and a->a, b->bb share no left eigenvector.
  const auto bad = classify_geometry(RandomSubstitution::parse({"a", "b"}, {{"aab", "ab"}, {"abb", "a"}}));
  CHECK_FALSE(bad.geometrically_compatible);
  CHECK(bad.violating.has_value());
}

TEST_CASE("primitivity of substitutions") {
  const auto v = is_primitive(builtin_spec("fibonacci_ac").s);
  CHECK(v.primitive);
  CHECK(v.lambda == doctest::Approx(kTau).epsilon(1e-10));
  CHECK_FALSE(is_primitive(RandomSubstitution::parse({"a", "b"}, {{"a"}, {"ab"}})).primitive);
}

TEST_CASE("spectrum normalisation conventions") {
  const auto fib = substitution_spectrum(builtin_spec("fibonacci_ac").s);
  CHECK(fib.normalisation == Normalisation::kLROne);
  CHECK(fib.LR() == doctest::Approx(1).epsilon(1e-12));
  CHECK(fib.L[0] == doctest::Approx(kTau * kTau / std::sqrt(5.0)).epsilon(1e-10));
  CHECK(fib.L[1] == doctest::Approx(fib.L[0] / kTau).epsilon(1e-10));

  const auto spec = builtin_spec("abb");
  const auto abb = substitution_spectrum(spec.s, spec.lengths);
  CHECK(abb.normalisation == Normalisation::kLUser);
  CHECK(abb.L[0] == 2);
  CHECK(abb.L[1] == 1);
  CHECK_THROWS_AS(substitution_spectrum(spec.s, std::vector<mpq_class>{1, 1}), Error);
}

TEST_CASE("exact eigen helpers") {
  QMatrix M(2, 2);
  M(0, 0) = 2, M(0, 1) = 2, M(1, 0) = 1, M(1, 1) = 3;
  const auto k = integer_eigenvalue(M, 4 + 1e-12);
  REQUIRE(k);
  CHECK(*k == 4);
  QMatrix A = M;
  A(0, 0) -= 4, A(1, 1) -= 4;
  const auto v = kernel_vector(A);
  REQUIRE(v);
  CHECK((*v)[0] == mpq_class(1, 2));
  CHECK((*v)[1] == mpq_class(1, 2));
  CHECK_FALSE(integer_eigenvalue(M, 2.0));
  CHECK_FALSE(integer_eigenvalue(M, 3.9));
}
