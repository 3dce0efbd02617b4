#pragma once

#include <optional>
#include <string>
#include <vector>

#include "substrata/core.hpp"
#include "substrata/matrix.hpp"

namespace substrata {

// M_ab = |θ(b)|_a.
QMatrix marginal_matrix(const RandomSubstitution& s, const Marginal& m);
// Expected substitution matrix for the uniform probability choice.
QMatrix uniform_matrix(const RandomSubstitution& s);

enum class Normalisation {
  kLROne,    // ‖R‖₁ = 1 and L·R = 1 (L·R independent of the probability choice)
  kLUser,    // ‖R‖₁ = 1 and L as declared by the user
  kLSumOne,  // ‖R‖₁ = 1 and ‖L‖₁ = 1 (L·R depends on the probability choice)
};

std::string to_string(Normalisation n);

struct SpectralData {
  double lambda = 0;
  std::vector<double> L, R;
  Normalisation normalisation = Normalisation::kLROne;
  int iterations = 0;
  double residual = 0;  // max of ‖MR−λR‖∞, ‖LM−λL‖∞
  std::optional<mpq_class> lambda_exact;
  std::optional<std::vector<mpq_class>> L_exact, R_exact;

  double LR() const;
};

// Power iteration; ‖R‖₁ = 1 and L·R = 1. Throws PreconditionError if M is
// not primitive, Error on exhausting the iteration budget.
SpectralData pf_data(const DMatrix& M, int budget = 100000, double tol = 1e-14);

// Smallest p <= (d-1)^2+1 with M^p > 0 (support only), or 0.
int primitivity_power(const DMatrix& M);

struct PrimitivityVerdict {
  bool primitive = false;
  int power = 0;
  double lambda = 0;
};

PrimitivityVerdict is_primitive(const RandomSubstitution& s);

struct GeometryClass {
  bool constant_length = false;
  std::size_t length = 0;
  bool compatible = false;
  bool geometrically_compatible = false;
  bool exact = false;  // verified in rational arithmetic
  double lambda = 0;
  std::vector<double> L;
  std::optional<mpq_class> lambda_exact;
  std::optional<std::vector<mpq_class>> L_exact;
  std::optional<Marginal> violating;
  double max_relative_residual = 0;
};

GeometryClass classify_geometry(const RandomSubstitution& s, double tol = 1e-10);

// PF data of the uniform M(P) with the L normalisation conventions above. A
// declared L is validated against the computed direction and then used as
// given.
SpectralData substitution_spectrum(const RandomSubstitution& s,
                                   const std::optional<std::vector<mpq_class>>& declared_L = {},
                                   double tol = 1e-10);

// Integer eigenvalue k of the rational matrix M near approx, if det(M-kI) = 0.
std::optional<mpq_class> integer_eigenvalue(const QMatrix& M, double approx);
// Basis vector of a one-dimensional kernel, scaled to be positive with
// ‖v‖₁ = 1; nullopt if the kernel is not one-dimensional.
std::optional<std::vector<mpq_class>> kernel_vector(QMatrix A);

}  // namespace substrata
