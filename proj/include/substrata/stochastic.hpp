#pragma once

#include <gmpxx.h>

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "substrata/core.hpp"
#include "substrata/counting.hpp"
#include "substrata/matrix.hpp"
#include "substrata/spectral.hpp"

namespace substrata {

// Column-stochastic weights on the level-`level` inflation words: rules[a]
// lists (v, P_{v,a}) for v ∈ ϑ^level(a), sorted by v.
template <class T>
struct ProbabilityChoice {
  int level = 1;
  std::vector<std::vector<std::pair<Word, T>>> rules;

  std::size_t size() const { return rules.size(); }
  T weight(Letter a, const Word& v) const;
};

using ExactChoice = ProbabilityChoice<mpq_class>;
using FloatChoice = ProbabilityChoice<double>;

template <class T>
ProbabilityChoice<T> uniform_choice(const RandomSubstitution& s);

// weights[a][i] belongs to s.images(a)[i]. Throws Error unless column
// stochastic (exact for rationals, 1e-12 for doubles) and nonnegative.
template <class T>
ProbabilityChoice<T> make_choice(const RandomSubstitution& s, const std::vector<std::vector<T>>& weights);

template <class T>
void validate_choice(const ProbabilityChoice<T>& P);

FloatChoice to_double(const ExactChoice& P);

// P[ϑ_P(u) = v], summed over realisation paths (a single product when the
// cut is unique).
template <class T>
T extend_to_word(const ProbabilityChoice<T>& P, const Word& u, const Word& v);

// Distribution of ϑ_P(u); zero-weight images are skipped.
template <class T>
std::map<Word, T> image_distribution(const ProbabilityChoice<T>& P, const Word& u);

// (PP')_{w,a} = Σ_v P_{w,v} P'_{v,a}: P' acts first.
template <class T>
ProbabilityChoice<T> compose(const ProbabilityChoice<T>& P, const ProbabilityChoice<T>& Pp);

template <class T>
ProbabilityChoice<T> power(const ProbabilityChoice<T>& P, int m);

// M_ab = E|ϑ_P(b)|_a.
template <class T>
Matrix<T> substitution_matrix(const ProbabilityChoice<T>& P);

// Q_ab = L_a M_ab / (λ L_b); throws Error if Q is not column stochastic.
template <class T>
Matrix<T> geometric_matrix(const Matrix<T>& M, const std::vector<T>& L, const T& lambda);

// max over column pairs of the variation distance.
template <class T>
T dobrushin(const Matrix<T>& Q);

// P^{n,m}_{v,a} = #ϑ^n(v)/#ϑ^{n+m}(a). Requires the strict disjoint set
// condition (checked through the count sequence) and exact counts at level n.
ExactChoice productivity(const RandomSubstitution& s, const CountSequence& cs, int n, int m);
FloatChoice productivity_float(const RandomSubstitution& s, const CountSequence& cs, int n, int m);

// Q(P^{n,1}) for n = 0..horizon-1; exact entries while counts and the
// spectral data are rational.
struct QSequence {
  std::vector<DMatrix> q;
  std::vector<std::optional<QMatrix>> exact;
};

QSequence productivity_q_sequence(const RandomSubstitution& s, const CountSequence& cs,
                                  const SpectralData& sd, int horizon);

}  // namespace substrata
