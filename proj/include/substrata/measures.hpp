#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "substrata/core.hpp"
#include "substrata/matrix.hpp"
#include "substrata/spectral.hpp"
#include "substrata/stochastic.hpp"

namespace substrata {

// Masses of the cylinders [v] for 1 <= |v| <= level; absent words have mass 0.
template <class T>
struct CylinderMeasure {
  std::size_t alphabet_size = 0;
  std::size_t level = 0;
  std::map<Word, T> values;

  T operator()(const Word& v) const;
  std::vector<T> letter_frequencies() const;  // R^μ
  // Restriction to words of length <= K.
  CylinderMeasure truncate(std::size_t K) const;
};

using ExactMeasure = CylinderMeasure<mpq_class>;
using FloatMeasure = CylinderMeasure<double>;

FloatMeasure to_double(const ExactMeasure& m);

// Largest violation of Σ_a μ[a] = 1, μ[u] = Σ_b μ[ub] and μ[u] = Σ_b μ[bu].
template <class T>
double consistency_residual(const CylinderMeasure<T>& m);

template <class T>
double max_distance(const CylinderMeasure<T>& a, const CylinderMeasure<T>& b, std::size_t K);

// E[|ω|_v]/E[|ω|] with occurrences counted on the periodic word ω^∞ from
// start positions 0..|ω|-1.
template <class T>
CylinderMeasure<T> periodic_measure(const std::map<Word, T>& dist, std::size_t alphabet_size, std::size_t K);

// Limit frequencies of the K-words: normalised Perron-Frobenius vector of
// the induced K-word substitution matrix of ϑ_P; shorter words by
// marginalisation.
FloatMeasure frequency_measure(const RandomSubstitution& s, const FloatChoice& P, std::size_t K);

// Periodic measure of the exact distribution of ϑ^m_{P^m}(a). Throws
// EnumerationOverflow beyond a support of 10^5 words.
template <class T>
CylinderMeasure<T> frequency_approximant(const RandomSubstitution& s, const ProbabilityChoice<T>& P, Letter a,
                                         int m, std::size_t K);

struct MonteCarloEstimate {
  FloatMeasure mean;
  std::map<Word, double> stderr_;  // delta-method standard errors
  std::uint64_t samples = 0;
  std::uint64_t seed = 0;
  Letter root = 0;
  int level = 0;
};

enum class Backend { kSerial, kOpenMP };

// Ratio estimator of the same quantity as frequency_approximant.
MonteCarloEstimate monte_carlo_frequencies(const RandomSubstitution& s, const FloatChoice& P, Letter a, int m,
                                           std::size_t K, std::uint64_t samples, std::uint64_t seed,
                                           Backend backend = Backend::kOpenMP);

// Input level sufficient for transfer to output level K: every output
// cylinder of length K is covered by the images of at most that many letters.
template <class T>
std::size_t required_input_level(const ProbabilityChoice<T>& P, std::size_t K);

template <class T>
T lambda_mu(const ProbabilityChoice<T>& P, const CylinderMeasure<T>& mu);

// T_P(μ) on cylinders of length <= K.
template <class T>
CylinderMeasure<T> transfer(const ProbabilityChoice<T>& P, const CylinderMeasure<T>& mu, std::size_t K,
                            Backend backend = Backend::kOpenMP);

struct CompositionCheck {
  std::size_t K = 0;
  double max_discrepancy = 0;
  bool exact_zero = false;
};

// T_{PP'}(μ) against T_P(T_{P'}(μ)).
template <class T>
CompositionCheck transfer_composition_check(const ProbabilityChoice<T>& P, const ProbabilityChoice<T>& Pp,
                                            const CylinderMeasure<T>& mu, std::size_t K);

// π_a = L_a R_a / (L·R).
template <class T>
std::vector<T> proportion_vector(const std::vector<T>& R, const std::vector<T>& L);

struct EntropySandwich {
  int m = 0;
  std::vector<double> H;  // Shannon entropy of ϑ^m_{P^m}(a), natural log
  std::vector<double> R;  // right PF vector of M(P), sum one
  double lambda = 0;
  double lower = 0, upper = 0;
};

EntropySandwich entropy_sandwich(const RandomSubstitution& s, const FloatChoice& P, int m);

// Abramov quotient h / (L·R).
double geometric_entropy(double h, const std::vector<double>& R, const std::vector<double>& L);

template <class T>
struct UniformityApproximant {
  int n = 0;
  std::size_t K = 0;
  CylinderMeasure<T> measure;
  std::optional<double> change;  // distance to the level n-1 approximant
};

// Levels of the seed needed by uniformity_approximant(n, K).
std::size_t uniformity_seed_level(const RandomSubstitution& s, int n, std::size_t K);

// T_{P^{0,1}} ∘ ··· ∘ T_{P^{n-1,1}}(seed) on cylinders <= K. The seed must
// carry uniformity_seed_level(s, n, K) levels.
UniformityApproximant<mpq_class> uniformity_approximant(const RandomSubstitution& s, const CountSequence& cs, int n,
                                                        const ExactMeasure& seed, std::size_t K);
UniformityApproximant<double> uniformity_approximant(const RandomSubstitution& s, const CountSequence& cs, int n,
                                                     const FloatMeasure& seed, std::size_t K);

}  // namespace substrata
