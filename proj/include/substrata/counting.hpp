#pragma once

#include <gmpxx.h>

#include <optional>
#include <string>
#include <vector>

#include "substrata/core.hpp"
#include "substrata/recognisability.hpp"
#include "substrata/spectral.hpp"

namespace substrata {

enum class CountMode {
  kEnumerate,  // explicit set enumeration under the enumeration budget
  kRecurse,    // Σ over kept images of products of lower-level counts
  kAutomaton,  // determinisation of the derivation automaton
};

std::string to_string(CountMode m);

// #ϑ^n(a). Recurse mode refuses with PreconditionError unless the kept images
// are disjoint up to dsc_level.
mpz_class count(const RandomSubstitution& s, Letter a, int n, CountMode mode, int dsc_level = 3);

struct CountOptions {
  std::size_t digit_budget = 1'000'000;
  int dsc_level = 3;
};

// Per-letter counts for levels 0..max_level. Exact while every count has at
// most digit_budget decimal digits, log-domain afterwards.
class CountTable {
 public:
  CountTable(const RandomSubstitution& s, int max_level, CountOptions opts = {});

  int max_level() const { return static_cast<int>(logs_.size()) - 1; }
  int switch_level() const { return switch_level_; }  // first log-only level
  bool has_exact(int n) const { return n < switch_level_; }
  const mpz_class& exact(Letter a, int n) const;
  double log_count(Letter a, int n) const { return logs_.at(n).at(a); }
  double log_word_count(const Word& u, int n) const;
  CountMode method() const { return method_; }
  int dsc_verified_level() const { return dsc_level_; }
  const ReducedImages& reduced() const { return reduced_; }

 private:
  CountMode method_;
  int switch_level_;
  int dsc_level_ = 0;
  ReducedImages reduced_;
  std::vector<std::vector<mpz_class>> exact_;
  std::vector<std::vector<double>> logs_;
};

double log_of(const mpz_class& z);

struct EntropyApproximant {
  int level = 0;
  std::vector<double> per_letter;  // log #ϑ^m(a) / (λ^m L_a)
  double value = 0;                // for the requested letter
  double lower = 0;                // min over letters
  double upper = 0;                // λ^m/(λ^m-1) h^{m,k}
};

struct EntropyReport {
  Letter letter = 0;
  int k = 1;
  std::vector<EntropyApproximant> levels;
  double last = 0;
  double last_delta = 0;
  double certified_lower = 0;  // best lower bound over computed levels
  double certified_upper = 0;  // best upper bound over computed levels
  Normalisation normalisation = Normalisation::kLROne;
  CountMode count_method = CountMode::kRecurse;
  int switch_level = 0;
};

// h^{m,k} = max_a max_{u ∈ ϑ^k(a)} log #ϑ^m(u) / L(ϑ^m(u)).
double hmk(const RandomSubstitution& s, const CountTable& t, const SpectralData& sd, int m, int k);
double hmk_upper_bound(const RandomSubstitution& s, const CountTable& t, const SpectralData& sd,
                       int m, int k);

EntropyReport geometric_inflation_entropy(const RandomSubstitution& s, Letter a, int max_level,
                                          const SpectralData& sd, int k = 1,
                                          CountOptions opts = {});

// #{w legal : L(w without its last letter) < ell <= L(w)}.
std::size_t patch_count(const RandomSubstitution& s, const std::vector<double>& L, double ell);

struct SymbolicGeometricBounds {
  double lower = 0, upper = 0;
  double min_Leta = 0, max_Leta = 0;
};

SymbolicGeometricBounds symbolic_geometric_bounds(double hX, const std::vector<std::vector<double>>& etas,
                                                  const std::vector<double>& L);

// Level-n count vectors for productivity weights. For constant-length
// substitutions entries are counts divided by the count of the first letter
// (weights are invariant under a common scale); otherwise true counts. Exact
// rationals while their total size stays under bit_budget, then natural logs.
class CountSequence {
 public:
  CountSequence(const RandomSubstitution& s, int horizon, std::size_t bit_budget = 200'000,
                int dsc_level = 3);

  int horizon() const { return static_cast<int>(logs_.size()) - 1; }
  bool projective() const { return projective_; }
  bool exact(int n) const { return n < static_cast<int>(exact_.size()); }
  const std::vector<mpq_class>& exact_vector(int n) const { return exact_.at(n); }
  const std::vector<double>& log_vector(int n) const { return logs_.at(n); }
  const ReducedImages& reduced() const { return reduced_; }

 private:
  bool projective_;
  ReducedImages reduced_;
  std::vector<std::vector<mpq_class>> exact_;
  std::vector<std::vector<double>> logs_;
};

}  // namespace substrata
