#pragma once

#include <gmpxx.h>

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "substrata/core.hpp"
#include "substrata/counting.hpp"
#include "substrata/spectral.hpp"
#include "substrata/stochastic.hpp"

namespace substrata {

// A claimed recursion "r[n+1] = <expr in r[n]>" with + - * / ^, integer
// literals and parentheses.
class Recursion {
 public:
  static Recursion parse(const std::string& text);

  const std::string& text() const { return text_; }
  mpq_class next(const mpq_class& r) const;
  // Coefficients c_0..c_k if the right-hand side is a polynomial in r[n].
  std::optional<std::vector<mpq_class>> polynomial() const;

  struct Node;

 private:
  std::string text_;
  std::shared_ptr<const Node> root_;
};

// Letter partition for r_n = #ϑ^n(p)/#ϑ^n(q): counts are constant on each class.
struct CountClasses {
  std::vector<Letter> p, q;
};

struct RecursionCheck {
  std::string recursion;
  bool validated = false;
  int checked_up_to = 0;               // r_{n+1} = f(r_n) verified for n+1 <= this
  std::optional<int> first_failure;    // n+1 where it fails
};

struct RatioTrace {
  bool classes_ok = true;
  std::string class_violation;
  std::vector<mpq_class> r;            // exact prefix
  std::vector<double> log_r;           // every level up to the horizon
  std::vector<std::vector<double>> per_letter_log;  // log #ϑ^n(a) - log #ϑ^n(first letter)
  std::optional<RecursionCheck> recursion;
};

// r_n for n = 0..horizon when classes are declared; per-letter log ratios
// are always filled.
RatioTrace productivity_ratio_trace(const CountSequence& cs, const CountClasses& classes,
                                    const std::optional<Recursion>& claim = {});

// Smallest n <= max_power such that every word of ϑ^n(a) contains every
// letter for every a (all marginals of ϑ^n have positive matrices), or 0.
int positive_marginal_power(const RandomSubstitution& s, int max_power = 8);

bool is_compatible(const RandomSubstitution& s);

struct TrappingBlocks {
  std::vector<Letter> b1, b2;
};

struct BlockMass {
  std::vector<Letter> block;
  mpq_class finite;        // min column sum of ∏_{i<H} A_B(Q_i)
  double c = 0;            // max_n (1 - s_n) r_{n+1} over the prefix
  double tail = 0;         // lower bound for ∏_{i>=H} s_i
  double total = 0;        // finite * tail
  std::vector<mpq_class> s;  // per-step min column sums s_n
};

struct TrappingCertificate {
  bool certified = false;
  TrappingBlocks blocks;
  int horizon = 0;
  BlockMass m1, m2;
  double gap = 0;          // m1 + m2 - 1
  std::string reason;      // why not certified
};

struct TrappingOptions {
  int horizon = 8;
  std::optional<TrappingBlocks> blocks;  // auto-search when absent (d <= 6)
};

// Super-multiplicative corner bounds on Q_0···Q_n with an analytic tail from a
// validated super-geometric recursion.
TrappingCertificate trapping_certificate(const std::vector<QMatrix>& q, const RatioTrace& trace,
                                         const TrappingOptions& opts);

enum class Verdict { kErgodicCertified, kNonErgodicCertified, kUndetermined };
std::string to_string(Verdict v);

struct ChecklistItem {
  std::string name;
  bool holds = false;
  std::string detail;
};

struct ErgodicityOptions {
  int horizon = 40;
  int start_cap = 4;
  int cauchy_window = 5;
  double cauchy_tol = 1e-9;
  double delta_threshold = 1e-9;
  double support_threshold = 1e-6;
  int max_marginal_power = 8;
  int dsc_level = 3;
  CountClasses classes;
  std::optional<Recursion> recursion;
  TrappingOptions trapping;
};

struct ErgodicityReport {
  Verdict verdict = Verdict::kUndetermined;
  std::string reason;
  std::vector<ChecklistItem> preconditions;
  std::vector<ChecklistItem> checklist;
  std::optional<int> cauchy_index;  // first n with Q_n..Q_{n+window-1} within tolerance
  std::vector<double> delta;                      // δ(Q_n)
  double delta_product = 1;
  std::vector<std::vector<double>> backward;      // δ(Q_n···Q_{n+k}) per start n
  std::optional<RatioTrace> ratios;
  std::optional<TrappingCertificate> trapping;
  std::vector<std::string> notes;
};

ErgodicityReport ergodicity_test(const RandomSubstitution& s, const SpectralData& sd,
                                 const ErgodicityOptions& opts = {});

}  // namespace substrata
