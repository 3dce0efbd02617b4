#pragma once

#include <gmpxx.h>

#include <optional>
#include <string>
#include <vector>

#include "substrata/core.hpp"

namespace substrata {

// Nondeterministic automaton reading exactly the words of ϑ^n(root).
// A state is a cursor through one derivation: a position in the root plus,
// for every level, the chosen image and the position inside it. The empty
// state marks acceptance.
class DerivationAutomaton {
 public:
  using State = std::string;

  DerivationAutomaton(const RandomSubstitution& s, Word root, int level);

  std::vector<State> initial() const;
  Letter emitted(const State& st) const;
  // Successors after reading the emitted letter of st; may contain the
  // accepting state.
  void step(const State& st, std::vector<State>& out) const;
  static bool accepting(const State& st) { return st.empty(); }

 private:
  Letter letter_at(const State& st, int k) const;
  void fill(State prefix, int k, std::vector<State>& out) const;

  const RandomSubstitution* s_;
  Word root_;
  int level_;
};

// Exact #ϑ^n(root) by on-the-fly determinisation; independent of any
// disjointness assumption.
mpz_class count_distinct(const RandomSubstitution& s, const Word& root, int level,
                         std::size_t state_budget = 5'000'000);

// A word in ϑ^n(u) ∩ ϑ^n(v), or nullopt when the intersection is empty.
std::optional<Word> common_word(const RandomSubstitution& s, const Word& u, const Word& v,
                                int level, std::size_t state_budget = 20'000'000);

bool derives(const RandomSubstitution& s, const Word& root, int level, const Word& w);

}  // namespace substrata
