#pragma once

#include <optional>
#include <string>
#include <unordered_set>
#include <vector>

#include "substrata/core.hpp"

namespace substrata {

struct DscWitness {
  Letter letter = 0;
  Word u, v;     // distinct images of letter
  int level = 0;  // ϑ^level(u) ∩ ϑ^level(v) ≠ ∅
  Word common;
};

struct DscReport {
  bool passed = false;
  int verified_level = 0;  // disjointness checked for 1..verified_level
  std::optional<DscWitness> witness;
};

// Disjoint set condition for levels 1..max_level, decided by emptiness of a
// product of derivation automata (no explicit set enumeration).
DscReport check_dsc(const RandomSubstitution& s, int max_level);

// Re-checks a witness by exact membership of the common word.
bool recheck_witness(const RandomSubstitution& s, const DscWitness& w);

// Images that cannot contribute new words: v is dropped when ϑ(v) ⊆ ϑ(u) for
// another kept image u (ties keep the smallest).
struct ReducedImages {
  std::vector<std::vector<int>> kept;                    // image indices per letter
  std::vector<std::vector<std::pair<int, int>>> dropped;  // (dropped, dominating)
  bool trivial() const;
};

ReducedImages reduce_images(const RandomSubstitution& s);

struct ReducedDscReport {
  ReducedImages reduced;
  bool passed = false;
  int verified_level = 0;
  std::optional<DscWitness> witness;
};

// Disjointness of the kept images for levels 1..max_level: the precondition
// of the counting recursion.
ReducedDscReport check_reduced_dsc(const RandomSubstitution& s, int max_level);

struct DecompositionWitness {
  Word parent;                   // x_0 ... x_r
  std::vector<Word> pieces;      // v_i ∈ ϑ(x_i)
  std::vector<long> starts;      // start of v_i relative to the inspected word
  std::size_t phase = 0;         // k: the word starts at v_0[k]
  // Interior: pieces lying entirely inside the word.
  std::vector<std::size_t> interior(std::size_t word_length) const;
};

// All decompositions of w into a (boundary-truncated) concatenation of
// inflation words whose parent word is legal. `legal` must contain every
// legal word up to the parent length needed; pass nullptr to compute it.
std::vector<DecompositionWitness> desubstitute(const RandomSubstitution& s, const Word& w,
                                               const std::unordered_set<Word>* legal = nullptr);

// Distinct interior cuts (interior pieces with their parent letters).
std::size_t distinct_interiors(const std::vector<DecompositionWitness>& ds, std::size_t word_length);

enum class RecogStatus { kCertifiedAtWindow, kRefutedDsc, kInconclusive };
std::string to_string(RecogStatus s);

struct RecogVerdict {
  RecogStatus status = RecogStatus::kInconclusive;
  std::size_t window = 0;
  std::size_t words_checked = 0;
  std::optional<DscWitness> dsc_witness;
  std::optional<Word> ambiguous_word;
  std::string details;
};

std::size_t default_window(const RandomSubstitution& s);

RecogVerdict verify_recognisability(const RandomSubstitution& s, std::size_t window, int dsc_level = 2);

}  // namespace substrata
