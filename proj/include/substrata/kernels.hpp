#pragma once

#include <cstdint>
#include <map>
#include <utility>
#include <vector>

#include "substrata/core.hpp"
#include "substrata/stochastic.hpp"

// Hot loops in two flavours: serial reference versions and OpenMP versions
// that must return identical results.
namespace substrata::kernels {

// Dense index of all words of length 1..K over d letters.
class CylinderIndex {
 public:
  CylinderIndex(std::size_t d, std::size_t K);
  std::size_t size() const { return offsets_.back(); }
  std::size_t code(const char* w, std::size_t len) const;
  Word word(std::size_t code) const;

 private:
  std::size_t d_, K_;
  std::vector<std::size_t> offsets_;  // offsets_[k-1] = first code of length k
};

struct SamplerInput {
  const RandomSubstitution* s = nullptr;
  std::vector<std::vector<double>> weights;  // per letter, parallel to s->images(a)
  Letter root = 0;
  int level = 1;
  std::size_t K = 3;
  std::uint64_t seed = 0;
  std::uint64_t samples = 0;
};

// Integer sums over samples w_i of ϑ^level_P(root): x = |w|, y_v = cyclic
// occurrences of v in w^∞ starting in [0, |w|).
struct FrequencySums {
  std::uint64_t n = 0, x = 0, xx = 0;
  std::vector<std::uint64_t> y, yy, xy;
};

std::uint64_t splitmix64(std::uint64_t x);
inline constexpr std::uint64_t kChunk = 4096;

namespace serial {
FrequencySums sample_frequencies(const SamplerInput& in);
template <class T>
std::vector<std::map<Word, T>> transfer_columns(const ProbabilityChoice<T>& P, const std::vector<Word>& parents,
                                                std::size_t K);
}  // namespace serial

namespace omp {
FrequencySums sample_frequencies(const SamplerInput& in);
template <class T>
std::vector<std::map<Word, T>> transfer_columns(const ProbabilityChoice<T>& P, const std::vector<Word>& parents,
                                                std::size_t K);
}  // namespace omp

}  // namespace substrata::kernels
