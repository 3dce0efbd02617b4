#pragma once

// Brute-force references and hand-rolled generators shared by the unit tests.
// Nothing here calls the library code it is used to check.

#include <gmpxx.h>

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "substrata/core.hpp"
#include "substrata/matrix.hpp"
#include "substrata/stochastic.hpp"

namespace oracle {

using substrata::Word;

// ϑ^n(w) by recursion over every choice at every position.
inline std::set<Word> images(const std::vector<std::vector<Word>>& rules, const Word& w, int n) {
  std::set<Word> cur{w};
  for (int i = 0; i < n; ++i) {
    std::set<Word> next;
    for (const auto& u : cur) {
      std::function<void(std::size_t, Word)> go = [&](std::size_t pos, Word acc) {
        if (pos == u.size()) {
          next.insert(acc);
          return;
        }
        for (const auto& v : rules[static_cast<unsigned char>(u[pos])]) go(pos + 1, acc + v);
      };
      go(0, "");
    }
    cur.swap(next);
  }
  return cur;
}

// Subwords of ϑ^n(a) of length <= len for all letters and n <= levels.
inline std::set<Word> language(const std::vector<std::vector<Word>>& rules, std::size_t len, int levels) {
  std::set<Word> out;
  for (std::size_t a = 0; a < rules.size(); ++a)
    for (int n = 0; n <= levels; ++n)
      for (const auto& w : images(rules, Word(1, static_cast<char>(a)), n))
        for (std::size_t i = 0; i < w.size(); ++i)
          for (std::size_t l = 1; l <= len && i + l <= w.size(); ++l) out.insert(w.substr(i, l));
  return out;
}

// P[ϑ_P(u) = v] summed over every tuple of choices.
inline mpq_class path_sum(const std::vector<std::vector<std::pair<Word, mpq_class>>>& rules, const Word& u,
                          const Word& v) {
  mpq_class total = 0;
  std::function<void(std::size_t, Word, mpq_class)> go = [&](std::size_t pos, Word acc, mpq_class p) {
    if (pos == u.size()) {
      if (acc == v) total += p;
      return;
    }
    for (const auto& [w, q] : rules[static_cast<unsigned char>(u[pos])]) go(pos + 1, acc + w, p * q);
  };
  go(0, "", 1);
  return total;
}

// Cyclic occurrences of x in w^∞ starting in [0, |w|).
inline long cyclic_occurrences(const Word& w, const Word& x) {
  long c = 0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    bool hit = true;
    for (std::size_t j = 0; j < x.size() && hit; ++j) hit = w[(i + j) % w.size()] == x[j];
    c += hit;
  }
  return c;
}

// Random substitution on d letters: 1..max_images images per letter of
// length 1..max_len, every letter reachable from letter 0.
inline substrata::RandomSubstitution random_substitution(std::mt19937_64& rng, std::size_t d, int max_images,
                                                        int max_len) {
  std::vector<std::string> letters;
  for (std::size_t i = 0; i < d; ++i) letters.push_back(std::string(1, static_cast<char>('a' + i)));
  std::vector<std::vector<Word>> rules(d);
  for (std::size_t a = 0; a < d; ++a) {
    const int k = 1 + static_cast<int>(rng() % max_images);
    std::set<Word> imgs;
    while (static_cast<int>(imgs.size()) < k) {
      const int len = 1 + static_cast<int>(rng() % max_len);
      Word w;
      for (int i = 0; i < len; ++i) w += static_cast<char>(rng() % d);
      imgs.insert(w);
    }
    rules[a].assign(imgs.begin(), imgs.end());
  }
  // Chain a -> next letter so every letter appears.
  for (std::size_t a = 0; a < d; ++a) rules[a][0] += static_cast<char>((a + 1) % d);
  for (auto& r : rules) {
    std::sort(r.begin(), r.end());
    r.erase(std::unique(r.begin(), r.end()), r.end());
  }
  return substrata::RandomSubstitution(substrata::Alphabet(letters), rules);
}

template <class T>
T random_weight(std::mt19937_64& rng);
template <>
inline mpq_class random_weight(std::mt19937_64& rng) {
  return mpq_class(1 + static_cast<long>(rng() % 9));
}
template <>
inline double random_weight(std::mt19937_64& rng) {
  return 0.05 + std::uniform_real_distribution<double>(0, 1)(rng);
}

template <class T>
substrata::ProbabilityChoice<T> random_choice(const substrata::RandomSubstitution& s, std::mt19937_64& rng) {
  std::vector<std::vector<T>> w(s.size());
  for (std::size_t a = 0; a < s.size(); ++a) {
    T sum = 0;
    for (std::size_t i = 0; i < s.images(static_cast<substrata::Letter>(a)).size(); ++i) {
      w[a].push_back(random_weight<T>(rng));
      sum += w[a].back();
    }
    for (auto& x : w[a]) x /= sum;
  }
  return substrata::make_choice<T>(s, w);
}

template <class T>
substrata::Matrix<T> random_stochastic(std::mt19937_64& rng, std::size_t d) {
  substrata::Matrix<T> M(d, d);
  for (std::size_t j = 0; j < d; ++j) {
    T sum = 0;
    for (std::size_t i = 0; i < d; ++i) {
      M(i, j) = rng() % 3 == 0 ? T(0) : random_weight<T>(rng);
      sum += M(i, j);
    }
    if (sum == 0) {
      M(j, j) = 1;
      sum = 1;
    }
    for (std::size_t i = 0; i < d; ++i) M(i, j) /= sum;
  }
  return M;
}

// Dobrushin coefficient from its definition as half the largest column L1 distance.
inline mpq_class dobrushin(const substrata::QMatrix& Q) {
  mpq_class best = 0;
  for (std::size_t j = 0; j < Q.cols(); ++j)
    for (std::size_t k = j + 1; k < Q.cols(); ++k) {
      mpq_class d = 0;
      for (std::size_t i = 0; i < Q.rows(); ++i) d += abs(Q(i, j) - Q(i, k));
      best = std::max(best, mpq_class(d / 2));
    }
  return best;
}

}  // namespace oracle
