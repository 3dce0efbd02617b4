#include "substrata/stochastic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace substrata {

namespace {

template <class T>
bool is_one(const T& x);
template <>
bool is_one(const mpq_class& x) { return x == 1; }
template <>
bool is_one(const double& x) { return std::abs(x - 1.0) <= 1e-12; }

template <class T>
T abs_of(const T& x) {
  return x < 0 ? T(-x) : x;
}

template <class T>
std::vector<std::pair<Word, T>> sorted_rules(std::map<Word, T>&& acc) {
  std::vector<std::pair<Word, T>> out;
  out.reserve(acc.size());
  for (auto& [w, p] : acc) out.emplace_back(w, std::move(p));
  return out;
}

}  // namespace

template <class T>
T ProbabilityChoice<T>::weight(Letter a, const Word& v) const {
  const auto& r = rules.at(a);
  auto it = std::lower_bound(r.begin(), r.end(), v, [](const auto& e, const Word& w) { return e.first < w; });
  if (it == r.end() || it->first != v) return T(0);
  return it->second;
}

template <class T>
ProbabilityChoice<T> uniform_choice(const RandomSubstitution& s) {
  std::vector<std::vector<T>> w(s.size());
  for (std::size_t a = 0; a < s.size(); ++a) {
    const auto k = s.images(static_cast<Letter>(a)).size();
    w[a].assign(k, T(1) / T(static_cast<long>(k)));
  }
  return make_choice(s, w);
}

template <class T>
ProbabilityChoice<T> make_choice(const RandomSubstitution& s, const std::vector<std::vector<T>>& weights) {
  if (weights.size() != s.size()) throw Error("probabilities: one list per letter required");
  ProbabilityChoice<T> P;
  P.rules.resize(s.size());
  for (std::size_t a = 0; a < s.size(); ++a) {
    const auto& imgs = s.images(static_cast<Letter>(a));
    if (weights[a].size() != imgs.size())
      throw Error("probabilities for letter " + s.alphabet().symbol(static_cast<Letter>(a)) +
                  " must be parallel to its images");
    for (std::size_t i = 0; i < imgs.size(); ++i) P.rules[a].emplace_back(imgs[i], weights[a][i]);
  }
  validate_choice(P);
  return P;
}

template <class T>
void validate_choice(const ProbabilityChoice<T>& P) {
  for (std::size_t a = 0; a < P.rules.size(); ++a) {
    T sum = 0;
    for (const auto& [v, p] : P.rules[a]) {
      if (p < 0 || p > 1) throw Error("probability outside [0,1]");
      sum += p;
    }
    if (!is_one(sum)) throw Error("probabilities of letter " + std::to_string(a) + " do not sum to 1");
  }
}

template void validate_choice(const ProbabilityChoice<mpq_class>&);
template void validate_choice(const ProbabilityChoice<double>&);

FloatChoice to_double(const ExactChoice& P) {
  FloatChoice F;
  F.level = P.level;
  F.rules.resize(P.rules.size());
  for (std::size_t a = 0; a < P.rules.size(); ++a)
    for (const auto& [v, p] : P.rules[a]) F.rules[a].emplace_back(v, p.get_d());
  return F;
}

template <class T>
T extend_to_word(const ProbabilityChoice<T>& P, const Word& u, const Word& v) {
  std::vector<T> f(v.size() + 1, T(0)), g;
  f[0] = 1;
  for (char c : u) {
    g.assign(v.size() + 1, T(0));
    for (std::size_t pos = 0; pos <= v.size(); ++pos) {
      if (f[pos] == 0) continue;
      for (const auto& [w, p] : P.rules.at(static_cast<unsigned char>(c))) {
        if (pos + w.size() > v.size() || v.compare(pos, w.size(), w) != 0) continue;
        g[pos + w.size()] += f[pos] * p;
      }
    }
    f.swap(g);
  }
  return f[v.size()];
}

template <class T>
std::map<Word, T> image_distribution(const ProbabilityChoice<T>& P, const Word& u) {
  const std::size_t budget = enumeration_budget();
  std::map<Word, T> dist{{Word(), T(1)}};
  for (char c : u) {
    std::map<Word, T> next;
    for (const auto& [w, p] : dist)
      for (const auto& [v, q] : P.rules.at(static_cast<unsigned char>(c))) {
        if (q == 0) continue;
        next[w + v] += p * q;
        if (next.size() > budget) throw EnumerationOverflow(budget);
      }
    dist.swap(next);
  }
  return dist;
}

template <class T>
ProbabilityChoice<T> compose(const ProbabilityChoice<T>& P, const ProbabilityChoice<T>& Pp) {
  if (P.size() != Pp.size()) throw Error("probability choices on different alphabets");
  ProbabilityChoice<T> R;
  R.level = P.level + Pp.level;
  R.rules.resize(P.size());
  for (std::size_t a = 0; a < P.size(); ++a) {
    std::map<Word, T> acc;
    for (const auto& [v, q] : Pp.rules[a]) {
      if (q == 0) continue;
      for (auto& [w, p] : image_distribution(P, v)) acc[w] += p * q;
    }
    R.rules[a] = sorted_rules(std::move(acc));
  }
  return R;
}

template <class T>
ProbabilityChoice<T> power(const ProbabilityChoice<T>& P, int m) {
  if (m < 1) throw PreconditionError("power of a probability choice needs m >= 1");
  ProbabilityChoice<T> R = P;
  for (int i = 1; i < m; ++i) R = compose(R, P);
  return R;
}

template <class T>
Matrix<T> substitution_matrix(const ProbabilityChoice<T>& P) {
  const std::size_t d = P.size();
  Matrix<T> M(d, d);
  for (std::size_t b = 0; b < d; ++b)
    for (const auto& [v, p] : P.rules[b])
      for (char c : v) M(static_cast<unsigned char>(c), b) += p;
  return M;
}

template <class T>
Matrix<T> geometric_matrix(const Matrix<T>& M, const std::vector<T>& L, const T& lambda) {
  const std::size_t d = M.rows();
  Matrix<T> Q(d, d);
  for (std::size_t a = 0; a < d; ++a)
    for (std::size_t b = 0; b < d; ++b) Q(a, b) = L[a] * M(a, b) / (lambda * L[b]);
  for (const auto& c : column_sums(Q)) {
    const bool ok = std::is_same_v<T, double> ? std::abs(to_double(c) - 1.0) <= 1e-9 : c == 1;
    if (!ok) throw Error("geometric matrix is not column stochastic: lengths are not a common left eigenvector");
  }
  return Q;
}

template <class T>
T dobrushin(const Matrix<T>& Q) {
  T best = 0;
  for (std::size_t i = 0; i < Q.cols(); ++i)
    for (std::size_t j = i + 1; j < Q.cols(); ++j) {
      T dv = 0;
      for (std::size_t k = 0; k < Q.rows(); ++k) dv += abs_of(T(Q(k, i) - Q(k, j)));
      dv /= 2;
      if (dv > best) best = dv;
    }
  return best;
}

#define SUBSTRATA_INSTANTIATE(T)                                                                   \
  template struct ProbabilityChoice<T>;                                                            \
  template ProbabilityChoice<T> uniform_choice<T>(const RandomSubstitution&);                      \
  template ProbabilityChoice<T> make_choice<T>(const RandomSubstitution&,                          \
                                               const std::vector<std::vector<T>>&);                \
  template T extend_to_word(const ProbabilityChoice<T>&, const Word&, const Word&);                \
  template std::map<Word, T> image_distribution(const ProbabilityChoice<T>&, const Word&);         \
  template ProbabilityChoice<T> compose(const ProbabilityChoice<T>&, const ProbabilityChoice<T>&); \
  template ProbabilityChoice<T> power(const ProbabilityChoice<T>&, int);                           \
  template Matrix<T> substitution_matrix(const ProbabilityChoice<T>&);                             \
  template Matrix<T> geometric_matrix(const Matrix<T>&, const std::vector<T>&, const T&);          \
  template T dobrushin(const Matrix<T>&);

SUBSTRATA_INSTANTIATE(mpq_class)
SUBSTRATA_INSTANTIATE(double)
#undef SUBSTRATA_INSTANTIATE

namespace {

void require_productivity(const CountSequence& cs, int n, int m) {
  if (!cs.reduced().trivial())
    throw PreconditionError("productivity weights need the disjoint set condition on all images");
  if (n < 0 || m < 1 || n > cs.horizon()) throw PreconditionError("productivity level outside the count horizon");
}

}  // namespace

ExactChoice productivity(const RandomSubstitution& s, const CountSequence& cs, int n, int m) {
  require_productivity(cs, n, m);
  if (!cs.exact(n)) throw PreconditionError("counts at level " + std::to_string(n) + " are only known in log form");
  const auto& x = cs.exact_vector(n);
  ExactChoice P;
  P.level = m;
  P.rules.resize(s.size());
  for (std::size_t a = 0; a < s.size(); ++a) {
    mpq_class total = 0;
    auto words = s.iterate(static_cast<Letter>(a), m);
    // The weight of v depends only on its letter counts.
    std::map<AbelianVector, mpq_class> cache;
    for (auto& v : words) {
      auto [it, fresh] = cache.try_emplace(abelianise(v, s.size()));
      if (fresh) {
        mpq_class w = 1;
        for (std::size_t b = 0; b < s.size(); ++b) {
          mpz_class num, den;
          mpz_pow_ui(num.get_mpz_t(), x[b].get_num_mpz_t(), it->first[b]);
          mpz_pow_ui(den.get_mpz_t(), x[b].get_den_mpz_t(), it->first[b]);
          w *= mpq_class(num, den);
        }
        it->second = w;
      }
      total += it->second;
      P.rules[a].emplace_back(std::move(v), it->second);
    }
    for (auto& e : P.rules[a]) e.second /= total;
  }
  return P;
}

FloatChoice productivity_float(const RandomSubstitution& s, const CountSequence& cs, int n, int m) {
  require_productivity(cs, n, m);
  if (cs.exact(n)) return to_double(productivity(s, cs, n, m));
  const auto& lx = cs.log_vector(n);
  FloatChoice P;
  P.level = m;
  P.rules.resize(s.size());
  for (std::size_t a = 0; a < s.size(); ++a) {
    auto words = s.iterate(static_cast<Letter>(a), m);
    std::vector<double> lw;
    for (const auto& v : words) {
      double t = 0;
      for (char c : v) t += lx[static_cast<unsigned char>(c)];
      lw.push_back(t);
    }
    const double mx = *std::max_element(lw.begin(), lw.end());
    double z = 0;
    for (double t : lw) z += std::exp(t - mx);
    for (std::size_t i = 0; i < words.size(); ++i)
      P.rules[a].emplace_back(std::move(words[i]), std::exp(lw[i] - mx) / z);
  }
  return P;
}

QSequence productivity_q_sequence(const RandomSubstitution& s, const CountSequence& cs,
                                  const SpectralData& sd, int horizon) {
  if (horizon > cs.horizon() + 1) throw PreconditionError("count horizon too short for the Q sequence");
  QSequence out;
  const bool rational_geometry = sd.lambda_exact && sd.L_exact;
  for (int n = 0; n < horizon; ++n) {
    if (rational_geometry && cs.exact(n)) {
      QMatrix Q = geometric_matrix(substitution_matrix(productivity(s, cs, n, 1)), *sd.L_exact, *sd.lambda_exact);
      out.q.push_back(to_double(Q));
      out.exact.emplace_back(std::move(Q));
    } else {
      DMatrix M = substitution_matrix(productivity_float(s, cs, n, 1));
      out.q.push_back(geometric_matrix(M, sd.L, sd.lambda));
      out.exact.emplace_back(std::nullopt);
    }
  }
  return out;
}

}  // namespace substrata
