#include "substrata/measures.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

#include "substrata/kernels.hpp"

namespace substrata {

namespace {

template <class T>
double as_double(const T& x) {
  return to_double(x);
}

// Fills lengths 1..K-1 from the length-K masses by summing over the last
// letter.
template <class T>
void marginalise_prefixes(CylinderMeasure<T>& m) {
  for (std::size_t k = m.level; k > 1; --k) {
    std::map<Word, T> shorter;
    for (const auto& [w, p] : m.values)
      if (w.size() == k) shorter[w.substr(0, k - 1)] += p;
    for (auto& [w, p] : shorter) m.values[w] = std::move(p);
  }
}

template <class T>
std::pair<std::size_t, std::size_t> image_length_range(const ProbabilityChoice<T>& P) {
  std::size_t lo = SIZE_MAX, hi = 0;
  for (const auto& r : P.rules)
    for (const auto& [v, p] : r) {
      lo = std::min(lo, v.size());
      hi = std::max(hi, v.size());
    }
  return {lo, hi};
}

}  // namespace

template <class T>
T CylinderMeasure<T>::operator()(const Word& v) const {
  if (v.empty()) return T(1);
  auto it = values.find(v);
  return it == values.end() ? T(0) : it->second;
}

template <class T>
std::vector<T> CylinderMeasure<T>::letter_frequencies() const {
  std::vector<T> R(alphabet_size, T(0));
  for (std::size_t a = 0; a < alphabet_size; ++a) R[a] = (*this)(Word(1, static_cast<char>(a)));
  return R;
}

template <class T>
CylinderMeasure<T> CylinderMeasure<T>::truncate(std::size_t K) const {
  CylinderMeasure<T> out{alphabet_size, std::min(K, level), {}};
  for (const auto& [w, p] : values)
    if (w.size() <= K) out.values.emplace(w, p);
  return out;
}

template struct CylinderMeasure<mpq_class>;
template struct CylinderMeasure<double>;

FloatMeasure to_double(const ExactMeasure& m) {
  FloatMeasure f{m.alphabet_size, m.level, {}};
  for (const auto& [w, p] : m.values) f.values.emplace(w, p.get_d());
  return f;
}

template <class T>
double consistency_residual(const CylinderMeasure<T>& m) {
  const std::size_t d = m.alphabet_size;
  T total = 0;
  for (std::size_t a = 0; a < d; ++a) total += m(Word(1, static_cast<char>(a)));
  double worst = std::abs(as_double(T(total - 1)));
  for (const auto& [u, p] : m.values) {
    if (u.size() >= m.level) continue;
    T right = 0, left = 0;
    for (std::size_t b = 0; b < d; ++b) {
      right += m(u + static_cast<char>(b));
      left += m(static_cast<char>(b) + u);
    }
    worst = std::max({worst, std::abs(as_double(T(p - right))), std::abs(as_double(T(p - left)))});
  }
  return worst;
}

template double consistency_residual(const CylinderMeasure<mpq_class>&);
template double consistency_residual(const CylinderMeasure<double>&);

template <class T>
double max_distance(const CylinderMeasure<T>& a, const CylinderMeasure<T>& b, std::size_t K) {
  double worst = 0;
  for (const auto* m : {&a, &b})
    for (const auto& [w, p] : m->values)
      if (w.size() <= K) worst = std::max(worst, std::abs(as_double(T(a(w) - b(w)))));
  return worst;
}

template double max_distance(const CylinderMeasure<mpq_class>&, const CylinderMeasure<mpq_class>&, std::size_t);
template double max_distance(const CylinderMeasure<double>&, const CylinderMeasure<double>&, std::size_t);

template <class T>
CylinderMeasure<T> periodic_measure(const std::map<Word, T>& dist, std::size_t alphabet_size, std::size_t K) {
  if (dist.empty()) throw PreconditionError("empty distribution");
  CylinderMeasure<T> m{alphabet_size, K, {}};
  T total_length = 0;
  std::unordered_map<Word, T> acc;
  for (const auto& [w, p] : dist) {
    if (w.empty()) throw PreconditionError("periodic measure of the empty word");
    if (p == 0) continue;
    total_length += p * T(static_cast<long>(w.size()));
    Word ext;
    while (ext.size() < w.size() + K) ext += w;
    for (std::size_t i = 0; i < w.size(); ++i)
      for (std::size_t k = 1; k <= K; ++k) acc[ext.substr(i, k)] += p;
  }
  for (auto& [v, c] : acc) m.values.emplace(v, c / total_length);
  return m;
}

template CylinderMeasure<mpq_class> periodic_measure(const std::map<Word, mpq_class>&, std::size_t, std::size_t);
template CylinderMeasure<double> periodic_measure(const std::map<Word, double>&, std::size_t, std::size_t);

FloatMeasure frequency_measure(const RandomSubstitution& s, const FloatChoice& P, std::size_t K) {
  if (P.level != 1) throw PreconditionError("frequency measure expects a level-one probability choice");
  if (K == 0) throw PreconditionError("cylinder level must be positive");
  std::vector<Word> words;
  for (auto& w : language(s, K))
    if (w.size() == K) words.push_back(std::move(w));
  std::unordered_map<Word, std::size_t> pos;
  for (std::size_t i = 0; i < words.size(); ++i) pos.emplace(words[i], i);

  // Sparse columns of the induced K-word matrix.
  auto cols = kernels::omp::transfer_columns(P, words, K);
  std::vector<std::vector<std::pair<std::size_t, double>>> sparse(words.size());
  for (std::size_t j = 0; j < words.size(); ++j)
    for (const auto& [u, p] : cols[j]) {
      auto it = pos.find(u);
      if (it == pos.end()) throw Error("induced image leaves the language");
      sparse[j].emplace_back(it->second, p);
    }

  // Power iteration on I + M (same Perron vector, aperiodic).
  const std::size_t n = words.size();
  std::vector<double> v(n, 1.0 / static_cast<double>(n)), next(n);
  for (int it = 0; it < 1'000'000; ++it) {
    next = v;
    for (std::size_t j = 0; j < n; ++j)
      for (const auto& [i, p] : sparse[j]) next[i] += p * v[j];
    double sum = 0;
    for (double x : next) sum += x;
    double change = 0;
    for (std::size_t i = 0; i < n; ++i) {
      next[i] /= sum;
      change = std::max(change, std::abs(next[i] - v[i]));
    }
    v.swap(next);
    if (change <= 1e-17) break;
  }
  FloatMeasure m{s.size(), K, {}};
  for (std::size_t i = 0; i < n; ++i)
    if (v[i] > 0) m.values.emplace(words[i], v[i]);
  marginalise_prefixes(m);
  return m;
}

template <class T>
CylinderMeasure<T> frequency_approximant(const RandomSubstitution& s, const ProbabilityChoice<T>& P, Letter a,
                                         int m, std::size_t K) {
  ProbabilityChoice<T> Pm = power(P, m);
  const auto& col = Pm.rules.at(a);
  if (col.size() > 100'000) throw EnumerationOverflow(100'000);
  std::map<Word, T> dist;
  for (const auto& [w, p] : col)
    if (p != 0) dist.emplace(w, p);
  return periodic_measure(dist, s.size(), K);
}

template CylinderMeasure<mpq_class> frequency_approximant(const RandomSubstitution&, const ExactChoice&, Letter, int,
                                                          std::size_t);
template CylinderMeasure<double> frequency_approximant(const RandomSubstitution&, const FloatChoice&, Letter, int,
                                                       std::size_t);

MonteCarloEstimate monte_carlo_frequencies(const RandomSubstitution& s, const FloatChoice& P, Letter a, int m,
                                           std::size_t K, std::uint64_t samples, std::uint64_t seed,
                                           Backend backend) {
  if (P.level != 1) throw PreconditionError("Monte Carlo sampling expects a level-one probability choice");
  if (samples < 2) throw PreconditionError("need at least two samples");
  kernels::SamplerInput in;
  in.s = &s;
  in.root = a;
  in.level = m;
  in.K = K;
  in.seed = seed;
  in.samples = samples;
  for (std::size_t b = 0; b < s.size(); ++b) {
    std::vector<double> w;
    for (const auto& v : s.images(static_cast<Letter>(b))) w.push_back(P.weight(static_cast<Letter>(b), v));
    in.weights.push_back(std::move(w));
  }
  const kernels::FrequencySums f =
      backend == Backend::kSerial ? kernels::serial::sample_frequencies(in) : kernels::omp::sample_frequencies(in);
  kernels::CylinderIndex index(s.size(), K);

  MonteCarloEstimate est;
  est.samples = samples;
  est.seed = seed;
  est.root = a;
  est.level = m;
  est.mean = FloatMeasure{s.size(), K, {}};
  const long double N = static_cast<long double>(f.n);
  const long double X = static_cast<long double>(f.x), XX = static_cast<long double>(f.xx);
  const long double xbar = X / N;
  for (std::size_t code = 0; code < index.size(); ++code) {
    if (f.y[code] == 0) continue;
    const long double Y = static_cast<long double>(f.y[code]);
    const long double R = Y / X;
    const long double resid = (static_cast<long double>(f.yy[code]) - 2 * R * static_cast<long double>(f.xy[code]) +
                               R * R * XX) / (N - 1);
    const Word w = index.word(code);
    est.mean.values.emplace(w, static_cast<double>(R));
    est.stderr_.emplace(w, static_cast<double>(std::sqrt(std::max<long double>(resid, 0) / N) / xbar));
  }
  return est;
}

template <class T>
std::size_t required_input_level(const ProbabilityChoice<T>& P, std::size_t K) {
  const auto [lo, hi] = image_length_range(P);
  return (K + hi + lo - 1) / lo + 1;
}

template std::size_t required_input_level(const ExactChoice&, std::size_t);
template std::size_t required_input_level(const FloatChoice&, std::size_t);

template <class T>
T lambda_mu(const ProbabilityChoice<T>& P, const CylinderMeasure<T>& mu) {
  T lam = 0;
  for (std::size_t a = 0; a < P.size(); ++a) {
    T len = 0;
    for (const auto& [v, p] : P.rules[a]) len += p * T(static_cast<long>(v.size()));
    lam += mu(Word(1, static_cast<char>(a))) * len;
  }
  return lam;
}

template <class T>
CylinderMeasure<T> transfer(const ProbabilityChoice<T>& P, const CylinderMeasure<T>& mu, std::size_t K,
                            Backend backend) {
  const std::size_t need = required_input_level(P, K);
  if (mu.level < need)
    throw PreconditionError("transfer to level " + std::to_string(K) + " needs the input measure at level " +
                            std::to_string(need) + ", got " + std::to_string(mu.level));
  // Output cylinders of length K start inside the first image, so the
  // K-word marginals of μ already determine them.
  std::vector<Word> parents;
  std::vector<const T*> mass;
  for (const auto& [x, p] : mu.values)
    if (x.size() == K && p != 0) {
      parents.push_back(x);
      mass.push_back(&p);
    }
  auto cols = backend == Backend::kSerial ? kernels::serial::transfer_columns(P, parents, K)
                                          : kernels::omp::transfer_columns(P, parents, K);
  const T lam = lambda_mu(P, mu);
  CylinderMeasure<T> out{mu.alphabet_size, K, {}};
  for (std::size_t j = 0; j < parents.size(); ++j)
    for (const auto& [u, w] : cols[j]) out.values[u] += *mass[j] * w;
  for (auto& [u, v] : out.values) v /= lam;
  marginalise_prefixes(out);
  return out;
}

template CylinderMeasure<mpq_class> transfer(const ExactChoice&, const ExactMeasure&, std::size_t, Backend);
template CylinderMeasure<double> transfer(const FloatChoice&, const FloatMeasure&, std::size_t, Backend);

template <class T>
CompositionCheck transfer_composition_check(const ProbabilityChoice<T>& P, const ProbabilityChoice<T>& Pp,
                                            const CylinderMeasure<T>& mu, std::size_t K) {
  const std::size_t inner = required_input_level(P, K);
  auto direct = transfer(compose(P, Pp), mu, K);
  auto nested = transfer(P, transfer(Pp, mu, inner), K);
  CompositionCheck c;
  c.K = K;
  c.max_discrepancy = max_distance(direct, nested, K);
  if constexpr (std::is_same_v<T, mpq_class>) {
    c.exact_zero = true;
    for (const auto* m : {&direct, &nested})
      for (const auto& [w, p] : m->values) c.exact_zero &= direct(w) == nested(w);
  }
  return c;
}

template CompositionCheck transfer_composition_check(const ExactChoice&, const ExactChoice&, const ExactMeasure&,
                                                     std::size_t);
template CompositionCheck transfer_composition_check(const FloatChoice&, const FloatChoice&, const FloatMeasure&,
                                                     std::size_t);

template <class T>
std::vector<T> proportion_vector(const std::vector<T>& R, const std::vector<T>& L) {
  if (R.size() != L.size()) throw PreconditionError("frequency and length vectors differ in size");
  T lr = 0;
  for (std::size_t a = 0; a < R.size(); ++a) lr += L[a] * R[a];
  if (lr <= 0) throw PreconditionError("L·R must be positive");
  std::vector<T> pi(R.size());
  for (std::size_t a = 0; a < R.size(); ++a) pi[a] = L[a] * R[a] / lr;
  return pi;
}

template std::vector<mpq_class> proportion_vector(const std::vector<mpq_class>&, const std::vector<mpq_class>&);
template std::vector<double> proportion_vector(const std::vector<double>&, const std::vector<double>&);

EntropySandwich entropy_sandwich(const RandomSubstitution& s, const FloatChoice& P, int m) {
  if (m < 1) throw PreconditionError("entropy sandwich needs m >= 1");
  EntropySandwich e;
  e.m = m;
  const SpectralData sd = pf_data(substitution_matrix(P));
  e.lambda = sd.lambda;
  e.R = sd.R;
  const FloatChoice Pm = power(P, m);
  double HR = 0;
  for (std::size_t a = 0; a < s.size(); ++a) {
    double h = 0;
    for (const auto& [w, p] : Pm.rules[a])
      if (p > 0) h -= p * std::log(p);
    e.H.push_back(h);
    HR += h * e.R[a];
  }
  const double lm = std::pow(e.lambda, m);
  e.lower = HR / lm;
  e.upper = HR / (lm - 1);
  return e;
}

double geometric_entropy(double h, const std::vector<double>& R, const std::vector<double>& L) {
  if (R.size() != L.size()) throw PreconditionError("frequency and length vectors differ in size");
  double lr = 0;
  for (std::size_t a = 0; a < R.size(); ++a) lr += L[a] * R[a];
  if (!(lr > 0)) throw PreconditionError("L·R must be positive");
  return h / lr;
}

std::size_t uniformity_seed_level(const RandomSubstitution& s, int n, std::size_t K) {
  const std::size_t lo = s.min_image_length(), hi = s.max_image_length();
  for (int i = 0; i < n; ++i) K = (K + hi + lo - 1) / lo + 1;
  return K;
}

namespace {

template <class T, class Weights>
CylinderMeasure<T> uniformity_chain(const RandomSubstitution& s, int n, const CylinderMeasure<T>& seed,
                                    std::size_t K, Weights weights) {
  std::vector<std::size_t> levels{K};
  for (int i = 0; i < n; ++i) levels.push_back(uniformity_seed_level(s, 1, levels.back()));
  if (seed.level < levels.back())
    throw PreconditionError("seed needs " + std::to_string(levels.back()) + " levels, got " +
                            std::to_string(seed.level));
  CylinderMeasure<T> nu = seed;
  for (int i = n - 1; i >= 0; --i) nu = transfer(weights(i), nu, levels[i]);
  return nu.truncate(K);
}

template <class T, class Weights>
UniformityApproximant<T> uniformity(const RandomSubstitution& s, int n, const CylinderMeasure<T>& seed,
                                    std::size_t K, Weights weights) {
  if (n < 0) throw PreconditionError("negative approximation level");
  UniformityApproximant<T> u;
  u.n = n;
  u.K = K;
  u.measure = uniformity_chain(s, n, seed, K, weights);
  if (n >= 1) u.change = max_distance(u.measure, uniformity_chain(s, n - 1, seed, K, weights), K);
  return u;
}

}  // namespace

UniformityApproximant<mpq_class> uniformity_approximant(const RandomSubstitution& s, const CountSequence& cs, int n,
                                                        const ExactMeasure& seed, std::size_t K) {
  return uniformity(s, n, seed, K, [&](int i) { return productivity(s, cs, i, 1); });
}

UniformityApproximant<double> uniformity_approximant(const RandomSubstitution& s, const CountSequence& cs, int n,
                                                     const FloatMeasure& seed, std::size_t K) {
  return uniformity(s, n, seed, K, [&](int i) { return productivity_float(s, cs, i, 1); });
}

}  // namespace substrata
