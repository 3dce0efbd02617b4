#include "substrata/counting.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "substrata/derivation.hpp"

namespace substrata {

namespace {

double logsumexp(const std::vector<double>& xs) {
  if (xs.empty()) return -std::numeric_limits<double>::infinity();
  const double m = *std::max_element(xs.begin(), xs.end());
  if (!std::isfinite(m)) return m;
  double acc = 0;
  for (double x : xs) acc += std::exp(x - m);
  return m + std::log(acc);
}

double log_of_q(const mpq_class& q) { return log_of(q.get_num()) - log_of(q.get_den()); }

std::size_t bits(const mpq_class& q) {
  return mpz_sizeinbase(q.get_num_mpz_t(), 2) + mpz_sizeinbase(q.get_den_mpz_t(), 2);
}

}  // namespace

std::string to_string(CountMode m) {
  switch (m) {
    case CountMode::kEnumerate: return "enumerate";
    case CountMode::kRecurse: return "recurse";
    case CountMode::kAutomaton: return "automaton";
  }
  return "?";
}

double log_of(const mpz_class& z) {
  if (sgn(z) <= 0) throw Error("log of a non-positive count");
  long e = 0;
  const double m = mpz_get_d_2exp(&e, z.get_mpz_t());
  return std::log(m) + static_cast<double>(e) * std::log(2.0);
}

mpz_class count(const RandomSubstitution& s, Letter a, int n, CountMode mode, int dsc_level) {
  if (n < 0) throw PreconditionError("negative level");
  switch (mode) {
    case CountMode::kEnumerate: return mpz_class(static_cast<unsigned long>(s.iterate(a, n).size()));
    case CountMode::kAutomaton: return count_distinct(s, Word(1, static_cast<char>(a)), n);
    case CountMode::kRecurse: {
      CountOptions opts;
      opts.dsc_level = dsc_level;
      opts.digit_budget = std::numeric_limits<std::size_t>::max();
      CountTable t(s, n, opts);
      if (t.method() != CountMode::kRecurse)
        throw PreconditionError("kept images are not disjoint; the counting recursion does not apply");
      return t.exact(a, n);
    }
  }
  return 0;
}

CountTable::CountTable(const RandomSubstitution& s, int max_level, CountOptions opts) {
  if (max_level < 0) throw PreconditionError("negative level");
  const std::size_t d = s.size();
  ReducedDscReport rep = check_reduced_dsc(s, opts.dsc_level);
  reduced_ = rep.reduced;
  dsc_level_ = rep.verified_level;
  exact_.assign(1, std::vector<mpz_class>(d, 1));
  logs_.assign(1, std::vector<double>(d, 0.0));
  switch_level_ = max_level + 1;

  if (!rep.passed) {
    // Without disjointness the only sound counts are explicit ones.
    method_ = CountMode::kEnumerate;
    for (int n = 1; n <= max_level; ++n) {
      std::vector<mpz_class> row(d);
      try {
        for (std::size_t a = 0; a < d; ++a)
          row[a] = static_cast<unsigned long>(s.iterate(static_cast<Letter>(a), n).size());
      } catch (const EnumerationOverflow&) {
        break;
      }
      std::vector<double> lrow(d);
      for (std::size_t a = 0; a < d; ++a) lrow[a] = log_of(row[a]);
      exact_.push_back(std::move(row));
      logs_.push_back(std::move(lrow));
    }
    switch_level_ = static_cast<int>(exact_.size());
    return;
  }

  method_ = CountMode::kRecurse;
  for (int n = 1; n <= max_level; ++n) {
    const bool exact = n < switch_level_;
    std::vector<mpz_class> row;
    std::vector<double> lrow(d);
    if (exact) row.resize(d);
    for (std::size_t a = 0; a < d; ++a) {
      const auto& imgs = s.images(static_cast<Letter>(a));
      if (n == 1) {
        row[a] = static_cast<unsigned long>(imgs.size());
        lrow[a] = std::log(static_cast<double>(imgs.size()));
        continue;
      }
      if (exact) {
        mpz_class sum = 0;
        for (int i : reduced_.kept[a]) {
          mpz_class prod = 1;
          for (char c : imgs[i]) prod *= exact_[n - 1][static_cast<unsigned char>(c)];
          sum += prod;
        }
        lrow[a] = log_of(sum);
        row[a] = std::move(sum);
      } else {
        std::vector<double> terms;
        for (int i : reduced_.kept[a]) {
          double t = 0;
          for (char c : imgs[i]) t += logs_[n - 1][static_cast<unsigned char>(c)];
          terms.push_back(t);
        }
        lrow[a] = logsumexp(terms);
      }
    }
    logs_.push_back(std::move(lrow));
    if (exact) {
      bool too_big = false;
      for (const auto& z : row) too_big |= mpz_sizeinbase(z.get_mpz_t(), 10) > opts.digit_budget;
      exact_.push_back(std::move(row));
      if (too_big) switch_level_ = n + 1;
    }
  }
  switch_level_ = std::min(switch_level_, static_cast<int>(exact_.size()));
}

const mpz_class& CountTable::exact(Letter a, int n) const {
  if (!has_exact(n)) throw PreconditionError("level " + std::to_string(n) + " is only available in log form");
  return exact_.at(n).at(a);
}

double CountTable::log_word_count(const Word& u, int n) const {
  double t = 0;
  for (char c : u) t += log_count(static_cast<unsigned char>(c), n);
  return t;
}

double hmk(const RandomSubstitution& s, const CountTable& t, const SpectralData& sd, int m, int k) {
  const double scale = std::pow(sd.lambda, m);
  double best = 0;
  for (std::size_t a = 0; a < s.size(); ++a) {
    for (const auto& u : s.iterate(static_cast<Letter>(a), k)) {
      double len = 0;
      for (char c : u) len += sd.L[static_cast<unsigned char>(c)];
      best = std::max(best, t.log_word_count(u, m) / (scale * len));
    }
  }
  return best;
}

double hmk_upper_bound(const RandomSubstitution& s, const CountTable& t, const SpectralData& sd,
                       int m, int k) {
  const double lm = std::pow(sd.lambda, m);
  if (lm <= 1) return std::numeric_limits<double>::infinity();
  return lm / (lm - 1) * hmk(s, t, sd, m, k);
}

EntropyReport geometric_inflation_entropy(const RandomSubstitution& s, Letter a, int max_level,
                                          const SpectralData& sd, int k, CountOptions opts) {
  if (max_level < 1) throw PreconditionError("entropy needs at least one level");
  CountTable t(s, max_level, opts);
  EntropyReport r;
  r.letter = a;
  r.k = k;
  r.normalisation = sd.normalisation;
  r.count_method = t.method();
  r.switch_level = t.switch_level();
  r.certified_lower = 0;
  r.certified_upper = std::numeric_limits<double>::infinity();
  for (int m = 1; m <= t.max_level(); ++m) {
    EntropyApproximant ap;
    ap.level = m;
    const double scale = std::pow(sd.lambda, m);
    for (std::size_t b = 0; b < s.size(); ++b)
      ap.per_letter.push_back(t.log_count(static_cast<Letter>(b), m) / (scale * sd.L[b]));
    ap.value = ap.per_letter.at(a);
    ap.lower = *std::min_element(ap.per_letter.begin(), ap.per_letter.end());
    ap.upper = hmk_upper_bound(s, t, sd, m, k);
    r.certified_lower = std::max(r.certified_lower, ap.lower);
    r.certified_upper = std::min(r.certified_upper, ap.upper);
    r.levels.push_back(std::move(ap));
  }
  r.last = r.levels.back().value;
  r.last_delta = r.levels.size() > 1 ? std::abs(r.last - r.levels[r.levels.size() - 2].value) : 0;
  return r;
}

std::size_t patch_count(const RandomSubstitution& s, const std::vector<double>& L, double ell) {
  if (ell <= 0) throw PreconditionError("patch length must be positive");
  const double minL = *std::min_element(L.begin(), L.end());
  const auto max_len = static_cast<std::size_t>(std::floor(ell / minL)) + 1;
  std::size_t n = 0;
  for (const auto& w : language(s, max_len)) {
    double head = 0;
    for (std::size_t i = 0; i + 1 < w.size(); ++i) head += L[static_cast<unsigned char>(w[i])];
    const double full = head + L[static_cast<unsigned char>(w.back())];
    if (head < ell && ell <= full) ++n;
  }
  return n;
}

SymbolicGeometricBounds symbolic_geometric_bounds(double hX, const std::vector<std::vector<double>>& etas,
                                                  const std::vector<double>& L) {
  SymbolicGeometricBounds b;
  b.min_Leta = std::numeric_limits<double>::infinity();
  b.max_Leta = 0;
  for (const auto& eta : etas) {
    double v = 0;
    for (std::size_t i = 0; i < L.size(); ++i) v += L[i] * eta.at(i);
    b.min_Leta = std::min(b.min_Leta, v);
    b.max_Leta = std::max(b.max_Leta, v);
  }
  if (etas.empty() || b.min_Leta <= 0) throw PreconditionError("need frequency vectors with positive length");
  b.lower = hX / b.max_Leta;
  b.upper = hX / b.min_Leta;
  return b;
}

CountSequence::CountSequence(const RandomSubstitution& s, int horizon, std::size_t bit_budget,
                             int dsc_level) {
  if (horizon < 0) throw PreconditionError("negative horizon");
  ReducedDscReport rep = check_reduced_dsc(s, dsc_level);
  if (!rep.passed)
    throw PreconditionError("productivity weights need disjoint images; found common word at level " +
                            std::to_string(rep.witness->level));
  reduced_ = rep.reduced;
  projective_ = s.constant_length().has_value();
  const std::size_t d = s.size();
  exact_.assign(1, std::vector<mpq_class>(d, 1));
  logs_.assign(1, std::vector<double>(d, 0.0));
  bool exact = true;
  for (int n = 1; n <= horizon; ++n) {
    std::vector<mpq_class> row;
    std::vector<double> lrow(d);
    if (exact) row.resize(d);
    for (std::size_t a = 0; a < d; ++a) {
      const auto& imgs = s.images(static_cast<Letter>(a));
      if (n == 1) {
        row[a] = static_cast<unsigned long>(imgs.size());
        continue;
      }
      if (exact) {
        mpq_class sum = 0;
        for (int i : reduced_.kept[a]) {
          mpq_class prod = 1;
          for (char c : imgs[i]) prod *= exact_[n - 1][static_cast<unsigned char>(c)];
          sum += prod;
        }
        row[a] = std::move(sum);
      } else {
        std::vector<double> terms;
        for (int i : reduced_.kept[a]) {
          double t = 0;
          for (char c : imgs[i]) t += logs_[n - 1][static_cast<unsigned char>(c)];
          terms.push_back(t);
        }
        lrow[a] = logsumexp(terms);
      }
    }
    if (exact) {
      if (projective_) {
        const mpq_class ref = row[0];
        for (auto& x : row) x /= ref;
      }
      std::size_t total = 0;
      for (std::size_t a = 0; a < d; ++a) {
        lrow[a] = log_of_q(row[a]);
        total += bits(row[a]);
      }
      exact_.push_back(std::move(row));
      if (total > bit_budget) exact = false;
    } else if (projective_) {
      const double ref = lrow[0];
      for (auto& x : lrow) x -= ref;
    }
    logs_.push_back(std::move(lrow));
  }
}

}  // namespace substrata
