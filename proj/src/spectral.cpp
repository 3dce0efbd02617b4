#include "substrata/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace substrata {

QMatrix marginal_matrix(const RandomSubstitution& s, const Marginal& m) {
  const std::size_t d = s.size();
  QMatrix M(d, d);
  for (std::size_t b = 0; b < d; ++b)
    for (char c : s.images(b).at(m.at(b))) M(static_cast<unsigned char>(c), b) += 1;
  return M;
}

QMatrix uniform_matrix(const RandomSubstitution& s) {
  const std::size_t d = s.size();
  QMatrix M(d, d);
  for (std::size_t b = 0; b < d; ++b) {
    const auto& imgs = s.images(b);
    mpq_class w(1, imgs.size());
    for (const auto& v : imgs)
      for (char c : v) M(static_cast<unsigned char>(c), b) += w;
  }
  return M;
}

std::string to_string(Normalisation n) {
  switch (n) {
    case Normalisation::kLROne: return "R-sum-one+LR-one";
    case Normalisation::kLUser: return "R-sum-one+L-user";
    case Normalisation::kLSumOne: return "R-sum-one+L-sum-one";
  }
  return "?";
}

double SpectralData::LR() const {
  double s = 0;
  for (std::size_t i = 0; i < L.size(); ++i) s += L[i] * R[i];
  return s;
}

int primitivity_power(const DMatrix& M) {
  const std::size_t d = M.rows();
  std::vector<char> B(d * d), P(d * d);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) B[i * d + j] = P[i * d + j] = M(i, j) > 0;
  const int bound = static_cast<int>((d - 1) * (d - 1) + 1);
  for (int p = 1; p <= bound; ++p) {
    if (std::all_of(P.begin(), P.end(), [](char x) { return x != 0; })) return p;
    std::vector<char> N(d * d, 0);
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t k = 0; k < d; ++k)
        if (P[i * d + k])
          for (std::size_t j = 0; j < d; ++j)
            if (B[k * d + j]) N[i * d + j] = 1;
    P.swap(N);
  }
  return 0;
}

namespace {

std::vector<double> power_vector(const DMatrix& M, int budget, double tol, double& lambda,
                                 int& iters) {
  const std::size_t d = M.rows();
  std::vector<double> x(d, 1.0 / static_cast<double>(d));
  lambda = 0;
  for (iters = 1; iters <= budget; ++iters) {
    std::vector<double> y = M * x;
    double norm = std::accumulate(y.begin(), y.end(), 0.0);
    if (!(norm > 0)) throw PreconditionError("not primitive: zero iterate");
    double change = 0;
    for (std::size_t i = 0; i < d; ++i) {
      y[i] /= norm;
      change = std::max(change, std::abs(y[i] - x[i]));
    }
    x.swap(y);
    const double prev = lambda;
    lambda = norm;
    if (std::abs(lambda - prev) <= tol * std::max(1.0, lambda) && change <= 1e-15) return x;
  }
  throw Error("no convergence of power iteration");
}

}  // namespace

SpectralData pf_data(const DMatrix& M, int budget, double tol) {
  if (M.rows() != M.cols() || M.rows() == 0) throw Error("square matrix required");
  if (primitivity_power(M) == 0) throw PreconditionError("not primitive");
  SpectralData sd;
  int it1 = 0, it2 = 0;
  double lr = 0, ll = 0;
  sd.R = power_vector(M, budget, tol, lr, it1);
  sd.L = power_vector(M.transpose(), budget, tol, ll, it2);
  sd.lambda = 0.5 * (lr + ll);
  sd.iterations = std::max(it1, it2);
  const double lr_dot = sd.LR();
  for (double& v : sd.L) v /= lr_dot;
  auto MR = M * sd.R;
  auto LM = M.transpose() * sd.L;
  for (std::size_t i = 0; i < M.rows(); ++i)
    sd.residual = std::max({sd.residual, std::abs(MR[i] - sd.lambda * sd.R[i]),
                            std::abs(LM[i] - sd.lambda * sd.L[i])});
  return sd;
}

PrimitivityVerdict is_primitive(const RandomSubstitution& s) {
  PrimitivityVerdict v;
  DMatrix M = to_double(uniform_matrix(s));
  v.power = primitivity_power(M);
  if (v.power == 0) return v;
  v.lambda = pf_data(M).lambda;
  v.primitive = v.lambda > 1 + 1e-12;
  if (!v.primitive) v.power = 0;
  return v;
}

namespace {

std::size_t rank(QMatrix A) {
  const std::size_t n = A.rows(), m = A.cols();
  std::size_t row = 0;
  for (std::size_t col = 0; col < m && row < n; ++col) {
    std::size_t p = row;
    while (p < n && A(p, col) == 0) ++p;
    if (p == n) continue;
    for (std::size_t j = 0; j < m; ++j) std::swap(A(row, j), A(p, j));
    for (std::size_t i = row + 1; i < n; ++i) {
      if (A(i, col) == 0) continue;
      mpq_class f = A(i, col) / A(row, col);
      for (std::size_t j = col; j < m; ++j) A(i, j) -= f * A(row, j);
    }
    ++row;
  }
  return row;
}

}  // namespace

std::optional<mpq_class> integer_eigenvalue(const QMatrix& M, double approx) {
  const double k = std::round(approx);
  if (std::abs(k - approx) > 1e-8 * std::max(1.0, std::abs(approx))) return std::nullopt;
  QMatrix A = M;
  for (std::size_t i = 0; i < A.rows(); ++i) A(i, i) -= mpq_class(static_cast<long>(k));
  if (rank(A) == A.rows()) return std::nullopt;
  return mpq_class(static_cast<long>(k));
}

std::optional<std::vector<mpq_class>> kernel_vector(QMatrix A) {
  const std::size_t n = A.rows(), m = A.cols();
  std::vector<std::size_t> pivot_col;
  std::size_t row = 0;
  for (std::size_t col = 0; col < m && row < n; ++col) {
    std::size_t p = row;
    while (p < n && A(p, col) == 0) ++p;
    if (p == n) continue;
    for (std::size_t j = 0; j < m; ++j) std::swap(A(row, j), A(p, j));
    mpq_class inv = 1 / A(row, col);
    for (std::size_t j = 0; j < m; ++j) A(row, j) *= inv;
    for (std::size_t i = 0; i < n; ++i) {
      if (i == row || A(i, col) == 0) continue;
      mpq_class f = A(i, col);
      for (std::size_t j = 0; j < m; ++j) A(i, j) -= f * A(row, j);
    }
    pivot_col.push_back(col);
    ++row;
  }
  if (pivot_col.size() + 1 != m) return std::nullopt;
  std::size_t free_col = 0;
  for (std::size_t c = 0, k = 0; c < m; ++c) {
    if (k < pivot_col.size() && pivot_col[k] == c) {
      ++k;
      continue;
    }
    free_col = c;
  }
  std::vector<mpq_class> v(m, 0);
  v[free_col] = 1;
  for (std::size_t k = 0; k < pivot_col.size(); ++k) v[pivot_col[k]] = -A(k, free_col);
  mpq_class sum = 0;
  for (const auto& x : v) sum += x;
  if (sum == 0) return std::nullopt;
  for (auto& x : v) x /= sum;
  if (std::any_of(v.begin(), v.end(), [](const mpq_class& x) { return x < 0; })) return std::nullopt;
  return v;
}

GeometryClass classify_geometry(const RandomSubstitution& s, double tol) {
  GeometryClass g;
  const std::size_t d = s.size();
  if (auto ell = s.constant_length()) {
    g.constant_length = true;
    g.length = *ell;
  }
  g.compatible = true;
  for (std::size_t a = 0; a < d; ++a) {
    const auto& imgs = s.images(a);
    auto first = abelianise(imgs.front(), d);
    for (const auto& v : imgs)
      if (abelianise(v, d) != first) g.compatible = false;
  }

  // A single marginal may be reducible, so the candidate (λ, L) comes from the
  // uniform matrix, which shares L whenever ϑ is geometrically compatible.
  QMatrix Mu = uniform_matrix(s);
  DMatrix Md = to_double(Mu);
  if (primitivity_power(Md) == 0) return g;
  SpectralData sd = pf_data(Md);
  g.lambda = sd.lambda;
  g.L = sd.L;
  double sumL = std::accumulate(g.L.begin(), g.L.end(), 0.0);
  for (double& x : g.L) x /= sumL;

  if (auto k = integer_eigenvalue(Mu, sd.lambda)) {
    QMatrix A = Mu;
    for (std::size_t i = 0; i < d; ++i) A(i, i) -= *k;
    if (auto L = kernel_vector(A.transpose())) {
      g.lambda_exact = *k;
      g.L_exact = *L;
    }
  }

  // L·M_θ = λL for every marginal is a per-image condition.
  g.geometrically_compatible = g.lambda > 1;
  for (std::size_t b = 0; b < d && g.geometrically_compatible; ++b) {
    const auto& imgs = s.images(b);
    for (std::size_t i = 0; i < imgs.size(); ++i) {
      bool ok;
      if (g.L_exact) {
        mpq_class lhs = 0;
        for (char c : imgs[i]) lhs += (*g.L_exact)[static_cast<unsigned char>(c)];
        ok = lhs == *g.lambda_exact * (*g.L_exact)[b];
      } else {
        double lhs = 0;
        for (char c : imgs[i]) lhs += g.L[static_cast<unsigned char>(c)];
        double rel = std::abs(lhs - g.lambda * g.L[b]) / (g.lambda * g.L[b]);
        g.max_relative_residual = std::max(g.max_relative_residual, rel);
        ok = rel <= tol;
      }
      if (!ok) {
        g.geometrically_compatible = false;
        Marginal m(d, 0);
        m[b] = static_cast<int>(i);
        g.violating = m;
        break;
      }
    }
  }
  g.exact = g.L_exact.has_value();
  if (g.L_exact)
    for (std::size_t a = 0; a < d; ++a) g.L[a] = (*g.L_exact)[a].get_d();
  return g;
}

namespace {

DMatrix weighted_matrix(const RandomSubstitution& s, const std::vector<std::vector<double>>& w) {
  const std::size_t d = s.size();
  DMatrix M(d, d);
  for (std::size_t b = 0; b < d; ++b)
    for (std::size_t i = 0; i < s.images(b).size(); ++i)
      for (char c : s.images(b)[i]) M(static_cast<unsigned char>(c), b) += w[b][i];
  return M;
}

}  // namespace

SpectralData substitution_spectrum(const RandomSubstitution& s,
                                   const std::optional<std::vector<mpq_class>>& declared_L,
                                   double tol) {
  const std::size_t d = s.size();
  QMatrix Mu = uniform_matrix(s);
  SpectralData sd = pf_data(to_double(Mu));
  GeometryClass g = classify_geometry(s, tol);
  if (g.lambda_exact) {
    QMatrix A = Mu;
    for (std::size_t i = 0; i < d; ++i) A(i, i) -= *g.lambda_exact;
    sd.R_exact = kernel_vector(A);
    if (sd.R_exact) {
      sd.lambda_exact = g.lambda_exact;
      for (std::size_t a = 0; a < d; ++a) sd.R[a] = (*sd.R_exact)[a].get_d();
      sd.lambda = g.lambda_exact->get_d();
    }
  }
  const std::vector<double> L0 = sd.L;

  // L·R(P) for several non-degenerate P decides whether LR = 1 is a valid
  // normalisation.
  bool lr_constant = g.geometrically_compatible;
  if (lr_constant) {
    std::vector<std::vector<double>> w(d);
    for (std::size_t b = 0; b < d; ++b) w[b].assign(s.images(b).size(), 1.0 / s.images(b).size());
    const double base = sd.LR();
    for (std::size_t b = 0; b < d && lr_constant; ++b) {
      const std::size_t k = s.images(b).size();
      if (k < 2) continue;
      for (std::size_t i = 0; i < k && lr_constant; ++i) {
        auto wp = w;
        for (std::size_t j = 0; j < k; ++j) wp[b][j] = (j == i) ? 0.9 : 0.1 / static_cast<double>(k - 1);
        SpectralData alt = pf_data(weighted_matrix(s, wp));
        double lr = 0;
        for (std::size_t a = 0; a < d; ++a) lr += L0[a] * alt.R[a];
        if (std::abs(lr - base) > 1e-9 * std::abs(base)) lr_constant = false;
      }
    }
  }

  if (declared_L) {
    if (declared_L->size() != d) throw Error("declared lengths: one entry per letter required");
    std::vector<double> Ld(d);
    for (std::size_t a = 0; a < d; ++a) {
      if ((*declared_L)[a] <= 0) throw Error("declared lengths must be positive");
      Ld[a] = (*declared_L)[a].get_d();
    }
    if (g.L_exact) {
      // Exact proportionality to the computed direction.
      const mpq_class ratio = (*declared_L)[0] / (*g.L_exact)[0];
      for (std::size_t a = 0; a < d; ++a)
        if ((*declared_L)[a] != ratio * (*g.L_exact)[a])
          throw Error("declared lengths are not a left PF eigenvector");
    } else {
      const double ratio = Ld[0] / L0[0];
      for (std::size_t a = 0; a < d; ++a)
        if (std::abs(Ld[a] - ratio * L0[a]) > tol * std::abs(Ld[a]))
          throw Error("declared lengths are not a left PF eigenvector");
    }
    sd.L = Ld;
    sd.L_exact = *declared_L;
    sd.normalisation = Normalisation::kLUser;
    return sd;
  }

  if (lr_constant) {
    sd.normalisation = Normalisation::kLROne;
    if (g.L_exact && sd.R_exact) {
      mpq_class lr = 0;
      for (std::size_t a = 0; a < d; ++a) lr += (*g.L_exact)[a] * (*sd.R_exact)[a];
      std::vector<mpq_class> L(d);
      for (std::size_t a = 0; a < d; ++a) {
        L[a] = (*g.L_exact)[a] / lr;
        sd.L[a] = L[a].get_d();
      }
      sd.L_exact = L;
    } else {
      const double lr = sd.LR();
      for (double& x : sd.L) x /= lr;
    }
  } else {
    sd.normalisation = Normalisation::kLSumOne;
    if (g.L_exact) {
      sd.L_exact = g.L_exact;
      for (std::size_t a = 0; a < d; ++a) sd.L[a] = (*g.L_exact)[a].get_d();
    } else {
      const double sum = std::accumulate(sd.L.begin(), sd.L.end(), 0.0);
      for (double& x : sd.L) x /= sum;
    }
  }
  return sd;
}

}  // namespace substrata
