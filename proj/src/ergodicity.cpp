#include "substrata/ergodicity.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <unordered_set>

#include "substrata/recognisability.hpp"

namespace substrata {

struct Recursion::Node {
  enum Kind { kNum, kVar, kAdd, kSub, kMul, kDiv, kPow, kNeg } kind;
  mpq_class value;
  std::shared_ptr<const Node> a, b;
};

namespace {

using NodePtr = std::shared_ptr<const Recursion::Node>;
using Poly = std::vector<mpq_class>;

NodePtr make(Recursion::Node::Kind k, NodePtr a = nullptr, NodePtr b = nullptr, mpq_class v = 0) {
  return std::make_shared<const Recursion::Node>(Recursion::Node{k, std::move(v), std::move(a), std::move(b)});
}

class Parser {
 public:
  explicit Parser(std::string src) : s_(std::move(src)) {}

  NodePtr parse_all() {
    NodePtr e = expr();
    skip();
    if (i_ != s_.size()) fail("unexpected '" + std::string(1, s_[i_]) + "'");
    return e;
  }

 private:
  void skip() {
    while (i_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[i_]))) ++i_;
  }
  bool eat(char c) {
    skip();
    if (i_ < s_.size() && s_[i_] == c) {
      ++i_;
      return true;
    }
    return false;
  }
  [[noreturn]] void fail(const std::string& what) const {
    throw Error("recursion: " + what + " at offset " + std::to_string(i_));
  }

  NodePtr expr() {
    NodePtr e = term();
    while (true) {
      if (eat('+')) e = make(Recursion::Node::kAdd, e, term());
      else if (eat('-')) e = make(Recursion::Node::kSub, e, term());
      else return e;
    }
  }
  NodePtr term() {
    NodePtr e = unary();
    while (true) {
      if (eat('*')) e = make(Recursion::Node::kMul, e, unary());
      else if (eat('/')) e = make(Recursion::Node::kDiv, e, unary());
      else return e;
    }
  }
  NodePtr unary() {
    if (eat('-')) return make(Recursion::Node::kNeg, unary());
    NodePtr base = primary();
    if (eat('^')) return make(Recursion::Node::kPow, base, unary());
    return base;
  }
  NodePtr primary() {
    skip();
    if (eat('(')) {
      NodePtr e = expr();
      if (!eat(')')) fail("missing ')'");
      return e;
    }
    if (i_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[i_]))) {
      std::size_t j = i_;
      while (j < s_.size() && std::isdigit(static_cast<unsigned char>(s_[j]))) ++j;
      mpq_class v(s_.substr(i_, j - i_));
      i_ = j;
      return make(Recursion::Node::kNum, nullptr, nullptr, v);
    }
    std::string rest;
    for (std::size_t j = i_; j < s_.size() && rest.size() < 4; ++j)
      if (!std::isspace(static_cast<unsigned char>(s_[j]))) rest += s_[j];
    if (rest == "r[n]") {
      for (int seen = 0; seen < 4; ++i_)
        if (!std::isspace(static_cast<unsigned char>(s_[i_]))) ++seen;
      return make(Recursion::Node::kVar);
    }
    fail("expected a number, r[n] or '('");
  }

  std::string s_;
  std::size_t i_ = 0;
};

mpq_class eval(const Recursion::Node& n, const mpq_class& x) {
  using K = Recursion::Node;
  switch (n.kind) {
    case K::kNum: return n.value;
    case K::kVar: return x;
    case K::kAdd: return eval(*n.a, x) + eval(*n.b, x);
    case K::kSub: return eval(*n.a, x) - eval(*n.b, x);
    case K::kMul: return eval(*n.a, x) * eval(*n.b, x);
    case K::kDiv: {
      mpq_class d = eval(*n.b, x);
      if (d == 0) throw Error("recursion: division by zero");
      return eval(*n.a, x) / d;
    }
    case K::kNeg: return -eval(*n.a, x);
    case K::kPow: {
      mpq_class e = eval(*n.b, x);
      if (e.get_den() != 1 || abs(e) > 64) throw Error("recursion: exponent must be a small integer");
      const long k = e.get_num().get_si();
      mpq_class base = eval(*n.a, x), r = 1;
      for (long i = 0; i < std::labs(k); ++i) r *= base;
      if (k < 0) {
        if (r == 0) throw Error("recursion: division by zero");
        r = 1 / r;
      }
      return r;
    }
  }
  return 0;
}

Poly poly_mul(const Poly& a, const Poly& b) {
  Poly r(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
  return r;
}

Poly poly_add(Poly a, const Poly& b, int sign) {
  if (a.size() < b.size()) a.resize(b.size(), 0);
  for (std::size_t i = 0; i < b.size(); ++i) a[i] += sign * b[i];
  return a;
}

std::optional<Poly> to_poly(const Recursion::Node& n) {
  using K = Recursion::Node;
  switch (n.kind) {
    case K::kNum: return Poly{n.value};
    case K::kVar: return Poly{0, 1};
    case K::kNeg: {
      auto a = to_poly(*n.a);
      if (!a) return std::nullopt;
      for (auto& c : *a) c = -c;
      return a;
    }
    case K::kAdd:
    case K::kSub:
    case K::kMul: {
      auto a = to_poly(*n.a), b = to_poly(*n.b);
      if (!a || !b) return std::nullopt;
      if (n.kind == K::kMul) return poly_mul(*a, *b);
      return poly_add(*a, *b, n.kind == K::kAdd ? 1 : -1);
    }
    case K::kDiv: {
      auto a = to_poly(*n.a), b = to_poly(*n.b);
      if (!a || !b) return std::nullopt;
      for (std::size_t i = 1; i < b->size(); ++i)
        if ((*b)[i] != 0) return std::nullopt;
      if ((*b)[0] == 0) return std::nullopt;
      for (auto& c : *a) c /= (*b)[0];
      return a;
    }
    case K::kPow: {
      auto a = to_poly(*n.a), e = to_poly(*n.b);
      if (!a || !e) return std::nullopt;
      for (std::size_t i = 1; i < e->size(); ++i)
        if ((*e)[i] != 0) return std::nullopt;
      const mpq_class k = (*e)[0];
      if (k.get_den() != 1 || k < 0 || k > 64) return std::nullopt;
      Poly r{1};
      for (long i = 0; i < k.get_num().get_si(); ++i) r = poly_mul(r, *a);
      return r;
    }
  }
  return std::nullopt;
}

std::string strip(const std::string& s) {
  std::string out;
  for (char c : s)
    if (!std::isspace(static_cast<unsigned char>(c))) out += c;
  return out;
}

}  // namespace

Recursion Recursion::parse(const std::string& text) {
  const auto eq = text.find('=');
  if (eq == std::string::npos) throw Error("recursion: expected 'r[n+1] = ...'");
  if (strip(text.substr(0, eq)) != "r[n+1]") throw Error("recursion: left-hand side must be r[n+1]");
  Recursion r;
  r.text_ = text;
  r.root_ = Parser(text.substr(eq + 1)).parse_all();
  return r;
}

mpq_class Recursion::next(const mpq_class& r) const { return eval(*root_, r); }

std::optional<std::vector<mpq_class>> Recursion::polynomial() const {
  auto p = to_poly(*root_);
  if (!p) return std::nullopt;
  while (p->size() > 1 && p->back() == 0) p->pop_back();
  return p;
}

RatioTrace productivity_ratio_trace(const CountSequence& cs, const CountClasses& classes,
                                    const std::optional<Recursion>& claim) {
  RatioTrace t;
  const bool has_classes = !classes.p.empty() && !classes.q.empty();
  for (int n = 0; n <= cs.horizon(); ++n) {
    const auto& lx = cs.log_vector(n);
    std::vector<double> row;
    for (double v : lx) row.push_back(v - lx[0]);
    t.per_letter_log.push_back(std::move(row));
    if (!has_classes) continue;
    t.log_r.push_back(lx.at(classes.p[0]) - lx.at(classes.q[0]));
    if (!cs.exact(n)) continue;
    const auto& x = cs.exact_vector(n);
    for (const auto* cls : {&classes.p, &classes.q})
      for (Letter a : *cls)
        if (x.at(a) != x.at((*cls)[0]) && t.classes_ok) {
          t.classes_ok = false;
          t.class_violation = "level " + std::to_string(n) + ": letters " + std::to_string((*cls)[0]) + " and " +
                              std::to_string(a) + " have different counts";
        }
    t.r.push_back(x.at(classes.p[0]) / x.at(classes.q[0]));
  }
  if (claim && has_classes) {
    RecursionCheck rc;
    rc.recursion = claim->text();
    for (std::size_t n = 0; n + 1 < t.r.size(); ++n) {
      if (claim->next(t.r[n]) != t.r[n + 1]) {
        rc.first_failure = static_cast<int>(n + 1);
        break;
      }
      rc.checked_up_to = static_cast<int>(n + 1);
    }
    rc.validated = t.classes_ok && !rc.first_failure && rc.checked_up_to >= 1;
    t.recursion = rc;
  }
  return t;
}

int positive_marginal_power(const RandomSubstitution& s, int max_power) {
  const std::size_t d = s.size();
  if (d > 31) return 0;
  const std::uint32_t full = (1u << d) - 1;
  std::vector<std::unordered_set<std::uint32_t>> S(d);
  for (std::size_t a = 0; a < d; ++a) S[a].insert(1u << a);
  for (int n = 1; n <= max_power; ++n) {
    std::vector<std::unordered_set<std::uint32_t>> next(d);
    for (std::size_t a = 0; a < d; ++a)
      for (const auto& v : s.images(static_cast<Letter>(a))) {
        std::unordered_set<std::uint32_t> acc{0};
        for (char c : v) {
          std::unordered_set<std::uint32_t> step;
          for (auto m : acc)
            for (auto t : S[static_cast<unsigned char>(c)]) step.insert(m | t);
          acc.swap(step);
        }
        next[a].insert(acc.begin(), acc.end());
      }
    S.swap(next);
    bool all = true;
    for (const auto& fam : S)
      for (auto m : fam) all &= m == full;
    if (all) return n;
  }
  return 0;
}

bool is_compatible(const RandomSubstitution& s) {
  for (std::size_t a = 0; a < s.size(); ++a) {
    const auto& imgs = s.images(static_cast<Letter>(a));
    const auto ref = abelianise(imgs[0], s.size());
    for (const auto& v : imgs)
      if (abelianise(v, s.size()) != ref) return false;
  }
  return true;
}

namespace {

BlockMass block_mass(const std::vector<QMatrix>& q, const std::vector<Letter>& block, int H,
                     const std::optional<mpq_class>& r_tail, double c_limit) {
  BlockMass m;
  m.block = block;
  const std::size_t k = block.size();
  QMatrix prod = QMatrix::identity(k);
  for (int i = 0; i < H; ++i) {
    QMatrix A(k, k);
    for (std::size_t x = 0; x < k; ++x)
      for (std::size_t y = 0; y < k; ++y) A(x, y) = q[i](block[x], block[y]);
    auto cs = column_sums(A);
    m.s.push_back(*std::min_element(cs.begin(), cs.end()));
    prod = prod * A;
  }
  auto cs = column_sums(prod);
  m.finite = *std::min_element(cs.begin(), cs.end());
  m.c = c_limit;
  if (r_tail && *r_tail > 1) {
    const double r = r_tail->get_d();
    if (m.c / r <= 0.79) m.tail = std::exp(-2.0 * m.c / (r - 1.0));
  }
  m.total = m.finite.get_d() * m.tail;
  return m;
}

// max_n (1 - s_n) r_{n+1} over the prefix.
double tail_constant(const std::vector<mpq_class>& s, const std::vector<mpq_class>& r) {
  double c = 0;
  for (std::size_t n = 0; n < s.size() && n + 1 < r.size(); ++n) {
    mpq_class v = (1 - s[n]) * r[n + 1];
    c = std::max(c, v.get_d());
  }
  return c;
}

}  // namespace

TrappingCertificate trapping_certificate(const std::vector<QMatrix>& q, const RatioTrace& trace,
                                         const TrappingOptions& opts) {
  TrappingCertificate cert;
  const int H = opts.horizon;
  cert.horizon = H;
  if (static_cast<int>(q.size()) < H) {
    cert.reason = "exact Q_n unavailable up to the horizon";
    return cert;
  }
  const std::size_t d = q[0].rows();

  // The analytic tail needs r_{n+1} >= r_n^2 for all n >= H, which follows
  // from a validated polynomial recursion with nonnegative coefficients,
  // degree >= 2 and leading coefficient >= 1 once r_n >= 1.
  std::optional<mpq_class> r_tail;
  std::string tail_issue;
  if (!trace.recursion || !trace.recursion->validated) {
    tail_issue = "no validated recursion for r_n";
  } else if (trace.recursion->checked_up_to < H + 1) {
    tail_issue = "recursion validated only to " + std::to_string(trace.recursion->checked_up_to);
  } else {
    auto p = Recursion::parse(trace.recursion->recursion).polynomial();
    bool ok = p && p->size() >= 3 && p->back() >= 1;
    if (ok)
      for (const auto& c : *p) ok &= c >= 0;
    if (!ok || trace.r.at(H) < 1) tail_issue = "recursion is not super-geometric";
    else r_tail = trace.r.at(H + 1);
  }

  auto mass_of = [&](const std::vector<Letter>& b) {
    BlockMass probe = block_mass(q, b, H, std::nullopt, 0);
    const double c = tail_constant(probe.s, trace.r);
    return block_mass(q, b, H, r_tail, c);
  };

  if (opts.blocks) {
    cert.blocks = *opts.blocks;
    cert.m1 = mass_of(cert.blocks.b1);
    cert.m2 = mass_of(cert.blocks.b2);
  } else {
    if (d > 6) {
      cert.reason = "block auto-search is limited to 6 letters";
      return cert;
    }
    std::vector<BlockMass> masses(1u << d);
    auto letters = [&](unsigned mask) {
      std::vector<Letter> b;
      for (std::size_t a = 0; a < d; ++a)
        if (mask >> a & 1u) b.push_back(static_cast<Letter>(a));
      return b;
    };
    for (unsigned mask = 1; mask < (1u << d); ++mask) masses[mask] = mass_of(letters(mask));
    double best = -1;
    for (unsigned m1 = 1; m1 < (1u << d); ++m1)
      for (unsigned m2 = m1 + 1; m2 < (1u << d); ++m2) {
        if (m1 & m2) continue;
        const double score = masses[m1].total + masses[m2].total;
        const double finite = masses[m1].finite.get_d() + masses[m2].finite.get_d();
        const double key = r_tail ? score : finite;
        if (key > best) {
          best = key;
          cert.blocks = {letters(m1), letters(m2)};
          cert.m1 = masses[m1];
          cert.m2 = masses[m2];
        }
      }
  }
  cert.gap = cert.m1.total + cert.m2.total - 1;
  if (!r_tail) {
    cert.reason = tail_issue + "; finite horizon only";
  } else if (cert.m1.tail == 0 || cert.m2.tail == 0) {
    cert.reason = "tail bound not applicable: s_n too far from 1";
  } else if (cert.gap <= 0) {
    cert.reason = "trapped masses do not exceed 1 in total";
  } else {
    cert.certified = true;
  }
  return cert;
}

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::kErgodicCertified: return "ErgodicCertified";
    case Verdict::kNonErgodicCertified: return "NonErgodicCertified";
    case Verdict::kUndetermined: return "Undetermined";
  }
  return "?";
}

ErgodicityReport ergodicity_test(const RandomSubstitution& s, const SpectralData& sd,
                                 const ErgodicityOptions& opts) {
  ErgodicityReport rep;
  const std::size_t d = s.size();

  const PrimitivityVerdict prim = is_primitive(s);
  const GeometryClass geo = classify_geometry(s);
  const DscReport dsc = check_dsc(s, opts.dsc_level);
  rep.preconditions.push_back({"primitive", prim.primitive, "power " + std::to_string(prim.power)});
  rep.preconditions.push_back({"geometrically-compatible", geo.geometrically_compatible, ""});
  rep.preconditions.push_back(
      {"disjoint-set-condition", dsc.passed,
       dsc.passed ? "verified to level " + std::to_string(dsc.verified_level)
                  : "common word at level " + std::to_string(dsc.witness->level)});

  const bool compatible = is_compatible(s);
  const int mpow = positive_marginal_power(s, opts.max_marginal_power);
  ChecklistItem c_compat{"compatible", compatible, ""};
  ChecklistItem c_limit{"primitive-Q-limit", false, ""};
  ChecklistItem c_marg{"positive-marginal-power", mpow > 0,
                       mpow > 0 ? "n = " + std::to_string(mpow)
                                : "none up to n = " + std::to_string(opts.max_marginal_power)};
  ChecklistItem c_bin{"binary-alphabet", d == 2, ""};

  const bool pre_ok = prim.primitive && geo.geometrically_compatible && dsc.passed;
  if (!pre_ok) {
    c_limit.detail = "not evaluated";
    rep.checklist = {c_compat, c_limit, c_marg, c_bin};
    rep.reason = "preconditions not met";
    rep.notes.push_back(
        "the characterisation needs a primitive, geometrically compatible, recognisable substitution; "
        "a failed disjoint set condition rules out recognisability");
    return rep;
  }
  rep.notes.push_back("recognisability is assumed from the disjoint set condition verified to level " +
                      std::to_string(dsc.verified_level));

  const int H = opts.trapping.horizon;
  const int need = std::max(opts.horizon, H + 1);
  CountSequence cs(s, need, 200'000, opts.dsc_level);
  QSequence qs = productivity_q_sequence(s, cs, sd, opts.horizon);
  const auto& Q = qs.q;

  // Cauchy window and the support of the limit.
  for (int n = 0; n + opts.cauchy_window <= opts.horizon; ++n) {
    double spread = 0;
    for (int i = n; i < n + opts.cauchy_window; ++i)
      for (int j = i + 1; j < n + opts.cauchy_window; ++j) spread = std::max(spread, max_abs_diff(Q[i], Q[j]));
    if (spread <= opts.cauchy_tol) {
      rep.cauchy_index = n;
      break;
    }
  }
  if (rep.cauchy_index) {
    DMatrix lim = Q[*rep.cauchy_index + opts.cauchy_window - 1];
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = 0; j < d; ++j)
        if (lim(i, j) < opts.support_threshold) lim(i, j) = 0;
    const int p = primitivity_power(lim);
    c_limit.holds = p > 0;
    c_limit.detail = "Cauchy from n = " + std::to_string(*rep.cauchy_index) +
                     (p > 0 ? ", limit primitive (power " + std::to_string(p) + ")" : ", limit not primitive");
  } else {
    c_limit.detail = "no Cauchy window up to n = " + std::to_string(opts.horizon);
  }
  rep.checklist = {c_compat, c_limit, c_marg, c_bin};
  for (const auto& item : rep.checklist)
    if (item.holds) {
      rep.verdict = Verdict::kErgodicCertified;
      rep.reason = item.name;
      break;
    }

  for (const auto& q : Q) {
    rep.delta.push_back(dobrushin(q));
    rep.delta_product *= rep.delta.back();
  }
  if (rep.verdict == Verdict::kUndetermined && rep.delta_product < opts.delta_threshold) {
    rep.verdict = Verdict::kErgodicCertified;
    rep.reason = "delta-product";
  }

  // Backward products are independent per start index.
  const int starts = std::min(opts.start_cap, opts.horizon);
  rep.backward.assign(starts, {});
#pragma omp parallel for schedule(dynamic)
  for (int n = 0; n < starts; ++n) {
    DMatrix P = Q[n];
    std::vector<double> trace{dobrushin(P)};
    for (int k = n + 1; k < opts.horizon; ++k) {
      P = P * Q[k];
      trace.push_back(dobrushin(P));
    }
    rep.backward[n] = std::move(trace);
  }

  rep.ratios = productivity_ratio_trace(cs, opts.classes, opts.recursion);
  if (rep.verdict != Verdict::kUndetermined) return rep;

  std::vector<QMatrix> exact;
  for (int n = 0; n < H; ++n) {
    if (n >= static_cast<int>(qs.exact.size()) || !qs.exact[n]) break;
    exact.push_back(*qs.exact[n]);
  }
  if (static_cast<int>(exact.size()) < H) {
    // Exact Q_n beyond the ergodicity horizon.
    QSequence more = productivity_q_sequence(s, cs, sd, H);
    exact.clear();
    for (auto& e : more.exact)
      if (e) exact.push_back(*e);
  }
  rep.trapping = trapping_certificate(exact, *rep.ratios, opts.trapping);
  if (rep.trapping->certified) {
    rep.verdict = Verdict::kNonErgodicCertified;
    rep.reason = "trapping";
  } else {
    rep.reason = "no test fired";
  }
  return rep;
}

}  // namespace substrata
