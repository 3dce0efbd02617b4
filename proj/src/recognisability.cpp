#include "substrata/recognisability.hpp"

#include <algorithm>
#include <set>
#include <tuple>

#include "substrata/derivation.hpp"

namespace substrata {

namespace {

template <class PairFilter>
DscReport check_pairs(const RandomSubstitution& s, int max_level, PairFilter include) {
  DscReport r;
  for (int n = 1; n <= max_level; ++n) {
    for (std::size_t a = 0; a < s.size(); ++a) {
      const auto& imgs = s.images(a);
      for (std::size_t i = 0; i < imgs.size(); ++i)
        for (std::size_t j = i + 1; j < imgs.size(); ++j) {
          if (!include(a, i, j)) continue;
          if (auto w = common_word(s, imgs[i], imgs[j], n)) {
            r.witness = DscWitness{static_cast<Letter>(a), imgs[i], imgs[j], n, *w};
            return r;
          }
        }
    }
    r.verified_level = n;
  }
  r.passed = true;
  return r;
}

}  // namespace

DscReport check_dsc(const RandomSubstitution& s, int max_level) {
  return check_pairs(s, max_level, [](std::size_t, std::size_t, std::size_t) { return true; });
}

bool recheck_witness(const RandomSubstitution& s, const DscWitness& w) {
  if (w.u == w.v) return false;
  if (s.image_index(w.letter, w.u) < 0 || s.image_index(w.letter, w.v) < 0) return false;
  return derives(s, w.u, w.level, w.common) && derives(s, w.v, w.level, w.common);
}

bool ReducedImages::trivial() const {
  return std::all_of(dropped.begin(), dropped.end(), [](const auto& d) { return d.empty(); });
}

ReducedImages reduce_images(const RandomSubstitution& s) {
  ReducedImages r;
  r.kept.resize(s.size());
  r.dropped.resize(s.size());
  for (std::size_t a = 0; a < s.size(); ++a) {
    const auto& imgs = s.images(a);
    std::vector<std::vector<Word>> next;
    for (const auto& v : imgs) next.push_back(s.apply(v));
    auto subset = [&](std::size_t i, std::size_t j) {
      return std::includes(next[j].begin(), next[j].end(), next[i].begin(), next[i].end());
    };
    for (std::size_t i = 0; i < imgs.size(); ++i) {
      int dom = -1;
      for (std::size_t j = 0; j < imgs.size() && dom < 0; ++j) {
        if (j == i || !subset(i, j)) continue;
        const bool equal = next[i].size() == next[j].size();
        if (!equal || j < i) dom = static_cast<int>(j);
      }
      if (dom < 0)
        r.kept[a].push_back(static_cast<int>(i));
      else
        r.dropped[a].emplace_back(static_cast<int>(i), dom);
    }
  }
  return r;
}

ReducedDscReport check_reduced_dsc(const RandomSubstitution& s, int max_level) {
  ReducedDscReport r;
  r.reduced = reduce_images(s);
  const auto& kept = r.reduced.kept;
  DscReport d = check_pairs(s, max_level, [&](std::size_t a, std::size_t i, std::size_t j) {
    auto has = [&](std::size_t x) {
      return std::find(kept[a].begin(), kept[a].end(), static_cast<int>(x)) != kept[a].end();
    };
    return has(i) && has(j);
  });
  r.passed = d.passed;
  r.verified_level = d.verified_level;
  r.witness = d.witness;
  return r;
}

std::vector<std::size_t> DecompositionWitness::interior(std::size_t word_length) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < pieces.size(); ++i)
    if (starts[i] >= 0 && starts[i] + static_cast<long>(pieces[i].size()) <= static_cast<long>(word_length))
      out.push_back(i);
  return out;
}

std::vector<DecompositionWitness> desubstitute(const RandomSubstitution& s, const Word& w,
                                               const std::unordered_set<Word>* legal) {
  const std::size_t N = w.size();
  if (N == 0) return {};
  const std::size_t minlen = s.min_image_length();
  const std::size_t parent_len = (N + minlen - 1) / minlen + 2;
  std::unordered_set<Word> own;
  if (!legal) {
    for (auto& x : language(s, parent_len)) own.insert(std::move(x));
    legal = &own;
  }
  std::vector<DecompositionWitness> out;
  DecompositionWitness cur;
  auto matches = [&](const Word& v, std::size_t from, long at) {
    // v[from..] against w[at..], over the overlap.
    for (std::size_t i = from; i < v.size(); ++i) {
      long p = at + static_cast<long>(i - from);
      if (p >= static_cast<long>(N)) break;
      if (v[i] != w[static_cast<std::size_t>(p)]) return false;
    }
    return true;
  };
  auto rec = [&](auto&& self, long pos) -> void {
    if (pos >= static_cast<long>(N)) {
      out.push_back(cur);
      return;
    }
    for (std::size_t x = 0; x < s.size(); ++x) {
      cur.parent.push_back(static_cast<char>(x));
      if (legal->count(cur.parent)) {
        for (const auto& v : s.images(x)) {
          if (!matches(v, 0, pos)) continue;
          cur.pieces.push_back(v);
          cur.starts.push_back(pos);
          self(self, pos + static_cast<long>(v.size()));
          cur.pieces.pop_back();
          cur.starts.pop_back();
        }
      }
      cur.parent.pop_back();
    }
  };
  for (std::size_t x = 0; x < s.size(); ++x) {
    for (const auto& v : s.images(x)) {
      for (std::size_t k = 0; k < v.size(); ++k) {
        if (!matches(v, k, 0)) continue;
        cur = DecompositionWitness{};
        cur.parent.push_back(static_cast<char>(x));
        cur.pieces.push_back(v);
        cur.starts.push_back(-static_cast<long>(k));
        cur.phase = k;
        rec(rec, static_cast<long>(v.size() - k));
      }
    }
  }
  return out;
}

std::size_t distinct_interiors(const std::vector<DecompositionWitness>& ds, std::size_t word_length) {
  std::set<std::vector<std::tuple<long, char, Word>>> seen;
  for (const auto& d : ds) {
    std::vector<std::tuple<long, char, Word>> key;
    for (std::size_t i = 0; i < d.pieces.size(); ++i)
      if (d.starts[i] >= 0 && d.starts[i] + static_cast<long>(d.pieces[i].size()) <= static_cast<long>(word_length))
        key.emplace_back(d.starts[i], d.parent[i], d.pieces[i]);
    seen.insert(std::move(key));
  }
  return seen.size();
}

std::string to_string(RecogStatus s) {
  switch (s) {
    case RecogStatus::kCertifiedAtWindow: return "CertifiedAtWindow";
    case RecogStatus::kRefutedDsc: return "RefutedDSC";
    case RecogStatus::kInconclusive: return "Inconclusive";
  }
  return "?";
}

std::size_t default_window(const RandomSubstitution& s) { return 8 * s.max_image_length(); }

RecogVerdict verify_recognisability(const RandomSubstitution& s, std::size_t window, int dsc_level) {
  RecogVerdict v;
  v.window = window;
  DscReport dsc = check_dsc(s, dsc_level);
  if (!dsc.passed) {
    v.status = RecogStatus::kRefutedDsc;
    v.dsc_witness = dsc.witness;
    v.details = "disjoint set condition fails at level " + std::to_string(dsc.witness->level);
    return v;
  }
  const std::size_t minlen = s.min_image_length();
  const std::size_t parent_len = (window + minlen - 1) / minlen + 2;
  std::vector<Word> lang = language(s, std::max(window, parent_len));
  std::unordered_set<Word> legal(lang.begin(), lang.end());
  std::vector<const Word*> words;
  for (const auto& w : lang)
    if (w.size() == window) words.push_back(&w);
  v.words_checked = words.size();
  const long centre = static_cast<long>(window / 2);
  long first_bad = -1;
  bool anomaly = false;
#pragma omp parallel for schedule(dynamic, 16)
  for (long i = 0; i < static_cast<long>(words.size()); ++i) {
    auto ds = desubstitute(s, *words[i], &legal);
    bool ok = !ds.empty();
    if (ds.empty()) {
#pragma omp critical
      anomaly = true;
    }
    std::optional<std::pair<long, char>> ref;
    for (const auto& d : ds) {
      for (std::size_t k = 0; k < d.pieces.size(); ++k) {
        const long st = d.starts[k];
        if (st <= centre && centre < st + static_cast<long>(d.pieces[k].size())) {
          std::pair<long, char> key{st, d.parent[k]};
          if (!ref) ref = key;
          else if (*ref != key) ok = false;
        }
      }
    }
    if (!ok) {
#pragma omp critical
      if (first_bad < 0 || i < first_bad) first_bad = i;
    }
  }
  if (first_bad >= 0) {
    v.status = RecogStatus::kInconclusive;
    v.ambiguous_word = *words[static_cast<std::size_t>(first_bad)];
    v.details = anomaly ? "legal word without decomposition found" : "centre cut not determined at this window";
  } else {
    v.status = RecogStatus::kCertifiedAtWindow;
    v.details = "centre cut and parent letter agree for every legal word of the window length";
  }
  return v;
}

}  // namespace substrata
