#include "substrata/core.hpp"

#include <algorithm>
#include <cstdlib>
#include <functional>
#include <unordered_set>

namespace substrata {

EnumerationOverflow::EnumerationOverflow(std::size_t budget)
    : Error("enumeration overflow: set size exceeds budget of " + std::to_string(budget)),
      budget_(budget) {}

std::size_t enumeration_budget() {
  if (const char* env = std::getenv("SUBSTRATA_MAX_ENUM")) {
    char* end = nullptr;
    unsigned long long v = std::strtoull(env, &end, 10);
    if (end != env && v > 0) return static_cast<std::size_t>(v);
  }
  return 10'000'000;
}

Alphabet::Alphabet(std::vector<std::string> symbols) : symbols_(std::move(symbols)) {
  if (symbols_.empty()) throw Error("alphabet must contain at least one letter");
  if (symbols_.size() > 120) throw Error("alphabet too large");
  for (std::size_t i = 0; i < symbols_.size(); ++i) {
    const auto& s = symbols_[i];
    if (s.empty()) throw Error("empty letter symbol");
    if (!lookup_.emplace(s, static_cast<Letter>(i)).second)
      throw Error("duplicate letter symbol '" + s + "'");
    max_symbol_length_ = std::max(max_symbol_length_, s.size());
  }
}

std::optional<Letter> Alphabet::index(std::string_view symbol) const {
  auto it = lookup_.find(std::string(symbol));
  if (it == lookup_.end()) return std::nullopt;
  return it->second;
}

Word Alphabet::parse(std::string_view text) const {
  Word w;
  std::size_t i = 0;
  while (i < text.size()) {
    if (text[i] == ' ') {
      ++i;
      continue;
    }
    bool matched = false;
    for (std::size_t len = std::min(max_symbol_length_, text.size() - i); len > 0; --len) {
      auto it = lookup_.find(std::string(text.substr(i, len)));
      if (it != lookup_.end()) {
        w.push_back(static_cast<char>(it->second));
        i += len;
        matched = true;
        break;
      }
    }
    if (!matched) throw Error("symbol not in alphabet at '" + std::string(text.substr(i)) + "'");
  }
  return w;
}

Word Alphabet::parse(const std::vector<std::string>& symbols) const {
  Word w;
  for (const auto& s : symbols) {
    auto idx = index(s);
    if (!idx) throw Error("symbol not in alphabet: '" + s + "'");
    w.push_back(static_cast<char>(*idx));
  }
  return w;
}

std::string Alphabet::format(const Word& w) const {
  std::string out;
  for (char c : w) out += symbols_.at(static_cast<unsigned char>(c));
  return out;
}

bool Alphabet::contains(const Word& w) const {
  return std::all_of(w.begin(), w.end(),
                     [&](char c) { return static_cast<unsigned char>(c) < symbols_.size(); });
}

AbelianVector abelianise(const Word& w, std::size_t alphabet_size) {
  AbelianVector v(alphabet_size, 0);
  for (char c : w) ++v.at(static_cast<unsigned char>(c));
  return v;
}

RandomSubstitution::RandomSubstitution(Alphabet alphabet, std::vector<std::vector<Word>> rules)
    : alphabet_(std::move(alphabet)), rules_(std::move(rules)) {
  if (rules_.size() != alphabet_.size()) throw Error("one rule set per letter required");
  for (std::size_t a = 0; a < rules_.size(); ++a) {
    auto& r = rules_[a];
    if (r.empty()) throw Error("empty rule set for letter '" + alphabet_.symbol(a) + "'");
    for (const auto& w : r) {
      if (w.empty()) throw Error("empty image word for letter '" + alphabet_.symbol(a) + "'");
      if (!alphabet_.contains(w)) throw Error("image word uses a symbol outside the alphabet");
    }
    std::sort(r.begin(), r.end());
    r.erase(std::unique(r.begin(), r.end()), r.end());
  }
}

RandomSubstitution RandomSubstitution::parse(const std::vector<std::string>& letters,
                                             const std::vector<std::vector<std::string>>& rules) {
  Alphabet alpha(letters);
  std::vector<std::vector<Word>> parsed;
  for (const auto& r : rules) {
    std::vector<Word> ws;
    for (const auto& t : r) ws.push_back(alpha.parse(t));
    parsed.push_back(std::move(ws));
  }
  return RandomSubstitution(std::move(alpha), std::move(parsed));
}

int RandomSubstitution::image_index(Letter a, const Word& v) const {
  const auto& r = rules_.at(a);
  auto it = std::lower_bound(r.begin(), r.end(), v);
  if (it == r.end() || *it != v) return -1;
  return static_cast<int>(it - r.begin());
}

std::size_t RandomSubstitution::min_image_length() const {
  std::size_t m = SIZE_MAX;
  for (const auto& r : rules_)
    for (const auto& w : r) m = std::min(m, w.size());
  return m;
}

std::size_t RandomSubstitution::max_image_length() const {
  std::size_t m = 0;
  for (const auto& r : rules_)
    for (const auto& w : r) m = std::max(m, w.size());
  return m;
}

bool RandomSubstitution::is_deterministic() const {
  return std::all_of(rules_.begin(), rules_.end(), [](const auto& r) { return r.size() == 1; });
}

std::optional<std::size_t> RandomSubstitution::constant_length() const {
  std::size_t lo = min_image_length(), hi = max_image_length();
  if (lo != hi) return std::nullopt;
  return lo;
}

std::vector<Word> RandomSubstitution::apply(const Word& w) const {
  const std::size_t budget = enumeration_budget();
  double total = 1;
  for (char c : w) {
    total *= static_cast<double>(images(static_cast<unsigned char>(c)).size());
    if (total > static_cast<double>(budget)) throw EnumerationOverflow(budget);
  }
  std::vector<Word> out;
  out.reserve(static_cast<std::size_t>(total));
  Word buf;
  auto rec = [&](auto&& self, std::size_t i) -> void {
    if (i == w.size()) {
      out.push_back(buf);
      return;
    }
    const std::size_t mark = buf.size();
    for (const auto& img : images(static_cast<unsigned char>(w[i]))) {
      buf += img;
      self(self, i + 1);
      buf.resize(mark);
    }
  };
  rec(rec, 0);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<Word> RandomSubstitution::apply(const std::vector<Word>& words) const {
  const std::size_t budget = enumeration_budget();
  std::unordered_set<Word> acc;
  for (const auto& w : words) {
    for (auto& v : apply(w)) {
      acc.insert(std::move(v));
      if (acc.size() > budget) throw EnumerationOverflow(budget);
    }
  }
  std::vector<Word> out(acc.begin(), acc.end());
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<Word> RandomSubstitution::iterate_word(const Word& w, int n) const {
  if (n < 0) throw Error("level must be nonnegative");
  std::vector<Word> cur{w};
  for (int k = 0; k < n; ++k) cur = apply(cur);
  return cur;
}

std::vector<Word> RandomSubstitution::iterate(Letter a, int n) const {
  return iterate_word(Word(1, static_cast<char>(a)), n);
}

std::size_t marginal_count(const RandomSubstitution& s) {
  std::size_t n = 1;
  for (const auto& r : s.rules()) n *= r.size();
  return n;
}

std::vector<Marginal> marginals(const RandomSubstitution& s) {
  if (marginal_count(s) > enumeration_budget()) throw EnumerationOverflow(enumeration_budget());
  std::vector<Marginal> out;
  Marginal m(s.size(), 0);
  while (true) {
    out.push_back(m);
    std::size_t a = 0;
    for (; a < s.size(); ++a) {
      if (++m[a] < static_cast<int>(s.images(a).size())) break;
      m[a] = 0;
    }
    if (a == s.size()) break;
  }
  return out;
}

Word apply_marginal(const RandomSubstitution& s, const Marginal& m, const Word& w) {
  Word out;
  for (char c : w) {
    auto a = static_cast<unsigned char>(c);
    out += s.images(a).at(m.at(a));
  }
  return out;
}

namespace {

// Calls f(image) for every element of the concatenation set ϑ(x), without
// deduplication.
void for_each_image(const RandomSubstitution& s, const Word& x,
                    const std::function<void(const Word&)>& f) {
  Word buf;
  std::function<void(std::size_t)> rec = [&](std::size_t i) {
    if (i == x.size()) {
      f(buf);
      return;
    }
    const std::size_t mark = buf.size();
    for (const auto& img : s.images(static_cast<unsigned char>(x[i]))) {
      buf += img;
      rec(i + 1);
      buf.resize(mark);
    }
  };
  rec(0);
}

std::vector<Word> all_subwords(const std::unordered_set<Word>& words, std::size_t max_len) {
  std::unordered_set<Word> out;
  for (const auto& w : words)
    for (std::size_t i = 0; i < w.size(); ++i)
      for (std::size_t l = 1; l <= max_len && i + l <= w.size(); ++l) out.insert(w.substr(i, l));
  std::vector<Word> v(out.begin(), out.end());
  std::sort(v.begin(), v.end(), [](const Word& x, const Word& y) {
    return x.size() != y.size() ? x.size() < y.size() : x < y;
  });
  return v;
}

}  // namespace

std::vector<Word> language(const RandomSubstitution& s, std::size_t max_len) {
  if (max_len == 0) return {};
  const std::size_t budget = enumeration_budget();
  const std::size_t minlen = s.min_image_length();
  // A legal word of length l sits inside ϑ(x) for a legal x of length at most
  // cover, starting inside the image of x's first letter.
  const std::size_t cover =
      max_len <= 2 ? max_len : std::min(max_len, (max_len - 2 + minlen - 1) / minlen + 2);
  std::unordered_set<Word> seen;  // legal words of length <= cover, processed or queued
  std::unordered_set<Word> maximal;
  std::vector<Word> queue;
  for (std::size_t a = 0; a < s.size(); ++a) {
    Word w(1, static_cast<char>(a));
    seen.insert(w);
    queue.push_back(w);
  }
  while (!queue.empty()) {
    Word x = std::move(queue.back());
    queue.pop_back();
    const auto first = s.images(static_cast<unsigned char>(x[0]));
    for_each_image(s, x, [&](const Word& w) {
      // First-image length is recovered from the prefix match.
      std::size_t first_len = 0;
      for (const auto& img : first)
        if (w.compare(0, img.size(), img) == 0) first_len = std::max(first_len, img.size());
      for (std::size_t j = 0; j < first_len; ++j) {
        Word v = w.substr(j, std::min(max_len, w.size() - j));
        if (!maximal.insert(v).second) continue;
        if (maximal.size() > budget) throw EnumerationOverflow(budget);
        for (std::size_t i = 0; i < v.size(); ++i)
          for (std::size_t l = 1; l <= cover && i + l <= v.size(); ++l) {
            Word t = v.substr(i, l);
            if (seen.insert(t).second) queue.push_back(std::move(t));
          }
      }
    });
  }
  for (const auto& w : seen) maximal.insert(w);
  return all_subwords(maximal, max_len);
}

std::vector<Word> language_by_levels(const RandomSubstitution& s, std::size_t max_len, int levels) {
  std::unordered_set<Word> words;
  for (std::size_t a = 0; a < s.size(); ++a) {
    std::vector<Word> cur{Word(1, static_cast<char>(a))};
    for (int n = 0; n <= levels; ++n) {
      for (const auto& w : cur) words.insert(w);
      if (n < levels) cur = s.apply(cur);
    }
  }
  return all_subwords(words, max_len);
}

std::vector<std::vector<Word>> decompositions(const RandomSubstitution& s, const Word& u,
                                              const Word& v) {
  std::vector<std::vector<Word>> out;
  std::vector<Word> cur;
  std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t i, std::size_t pos) {
    if (i == u.size()) {
      if (pos == v.size()) out.push_back(cur);
      return;
    }
    for (const auto& img : s.images(static_cast<unsigned char>(u[i]))) {
      if (v.compare(pos, img.size(), img) != 0 || pos + img.size() > v.size()) continue;
      cur.push_back(img);
      rec(i + 1, pos + img.size());
      cur.pop_back();
    }
  };
  rec(0, 0);
  return out;
}

std::vector<Word> unique_decomposition(const RandomSubstitution& s, const Word& u, const Word& v) {
  auto all = decompositions(s, u, v);
  if (all.empty()) throw Error("not a realisation");
  if (all.size() > 1) throw PreconditionError("ambiguous realisation path: substitution is not geometrically compatible");
  return all.front();
}

}  // namespace substrata
