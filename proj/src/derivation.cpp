#include "substrata/derivation.hpp"

#include <algorithm>
#include <map>
#include <unordered_map>

namespace substrata {

namespace {

using State = DerivationAutomaton::State;

void normalise(std::vector<State>& v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
}

}  // namespace

DerivationAutomaton::DerivationAutomaton(const RandomSubstitution& s, Word root, int level)
    : s_(&s), root_(std::move(root)), level_(level) {
  if (root_.empty()) throw Error("derivation root must be nonempty");
  if (level_ < 0) throw Error("level must be nonnegative");
  if (root_.size() > 255 || s.max_image_length() > 255)
    throw Error("derivation automaton supports words of length < 256");
}

Letter DerivationAutomaton::letter_at(const State& st, int k) const {
  auto byte = [&](std::size_t i) { return static_cast<unsigned char>(st[i]); };
  Letter cur = static_cast<unsigned char>(root_[byte(0)]);
  for (int j = 1; j <= k; ++j) {
    const Word& img = s_->images(cur)[byte(2 * j - 1)];
    cur = static_cast<unsigned char>(img[byte(2 * j)]);
  }
  return cur;
}

void DerivationAutomaton::fill(State prefix, int k, std::vector<State>& out) const {
  // prefix fixes levels 0..k; open fresh images at levels k+1..n.
  if (k == level_) {
    out.push_back(std::move(prefix));
    return;
  }
  const Letter parent = letter_at(prefix, k);
  const auto& imgs = s_->images(parent);
  for (std::size_t i = 0; i < imgs.size(); ++i) {
    State next = prefix;
    next.push_back(static_cast<char>(i));
    next.push_back(0);
    fill(std::move(next), k + 1, out);
  }
}

std::vector<State> DerivationAutomaton::initial() const {
  std::vector<State> out;
  fill(State(1, 0), 0, out);
  return out;
}

Letter DerivationAutomaton::emitted(const State& st) const { return letter_at(st, level_); }

void DerivationAutomaton::step(const State& st, std::vector<State>& out) const {
  auto byte = [&](const State& x, std::size_t i) { return static_cast<unsigned char>(x[i]); };
  for (int k = level_; k >= 1; --k) {
    const Letter parent = letter_at(st, k - 1);
    const Word& img = s_->images(parent)[byte(st, 2 * k - 1)];
    const std::size_t pos = byte(st, 2 * k);
    if (pos + 1 < img.size()) {
      State next = st.substr(0, 2 * k + 1);
      next[2 * k] = static_cast<char>(pos + 1);
      fill(std::move(next), k, out);
      return;
    }
  }
  const std::size_t pos0 = byte(st, 0);
  if (pos0 + 1 < root_.size()) {
    fill(State(1, static_cast<char>(pos0 + 1)), 0, out);
    return;
  }
  out.push_back(State());
}

mpz_class count_distinct(const RandomSubstitution& s, const Word& root, int level,
                         std::size_t state_budget) {
  DerivationAutomaton aut(s, root, level);
  std::map<std::vector<State>, mpz_class> frontier;
  auto init = aut.initial();
  normalise(init);
  frontier[init] = 1;
  mpz_class total = 0;
  const std::size_t d = s.size();
  std::vector<std::vector<State>> by_letter(d);
  while (!frontier.empty()) {
    std::map<std::vector<State>, mpz_class> next;
    std::size_t states = 0;
    for (const auto& [subset, cnt] : frontier) {
      for (auto& b : by_letter) b.clear();
      for (const auto& st : subset) aut.step(st, by_letter[aut.emitted(st)]);
      for (auto& succ : by_letter) {
        if (succ.empty()) continue;
        normalise(succ);
        if (DerivationAutomaton::accepting(succ.front())) {
          total += cnt;
          succ.erase(succ.begin());
        }
        if (succ.empty()) continue;
        states += succ.size();
        next[succ] += cnt;
      }
      if (states > state_budget) throw EnumerationOverflow(state_budget);
    }
    frontier.swap(next);
  }
  return total;
}

std::optional<Word> common_word(const RandomSubstitution& s, const Word& u, const Word& v,
                                int level, std::size_t state_budget) {
  DerivationAutomaton au(s, u, level), av(s, v, level);
  struct Node {
    std::size_t parent;
    Letter letter;
  };
  std::vector<Node> nodes;
  std::unordered_map<std::string, std::size_t> index;
  std::vector<std::pair<State, State>> queue;
  auto key = [](const State& x, const State& y) {
    std::string k = x;
    k.push_back(static_cast<char>(0xff));
    k += y;
    return k;
  };
  auto push = [&](const State& x, const State& y, std::size_t parent, Letter l) {
    auto [it, inserted] = index.emplace(key(x, y), nodes.size());
    if (!inserted) return;
    nodes.push_back({parent, l});
    queue.emplace_back(x, y);
    if (nodes.size() > state_budget) throw EnumerationOverflow(state_budget);
  };
  for (const auto& x : au.initial())
    for (const auto& y : av.initial())
      if (au.emitted(x) == av.emitted(y)) push(x, y, SIZE_MAX, -1);
  std::vector<State> sx, sy;
  for (std::size_t head = 0; head < queue.size(); ++head) {
    const auto [x, y] = queue[head];
    const Letter l = au.emitted(x);
    sx.clear();
    sy.clear();
    au.step(x, sx);
    av.step(y, sy);
    const bool ax = std::any_of(sx.begin(), sx.end(), DerivationAutomaton::accepting);
    const bool ay = std::any_of(sy.begin(), sy.end(), DerivationAutomaton::accepting);
    if (ax && ay) {
      Word w;
      for (std::size_t p = head; p != SIZE_MAX; p = nodes[p].parent)
        w.push_back(static_cast<char>(au.emitted(queue[p].first)));
      std::reverse(w.begin(), w.end());
      return w;
    }
    for (const auto& nx : sx) {
      if (DerivationAutomaton::accepting(nx)) continue;
      for (const auto& ny : sy) {
        if (DerivationAutomaton::accepting(ny)) continue;
        if (au.emitted(nx) == av.emitted(ny)) push(nx, ny, head, l);
      }
    }
  }
  return std::nullopt;
}

bool derives(const RandomSubstitution& s, const Word& root, int level, const Word& w) {
  DerivationAutomaton aut(s, root, level);
  auto cur = aut.initial();
  for (std::size_t i = 0; i < w.size(); ++i) {
    std::vector<State> next;
    for (const auto& st : cur)
      if (!DerivationAutomaton::accepting(st) && aut.emitted(st) == static_cast<unsigned char>(w[i]))
        aut.step(st, next);
    normalise(next);
    cur.swap(next);
    if (cur.empty()) return false;
  }
  return std::any_of(cur.begin(), cur.end(), DerivationAutomaton::accepting);
}

}  // namespace substrata
