#include <map>

#include "substrata/spec_io.hpp"

namespace substrata {

namespace {

const std::map<std::string, std::string>& table() {
  static const std::map<std::string, std::string> specs = {
      {"fibonacci_ac", R"({
  "name": "fibonacci_ac",
  "alphabet": ["a", "b", "c"],
  "rules": {
    "a": ["ab", "ac"],
    "b": ["a"],
    "c": ["a"]
  }
}
)"},
      {"abb", R"({
  "name": "abb",
  "alphabet": ["a", "b"],
  "rules": {
    "a": ["abb"],
    "b": ["a", "bb"]
  },
  "lengths": ["2", "1"]
}
)"},
      {"counterexample", R"({
  "name": "counterexample",
  "alphabet": ["a0", "a1", "b0", "b1", "c"],
  "rules": {
    "a0": ["a0 a0 a1 a1", "a0 a1 c c"],
    "a1": ["a1 a1 a0 a0", "a1 a0 c c"],
    "b0": ["b0 b0 b1 b1", "b0 b1 c c"],
    "b1": ["b1 b1 b0 b0", "b1 b0 c c"],
    "c": ["a0 b0 c c"]
  },
  "count_classes": {"p": ["a0", "a1", "b0", "b1"], "q": ["c"]},
  "recursion": "r[n+1] = r[n]^2 + 1"
}
)"},
      {"ergodic_abc", R"({
  "name": "ergodic_abc",
  "alphabet": ["a", "b", "c"],
  "rules": {
    "a": ["abc", "acc"],
    "b": ["bac", "bcc"],
    "c": ["aac"]
  },
  "count_classes": {"p": ["a", "b"], "q": ["c"]},
  "recursion": "r[n+1] = 1 + 1/r[n]"
}
)"},
      {"ergodic_abc_degenerate", R"({
  "name": "ergodic_abc_degenerate",
  "alphabet": ["a", "b", "c"],
  "rules": {
    "a": ["abc", "acc"],
    "b": ["bac", "bcc"],
    "c": ["acc"]
  },
  "count_classes": {"p": ["a", "b"], "q": ["c"]},
  "recursion": "r[n+1] = r[n] + 1"
}
)"},
      {"random_fibonacci", R"({
  "name": "random_fibonacci",
  "alphabet": ["a", "b"],
  "rules": {
    "a": ["ab", "ba"],
    "b": ["a"]
  },
  "probabilities": {
    "a": ["1/2", "1/2"],
    "b": ["1"]
  }
}
)"},
  };
  return specs;
}

}  // namespace

std::vector<std::string> builtin_names() {
  std::vector<std::string> out;
  for (const auto& [k, v] : table()) out.push_back(k);
  return out;
}

const std::string& builtin_text(const std::string& name) {
  auto it = table().find(name);
  if (it == table().end()) throw Error("no bundled example named '" + name + "'");
  return it->second;
}

SubstitutionSpec builtin_spec(const std::string& name) { return parse_spec(builtin_text(name)); }

}  // namespace substrata
