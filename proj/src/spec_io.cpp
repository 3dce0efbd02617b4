#include "substrata/spec_io.hpp"

#include <fstream>
#include <map>
#include <sstream>

#include "json.hpp"

namespace substrata {

using nlohmann::json;

SpecError::SpecError(const std::string& what, std::size_t line, std::size_t column)
    : Error(line ? "line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + what : what),
      line_(line),
      column_(column) {}

namespace {

std::pair<std::size_t, std::size_t> line_column(const std::string& text, std::size_t byte) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

mpq_class rational_of(const json& v, const std::string& where) {
  try {
    if (v.is_string()) return parse_rational(v.get<std::string>());
    if (v.is_number()) return parse_rational(v.dump());
  } catch (const Error& e) {
    throw SpecError(where + ": " + e.what());
  }
  throw SpecError(where + ": expected a rational as \"p/q\", a decimal string or a number");
}

Word word_of(const Alphabet& A, const json& v, const std::string& where) {
  try {
    if (v.is_string()) return A.parse(v.get<std::string>());
    if (v.is_array()) return A.parse(v.get<std::vector<std::string>>());
  } catch (const json::exception&) {
  } catch (const Error& e) {
    throw SpecError(where + ": " + e.what());
  }
  throw SpecError(where + ": expected a word as a string or an array of symbols");
}

Letter letter_of(const Alphabet& A, const std::string& sym, const std::string& where) {
  auto idx = A.index(sym);
  if (!idx) throw SpecError(where + ": unknown letter '" + sym + "'");
  return *idx;
}

const json& require(const json& j, const char* key) {
  if (!j.contains(key)) throw SpecError(std::string("missing field '") + key + "'");
  return j.at(key);
}

}  // namespace

mpq_class parse_rational(const std::string& text) {
  std::string t;
  for (char c : text)
    if (c != ' ') t += c;
  if (t.empty()) throw Error("empty rational");
  const auto slash = t.find('/');
  if (slash != std::string::npos) {
    mpq_class q;
    if (q.set_str(t, 10) != 0) throw Error("malformed rational '" + text + "'");
    if (q.get_den() == 0) throw Error("zero denominator in '" + text + "'");
    q.canonicalize();
    return q;
  }
  // Decimal with optional exponent, read exactly.
  std::size_t i = 0;
  bool neg = false;
  if (t[i] == '-' || t[i] == '+') neg = t[i++] == '-';
  std::string digits;
  long scale = 0;
  bool dot = false, any = false;
  for (; i < t.size() && t[i] != 'e' && t[i] != 'E'; ++i) {
    if (t[i] == '.' && !dot) {
      dot = true;
    } else if (std::isdigit(static_cast<unsigned char>(t[i]))) {
      digits += t[i];
      any = true;
      if (dot) --scale;
    } else {
      throw Error("malformed number '" + text + "'");
    }
  }
  if (!any) throw Error("malformed number '" + text + "'");
  if (i < t.size()) {
    try {
      scale += std::stol(t.substr(i + 1));
    } catch (const std::exception&) {
      throw Error("malformed exponent in '" + text + "'");
    }
  }
  mpz_class num(digits, 10), pow10 = 1;
  for (long k = 0; k < std::labs(scale); ++k) pow10 *= 10;
  mpq_class q = scale >= 0 ? mpq_class(num * pow10) : mpq_class(num, pow10);
  q.canonicalize();
  return neg ? mpq_class(-q) : q;
}

SubstitutionSpec parse_spec(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    auto [line, col] = line_column(text, e.byte > 0 ? e.byte - 1 : 0);
    std::string msg = e.what();
    const auto cut = msg.find("; ");
    throw SpecError(cut == std::string::npos ? msg : msg.substr(cut + 2), line, col);
  }
  if (!j.is_object()) throw SpecError("top level must be an object", 1, 1);

  SubstitutionSpec spec;
  try {
    spec.name = j.value("name", std::string("unnamed"));
    const auto& alpha = require(j, "alphabet");
    if (!alpha.is_array()) throw SpecError("'alphabet' must be an array of strings");
    Alphabet A(alpha.get<std::vector<std::string>>());

    const auto& rules = require(j, "rules");
    if (!rules.is_object()) throw SpecError("'rules' must map every letter to a list of words");
    std::vector<std::vector<Word>> table(A.size());
    for (auto it = rules.begin(); it != rules.end(); ++it) {
      const Letter a = letter_of(A, it.key(), "rules");
      if (!it.value().is_array() || it.value().empty())
        throw SpecError("rules." + it.key() + ": expected a nonempty list of words");
      for (std::size_t i = 0; i < it.value().size(); ++i)
        table[a].push_back(word_of(A, it.value()[i], "rules." + it.key() + "[" + std::to_string(i) + "]"));
    }
    for (std::size_t a = 0; a < A.size(); ++a)
      if (table[a].empty()) throw SpecError("rules: letter '" + A.symbol(static_cast<Letter>(a)) + "' has no images");
    const std::vector<std::vector<Word>> file_order = table;
    spec.s = RandomSubstitution(A, table);

    if (j.contains("probabilities")) {
      const auto& pr = j.at("probabilities");
      if (!pr.is_object()) throw SpecError("'probabilities' must map letters to weight lists");
      std::vector<std::vector<mpq_class>> weights(A.size());
      for (std::size_t a = 0; a < A.size(); ++a) {
        const std::string& sym = A.symbol(static_cast<Letter>(a));
        if (!pr.contains(sym)) throw SpecError("probabilities: letter '" + sym + "' missing");
        const auto& list = pr.at(sym);
        if (!list.is_array() || list.size() != file_order[a].size())
          throw SpecError("probabilities." + sym + ": must be parallel to rules." + sym);
        std::map<Word, mpq_class> by_word;
        for (std::size_t i = 0; i < list.size(); ++i)
          by_word[file_order[a][i]] += rational_of(list[i], "probabilities." + sym + "[" + std::to_string(i) + "]");
        for (const auto& v : spec.s.images(static_cast<Letter>(a))) weights[a].push_back(by_word.at(v));
      }
      spec.probabilities = std::move(weights);
    }

    if (j.contains("lengths")) {
      const auto& ls = j.at("lengths");
      std::vector<mpq_class> L(A.size());
      if (ls.is_array()) {
        if (ls.size() != A.size()) throw SpecError("lengths: one entry per letter required");
        for (std::size_t a = 0; a < A.size(); ++a) L[a] = rational_of(ls[a], "lengths[" + std::to_string(a) + "]");
      } else if (ls.is_object()) {
        for (std::size_t a = 0; a < A.size(); ++a) {
          const std::string& sym = A.symbol(static_cast<Letter>(a));
          if (!ls.contains(sym)) throw SpecError("lengths: letter '" + sym + "' missing");
          L[a] = rational_of(ls.at(sym), "lengths." + sym);
        }
      } else {
        throw SpecError("'lengths' must be a list or an object");
      }
      spec.lengths = std::move(L);
    }

    if (j.contains("count_classes")) {
      const auto& cc = j.at("count_classes");
      for (const char* key : {"p", "q"}) {
        const auto& list = require(cc, key);
        auto& dst = key[0] == 'p' ? spec.classes.p : spec.classes.q;
        for (const auto& sym : list.get<std::vector<std::string>>())
          dst.push_back(letter_of(A, sym, std::string("count_classes.") + key));
        if (dst.empty()) throw SpecError(std::string("count_classes.") + key + " is empty");
      }
    }

    if (j.contains("recursion")) {
      try {
        spec.recursion = Recursion::parse(j.at("recursion").get<std::string>());
      } catch (const Error& e) {
        throw SpecError(std::string("recursion: ") + e.what());
      }
    }
  } catch (const json::exception& e) {
    throw SpecError(e.what());
  } catch (const SpecError&) {
    throw;
  } catch (const Error& e) {
    throw SpecError(e.what());
  }
  return spec;
}

SubstitutionSpec load_spec(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw SpecError("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_spec(ss.str());
}

}  // namespace substrata
