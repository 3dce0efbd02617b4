#pragma once

#include <gmpxx.h>

#include <optional>
#include <string>
#include <vector>

#include "substrata/core.hpp"
#include "substrata/ergodicity.hpp"

namespace substrata {

// JSON substitution file: name, alphabet, rules, optional probabilities,
// lengths, count_classes and recursion.
struct SubstitutionSpec {
  std::string name;
  RandomSubstitution s;
  std::optional<std::vector<std::vector<mpq_class>>> probabilities;
  std::optional<std::vector<mpq_class>> lengths;
  CountClasses classes;
  std::optional<Recursion> recursion;
};

class SpecError : public Error {
 public:
  SpecError(const std::string& what, std::size_t line = 0, std::size_t column = 0);
  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t line_, column_;
};

SubstitutionSpec parse_spec(const std::string& text);
SubstitutionSpec load_spec(const std::string& path);

// "3/4", "0.75", "1" or a JSON number's text, exactly.
mpq_class parse_rational(const std::string& text);

std::vector<std::string> builtin_names();
const std::string& builtin_text(const std::string& name);
SubstitutionSpec builtin_spec(const std::string& name);

}  // namespace substrata
