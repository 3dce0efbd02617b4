#pragma once

#include <gmpxx.h>

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "substrata/counting.hpp"
#include "substrata/ergodicity.hpp"
#include "substrata/measures.hpp"
#include "substrata/recognisability.hpp"
#include "substrata/spec_io.hpp"
#include "substrata/spectral.hpp"

// Canonical JSON reports, schema "substrata/1" (see docs/schema.md).
namespace substrata::report {

using Json = nlohmann::json;

inline constexpr const char* kSchema = "substrata/1";

// Tagged numbers: {"mode": "exact", "value": "p/q"} or
// {"mode": "float", "tol": t, "value": x}.
Json exact(const mpq_class& q);
Json exact(const mpz_class& z);
Json floating(double x, double tol);
Json tagged(const mpq_class& x, double tol);  // tol ignored
Json tagged(double x, double tol);

// Sorted keys, two-space indent, trailing newline.
std::string dump(const Json& j);

Json envelope(const std::string& command, const SubstitutionSpec& spec);

Json to_json(const GeometryClass& g);
Json to_json(const PrimitivityVerdict& p);
Json to_json(const SpectralData& sd);
Json to_json(const RandomSubstitution& s, const DscReport& d);
Json to_json(const RandomSubstitution& s, const ReducedDscReport& d);
Json to_json(const RandomSubstitution& s, const RecogVerdict& v);
// Exact values are written in full up to max_digits decimal digits, logs beyond.
Json to_json(const RandomSubstitution& s, const CountTable& t, std::size_t max_digits = 200);
Json to_json(const RandomSubstitution& s, const EntropyReport& e);
Json to_json(const RandomSubstitution& s, const ErgodicityReport& r);
template <class T>
Json to_json(const RandomSubstitution& s, const CylinderMeasure<T>& m, double tol);
Json to_json(const RandomSubstitution& s, const MonteCarloEstimate& mc);

// "IntrinsicallyErgodic", "NotIntrinsicallyErgodic" or "Unknown".
std::string intrinsic_ergodicity(Verdict v);

struct AnalyzeOptions {
  int count_levels = 8;
  int entropy_levels = 30;
  int horizon = 40;
  int dsc_level = 3;
  bool recog = false;
  std::optional<std::size_t> window;
  std::size_t cylinders = 2;
  bool uniform = false;
  std::vector<std::string> skip;  // geometry, primitivity, dsc, counts, entropy, ergodicity, measure
};

struct AnalyzeResult {
  Json report;
  int exit_code = 0;  // 2 on a hard precondition failure
};

AnalyzeResult analyze(const SubstitutionSpec& spec, const AnalyzeOptions& opts);

// Probability choice from the spec, or uniform when requested or undeclared
// and allowed; throws PreconditionError otherwise.
ExactChoice spec_choice(const SubstitutionSpec& spec, bool uniform);

}  // namespace substrata::report
