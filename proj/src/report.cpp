#include "substrata/report.hpp"

#include <algorithm>
#include <cmath>

namespace substrata::report {

Json exact(const mpq_class& q) { return {{"mode", "exact"}, {"value", q.get_str()}}; }
Json exact(const mpz_class& z) { return {{"mode", "exact"}, {"value", z.get_str()}}; }
Json floating(double x, double tol) { return {{"mode", "float"}, {"tol", tol}, {"value", x}}; }

Json tagged(const mpq_class& x, double) { return exact(x); }
Json tagged(double x, double tol) { return floating(x, tol); }

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

Json envelope(const std::string& command, const SubstitutionSpec& spec) {
  Json j;
  j["schema"] = kSchema;
  j["command"] = command;
  j["spec"] = {{"name", spec.name}, {"alphabet", spec.s.alphabet().symbols()}};
  return j;
}

namespace {

Json vec_float(const std::vector<double>& v, double tol) {
  Json a = Json::array();
  for (double x : v) a.push_back(floating(x, tol));
  return a;
}

Json vec_exact(const std::vector<mpq_class>& v) {
  Json a = Json::array();
  for (const auto& x : v) a.push_back(exact(x));
  return a;
}

Json witness_json(const RandomSubstitution& s, const DscWitness& w) {
  return {{"letter", s.alphabet().symbol(w.letter)},
          {"u", s.format(w.u)},
          {"v", s.format(w.v)},
          {"level", w.level},
          {"common_word", s.format(w.common)}};
}

Json checklist_json(const std::vector<ChecklistItem>& items) {
  Json a = Json::array();
  for (const auto& it : items) a.push_back({{"name", it.name}, {"holds", it.holds}, {"detail", it.detail}});
  return a;
}

Json block_json(const RandomSubstitution& s, const BlockMass& b) {
  Json letters = Json::array();
  for (Letter a : b.block) letters.push_back(s.alphabet().symbol(a));
  return {{"block", letters},
          {"finite", exact(b.finite)},
          {"c", floating(b.c, 1e-12)},
          {"tail", floating(b.tail, 1e-12)},
          {"total", floating(b.total, 1e-12)},
          {"s", vec_exact(b.s)}};
}

bool skipped(const AnalyzeOptions& o, const std::string& stage) {
  return std::find(o.skip.begin(), o.skip.end(), stage) != o.skip.end();
}

}  // namespace

Json to_json(const GeometryClass& g) {
  Json j{{"constant_length", g.constant_length},
         {"compatible", g.compatible},
         {"geometrically_compatible", g.geometrically_compatible},
         {"verified_exactly", g.exact},
         {"lambda", g.lambda_exact ? exact(*g.lambda_exact) : floating(g.lambda, g.max_relative_residual)},
         {"L", g.L_exact ? vec_exact(*g.L_exact) : vec_float(g.L, g.max_relative_residual)}};
  if (g.constant_length) j["length"] = g.length;
  if (g.violating) j["violating_marginal"] = *g.violating;
  return j;
}

Json to_json(const PrimitivityVerdict& p) {
  return {{"primitive", p.primitive}, {"power", p.power}, {"lambda", floating(p.lambda, 1e-12)}};
}

Json to_json(const SpectralData& sd) {
  const double tol = std::max(sd.residual, 1e-15);
  Json j{{"lambda", sd.lambda_exact ? exact(*sd.lambda_exact) : floating(sd.lambda, tol)},
         {"L", sd.L_exact ? vec_exact(*sd.L_exact) : vec_float(sd.L, tol)},
         {"R", sd.R_exact ? vec_exact(*sd.R_exact) : vec_float(sd.R, tol)},
         {"normalisation", to_string(sd.normalisation)},
         {"iterations", sd.iterations},
         {"residual", floating(sd.residual, 0)}};
  return j;
}

Json to_json(const RandomSubstitution& s, const DscReport& d) {
  Json j{{"passed", d.passed}, {"verified_level", d.verified_level}};
  if (d.witness) j["witness"] = witness_json(s, *d.witness);
  return j;
}

Json to_json(const RandomSubstitution& s, const ReducedDscReport& d) {
  Json j{{"passed", d.passed}, {"verified_level", d.verified_level}, {"strict", d.reduced.trivial()}};
  Json dropped = Json::array();
  for (std::size_t a = 0; a < d.reduced.dropped.size(); ++a)
    for (auto [v, u] : d.reduced.dropped[a])
      dropped.push_back({{"letter", s.alphabet().symbol(static_cast<Letter>(a))},
                         {"dropped", s.format(s.images(static_cast<Letter>(a))[v])},
                         {"covered_by", s.format(s.images(static_cast<Letter>(a))[u])}});
  j["dropped_images"] = dropped;
  if (d.witness) j["witness"] = witness_json(s, *d.witness);
  return j;
}

Json to_json(const RandomSubstitution& s, const RecogVerdict& v) {
  Json j{{"status", to_string(v.status)},
         {"window", v.window},
         {"words_checked", v.words_checked},
         {"details", v.details}};
  if (v.dsc_witness) j["witness"] = witness_json(s, *v.dsc_witness);
  if (v.ambiguous_word) j["ambiguous_word"] = s.format(*v.ambiguous_word);
  return j;
}

Json to_json(const RandomSubstitution& s, const CountTable& t, std::size_t max_digits) {
  Json j{{"method", to_string(t.method())}, {"switch_level", t.switch_level()}, {"max_level", t.max_level()}};
  Json per = Json::object();
  for (std::size_t a = 0; a < s.size(); ++a) {
    Json levels = Json::array();
    for (int n = 0; n <= t.max_level(); ++n) {
      Json e{{"level", n}};
      if (t.has_exact(n) && mpz_sizeinbase(t.exact(static_cast<Letter>(a), n).get_mpz_t(), 10) <= max_digits)
        e["count"] = exact(t.exact(static_cast<Letter>(a), n));
      else
        e["log_count"] = floating(t.log_count(static_cast<Letter>(a), n), 1e-12);
      levels.push_back(e);
    }
    per[s.alphabet().symbol(static_cast<Letter>(a))] = levels;
  }
  j["counts"] = per;
  return j;
}

Json to_json(const RandomSubstitution& s, const EntropyReport& e) {
  Json levels = Json::array();
  for (const auto& ap : e.levels)
    levels.push_back({{"level", ap.level},
                      {"value", floating(ap.value, ap.upper - ap.lower)},
                      {"lower", floating(ap.lower, 1e-12)},
                      {"upper", floating(ap.upper, 1e-12)},
                      {"per_letter", vec_float(ap.per_letter, 1e-12)}});
  return {{"letter", s.alphabet().symbol(e.letter)},
          {"k", e.k},
          {"levels", levels},
          {"value", floating(e.last, std::abs(e.last_delta))},
          {"certified_lower", floating(e.certified_lower, 1e-12)},
          {"certified_upper", floating(e.certified_upper, 1e-12)},
          {"normalisation", to_string(e.normalisation)},
          {"count_method", to_string(e.count_method)},
          {"switch_level", e.switch_level}};
}

std::string intrinsic_ergodicity(Verdict v) {
  switch (v) {
    case Verdict::kErgodicCertified: return "IntrinsicallyErgodic";
    case Verdict::kNonErgodicCertified: return "NotIntrinsicallyErgodic";
    case Verdict::kUndetermined: return "Unknown";
  }
  return "Unknown";
}

Json to_json(const RandomSubstitution& s, const ErgodicityReport& r) {
  Json j{{"verdict", to_string(r.verdict)},
         {"intrinsic_ergodicity", intrinsic_ergodicity(r.verdict)},
         {"reason", r.reason},
         {"preconditions", checklist_json(r.preconditions)},
         {"checklist", checklist_json(r.checklist)},
         {"delta", vec_float(r.delta, 1e-12)},
         {"delta_product", floating(r.delta_product, 1e-12)},
         {"notes", r.notes}};
  if (r.cauchy_index) j["cauchy_index"] = *r.cauchy_index;
  if (r.ratios) {
    Json t{{"classes_ok", r.ratios->classes_ok}, {"r_exact", vec_exact(r.ratios->r)},
           {"log_r", vec_float(r.ratios->log_r, 1e-12)}};
    if (!r.ratios->classes_ok) t["class_violation"] = r.ratios->class_violation;
    if (r.ratios->recursion) {
      const auto& rc = *r.ratios->recursion;
      t["recursion"] = {{"claim", rc.recursion}, {"validated", rc.validated}, {"checked_up_to", rc.checked_up_to}};
      if (rc.first_failure) t["recursion"]["first_failure"] = *rc.first_failure;
    }
    j["ratio_trace"] = t;
  }
  if (r.trapping) {
    const auto& c = *r.trapping;
    Json t{{"certified", c.certified}, {"horizon", c.horizon}, {"reason", c.reason}};
    if (!c.m1.block.empty()) {
      t["block1"] = block_json(s, c.m1);
      t["block2"] = block_json(s, c.m2);
      t["gap"] = floating(c.gap, 1e-12);
    }
    j["trapping"] = t;
  }
  return j;
}

template <class T>
Json to_json(const RandomSubstitution& s, const CylinderMeasure<T>& m, double tol) {
  Json masses = Json::object();
  for (const auto& [w, x] : m.values) masses[s.format(w)] = tagged(x, tol);
  return {{"level", m.level},
          {"masses", masses},
          {"consistency_residual", floating(consistency_residual(m), 0)}};
}

template Json to_json(const RandomSubstitution&, const CylinderMeasure<mpq_class>&, double);
template Json to_json(const RandomSubstitution&, const CylinderMeasure<double>&, double);

Json to_json(const RandomSubstitution& s, const MonteCarloEstimate& mc) {
  Json masses = Json::object();
  for (const auto& [w, x] : mc.mean.values) {
    auto it = mc.stderr_.find(w);
    const double se = it == mc.stderr_.end() ? 0.0 : it->second;
    masses[s.format(w)] = {{"mode", "float"}, {"value", x}, {"tol", 4 * se}, {"stderr", se}};
  }
  return {{"level", mc.mean.level},
          {"masses", masses},
          {"samples", mc.samples},
          {"seed", mc.seed},
          {"root", s.alphabet().symbol(mc.root)},
          {"inflation_level", mc.level},
          {"consistency_residual", floating(consistency_residual(mc.mean), 0)}};
}

ExactChoice spec_choice(const SubstitutionSpec& spec, bool uniform) {
  if (uniform || !spec.probabilities) return uniform_choice<mpq_class>(spec.s);
  return make_choice<mpq_class>(spec.s, *spec.probabilities);
}

AnalyzeResult analyze(const SubstitutionSpec& spec, const AnalyzeOptions& opts) {
  AnalyzeResult out;
  Json& j = out.report;
  j = envelope("analyze", spec);
  const auto& s = spec.s;
  Json failures = Json::array();
  auto stage = [&](const std::string& name, auto&& body) {
    if (skipped(opts, name)) {
      j["stages"][name] = "skipped";
      return;
    }
    try {
      body();
      j["stages"][name] = "completed";
    } catch (const std::exception& e) {
      j["stages"][name] = "failed";
      failures.push_back({{"stage", name}, {"error", e.what()}});
    }
  };

  stage("geometry", [&] { j["geometry"] = to_json(classify_geometry(s)); });

  PrimitivityVerdict prim = is_primitive(s);
  if (!skipped(opts, "primitivity")) {
    j["primitivity"] = to_json(prim);
    j["stages"]["primitivity"] = "completed";
  } else {
    j["stages"]["primitivity"] = "skipped";
  }
  if (!prim.primitive) {
    j["stages"]["halted"] = "not primitive";
    j["failures"] = failures;
    out.exit_code = 2;
    return out;
  }

  std::optional<SpectralData> sd;
  stage("spectral", [&] {
    sd = substitution_spectrum(s, spec.lengths);
    j["spectral"] = to_json(*sd);
  });

  stage("dsc", [&] {
    j["dsc"] = {{"strict", to_json(s, check_dsc(s, opts.dsc_level))},
                {"reduced", to_json(s, check_reduced_dsc(s, opts.dsc_level))}};
  });

  if (opts.recog) {
    stage("recog", [&] {
      j["recog"] = to_json(s, verify_recognisability(s, opts.window.value_or(default_window(s)), opts.dsc_level));
    });
  }

  stage("counts", [&] {
    CountTable t(s, opts.count_levels, {.digit_budget = 1'000'000, .dsc_level = opts.dsc_level});
    j["counts"] = to_json(s, t);
  });

  stage("entropy", [&] {
    if (!sd) throw PreconditionError("spectral data unavailable");
    j["entropy"] = to_json(s, geometric_inflation_entropy(s, 0, opts.entropy_levels, *sd, 1,
                                                          {.digit_budget = 1'000'000, .dsc_level = opts.dsc_level}));
  });

  stage("ergodicity", [&] {
    if (!sd) throw PreconditionError("spectral data unavailable");
    ErgodicityOptions eo;
    eo.horizon = opts.horizon;
    eo.dsc_level = opts.dsc_level;
    eo.classes = spec.classes;
    eo.recursion = spec.recursion;
    j["ergodicity"] = to_json(s, ergodicity_test(s, *sd, eo));
  });

  stage("measure", [&] {
    const FloatChoice P = to_double(spec_choice(spec, opts.uniform));
    const auto mu = frequency_measure(s, P, opts.cylinders);
    j["measure"] = to_json(s, mu, 1e-12);
    j["measure"]["kind"] = "frequency";
    j["measure"]["choice"] = opts.uniform || !spec.probabilities ? "uniform" : "declared";
  });

  j["failures"] = failures;
  return out;
}

}  // namespace substrata::report
