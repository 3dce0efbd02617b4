#include <filesystem>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "substrata/counting.hpp"
#include "substrata/derivation.hpp"
#include "substrata/ergodicity.hpp"
#include "substrata/measures.hpp"
#include "substrata/paper_examples.hpp"
#include "substrata/recognisability.hpp"
#include "substrata/report.hpp"
#include "substrata/spec_io.hpp"
#include "substrata/spectral.hpp"

using namespace substrata;
using report::Json;

namespace {

struct Common {
  std::string spec;
  std::string out;
  std::string csv;
  std::string letter;
  bool exact = false;
  bool floating = false;
  int levels = -1;
  int horizon = 40;
  int window = -1;
  double tolerance = 1e-9;
  std::size_t cylinders = 2;
  std::string mode = "exact";
  std::uint64_t samples = 100'000;
  std::uint64_t seed = 1;
  bool uniform = false;
  bool recog = false;
  std::vector<std::string> skip;
  std::string method = "recurse";
  std::vector<int> only;
};

// A path, or the name of a bundled example.
SubstitutionSpec load(const std::string& arg) {
  if (std::filesystem::exists(arg)) return load_spec(arg);
  for (const auto& name : builtin_names())
    if (name == arg) return builtin_spec(name);
  throw SpecError("no such file or bundled example: " + arg);
}

void emit(const Common& c, const std::string& text) {
  if (c.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(c.out);
  if (!f) throw Error("cannot write " + c.out);
  f << text;
}

Letter pick_letter(const RandomSubstitution& s, const std::string& sym) {
  if (sym.empty()) return 0;
  auto a = s.alphabet().index(sym);
  if (!a) throw PreconditionError("unknown letter '" + sym + "'");
  return *a;
}

std::ofstream open_csv(const std::string& path) {
  std::ofstream f(path);
  if (!f) throw Error("cannot write " + path);
  f.precision(17);
  return f;
}

int cmd_analyze(const Common& c) {
  const auto spec = load(c.spec);
  report::AnalyzeOptions o;
  if (c.levels > 0) o.count_levels = c.levels;
  o.horizon = c.horizon;
  o.recog = c.recog;
  if (c.window > 0) o.window = static_cast<std::size_t>(c.window);
  o.cylinders = c.cylinders;
  o.uniform = c.uniform;
  o.skip = c.skip;
  auto res = report::analyze(spec, o);
  emit(c, report::dump(res.report));
  if (res.exit_code != 0) std::cerr << "error: substitution is not primitive\n";
  return res.exit_code;
}

int cmd_count(const Common& c) {
  const auto spec = load(c.spec);
  const auto& s = spec.s;
  const int levels = c.levels > 0 ? c.levels : 8;
  Json j = report::envelope("count", spec);
  if (c.method == "recurse") {
    CountTable t(s, levels);
    j["table"] = report::to_json(s, t, c.floating ? 0 : (c.exact ? SIZE_MAX : 200));
    if (!c.csv.empty()) {
      auto f = open_csv(c.csv);
      f << "level,letter,log_count\n";
      for (int n = 0; n <= levels; ++n)
        for (std::size_t a = 0; a < s.size(); ++a)
          f << n << "," << s.alphabet().symbol(static_cast<Letter>(a)) << "," << t.log_count(static_cast<Letter>(a), n)
            << "\n";
    }
  } else {
    CountMode mode;
    if (c.method == "enumerate")
      mode = CountMode::kEnumerate;
    else if (c.method == "automaton")
      mode = CountMode::kAutomaton;
    else
      throw PreconditionError("unknown counting method '" + c.method + "'");
    Json per = Json::object();
    for (std::size_t a = 0; a < s.size(); ++a) {
      Json lv = Json::array();
      for (int n = 0; n <= levels; ++n)
        lv.push_back({{"level", n}, {"count", report::exact(count(s, static_cast<Letter>(a), n, mode))}});
      per[s.alphabet().symbol(static_cast<Letter>(a))] = lv;
    }
    j["table"] = {{"method", c.method}, {"counts", per}, {"max_level", levels}};
  }
  emit(c, report::dump(j));
  return 0;
}

int cmd_entropy(const Common& c) {
  const auto spec = load(c.spec);
  const auto& s = spec.s;
  const auto sd = substitution_spectrum(s, spec.lengths);
  const auto rep = geometric_inflation_entropy(s, pick_letter(s, c.letter), c.levels > 0 ? c.levels : 30, sd);
  Json j = report::envelope("entropy", spec);
  j["spectral"] = report::to_json(sd);
  j["entropy"] = report::to_json(s, rep);
  if (!c.csv.empty()) {
    auto f = open_csv(c.csv);
    f << "level,approximant,lower,upper\n";
    for (const auto& ap : rep.levels) f << ap.level << "," << ap.value << "," << ap.lower << "," << ap.upper << "\n";
  }
  emit(c, report::dump(j));
  return 0;
}

int cmd_ergodicity(const Common& c) {
  const auto spec = load(c.spec);
  ErgodicityOptions o;
  o.horizon = c.horizon;
  if (c.window > 0) o.cauchy_window = c.window;
  o.cauchy_tol = c.tolerance;
  o.classes = spec.classes;
  o.recursion = spec.recursion;
  const auto rep = ergodicity_test(spec.s, substitution_spectrum(spec.s, spec.lengths), o);
  Json j = report::envelope("ergodicity", spec);
  j["ergodicity"] = report::to_json(spec.s, rep);
  if (!c.csv.empty()) {
    auto f = open_csv(c.csv);
    f << "n,delta\n";
    for (std::size_t n = 0; n < rep.delta.size(); ++n) f << n << "," << rep.delta[n] << "\n";
  }
  emit(c, report::dump(j));
  return 0;
}

int cmd_measure(const Common& c) {
  const auto spec = load(c.spec);
  const auto& s = spec.s;
  if (!spec.probabilities && !c.uniform && !s.is_deterministic())
    throw PreconditionError("the spec declares no probabilities; pass --uniform");
  const ExactChoice P = report::spec_choice(spec, c.uniform);
  const Letter a = pick_letter(s, c.letter);
  const int m = c.levels > 0 ? c.levels : 6;
  Json j = report::envelope("measure", spec);
  j["choice"] = c.uniform || !spec.probabilities ? "uniform" : "declared";
  if (c.mode == "mc") {
    const auto mc = monte_carlo_frequencies(s, to_double(P), a, m, c.cylinders, c.samples, c.seed);
    j["measure"] = report::to_json(s, mc);
    j["measure"]["kind"] = "monte-carlo";
  } else if (c.mode == "exact") {
    if (c.floating) {
      j["measure"] = report::to_json(s, frequency_measure(s, to_double(P), c.cylinders), 1e-12);
      j["measure"]["kind"] = "frequency";
    } else {
      j["measure"] = report::to_json(s, frequency_approximant(s, P, a, m, c.cylinders), 0);
      j["measure"]["kind"] = "approximant";
      j["measure"]["root"] = s.alphabet().symbol(a);
      j["measure"]["inflation_level"] = m;
    }
  } else {
    throw PreconditionError("--mode must be exact or mc");
  }
  emit(c, report::dump(j));
  return 0;
}

int cmd_recog(const Common& c) {
  const auto spec = load(c.spec);
  const auto& s = spec.s;
  const int dsc_level = c.levels > 0 ? c.levels : 2;
  const std::size_t W = c.window > 0 ? static_cast<std::size_t>(c.window) : default_window(s);
  Json j = report::envelope("recog", spec);
  j["dsc"] = {{"strict", report::to_json(s, check_dsc(s, dsc_level))},
              {"reduced", report::to_json(s, check_reduced_dsc(s, dsc_level))}};
  j["recog"] = report::to_json(s, verify_recognisability(s, W, dsc_level));
  emit(c, report::dump(j));
  return 0;
}

int cmd_paper_examples(const Common& c) {
  const auto rows = run_paper_examples(c.only);
  std::ostringstream os;
  int failed = 0;
  for (const auto& r : rows) {
    os << format_row(r);
    failed += !r.pass;
  }
  os << (failed ? std::to_string(failed) + " of " + std::to_string(rows.size()) + " rows failed\n"
                : "all " + std::to_string(rows.size()) + " rows passed\n");
  emit(c, os.str());
  return failed ? 1 : 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"substrata: random substitutions"};
  app.require_subcommand(1);
  Common c;

  auto spec_arg = [&](CLI::App* sub) { sub->add_option("spec", c.spec, "spec file or bundled example name")->required(); };
  auto out_flag = [&](CLI::App* sub) { sub->add_option("--out", c.out, "write the report to a file"); };

  auto* analyze = app.add_subcommand("analyze", "full pipeline report");
  spec_arg(analyze);
  out_flag(analyze);
  analyze->add_option("--levels", c.levels, "count levels");
  analyze->add_option("--horizon", c.horizon, "productivity horizon");
  analyze->add_option("--window", c.window, "recognisability window");
  analyze->add_option("--cylinders", c.cylinders, "cylinder length of the measure summary");
  analyze->add_flag("--recog", c.recog, "run the recognisability stage");
  analyze->add_flag("--uniform", c.uniform, "uniform probabilities for the measure summary");
  analyze->add_option("--skip", c.skip, "stages to skip")
      ->check(CLI::IsMember({"geometry", "primitivity", "spectral", "dsc", "counts", "entropy", "ergodicity", "measure"}));

  auto* cnt = app.add_subcommand("count", "inflation word counts");
  spec_arg(cnt);
  out_flag(cnt);
  cnt->add_option("--levels", c.levels, "highest level");
  cnt->add_option("--method", c.method, "recurse, enumerate or automaton");
  auto* ex = cnt->add_flag("--exact", c.exact, "print every count in full");
  cnt->add_flag("--float", c.floating, "print log counts only")->excludes(ex);
  cnt->add_option("--csv", c.csv, "write log counts as CSV");

  auto* ent = app.add_subcommand("entropy", "geometric inflation word entropy");
  spec_arg(ent);
  out_flag(ent);
  ent->add_option("--levels", c.levels, "highest level m");
  ent->add_option("--letter", c.letter, "letter of the approximant");
  ent->add_option("--csv", c.csv, "write level, approximant, lower, upper as CSV");

  auto* erg = app.add_subcommand("ergodicity", "inverse-time ergodicity of the productivity sequence");
  spec_arg(erg);
  out_flag(erg);
  erg->add_option("--horizon", c.horizon, "number of Q_n");
  erg->add_option("--window", c.window, "Cauchy window");
  erg->add_option("--tolerance", c.tolerance, "Cauchy tolerance");
  erg->add_option("--csv", c.csv, "write the Dobrushin coefficients as CSV");

  auto* meas = app.add_subcommand("measure", "cylinder measures");
  spec_arg(meas);
  out_flag(meas);
  meas->add_option("--cylinders", c.cylinders, "longest cylinder");
  meas->add_option("--mode", c.mode, "exact or mc")->check(CLI::IsMember({"exact", "mc"}));
  meas->add_option("--levels", c.levels, "inflation level m");
  meas->add_option("--letter", c.letter, "root letter");
  meas->add_option("--samples", c.samples, "Monte Carlo samples");
  meas->add_option("--seed", c.seed, "Monte Carlo seed");
  meas->add_flag("--uniform", c.uniform, "uniform probabilities");
  auto* mex = meas->add_flag("--exact", c.exact, "rational approximant at level m (default)");
  meas->add_flag("--float", c.floating, "Perron-Frobenius frequency measure")->excludes(mex);

  auto* rec = app.add_subcommand("recog", "disjoint set condition and recognisability");
  spec_arg(rec);
  out_flag(rec);
  rec->add_option("--window", c.window, "window length");
  rec->add_option("--levels", c.levels, "DSC level");

  auto* pe = app.add_subcommand("paper-examples", "reference computations with expected values");
  out_flag(pe);
  pe->add_option("--only", c.only, "row ids");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (*analyze) return cmd_analyze(c);
    if (*cnt) return cmd_count(c);
    if (*ent) return cmd_entropy(c);
    if (*erg) return cmd_ergodicity(c);
    if (*meas) return cmd_measure(c);
    if (*rec) return cmd_recog(c);
    if (*pe) return cmd_paper_examples(c);
  } catch (const SpecError& e) {
    std::cerr << "spec error: " << e.what() << "\n";
    return 2;
  } catch (const PreconditionError& e) {
    std::cerr << "precondition failed: " << e.what() << "\n";
    return 2;
  } catch (const EnumerationOverflow& e) {
    std::cerr << "error: " << e.what() << " (raise SUBSTRATA_MAX_ENUM)\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
