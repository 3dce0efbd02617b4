#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "substrata/derivation.hpp"
#include "substrata/recognisability.hpp"
#include "substrata/spec_io.hpp"

using namespace substrata;

TEST_CASE("DSC verdicts on the bundled examples") {
  const auto rf = builtin_spec("random_fibonacci").s;
  const auto d = check_dsc(rf, 3);
  CHECK_FALSE(d.passed);
  REQUIRE(d.witness);
  CHECK(d.witness->level == 1);
  CHECK(recheck_witness(rf, *d.witness));

  const auto ce = builtin_spec("counterexample").s;
  const auto c = check_dsc(ce, 3);
  CHECK(c.passed);
  CHECK(c.verified_level == 3);
}

TEST_CASE("forged witnesses do not re-check") {
  const auto rf = builtin_spec("random_fibonacci").s;
  DscWitness w{0, rf.word("ab"), rf.word("ba"), 1, rf.word("aab")};
  CHECK_FALSE(recheck_witness(rf, w));
}

TEST_CASE("common_word agrees with explicit intersections") {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 60; ++trial) {
    const auto s = oracle::random_substitution(rng, 2, 3, 2);
    for (Letter a = 0; a < 2; ++a) {
      const auto& im = s.images(a);
      for (std::size_t i = 0; i < im.size(); ++i)
        for (std::size_t j = i + 1; j < im.size(); ++j)
          for (int n = 1; n <= 2; ++n) {
            const auto A = oracle::images(s.rules(), im[i], n), B = oracle::images(s.rules(), im[j], n);
            bool meet = false;
            for (const auto& w : A) meet |= B.count(w) > 0;
            const auto cw = common_word(s, im[i], im[j], n);
            CHECK(cw.has_value() == meet);
            if (cw) CHECK((A.count(*cw) && B.count(*cw)));
          }
    }
  }
}

TEST_CASE("reduced images drop covered alternatives") {
  const auto s = builtin_spec("fibonacci_ac").s;
  const auto r = reduce_images(s);
  CHECK_FALSE(r.trivial());
  REQUIRE(r.kept[0].size() == 1);
  CHECK(s.images(0)[r.kept[0][0]] == s.word("ab"));
  const auto rep = check_reduced_dsc(s, 3);
  CHECK(rep.passed);
  CHECK_FALSE(check_dsc(s, 3).passed);
  CHECK(reduce_images(builtin_spec("counterexample").s).trivial());
}

TEST_CASE("desubstitution recovers the true cut") {
  // Deterministic Fibonacci: a -> ab, b -> a.
  const auto s = RandomSubstitution::parse({"a", "b"}, {{"ab"}, {"a"}});
  const auto legal_list = language(s, 12);
  std::unordered_set<Word> legal(legal_list.begin(), legal_list.end());
  for (const auto& parent : legal_list) {
    if (parent.size() != 6) continue;
    Word w;
    std::vector<long> starts;
    for (char c : parent) {
      starts.push_back(static_cast<long>(w.size()));
      w += s.images(static_cast<unsigned char>(c))[0];
    }
    const auto ds = desubstitute(s, w, &legal);
    bool found = false;
    for (const auto& d : ds) found |= d.phase == 0 && d.starts == starts;
    CHECK(found);
  }
}

TEST_CASE("recognisability verdicts") {
  const auto rf = builtin_spec("random_fibonacci").s;
  const auto v = verify_recognisability(rf, 10);
  CHECK(v.status == RecogStatus::kRefutedDsc);
  REQUIRE(v.dsc_witness);
  CHECK(recheck_witness(rf, *v.dsc_witness));

  const auto ce = builtin_spec("counterexample").s;
  CHECK(verify_recognisability(ce, 6, 3).status == RecogStatus::kInconclusive);
  const auto ok = verify_recognisability(ce, 16, 3);
  CHECK(ok.status == RecogStatus::kCertifiedAtWindow);
  CHECK(ok.words_checked > 0);
  CHECK(to_string(RecogStatus::kRefutedDsc) == "RefutedDSC");
}
