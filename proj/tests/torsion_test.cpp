#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>

#include "ordo/errors.hpp"
#include "ordo/torsion.hpp"

using namespace ordo;

namespace {

Monomial mon(std::initializer_list<std::pair<Var, std::uint64_t>> xs) {
  Monomial m;
  for (auto [v, e] : xs) m.set_exponent(v, e);
  return m;
}

std::vector<Monomial> sample_monomials(std::uint64_t vmax, std::uint64_t dmax) {
  std::set<Monomial> seen{Monomial()};
  std::vector<Monomial> frontier{Monomial()};
  for (std::uint64_t d = 0; d < dmax; ++d) {
    std::vector<Monomial> next;
    for (const auto& f : frontier)
      for (Var v = 1; v <= vmax; ++v) {
        Monomial g = f.times(Monomial::var(v));
        if (seen.insert(g).second) next.push_back(g);
      }
    frontier = next;
  }
  return {seen.begin(), seen.end()};
}

}  // namespace

TEST_CASE("preset ideals and zero elements") {
  TorsionSetup h = make_preset("hrbek");
  CHECK(is_zero_element(mon({{2, 3}}), h));
  CHECK_FALSE(is_zero_element(mon({{2, 2}}), h));
  CHECK(is_zero_element(mon({{1, 1}, {5, 1}}), h));
  CHECK_FALSE(is_zero_element(Monomial(), h));
  TorsionSetup hi = make_preset("hrbek-i");
  CHECK(is_zero_element(Monomial(), hi));  // 1 is outside the submodule
  CHECK_FALSE(is_zero_element(mon({{3, 1}}), hi));
  CHECK_THROWS_AS(make_preset("nope"), std::invalid_argument);
}

TEST_CASE("quite rank on the hrbek module") {
  TorsionSetup h = make_preset("hrbek");
  RankVerdict r = quite_rank(mon({{3, 1}}), h);
  REQUIRE(r.kind == RankVerdict::Rank);
  CHECK(r.alpha == Ordinal::finite(2));
  // rank(x_i^e) = i - e across the sampled window
  for (Var i = 1; i <= 6; ++i)
    for (std::uint64_t e = 1; e <= i; ++e) {
      r = quite_rank(mon({{i, e}}), h);
      REQUIRE(r.kind == RankVerdict::Rank);
      CHECK(r.alpha == Ordinal::finite(i - e));
    }
  r = quite_rank(Monomial(), h);
  REQUIRE(r.kind == RankVerdict::Rank);
  CHECK(r.alpha == Ordinal::omega());
  CHECK_THROWS_AS(quite_rank(mon({{2, 3}}), h), ZeroElement);
}

TEST_CASE("quite rank refuses where the filtration is empty") {
  RankVerdict r = quite_rank(Monomial(), make_preset("squares"));
  REQUIRE(r.kind == RankVerdict::NoRank);
  CHECK(r.witness.size() >= 3);
  // the witness really is non-terminating: its products stay nonzero
  TorsionSetup sq = make_preset("squares");
  Monomial prod;
  for (Var v : r.witness) {
    prod = prod.times(Monomial::var(v));
    CHECK_FALSE(is_zero_element(prod, sq));
  }
  r = quite_rank(Monomial(), make_preset("staircase"));
  CHECK(r.kind == RankVerdict::NoRank);
}

TEST_CASE("strong level on the hrbek module") {
  TorsionSetup h = make_preset("hrbek");
  LevelVerdict lv = strong_level(mon({{2, 2}}), h);
  REQUIRE(lv.kind == LevelVerdict::Level);
  CHECK(lv.n == 0);
  lv = strong_level(mon({{3, 1}}), h);
  REQUIRE(lv.kind == LevelVerdict::Level);
  CHECK(lv.n == 2);
  CHECK(strong_level(Monomial(), h).kind == LevelVerdict::NotStrong);
}

TEST_CASE("strong closure: elements of finite level are exactly the ideal") {
  TorsionSetup h = make_preset("hrbek");
  for (const auto& m : sample_monomials(5, 5)) {
    if (is_zero_element(m, h)) continue;
    LevelVerdict lv = strong_level(m, h);
    if (m.is_unit())
      CHECK(lv.kind == LevelVerdict::NotStrong);
    else
      CHECK(lv.kind == LevelVerdict::Level);
  }
}

TEST_CASE("per-generator torsion") {
  CHECK(is_torsion_element(Monomial(), make_preset("squares")).kind ==
        TorsionVerdict::Torsion);
  CHECK(is_torsion_element(mon({{5, 1}}), make_preset("hrbek")).kind ==
        TorsionVerdict::Torsion);
  // free module on one generator: x1 is never nilpotent on 1
  TorsionSetup free;
  free.name = "free";
  free.I.hi = 1;
  TorsionVerdict tv = is_torsion_element(Monomial(), free);
  REQUIRE(tv.kind == TorsionVerdict::NotTorsion);
  CHECK(tv.s == 1);
}

TEST_CASE("implication chain on sampled elements") {
  // Level(n) implies a rank with alpha <= n implies torsion
  for (const auto& name : preset_names()) {
    TorsionSetup s = make_preset(name);
    for (const auto& m : sample_monomials(4, 4)) {
      if (is_zero_element(m, s)) continue;
      LevelVerdict lv = strong_level(m, s);
      if (lv.kind != LevelVerdict::Level) continue;
      RankVerdict r = quite_rank(m, s);
      REQUIRE(r.kind == RankVerdict::Rank);
      CHECK(r.alpha <= Ordinal::finite(lv.n));
      CHECK(is_torsion_element(m, s).kind == TorsionVerdict::Torsion);
    }
  }
}

TEST_CASE("left exactness: rank agrees between submodule and ambient") {
  TorsionSetup t = make_preset("hrbek");
  TorsionSetup sub = make_preset("hrbek-i");
  for (const auto& m : sample_monomials(5, 4)) {
    if (m.is_unit() || is_zero_element(m, t)) continue;
    RankVerdict a = quite_rank(m, t);
    RankVerdict b = quite_rank(m, sub);
    REQUIRE(a.kind == RankVerdict::Rank);
    REQUIRE(b.kind == RankVerdict::Rank);
    CHECK(a.alpha == b.alpha);
  }
}

TEST_CASE("module classification of the presets") {
  TorsionClass c = classify_module(make_preset("hrbek"));
  REQUIRE(c.kind == TorsionClass::Quite);
  CHECK(c.length == *parse_ordinal("w + 1"));
  CHECK(classify_module(make_preset("hrbek-i")).kind == TorsionClass::Strong);
  CHECK(classify_module(make_preset("hrbek-ti")).kind == TorsionClass::Strong);
  c = classify_module(make_preset("squares"));
  REQUIRE(c.kind == TorsionClass::TorsionOnly);
  CHECK(c.witness_seq.size() >= 3);
  CHECK(classify_module(make_preset("staircase")).kind ==
        TorsionClass::TorsionOnly);
  TorsionSetup free;
  free.name = "free";
  free.I.hi = 1;
  CHECK(classify_module(free).kind == TorsionClass::NotTorsion);
}

TEST_CASE("T-nilpotence soundness on quite modules") {
  TorsionSetup h = make_preset("hrbek");
  REQUIRE(classify_module(h).kind == TorsionClass::Quite);
  for (auto strat : {Adversary::ConstantGenerator,
                     Adversary::DistinctGenerators, Adversary::GreedyByRank}) {
    for (const auto& m : sample_monomials(3, 3)) {
      if (is_zero_element(m, h)) continue;
      AdversaryRun run = run_adversary(m, h, strat, 16);
      CHECK(run.reached_zero);
    }
  }
  // and the squares module has an adversary that never loses
  AdversaryRun esc = run_adversary(Monomial(), make_preset("squares"),
                                   Adversary::DistinctGenerators, 16);
  CHECK_FALSE(esc.reached_zero);
  CHECK(esc.sequence.size() == 16);
}

TEST_CASE("verdict printing") {
  TorsionSetup h = make_preset("hrbek");
  CHECK(to_string(quite_rank(mon({{3, 1}}), h)) == "rank(2)");
  CHECK(to_string(quite_rank(Monomial(), h)) == "rank(w)");
  CHECK(to_string(strong_level(mon({{3, 1}}), h)) == "level(2)");
  CHECK(to_string(strong_level(Monomial(), h)) == "not-strong");
  CHECK(to_string(classify_module(h)) == "quite(w + 1)");
  CHECK(to_string(classify_module(make_preset("hrbek-ti"))) == "strong");
}
