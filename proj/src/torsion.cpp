#include "ordo/torsion.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

#include "ordo/errors.hpp"

namespace ordo {

TorsionSetup make_preset(const std::string& name) {
  TorsionSetup s;
  s.name = name;
  if (name == "hrbek" || name == "hrbek-i") {
    s.J.pure_power_families.push_back(PurePowers{0, 1, 1, 1, 1, {}});
    s.J.pair_product_families.push_back(PairProducts{1, {}});
    if (name == "hrbek-i") s.min_degree = 1;
    return s;
  }
  if (name == "hrbek-ti") {
    s.J.pure_power_families.push_back(PurePowers{0, 1, 0, 1, 1, {}});
    return s;
  }
  if (name == "squares") {
    s.J.pure_power_families.push_back(PurePowers{0, 1, 0, 2, 1, {}});
    return s;
  }
  if (name == "staircase") {
    s.J.pure_power_families.push_back(PurePowers{0, 1, 1, 0, 1, {}});
    return s;
  }
  throw std::invalid_argument("unknown torsion preset: " + name);
}

std::vector<std::string> preset_names() {
  return {"hrbek", "hrbek-i", "hrbek-ti", "squares", "staircase"};
}

bool is_zero_element(const Monomial& m, const TorsionSetup& setup) {
  if (m.degree() < setup.min_degree) return true;
  return ideal_member(m, setup.J);
}

namespace {

// least e with x_v^e in J via the pure-power families and pure finite
// generators; nullopt when no pure power of v alone is ever a member
std::optional<std::uint64_t> pure_cap(const TorsionSetup& s, Var v) {
  std::optional<std::uint64_t> best;
  auto consider = [&](std::uint64_t e) {
    if (!best || e < *best) best = e;
  };
  for (const auto& f : s.J.pure_power_families) {
    if (f.t == 0) continue;
    if (v < f.s || (v - f.s) % f.t != 0) continue;
    std::uint64_t i = (v - f.s) / f.t;
    if (i < f.i0 || (f.i1 && i > *f.i1)) continue;
    std::int64_t e = f.a * static_cast<std::int64_t>(i) + f.b;
    if (e >= 1) consider(static_cast<std::uint64_t>(e));
  }
  for (const auto& g : s.J.finite_generators)
    if (g.exponents().size() == 1 && g.exponents().begin()->first == v)
      consider(g.exponents().begin()->second);
  return best;
}

// least k >= 1 with x_v^k * m in J; nullopt = provably never
std::optional<std::uint64_t> kill_exponent(const TorsionSetup& s,
                                           const Monomial& m, Var v) {
  std::uint64_t bound = 2;
  if (auto c = pure_cap(s, v)) bound = std::max(bound, *c + 1);
  for (const auto& g : s.J.finite_generators)
    bound = std::max(bound, g.exponent_of(v) + 1);
  Monomial cur = m;
  for (std::uint64_t k = 1; k <= bound; ++k) {
    cur = cur.times(Monomial::var(v));
    if (ideal_member(cur, s.J)) return k;
  }
  // membership under repeated multiplication by one variable is decided
  // within the bound: pair membership does not depend on the exponent, and
  // pure powers / finite generators are covered by `bound`
  return std::nullopt;
}

struct TailInfo {
  bool has_gens = false;        // infinitely many generators x_i
  std::uint64_t start = 1;      // indices >= start behave uniformly
  bool pair_covered = false;    // an unbounded pair family
  std::uint64_t pair_lo = 1;
  // x_i^{a*i+b} in J for all i >= start
  std::optional<std::pair<std::int64_t, std::int64_t>> cap;
};

TailInfo tail_info(const TorsionSetup& s, const Monomial& m) {
  TailInfo t;
  t.has_gens = !s.I.hi.has_value();
  std::uint64_t start = s.I.lo + 1;
  for (const auto& [v, e] : m.exponents())
    start = std::max(start, static_cast<std::uint64_t>(v) + 1);
  for (const auto& g : s.I.extra)
    for (const auto& [v, e] : g.exponents()) start = std::max(start, v + 1);
  for (const auto& g : s.J.finite_generators)
    for (const auto& [v, e] : g.exponents()) start = std::max(start, v + 1);
  for (const auto& f : s.J.pure_power_families) {
    start = std::max(start, f.s + f.t * f.i0 + 1);
    if (f.i1) start = std::max(start, f.s + f.t * (*f.i1) + 1);
  }
  for (const auto& p : s.J.pair_product_families) {
    start = std::max(start, p.lo + 1);
    if (p.hi) start = std::max(start, *p.hi + 1);
    if (!p.hi) {
      if (!t.pair_covered || p.lo < t.pair_lo) t.pair_lo = p.lo;
      t.pair_covered = true;
    }
  }
  // the uniform cap on tail generators: a family x_i^{a*i+b} covering every
  // large index (identity variable map, unbounded range)
  for (const auto& f : s.J.pure_power_families)
    if (f.s == 0 && f.t == 1 && !f.i1) {
      auto c = std::make_pair(f.a, f.b);
      if (!t.cap || c < *t.cap) t.cap = c;
    }
  if (t.cap && t.cap->first >= 1) {
    // push start far enough that exp(i) >= 2 on the tail
    while (t.cap->first * static_cast<std::int64_t>(start) + t.cap->second < 2)
      ++start;
  }
  t.start = start;
  return t;
}

// does multiplication by a fresh tail generator keep m alive?
bool tail_alive(const TorsionSetup& s, const TailInfo& t, const Monomial& m) {
  if (!t.has_gens) return false;
  if (t.pair_covered) {
    for (const auto& [v, e] : m.exponents())
      if (v >= t.pair_lo) return false;  // x_i * m contains a pair
  }
  if (!t.cap) return true;
  return t.cap->first >= 1 || t.cap->second >= 2;  // exp(i) >= 2 on the tail
}

std::vector<Var> head_gens(const TorsionSetup& s, const TailInfo& t) {
  std::uint64_t hi = s.I.hi ? *s.I.hi : t.start - 1;
  std::vector<Var> out;
  for (std::uint64_t v = s.I.lo; v <= hi; ++v) out.push_back(v);
  return out;
}

std::vector<Var> nonrank_witness(Var v, std::uint64_t step) {
  std::vector<Var> w;
  for (std::uint64_t k = 0; k < 8; ++k) w.push_back(v + k * step);
  return w;
}

const Ordinal& omax(const Ordinal& a, const Ordinal& b) {
  return a < b ? b : a;
}

RankVerdict rank_rec(const Monomial& m, const TorsionSetup& s,
                     std::uint64_t depth, std::uint64_t budget) {
  TailInfo t = tail_info(s, m);
  RankVerdict out;
  std::optional<Ordinal> tail_part;
  if (tail_alive(s, t, m)) {
    if (!t.pair_covered) {
      // fresh distinct tail generators never produce a member of J
      out.kind = RankVerdict::NoRank;
      out.witness = nonrank_witness(t.start, 1);
      return out;
    }
    if (!t.cap || !s.I.extra.empty()) {
      if (!t.cap && !kill_exponent(s, m, t.start)) {
        out.kind = RankVerdict::NoRank;
        out.witness = nonrank_witness(t.start, 0);
        return out;
      }
      out.kind = RankVerdict::Unknown;
      out.budget = budget;
      return out;
    }
    // pair-covered tail with uniform cap: after x_i only x_i itself can act,
    // so rank(x_i * m) = (a*i + b - 1) - 1 exactly, affine in i
    if (s.I.lo > t.pair_lo) {
      out.kind = RankVerdict::Unknown;
      out.budget = budget;
      return out;
    }
    tail_part = t.cap->first >= 1
                    ? Ordinal::omega()
                    : Ordinal::finite(
                          static_cast<std::uint64_t>(t.cap->second - 1));
  }
  std::vector<Var> survivors;
  for (Var v : head_gens(s, t))
    if (!ideal_member(m.times(Monomial::var(v)), s.J)) survivors.push_back(v);
  if (survivors.empty() && !tail_part) {
    out.kind = RankVerdict::Rank;
    out.alpha = Ordinal();
    return out;
  }
  for (Var v : survivors)
    if (!kill_exponent(s, m, v)) {
      out.kind = RankVerdict::NoRank;
      out.witness = nonrank_witness(v, 0);
      return out;
    }
  if (depth >= budget) {
    out.kind = RankVerdict::Unknown;
    out.budget = budget;
    return out;
  }
  Ordinal best;
  if (tail_part) best = *tail_part;
  for (Var v : survivors) {
    RankVerdict r = rank_rec(m.times(Monomial::var(v)), s, depth + 1, budget);
    if (r.kind == RankVerdict::NoRank) {
      r.witness.insert(r.witness.begin(), v);
      if (r.witness.size() > 8) r.witness.resize(8);
      return r;
    }
    if (r.kind == RankVerdict::Unknown) return r;
    best = omax(best, add(r.alpha, Ordinal::finite(1)));
  }
  out.kind = RankVerdict::Rank;
  out.alpha = best;
  return out;
}

}  // namespace

RankVerdict quite_rank(const Monomial& m, const TorsionSetup& setup,
                       std::uint64_t budget) {
  if (is_zero_element(m, setup)) throw ZeroElement();
  return rank_rec(m, setup, 0, budget);
}

namespace {

// longest surviving chain over the concrete head generators
struct LevelResult {
  LevelVerdict::Kind kind = LevelVerdict::Level;
  std::uint64_t n = 0;
};

LevelResult level_rec(const Monomial& m, const TorsionSetup& s,
                      std::uint64_t depth, std::uint64_t cap) {
  TailInfo t = tail_info(s, m);
  std::vector<Var> survivors;
  for (Var v : head_gens(s, t))
    if (!ideal_member(m.times(Monomial::var(v)), s.J)) survivors.push_back(v);
  for (Var v : survivors)
    if (!kill_exponent(s, m, v)) return {LevelVerdict::NotStrong, 0};
  if (survivors.empty()) return {LevelVerdict::Level, 0};
  if (depth >= cap) return {LevelVerdict::Unknown, 0};
  std::uint64_t best = 0;
  for (Var v : survivors) {
    LevelResult r = level_rec(m.times(Monomial::var(v)), s, depth + 1, cap);
    if (r.kind != LevelVerdict::Level) return r;
    best = std::max(best, r.n + 1);
  }
  return {LevelVerdict::Level, best};
}

}  // namespace

LevelVerdict strong_level(const Monomial& m, const TorsionSetup& setup,
                          std::uint64_t cap) {
  if (is_zero_element(m, setup)) throw ZeroElement();
  LevelVerdict out;
  out.cap = cap;
  TailInfo t = tail_info(setup, m);
  std::uint64_t tail_bound = 0;
  if (tail_alive(setup, t, m)) {
    if (!t.pair_covered || !t.cap || t.cap->first >= 1 ||
        !setup.I.extra.empty()) {
      // arbitrarily long surviving products through the tail generators
      out.kind = LevelVerdict::NotStrong;
      return out;
    }
    tail_bound = static_cast<std::uint64_t>(t.cap->second - 1);
  }
  LevelResult r = level_rec(m, setup, 0, cap);
  out.kind = r.kind;
  if (r.kind == LevelVerdict::Level) out.n = std::max(r.n, tail_bound);
  return out;
}

TorsionVerdict is_torsion_element(const Monomial& m, const TorsionSetup& setup,
                                  std::uint64_t cap) {
  TorsionVerdict out;
  out.cap = cap;
  if (is_zero_element(m, setup)) {
    out.kind = TorsionVerdict::Torsion;
    return out;
  }
  TailInfo t = tail_info(setup, m);
  for (Var v : head_gens(setup, t))
    if (!ideal_member(m.times(Monomial::var(v)), setup.J) &&
        !kill_exponent(setup, m, v)) {
      out.kind = TorsionVerdict::NotTorsion;
      out.s = v;
      return out;
    }
  if (t.has_gens && tail_alive(setup, t, m) && !t.cap) {
    // some tail generator is never nilpotent on m
    if (!kill_exponent(setup, m, t.start)) {
      out.kind = TorsionVerdict::NotTorsion;
      out.s = t.start;
      return out;
    }
  }
  out.kind = TorsionVerdict::Torsion;
  return out;
}

AdversaryRun run_adversary(const Monomial& m, const TorsionSetup& setup,
                           Adversary strategy, std::uint64_t budget) {
  AdversaryRun run;
  Monomial cur = m;
  std::set<Var> used;
  std::optional<Var> constant_choice;
  for (std::uint64_t step = 0; step < budget; ++step) {
    // the window tracks cur so that fresh tail generators stay reachable
    std::uint64_t window = tail_info(setup, cur).start + 4;
    std::uint64_t hi = setup.I.hi ? std::min(*setup.I.hi, window) : window;
    std::vector<Var> survivors;
    for (Var v = setup.I.lo; v <= hi; ++v)
      if (!ideal_member(cur.times(Monomial::var(v)), setup.J))
        survivors.push_back(v);
    if (survivors.empty()) {
      run.reached_zero = true;
      return run;
    }
    std::optional<Var> pick;
    switch (strategy) {
      case Adversary::ConstantGenerator: {
        if (!constant_choice) {
          // prefer the generator that survives longest (never-dying first)
          std::uint64_t best_k = 0;
          for (Var v : survivors) {
            auto k = kill_exponent(setup, cur, v);
            if (!k) {
              constant_choice = v;
              break;
            }
            if (*k > best_k) {
              best_k = *k;
              constant_choice = v;
            }
          }
        }
        if (ideal_member(cur.times(Monomial::var(*constant_choice)),
                         setup.J)) {
          run.reached_zero = true;
          return run;
        }
        pick = *constant_choice;
        break;
      }
      case Adversary::DistinctGenerators: {
        for (Var v : survivors)
          if (!used.count(v)) {
            pick = v;
            break;
          }
        if (!pick) {
          run.reached_zero = true;  // every unused generator kills
          return run;
        }
        break;
      }
      case Adversary::GreedyByRank: {
        std::optional<Ordinal> best;
        for (Var v : survivors) {
          RankVerdict r = rank_rec(cur.times(Monomial::var(v)), setup, 0, 16);
          if (r.kind != RankVerdict::Rank) {
            pick = v;  // escapes every computed rank
            best.reset();
            break;
          }
          if (!best || *best < r.alpha) {
            best = r.alpha;
            pick = v;
          }
        }
        break;
      }
    }
    used.insert(*pick);
    run.sequence.push_back(*pick);
    cur = cur.times(Monomial::var(*pick));
  }
  run.reached_zero = false;
  return run;
}

TorsionClass classify_module(const TorsionSetup& setup, std::uint64_t budget) {
  TorsionClass out;
  // sample monomial classes on the first few variables
  std::uint64_t vmax = std::min<std::uint64_t>(5, std::max<std::uint64_t>(
                                                      2, budget));
  std::uint64_t dmax = vmax;
  std::vector<Monomial> samples;
  std::vector<Monomial> frontier{Monomial()};
  std::set<Monomial> seen{Monomial()};
  for (std::uint64_t d = 0; d < dmax; ++d) {
    std::vector<Monomial> next;
    for (const auto& f : frontier)
      for (Var v = 1; v <= vmax; ++v) {
        Monomial g = f.times(Monomial::var(v));
        if (seen.insert(g).second) next.push_back(g);
      }
    frontier = next;
  }
  for (const auto& g : seen)
    if (!is_zero_element(g, setup)) samples.push_back(g);
  if (samples.empty()) {
    out.kind = TorsionClass::Strong;
    out.detail = "module is zero on the sampled window";
    return out;
  }

  TailInfo t = tail_info(setup, Monomial());
  bool parametric_strong_ok = !t.has_gens || t.cap.has_value();

  bool all_level = true;
  for (const auto& g : samples) {
    LevelVerdict lv = strong_level(g, setup, 2 * budget + 8);
    if (lv.kind != LevelVerdict::Level) {
      all_level = false;
      break;
    }
  }
  if (all_level && parametric_strong_ok) {
    out.kind = TorsionClass::Strong;
    out.detail = "all sampled elements have finite strong level";
    return out;
  }

  bool all_rank = true;
  std::optional<std::vector<Var>> norank_witness;
  Ordinal max_rank;
  for (const auto& g : samples) {
    RankVerdict r = quite_rank(g, setup, 4 * budget);
    if (r.kind == RankVerdict::Rank) {
      max_rank = omax(max_rank, r.alpha);
      continue;
    }
    all_rank = false;
    if (r.kind == RankVerdict::NoRank && !norank_witness)
      norank_witness = r.witness;
  }
  if (all_rank) {
    out.kind = TorsionClass::Quite;
    out.length = add(max_rank, Ordinal::finite(1));
    out.detail = "all sampled ranks defined, maximum " + max_rank.to_string();
    return out;
  }

  for (const auto& g : samples) {
    TorsionVerdict tv = is_torsion_element(g, setup, 2 * budget + 8);
    if (tv.kind == TorsionVerdict::NotTorsion) {
      out.kind = TorsionClass::NotTorsion;
      out.witness_elt = g;
      out.witness_s = tv.s;
      return out;
    }
    if (tv.kind == TorsionVerdict::Unknown) {
      out.kind = TorsionClass::Unknown;
      return out;
    }
  }
  if (norank_witness) {
    out.kind = TorsionClass::TorsionOnly;
    out.witness_seq = *norank_witness;
    out.detail = "torsion, but a generator sequence never terminates";
    return out;
  }
  out.kind = TorsionClass::Unknown;
  return out;
}

std::string to_string(const RankVerdict& v) {
  switch (v.kind) {
    case RankVerdict::Rank:
      return "rank(" + v.alpha.to_string() + ")";
    case RankVerdict::NoRank: {
      std::string s = "no-rank(";
      for (std::size_t i = 0; i < v.witness.size(); ++i) {
        if (i) s += ",";
        s += var_to_string(v.witness[i]);
      }
      return s + ",...)";
    }
    default:
      return "unknown";
  }
}

std::string to_string(const LevelVerdict& v) {
  switch (v.kind) {
    case LevelVerdict::Level:
      return "level(" + std::to_string(v.n) + ")";
    case LevelVerdict::NotStrong:
      return "not-strong";
    default:
      return "unknown";
  }
}

std::string to_string(const TorsionVerdict& v) {
  switch (v.kind) {
    case TorsionVerdict::Torsion:
      return "torsion";
    case TorsionVerdict::NotTorsion:
      return "not-torsion(" + var_to_string(v.s) + ")";
    default:
      return "unknown";
  }
}

std::string to_string(const TorsionClass& v) {
  switch (v.kind) {
    case TorsionClass::Strong:
      return "strong";
    case TorsionClass::Quite:
      return "quite(" + v.length.to_string() + ")";
    case TorsionClass::TorsionOnly: {
      std::string s = "torsion-only(";
      for (std::size_t i = 0; i < v.witness_seq.size(); ++i) {
        if (i) s += ",";
        s += var_to_string(v.witness_seq[i]);
      }
      return s + ",...)";
    }
    case TorsionClass::NotTorsion:
      return "not-torsion(" + v.witness_elt.to_string() + "; " +
             var_to_string(v.witness_s) + ")";
    default:
      return "unknown";
  }
}

}  // namespace ordo
