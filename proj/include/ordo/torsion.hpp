// Torsion classifiers on monomial quotient modules: strong level, ordinal
// quite-rank, per-generator torsion test, and the module-level classification
// with generator-sequence adversaries.
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ordo/ordinal.hpp"
#include "ordo/ring.hpp"

namespace ordo {

// The ideal I is generated by the variables x_i for i in [lo, hi] (hi empty
// means all of them) together with finitely many extra monomials.
struct GeneratorSpec {
  std::uint64_t lo = 1;
  std::optional<std::uint64_t> hi;
  std::vector<Monomial> extra;
};

// Module of monomial classes: the quotient T/J restricted to monomials of
// degree >= min_degree (min_degree 1 carves out the submodule generated by
// the variables, e.g. the ideal I itself viewed as a T-module).
struct TorsionSetup {
  std::string name;
  GeneratorSpec I;
  MonomialIdealSpec J;
  std::uint64_t min_degree = 0;
};

// Shipped presets: "hrbek" (J = x_i^{i+1}, x_i x_j), "hrbek-i" (the ideal I
// of the same ring as a module), "hrbek-ti" (the quotient T/I), "squares"
// (J = x_i^2), "staircase" (J = x_1, x_2^2, x_3^3, ...).
TorsionSetup make_preset(const std::string& name);
std::vector<std::string> preset_names();

bool is_zero_element(const Monomial& m, const TorsionSetup& setup);

struct RankVerdict {
  enum Kind { Rank, NoRank, Unknown } kind = Unknown;
  Ordinal alpha;              // Rank
  std::vector<Var> witness;   // NoRank: initial segment of the sequence
  std::uint64_t budget = 0;   // Unknown
};

struct LevelVerdict {
  enum Kind { Level, NotStrong, Unknown } kind = Unknown;
  std::uint64_t n = 0;
  std::uint64_t cap = 0;
};

struct TorsionVerdict {
  enum Kind { Torsion, NotTorsion, Unknown } kind = Unknown;
  Var s = 0;  // NotTorsion witness generator
  std::uint64_t cap = 0;
};

struct TorsionClass {
  enum Kind { Strong, Quite, TorsionOnly, NotTorsion, Unknown } kind = Unknown;
  Ordinal length;                 // Quite: filtration length
  std::vector<Var> witness_seq;   // TorsionOnly
  Monomial witness_elt;           // NotTorsion
  Var witness_s = 0;              // NotTorsion
  std::string detail;
};

// Least ordinal alpha with m in F^(I)_alpha of the torsion filtration;
// NoRank carries a certified non-terminating generator sequence. Throws
// ZeroElement when m is zero in the module.
RankVerdict quite_rank(const Monomial& m, const TorsionSetup& setup,
                       std::uint64_t budget = 32);

// Least n with I^{n+1} m = 0.
LevelVerdict strong_level(const Monomial& m, const TorsionSetup& setup,
                          std::uint64_t cap = 32);

// Per-generator torsion: every generator has a finite annihilating power.
TorsionVerdict is_torsion_element(const Monomial& m, const TorsionSetup& setup,
                                  std::uint64_t cap = 32);

enum class Adversary { ConstantGenerator, DistinctGenerators, GreedyByRank };

struct AdversaryRun {
  std::vector<Var> sequence;
  bool reached_zero = false;
};

// Plays a generator sequence against m for at most budget steps.
AdversaryRun run_adversary(const Monomial& m, const TorsionSetup& setup,
                           Adversary strategy, std::uint64_t budget);

TorsionClass classify_module(const TorsionSetup& setup,
                             std::uint64_t budget = 8);

std::string to_string(const RankVerdict& v);
std::string to_string(const LevelVerdict& v);
std::string to_string(const TorsionVerdict& v);
std::string to_string(const TorsionClass& v);

}  // namespace ordo
