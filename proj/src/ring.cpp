#include "ordo/ring.hpp"

#include <sstream>
#include <stdexcept>

namespace ordo {

std::string var_to_string(Var v) {
  if (v >= kAllocBase) return "u[" + std::to_string(v - kAllocBase) + "]";
  if (v >= kYBase) {
    std::uint64_t j = v - kYBase;
    return j == 1 ? "y" : "y[" + std::to_string(j) + "]";
  }
  return "x" + std::to_string(v);
}

Monomial Monomial::var(Var v, std::uint64_t e) {
  Monomial m;
  if (e > 0) m.exps_[v] = e;
  return m;
}

std::uint64_t Monomial::exponent_of(Var v) const {
  auto it = exps_.find(v);
  return it == exps_.end() ? 0 : it->second;
}

std::uint64_t Monomial::degree() const {
  std::uint64_t d = 0;
  for (const auto& [v, e] : exps_) d += e;
  return d;
}

Monomial Monomial::times(const Monomial& o) const {
  Monomial r = *this;
  for (const auto& [v, e] : o.exps_) r.exps_[v] += e;
  return r;
}

bool Monomial::divides(const Monomial& o) const {
  for (const auto& [v, e] : exps_)
    if (o.exponent_of(v) < e) return false;
  return true;
}

Monomial Monomial::quotient_of(const Monomial& o) const {
  Monomial r;
  for (const auto& [v, e] : o.exps_) {
    std::uint64_t d = e - exponent_of(v);
    if (d > 0) r.exps_[v] = d;
  }
  return r;
}

void Monomial::set_exponent(Var v, std::uint64_t e) {
  if (e == 0)
    exps_.erase(v);
  else
    exps_[v] = e;
}

std::string Monomial::to_string() const {
  if (exps_.empty()) return "1";
  std::string out;
  bool first = true;
  for (const auto& [v, e] : exps_) {
    if (!first) out += "*";
    first = false;
    out += var_to_string(v);
    if (e > 1) out += "^" + std::to_string(e);
  }
  return out;
}

std::strong_ordering operator<=>(const Monomial& a, const Monomial& b) {
  std::uint64_t da = a.degree(), db = b.degree();
  if (da != db) return da <=> db;
  // same degree: earlier variable with a higher exponent wins
  auto ia = a.exps_.begin(), ib = b.exps_.begin();
  while (ia != a.exps_.end() && ib != b.exps_.end()) {
    if (ia->first != ib->first)
      // the smaller index has a positive exponent only on one side
      return ia->first < ib->first ? std::strong_ordering::greater
                                   : std::strong_ordering::less;
    if (ia->second != ib->second)
      return ia->second < ib->second ? std::strong_ordering::less
                                     : std::strong_ordering::greater;
    ++ia;
    ++ib;
  }
  return std::strong_ordering::equal;
}

bool operator==(const Monomial& a, const Monomial& b) {
  return a.exps_ == b.exps_;
}

Poly Poly::constant(const Rat& c) {
  Poly p;
  if (c != 0) p.terms_[Monomial()] = c;
  return p;
}

Poly Poly::variable(Var v) { return term(Monomial::var(v), 1); }

Poly Poly::term(const Monomial& m, const Rat& c) {
  Poly p;
  if (c != 0) p.terms_[m] = c;
  return p;
}

bool Poly::is_constant() const {
  return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first.is_unit());
}

Rat Poly::coeff(const Monomial& m) const {
  auto it = terms_.find(m);
  return it == terms_.end() ? Rat(0) : it->second;
}

std::uint64_t Poly::degree() const {
  std::uint64_t d = 0;
  for (const auto& [m, c] : terms_) d = std::max(d, m.degree());
  return d;
}

std::vector<Var> Poly::variables() const {
  std::map<Var, bool> seen;
  for (const auto& [m, c] : terms_)
    for (const auto& [v, e] : m.exponents()) seen[v] = true;
  std::vector<Var> out;
  for (const auto& [v, b] : seen) out.push_back(v);
  return out;
}

void Poly::add_term(const Monomial& m, const Rat& c) {
  if (c == 0) return;
  auto it = terms_.find(m);
  if (it == terms_.end()) {
    terms_[m] = c;
    return;
  }
  it->second += c;
  if (it->second == 0) terms_.erase(it);
}

Poly Poly::operator+(const Poly& o) const {
  Poly r = *this;
  for (const auto& [m, c] : o.terms_) r.add_term(m, c);
  return r;
}

Poly Poly::operator-(const Poly& o) const { return *this + (-o); }

Poly Poly::operator-() const {
  Poly r;
  for (const auto& [m, c] : terms_) r.terms_[m] = -c;
  return r;
}

Poly Poly::scale(const Rat& c) const {
  Poly r;
  if (c == 0) return r;
  for (const auto& [m, k] : terms_) r.terms_[m] = k * c;
  return r;
}

bool operator==(const Poly& a, const Poly& b) { return a.terms_ == b.terms_; }

std::string Poly::to_string() const {
  if (terms_.empty()) return "0";
  // highest terms first
  std::ostringstream out;
  bool first = true;
  for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
    const auto& [m, c] = *it;
    Rat a = c;
    if (first) {
      if (a < 0) {
        out << "-";
        a = -a;
      }
    } else {
      out << (a < 0 ? " - " : " + ");
      if (a < 0) a = -a;
    }
    first = false;
    if (m.is_unit()) {
      out << a;
    } else if (a == 1) {
      out << m.to_string();
    } else {
      out << a << "*" << m.to_string();
    }
  }
  return out.str();
}

Poly poly_mul(const Poly& f, const Poly& g) {
  Poly r;
  for (const auto& [mf, cf] : f.terms())
    for (const auto& [mg, cg] : g.terms()) r.add_term(mf.times(mg), cf * cg);
  return r;
}

Poly partial_derive(const Poly& f, Var v, std::uint64_t k) {
  Poly r = f;
  for (std::uint64_t step = 0; step < k; ++step) {
    Poly next;
    for (const auto& [m, c] : r.terms()) {
      std::uint64_t e = m.exponent_of(v);
      if (e == 0) continue;
      Monomial m2 = m;
      m2.set_exponent(v, e - 1);
      next.add_term(m2, c * Rat(e));
    }
    r = next;
    if (r.is_zero()) break;
  }
  return r;
}

namespace {

bool pure_power_hits(const PurePowers& fam, Var v, std::uint64_t e) {
  // is there i in range with var(i) == v and exp(i) <= e?
  // var(i) = s + t*i
  std::vector<std::uint64_t> candidates;
  if (fam.t == 0) {
    if (v != fam.s) return false;
    // any i in range; minimal exp is at i0 if a >= 0, unboundedly small if a<0
    if (fam.a >= 0) {
      std::int64_t exp = fam.a * static_cast<std::int64_t>(fam.i0) + fam.b;
      return exp >= 1 && static_cast<std::uint64_t>(exp) <= e;
    }
    // decreasing exponents: walk until exp < 1 or hit
    std::uint64_t hi = fam.i1.value_or(fam.i0 + e + 16);
    for (std::uint64_t i = fam.i0; i <= hi; ++i) {
      std::int64_t exp = fam.a * static_cast<std::int64_t>(i) + fam.b;
      if (exp < 1) break;
      if (static_cast<std::uint64_t>(exp) <= e) return true;
    }
    return false;
  }
  if (v < fam.s || (v - fam.s) % fam.t != 0) return false;
  std::uint64_t i = (v - fam.s) / fam.t;
  if (i < fam.i0) return false;
  if (fam.i1 && i > *fam.i1) return false;
  std::int64_t exp = fam.a * static_cast<std::int64_t>(i) + fam.b;
  return exp >= 1 && static_cast<std::uint64_t>(exp) <= e;
}

bool in_pair_range(const PairProducts& fam, Var v) {
  return v >= fam.lo && (!fam.hi || v <= *fam.hi);
}

}  // namespace

bool ideal_member(const Monomial& m, const MonomialIdealSpec& J) {
  for (const auto& g : J.finite_generators)
    if (g.divides(m)) return true;
  for (const auto& fam : J.pure_power_families)
    for (const auto& [v, e] : m.exponents())
      if (pure_power_hits(fam, v, e)) return true;
  for (const auto& fam : J.pair_product_families) {
    int hits = 0;
    for (const auto& [v, e] : m.exponents())
      if (in_pair_range(fam, v) && ++hits >= 2) return true;
  }
  return false;
}

std::optional<Poly> divide_exact(const Poly& num, const Poly& f) {
  if (f.is_zero()) return std::nullopt;
  const auto& [fm, fc] = *f.terms().rbegin();
  Poly rem = num;
  Poly quot;
  while (!rem.is_zero()) {
    const auto& [rm, rc] = *rem.terms().rbegin();
    if (!fm.divides(rm)) return std::nullopt;
    Monomial q = fm.quotient_of(rm);
    Rat c = rc / fc;
    quot.add_term(q, c);
    rem = rem - poly_mul(Poly::term(q, c), f);
  }
  return quot;
}

Poly reduce_mod(const Poly& f, const MonomialIdealSpec& J) {
  Poly r;
  for (const auto& [m, c] : f.terms())
    if (!ideal_member(m, J)) r.add_term(m, c);
  return r;
}

}  // namespace ordo
