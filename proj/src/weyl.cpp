#include "ordo/weyl.hpp"

#include <sstream>

namespace ordo {

namespace {

Rat binomial(std::uint64_t n, std::uint64_t k) {
  Rat r = 1;
  for (std::uint64_t j = 0; j < k; ++j) r *= Rat(n - j) / Rat(j + 1);
  return r;
}

Rat falling(std::uint64_t n, std::uint64_t k) {
  Rat r = 1;
  for (std::uint64_t j = 0; j < k; ++j) r *= Rat(n - j);
  return r;
}

}  // namespace

WeylOp WeylOp::identity() { return term(Monomial(), Monomial(), 1); }

WeylOp WeylOp::mult(const Poly& f) {
  WeylOp r;
  for (const auto& [m, c] : f.terms()) r.add_term(m, Monomial(), c);
  return r;
}

WeylOp WeylOp::derivative(Var v, std::uint64_t k) {
  return term(Monomial(), Monomial::var(v, k), 1);
}

WeylOp WeylOp::term(const Monomial& a, const DerivMultiIndex& b, const Rat& c) {
  WeylOp r;
  r.add_term(a, b, c);
  return r;
}

void WeylOp::add_term(const Monomial& a, const DerivMultiIndex& b, const Rat& c) {
  if (c == 0) return;
  auto key = std::make_pair(a, b);
  auto it = terms_.find(key);
  if (it == terms_.end()) {
    terms_[key] = c;
    return;
  }
  it->second += c;
  if (it->second == 0) terms_.erase(it);
}

WeylOp WeylOp::operator+(const WeylOp& o) const {
  WeylOp r = *this;
  for (const auto& [k, c] : o.terms_) r.add_term(k.first, k.second, c);
  return r;
}

WeylOp WeylOp::operator-(const WeylOp& o) const { return *this + (-o); }

WeylOp WeylOp::operator-() const {
  WeylOp r;
  for (const auto& [k, c] : terms_) r.terms_[k] = -c;
  return r;
}

WeylOp WeylOp::scale(const Rat& c) const {
  WeylOp r;
  if (c == 0) return r;
  for (const auto& [k, d] : terms_) r.terms_[k] = d * c;
  return r;
}

std::vector<Var> WeylOp::variables() const {
  std::map<Var, bool> seen;
  for (const auto& [k, c] : terms_) {
    for (const auto& [v, e] : k.first.exponents()) seen[v] = true;
    for (const auto& [v, e] : k.second.exponents()) seen[v] = true;
  }
  std::vector<Var> out;
  for (const auto& [v, b] : seen) out.push_back(v);
  return out;
}

bool operator==(const WeylOp& x, const WeylOp& y) { return x.terms_ == y.terms_; }

std::string WeylOp::to_string() const {
  if (terms_.empty()) return "0";
  std::ostringstream out;
  bool first = true;
  for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
    const auto& [key, c] = *it;
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
    std::vector<std::string> parts;
    if (a != 1 || (key.first.is_unit() && key.second.is_unit()))
      parts.push_back(a.str());
    if (!key.first.is_unit()) parts.push_back(key.first.to_string());
    for (const auto& [v, e] : key.second.exponents()) {
      std::string d = "d(" + var_to_string(v) + ")";
      if (e > 1) d += "^" + std::to_string(e);
      parts.push_back(d);
    }
    for (std::size_t i = 0; i < parts.size(); ++i) {
      if (i) out << "*";
      out << parts[i];
    }
  }
  return out.str();
}

namespace {

// Push d^b past x^c: d^b ∘ x^c = sum over j <= min(b,c) of
// prod_v C(b_v, j_v) * (c_v)_(j_v)  x^{c-j} d^{b-j}.
WeylOp commute_past(const DerivMultiIndex& b, const Monomial& c) {
  WeylOp result;
  // enumerate the lowering multi-index j over variables shared by b and c
  std::vector<std::pair<Var, std::pair<std::uint64_t, std::uint64_t>>> shared;
  for (const auto& [v, bv] : b.exponents()) {
    std::uint64_t cv = c.exponent_of(v);
    if (cv > 0) shared.push_back({v, {bv, cv}});
  }
  std::vector<std::uint64_t> j(shared.size(), 0);
  while (true) {
    Rat coef = 1;
    Monomial xm = c;
    DerivMultiIndex dm = b;
    for (std::size_t i = 0; i < shared.size(); ++i) {
      auto [v, bc] = shared[i];
      auto [bv, cv] = bc;
      coef *= binomial(bv, j[i]) * falling(cv, j[i]);
      xm.set_exponent(v, cv - j[i]);
      dm.set_exponent(v, bv - j[i]);
    }
    result.add_term(xm, dm, coef);
    // next multi-index j
    std::size_t i = 0;
    for (; i < shared.size(); ++i) {
      auto [bv, cv] = shared[i].second;
      if (j[i] < std::min(bv, cv)) {
        ++j[i];
        break;
      }
      j[i] = 0;
    }
    if (i == shared.size()) break;
  }
  return result;
}

}  // namespace

WeylOp compose(const WeylOp& A, const WeylOp& B) {
  WeylOp r;
  for (const auto& [ka, ca] : A.terms()) {
    for (const auto& [kb, cb] : B.terms()) {
      // x^a d^b ∘ x^c d^e = x^a (d^b ∘ x^c) d^e
      WeylOp mid = commute_past(ka.second, kb.first);
      for (const auto& [km, cm] : mid.terms())
        r.add_term(ka.first.times(km.first), km.second.times(kb.second),
                   ca * cb * cm);
    }
  }
  return r;
}

WeylOp normal_form(const std::vector<RawFactor>& raw) {
  WeylOp r = WeylOp::identity();
  for (const auto& f : raw) {
    if (std::holds_alternative<MulFactor>(f))
      r = compose(r, WeylOp::mult(std::get<MulFactor>(f).f));
    else {
      const auto& d = std::get<DeriveFactor>(f);
      r = compose(r, WeylOp::derivative(d.v, d.k));
    }
  }
  return r;
}

WeylOp theta_poly(const Poly& r, const WeylOp& A) {
  WeylOp m = WeylOp::mult(r);
  return compose(m, A) - compose(A, m);
}

Poly apply_finite(const WeylOp& A, const Poly& f) {
  Poly out;
  for (const auto& [k, c] : A.terms()) {
    Poly g = f;
    for (const auto& [v, e] : k.second.exponents()) g = partial_derive(g, v, e);
    if (g.is_zero()) continue;
    out = out + poly_mul(Poly::term(k.first, c), g);
  }
  return out;
}

std::uint64_t finite_order(const WeylOp& A) {
  if (A.is_zero()) throw ZeroOperator();
  std::uint64_t n = 0;
  for (const auto& [k, c] : A.terms()) n = std::max(n, k.second.degree());
  return n;
}

}  // namespace ordo
