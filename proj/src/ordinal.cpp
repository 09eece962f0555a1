#include "ordo/ordinal.hpp"

#include <cctype>
#include <stdexcept>

namespace ordo {

namespace {

std::strong_ordering compare_terms(const std::vector<OrdinalTerm>& x,
                                   const std::vector<OrdinalTerm>& y) {
  for (std::size_t i = 0; i < x.size() && i < y.size(); ++i) {
    auto c = compare_terms(x[i].exponent, y[i].exponent);
    if (c != std::strong_ordering::equal) return c;
    if (x[i].coeff != y[i].coeff)
      return x[i].coeff < y[i].coeff ? std::strong_ordering::less
                                     : std::strong_ordering::greater;
  }
  if (x.size() == y.size()) return std::strong_ordering::equal;
  return x.size() < y.size() ? std::strong_ordering::less
                             : std::strong_ordering::greater;
}

// Lift a canonical term list back into an Ordinal.
Ordinal wrap(const std::vector<OrdinalTerm>& v) {
  Ordinal r;
  for (const auto& t : v)
    r = add(r, Ordinal::omega_pow(wrap(t.exponent), t.coeff));
  return r;
}

}  // namespace

Ordinal Ordinal::finite(std::uint64_t n) {
  Ordinal o;
  if (n > 0) o.terms_.push_back({{}, n});
  return o;
}

Ordinal Ordinal::omega() { return omega_pow(finite(1), 1); }

Ordinal Ordinal::omega_pow(const Ordinal& e, std::uint64_t c) {
  Ordinal o;
  if (c == 0) return o;
  o.terms_.push_back({e.terms(), c});
  return o;
}

bool Ordinal::is_finite() const {
  return terms_.empty() || (terms_.size() == 1 && terms_[0].exponent.empty());
}

std::uint64_t Ordinal::finite_value() const {
  return terms_.empty() ? 0 : terms_[0].coeff;
}

bool Ordinal::is_successor() const {
  return !terms_.empty() && terms_.back().exponent.empty();
}

Ordinal Ordinal::pred() const {
  if (!is_successor()) throw std::invalid_argument("pred: not a successor");
  Ordinal o = *this;
  if (o.terms_.back().coeff == 1)
    o.terms_.pop_back();
  else
    o.terms_.back().coeff -= 1;
  return o;
}

Ordinal Ordinal::leading_exponent() const {
  if (terms_.empty()) throw std::invalid_argument("leading_exponent of 0");
  return wrap(terms_[0].exponent);
}

std::strong_ordering compare(const Ordinal& a, const Ordinal& b) {
  return compare_terms(a.terms(), b.terms());
}

std::strong_ordering operator<=>(const Ordinal& a, const Ordinal& b) {
  return compare(a, b);
}

bool operator==(const Ordinal& a, const Ordinal& b) {
  return compare(a, b) == std::strong_ordering::equal;
}

Ordinal add(const Ordinal& a, const Ordinal& b) {
  if (b.is_zero()) return a;
  if (a.is_zero()) return b;
  const auto& eb = b.terms_[0].exponent;
  Ordinal r;
  std::size_t i = 0;
  while (i < a.terms_.size() &&
         compare_terms(a.terms_[i].exponent, eb) == std::strong_ordering::greater) {
    r.terms_.push_back(a.terms_[i]);
    ++i;
  }
  OrdinalTerm merged = b.terms_[0];
  if (i < a.terms_.size() &&
      compare_terms(a.terms_[i].exponent, eb) == std::strong_ordering::equal)
    merged.coeff += a.terms_[i].coeff;
  r.terms_.push_back(merged);
  for (std::size_t j = 1; j < b.terms_.size(); ++j)
    r.terms_.push_back(b.terms_[j]);
  return r;
}

Ordinal mul(const Ordinal& a, const Ordinal& b) {
  if (a.is_zero() || b.is_zero()) return Ordinal();
  const Ordinal ea1 = a.leading_exponent();
  Ordinal result;
  for (const auto& tb : b.terms_) {
    Ordinal eb = wrap(tb.exponent);
    Ordinal part;
    if (!eb.is_zero()) {
      part = Ordinal::omega_pow(add(ea1, eb), tb.coeff);
    } else if (!ea1.is_zero()) {
      // infinite a times a finite term: only the leading coefficient scales
      part = a;
      part.terms_[0].coeff *= tb.coeff;
    } else {
      part = Ordinal::finite(a.terms_[0].coeff * tb.coeff);
    }
    result = add(result, part);
  }
  return result;
}

Ordinal fundamental_sequence(const Ordinal& a, std::uint64_t n) {
  if (!a.is_limit())
    throw std::invalid_argument("fundamental_sequence: not a limit ordinal");
  // Split off the last CNF term: a = g + w^e * c with e > 0.
  const OrdinalTerm& last = a.terms().back();
  Ordinal g;
  for (std::size_t i = 0; i + 1 < a.terms().size(); ++i) {
    const auto& t = a.terms()[i];
    g = add(g, Ordinal::omega_pow(wrap(t.exponent), t.coeff));
  }
  Ordinal e = wrap(last.exponent);
  if (last.coeff > 1) g = add(g, Ordinal::omega_pow(e, last.coeff - 1));
  if (e.is_successor())
    return add(g, mul(Ordinal::omega_pow(e.pred()), Ordinal::finite(n)));
  return add(g, Ordinal::omega_pow(fundamental_sequence(e, n)));
}

std::string Ordinal::to_string() const {
  if (terms_.empty()) return "0";
  std::string out;
  bool first = true;
  for (const auto& t : terms_) {
    if (!first) out += " + ";
    first = false;
    Ordinal e = wrap(t.exponent);
    if (e.is_zero()) {
      out += std::to_string(t.coeff);
      continue;
    }
    if (e == Ordinal::finite(1)) {
      out += "w";
    } else if (e.is_finite()) {
      out += "w^" + std::to_string(e.finite_value());
    } else {
      out += "w^(" + e.to_string() + ")";
    }
    if (t.coeff != 1) out += "*" + std::to_string(t.coeff);
  }
  return out;
}

namespace {

struct OrdParser {
  const std::string& s;
  std::size_t pos = 0;

  void skip_ws() {
    while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
  }

  bool eat(char c) {
    skip_ws();
    if (pos < s.size() && s[pos] == c) {
      ++pos;
      return true;
    }
    return false;
  }

  std::optional<std::uint64_t> number() {
    skip_ws();
    if (pos >= s.size() || !std::isdigit(static_cast<unsigned char>(s[pos])))
      return std::nullopt;
    std::uint64_t v = 0;
    while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) {
      v = v * 10 + static_cast<std::uint64_t>(s[pos] - '0');
      ++pos;
    }
    return v;
  }

  // term := 'w' ['^' exponent] ['*' number] | number
  std::optional<Ordinal> term() {
    skip_ws();
    if (pos < s.size() && (s[pos] == 'w' || s[pos] == 'W')) {
      ++pos;
      Ordinal e = Ordinal::finite(1);
      if (eat('^')) {
        skip_ws();
        if (eat('(')) {
          auto inner = sum();
          if (!inner || !eat(')')) return std::nullopt;
          e = *inner;
        } else if (pos < s.size() && (s[pos] == 'w' || s[pos] == 'W')) {
          auto inner = term();
          if (!inner) return std::nullopt;
          e = *inner;
        } else {
          auto num = number();
          if (!num) return std::nullopt;
          e = Ordinal::finite(*num);
        }
      }
      std::uint64_t c = 1;
      if (eat('*')) {
        auto num = number();
        if (!num || *num == 0) return std::nullopt;
        c = *num;
      }
      return Ordinal::omega_pow(e, c);
    }
    auto num = number();
    if (!num) return std::nullopt;
    return Ordinal::finite(*num);
  }

  std::optional<Ordinal> sum() {
    auto t = term();
    if (!t) return std::nullopt;
    Ordinal acc = *t;
    while (eat('+')) {
      auto u = term();
      if (!u) return std::nullopt;
      acc = add(acc, *u);
    }
    return acc;
  }
};

}  // namespace

std::optional<Ordinal> parse_ordinal(const std::string& text) {
  OrdParser p{text};
  auto r = p.sum();
  if (!r) return std::nullopt;
  p.skip_ws();
  if (p.pos != text.size()) return std::nullopt;
  return r;
}

}  // namespace ordo
