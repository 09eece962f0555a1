#include "ordo/parse.hpp"

#include <cctype>
#include <cstdint>
#include <vector>

#include "ordo/errors.hpp"
#include "ordo/weyl.hpp"

namespace ordo {

namespace {

struct Cursor {
  const std::string& s;
  std::size_t pos = 0;

  [[noreturn]] void fail(const std::string& msg) const {
    throw MalformedTerm(msg, pos);
  }
  void skip_ws() {
    while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos])))
      ++pos;
  }
  char peek() {
    skip_ws();
    return pos < s.size() ? s[pos] : '\0';
  }
  bool eat(char c) {
    if (peek() != c) return false;
    ++pos;
    return true;
  }
  void expect(char c) {
    if (!eat(c)) fail(std::string("expected '") + c + "'");
  }
  bool at_end() { return peek() == '\0'; }

  std::uint64_t integer() {
    skip_ws();
    if (pos >= s.size() || !std::isdigit(static_cast<unsigned char>(s[pos])))
      fail("expected a number");
    std::uint64_t n = 0;
    while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos])))
      n = n * 10 + (s[pos++] - '0');
    return n;
  }

  std::string ident() {
    skip_ws();
    std::string out;
    while (pos < s.size() && std::isalpha(static_cast<unsigned char>(s[pos])))
      out += s[pos++];
    if (out.empty()) fail("expected a name");
    return out;
  }
};

Rat rational(Cursor& c) {
  Rat num = c.integer();
  // a '/' only continues the literal when a digit follows (it may also
  // introduce a fact(i) divisor in family coefficients)
  std::size_t save = c.pos;
  if (c.eat('/')) {
    c.skip_ws();
    if (c.pos < c.s.size() &&
        std::isdigit(static_cast<unsigned char>(c.s[c.pos]))) {
      std::size_t at = c.pos;
      Rat den = c.integer();
      if (den == 0) throw MalformedTerm("division by zero", at);
      num /= den;
    } else {
      c.pos = save;
    }
  }
  return num;
}

// the variable after its leading letter has been read
Var variable(Cursor& c, const std::string& head) {
  auto index = [&]() -> std::uint64_t {
    if (c.eat('[')) {
      std::uint64_t i = c.integer();
      c.expect(']');
      return i;
    }
    c.skip_ws();
    if (c.pos < c.s.size() &&
        std::isdigit(static_cast<unsigned char>(c.s[c.pos])))
      return c.integer();
    return 0;  // bare name
  };
  if (head == "x") {
    std::uint64_t i = index();
    if (i == 0) c.fail("variable index must be positive");
    return i;
  }
  if (head == "y") {
    std::uint64_t i = index();
    return y_var(i == 0 ? 1 : i);
  }
  if (head == "u") {
    c.expect('[');
    std::uint64_t i = c.integer();
    c.expect(']');
    return kAllocBase + i;
  }
  c.fail("unknown variable '" + head + "'");
}

std::uint64_t exponent(Cursor& c) {
  if (!c.eat('^')) return 1;
  return c.integer();
}

// after a factor, only an operator or the end may follow
void check_factor_end(Cursor& c) {
  char n = c.peek();
  if (n == '\0' || n == '*' || n == '+' || n == '-' || n == ')' || n == ',' ||
      n == ']')
    return;
  c.fail("expected '*' between factors");
}

Poly poly_expr(Cursor& c);

std::pair<Monomial, Rat> poly_term(Cursor& c) {
  Monomial m;
  Rat coef = 1;
  bool first = true;
  for (;;) {
    char n = c.peek();
    if (std::isdigit(static_cast<unsigned char>(n))) {
      coef *= rational(c);
    } else if (std::isalpha(static_cast<unsigned char>(n))) {
      Var v = variable(c, c.ident());
      m = m.times(Monomial::var(v, exponent(c)));
    } else if (first) {
      c.fail("expected a term");
    } else {
      c.fail("expected a factor");
    }
    first = false;
    check_factor_end(c);
    if (!c.eat('*')) return {m, coef};
  }
}

Poly poly_expr(Cursor& c) {
  Poly out;
  bool negative = c.eat('-');
  for (;;) {
    auto [m, coef] = poly_term(c);
    out.add_term(m, negative ? -coef : coef);
    if (c.eat('+'))
      negative = false;
    else if (c.eat('-'))
      negative = true;
    else
      return out;
  }
}

// ---- operator grammar ------------------------------------------------------

Affine affine(Cursor& c) {
  Affine out;
  bool negative = false;
  for (;;) {
    std::int64_t mag;
    bool has_i = false;
    if (c.peek() == 'i') {
      ++c.pos;
      mag = 1;
      has_i = true;
      if (c.eat('*')) mag = static_cast<std::int64_t>(c.integer());
    } else {
      mag = static_cast<std::int64_t>(c.integer());
      if (c.eat('*')) {
        if (c.peek() != 'i') c.fail("expected 'i'");
        ++c.pos;
        has_i = true;
      }
    }
    if (negative) mag = -mag;
    (has_i ? out.a : out.b) += mag;
    if (c.eat('+'))
      negative = false;
    else if (c.eat('-'))
      negative = true;
    else
      return out;
  }
}

std::uint64_t family_header(Cursor& c) {
  c.expect('(');
  if (c.ident() != "i") c.fail("family index must be 'i'");
  c.expect('>');
  c.expect('=');
  std::uint64_t start = c.integer();
  c.expect(',');
  return start;
}

// polynomial in the family index: sums of r, i, r*i^k
CoefForm coef_sum(Cursor& c) {
  CoefForm f;
  f.q.clear();
  auto bump = [&f](std::size_t k, const Rat& r) {
    if (f.q.size() <= k) f.q.resize(k + 1, Rat(0));
    f.q[k] += r;
  };
  bool negative = false;
  for (;;) {
    Rat r = 1;
    bool has_i = false;
    std::uint64_t k = 1;
    if (std::isdigit(static_cast<unsigned char>(c.peek()))) {
      r = rational(c);
      std::size_t save = c.pos;
      if (c.eat('*')) {
        if (c.peek() == 'i') {
          ++c.pos;
          has_i = true;
        } else {
          c.pos = save;  // the '*' separates the coefficient from the body
        }
      }
    } else if (c.peek() == 'i') {
      ++c.pos;
      has_i = true;
    } else {
      c.fail("expected a coefficient term");
    }
    if (has_i && c.eat('^')) k = c.integer();
    bump(has_i ? k : 0, negative ? -r : r);
    if (c.eat('+'))
      negative = false;
    else if (c.eat('-'))
      negative = true;
    else
      break;
  }
  while (!f.q.empty() && f.q.back() == 0) f.q.pop_back();
  return f;
}

CoefForm coef_form(Cursor& c) {
  CoefForm f;
  if (c.eat('(')) {
    if (c.peek() == '(') {
      c.expect('(');
      f = coef_sum(c);
      c.expect(')');
    } else {
      f = coef_sum(c);
    }
    if (c.eat('/')) {
      if (c.ident() != "fact") c.fail("expected 'fact'");
      c.expect('(');
      if (c.ident() != "i") c.fail("expected 'i'");
      c.expect(')');
      f.over_factorial = true;
    }
    c.expect(')');
  } else {
    f = coef_sum(c);
  }
  return f;
}

OpPtr family_expr(Cursor& c) {
  FamilySpec spec;
  spec.start = family_header(c);
  // optional scalar coefficient, possibly with a 1/i! factor
  char n = c.peek();
  if (std::isdigit(static_cast<unsigned char>(n)) || n == '(' || n == 'i') {
    spec.coef = coef_form(c);
    c.expect('*');
  }
  std::size_t body_at = c.pos;
  if (c.ident() != "d")
    throw UnsupportedFamily("family body must be a derivative pattern");
  c.expect('(');
  std::string head = c.ident();
  Affine var;
  if (head == "x" && c.eat('[')) {
    var = affine(c);
    c.expect(']');
  } else {
    var = Affine{0, static_cast<std::int64_t>(variable(c, head))};
  }
  c.expect(')');
  Affine exp{0, 1};
  if (c.eat('^')) {
    if (c.eat('(')) {
      exp = affine(c);
      c.expect(')');
    } else {
      exp = affine(c);
    }
  }
  if (var.a < 0 || exp.a < 0)
    throw UnsupportedFamily("decreasing index forms are not in the catalogue");
  if (var.a == 0) {
    if (var.b < 1)
      throw MalformedTerm("variable index must be positive", body_at);
    spec.pattern = FixedVarPat{static_cast<Var>(var.b), exp};
  } else {
    spec.pattern = SingleVarPat{var, exp};
  }
  c.expect(')');
  return OpExpr::family(spec);
}

OpPtr op_expr(Cursor& c);

// a term of the operator sum: scalar factors, Weyl factors, or one big
// catalogued expression (which cannot be mixed with Weyl factors)
OpPtr op_term(Cursor& c) {
  Rat coef = 1;
  std::vector<RawFactor> raw;
  OpPtr big;
  bool first = true;
  for (;;) {
    char n = c.peek();
    std::size_t at = c.pos;
    if (std::isdigit(static_cast<unsigned char>(n))) {
      coef *= rational(c);
    } else if (n == '(') {
      ++c.pos;
      OpPtr sub = op_expr(c);
      c.expect(')');
      // fold a parenthesized scalar into the coefficient
      const auto* fin = std::get_if<FiniteNode>(&sub->node());
      if (fin && fin->op.terms().size() <= 1 &&
          (fin->op.is_zero() || (fin->op.terms().begin()->first.first.is_unit() &&
                                 fin->op.terms().begin()->first.second.is_unit()))) {
        coef *= fin->op.is_zero() ? Rat(0)
                                  : fin->op.terms().begin()->second;
      } else {
        big = big ? OpExpr::comp(big, sub) : sub;
      }
    } else if (std::isalpha(static_cast<unsigned char>(n))) {
      std::string head = c.ident();
      if (head == "d") {
        c.expect('(');
        Var v = variable(c, c.ident());
        c.expect(')');
        raw.push_back(DeriveFactor{v, exponent(c)});
      } else if (head == "id") {
        // neutral factor
      } else if (head == "family") {
        OpPtr fam = family_expr(c);
        big = big ? OpExpr::comp(big, fam) : fam;
      } else if (head == "prefixfamily") {
        c.expect('(');
        if (c.ident() != "i") c.fail("family index must be 'i'");
        c.expect('>');
        c.expect('=');
        FamilySpec spec;
        spec.start = c.integer();
        c.expect(')');
        spec.pattern = PrefixPat{1};
        OpPtr fam = OpExpr::family(spec);
        big = big ? OpExpr::comp(big, fam) : fam;
      } else if (head == "tensorder") {
        c.expect('(');
        OpPtr inner = op_expr(c);
        c.expect(',');
        Var v = variable(c, c.ident());
        c.expect(',');
        std::uint64_t k = c.integer();
        c.expect(')');
        OpPtr td = OpExpr::tensor_der(inner, v, k);
        big = big ? OpExpr::comp(big, td) : td;
      } else if (head == "compose") {
        c.expect('(');
        OpPtr left = op_expr(c);
        c.expect(',');
        OpPtr right = op_expr(c);
        c.expect(')');
        OpPtr co = OpExpr::comp(left, right);
        big = big ? OpExpr::comp(big, co) : co;
      } else {
        Var v = variable(c, head);
        raw.push_back(MulFactor{Poly::variable(v)});
        std::uint64_t e = exponent(c);
        for (std::uint64_t j = 1; j < e; ++j)
          raw.push_back(MulFactor{Poly::variable(v)});
      }
    } else if (first) {
      c.fail("expected a term");
    } else {
      c.fail("expected a factor");
    }
    if (big && !raw.empty())
      throw MalformedTerm(
          "family expressions cannot be multiplied by ring factors", at);
    first = false;
    check_factor_end(c);
    if (!c.eat('*')) break;
  }
  if (big) return coef == 1 ? big : OpExpr::scale(coef, big);
  WeylOp w = raw.empty() ? WeylOp::identity() : normal_form(raw);
  return OpExpr::finite(w.scale(coef));
}

OpPtr op_expr(Cursor& c) {
  std::vector<OpPtr> parts;
  bool negative = c.eat('-');
  for (;;) {
    OpPtr t = op_term(c);
    parts.push_back(negative ? OpExpr::scale(-1, t) : t);
    if (c.eat('+'))
      negative = false;
    else if (c.eat('-'))
      negative = true;
    else
      break;
  }
  return parts.size() == 1 ? parts[0] : OpExpr::sum(std::move(parts));
}

}  // namespace

Poly parse_poly(const std::string& text) {
  Cursor c{text};
  Poly p = poly_expr(c);
  if (!c.at_end()) c.fail("trailing input");
  return p;
}

OpPtr parse_op(const std::string& text) {
  Cursor c{text};
  OpPtr D = op_expr(c);
  if (!c.at_end()) c.fail("trailing input");
  return simplify(D);
}

}  // namespace ordo
