#include "ordo/cli.hpp"

#include <cctype>
#include <cstdint>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>

#include "ordo/construct.hpp"
#include "ordo/errors.hpp"
#include "ordo/localize.hpp"
#include "ordo/order.hpp"
#include "ordo/parse.hpp"
#include "ordo/torsion.hpp"

namespace ordo {

namespace {

struct Usage : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Args {
  std::string verb, sub;
  std::vector<std::string> positional;
  std::map<std::string, std::string> flags;

  const std::string& option(const std::string& name,
                            std::size_t fallback_pos = SIZE_MAX) const {
    auto it = flags.find(name);
    if (it != flags.end()) return it->second;
    if (fallback_pos < positional.size()) return positional[fallback_pos];
    throw Usage("missing --" + name);
  }
  std::uint64_t number(const std::string& name, std::uint64_t dflt) const {
    auto it = flags.find(name);
    if (it == flags.end()) return dflt;
    try {
      return std::stoull(it->second);
    } catch (const std::exception&) {
      throw Usage("--" + name + " needs a number");
    }
  }
};

const std::vector<std::string> kSubVerbs[] = {
    {"torsion", "classify", "rank", "level", "element", "adversary"},
    {"localize", "extend", "apply"},
    {"colocal", "hom"},
};

Args parse_args(const std::vector<std::string>& raw) {
  if (raw.empty()) throw Usage("no command given");
  Args a;
  a.verb = raw[0];
  std::size_t i = 1;
  for (const auto& group : kSubVerbs)
    if (group[0] == a.verb) {
      if (raw.size() < 2) throw Usage(a.verb + " needs a subcommand");
      a.sub = raw[1];
      bool known = false;
      for (std::size_t k = 1; k < group.size(); ++k)
        known = known || group[k] == a.sub;
      if (!known) throw Usage("unknown " + a.verb + " subcommand: " + a.sub);
      i = 2;
    }
  for (; i < raw.size(); ++i) {
    if (raw[i].rfind("--", 0) == 0) {
      if (i + 1 >= raw.size()) throw Usage(raw[i] + " needs a value");
      a.flags[raw[i].substr(2)] = raw[i + 1];
      ++i;
    } else {
      a.positional.push_back(raw[i]);
    }
  }
  return a;
}

using Record = std::vector<std::pair<std::string, std::string>>;

std::string join_vars(const std::vector<Var>& vs, bool open_ended) {
  std::string out;
  for (std::size_t i = 0; i < vs.size(); ++i) {
    if (i) out += ",";
    out += var_to_string(vs[i]);
  }
  if (open_ended) out += ",...";
  return out;
}

std::string friendly_order(const OrdinalOrderVerdict& v) {
  switch (v.kind) {
    case OrdinalOrderVerdict::Exact:
      if (v.alpha.is_finite())
        return "strongly differential, order " +
               std::to_string(v.alpha.finite_value());
      return "quite differential, ordinal order " + v.alpha.to_string();
    case OrdinalOrderVerdict::UpperBound:
      return "ordinal order at most " + v.alpha.to_string();
    case OrdinalOrderVerdict::NoOrdinalOrder:
      return "differential, no ordinal order";
    default:
      return "unknown";
  }
}

std::string friendly_class(const DiffClass& v, const OpPtr& D,
                           std::uint64_t cap) {
  switch (v.kind) {
    case DiffClass::StronglyDiff:
      return "strongly differential, order " + std::to_string(v.n);
    case DiffClass::QuiteDiff:
      return "quite differential, ordinal order " + v.alpha.to_string();
    case DiffClass::DiffWithoutOrdinalOrder: {
      std::string out = "differential, no ordinal order";
      OrderVerdict r = r_order(D, Poly::variable(1), cap);
      if (r.kind == OrderVerdict::Exact)
        out += "; x_i-order " + std::to_string(r.n);
      return out;
    }
    case DiffClass::NotDifferential:
      return "not differential; infinite order with respect to " +
             v.witness_r.to_string();
    default:
      return "unknown";
  }
}

std::string friendly_torsion(const TorsionClass& c) {
  switch (c.kind) {
    case TorsionClass::Strong:
      return "strongly I-torsion";
    case TorsionClass::Quite:
      return "quite I-torsion, length " + c.length.to_string();
    case TorsionClass::TorsionOnly:
      return "I-torsion but not quite; witness sequence " +
             join_vars(c.witness_seq, true);
    case TorsionClass::NotTorsion:
      return "not I-torsion; " + c.witness_elt.to_string() + " survives " +
             var_to_string(c.witness_s);
    default:
      return "unknown";
  }
}

Monomial single_monomial(const Poly& p) {
  if (p.terms().size() != 1 || p.terms().begin()->second != 1)
    throw Usage("expected a monomial element");
  return p.terms().begin()->first;
}

// "num", "(num) / (f)", or "(num) / (f)^k"
LocalizedPoly parse_local(const std::string& text, const Poly& f) {
  std::size_t slash = std::string::npos;
  int depth = 0;
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (text[i] == '(') ++depth;
    if (text[i] == ')') --depth;
    if (text[i] == '/' && depth == 0) slash = i;
  }
  if (slash == std::string::npos) return embed(parse_poly(text));
  std::string num = text.substr(0, slash);
  std::string den = text.substr(slash + 1);
  std::size_t caret = den.rfind('^');
  std::uint64_t k = 1;
  std::size_t close = den.rfind(')');
  if (caret != std::string::npos && close != std::string::npos &&
      caret > close) {
    k = std::stoull(den.substr(caret + 1));
    den = den.substr(0, caret);
  }
  auto strip = [](std::string s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front())))
      s.erase(s.begin());
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back())))
      s.pop_back();
    if (s.size() >= 2 && s.front() == '(' && s.back() == ')')
      s = s.substr(1, s.size() - 2);
    return s;
  };
  Poly d = parse_poly(strip(den));
  if (!(d == f))
    throw Usage("denominator " + d.to_string() +
                " does not match the localized element " + f.to_string());
  return normalize_local(parse_poly(strip(num)), k, f);
}

Record dispatch(const Args& a) {
  std::uint64_t budget = a.number("budget", 8);
  std::uint64_t cap = a.number("cap", 12);

  if (a.verb == "apply") {
    OpPtr D = parse_op(a.option("op", 0));
    Poly u = parse_poly(a.option("input", 1));
    return {{"result", ordo::apply(D, u).to_string()}};
  }
  if (a.verb == "theta") {
    OpPtr D = parse_op(a.option("op", 0));
    Poly r = parse_poly(a.option("at", 1));
    return {{"result", to_string(simplify(theta(r, D)))}};
  }
  if (a.verb == "order") {
    OpPtr D = parse_op(a.option("op", 0));
    OrdinalOrderVerdict v = ordinal_order(D);
    return {{"verdict", friendly_order(v)}, {"raw", to_string(v)}};
  }
  if (a.verb == "rorder") {
    OpPtr D = parse_op(a.option("op", 0));
    Poly r = parse_poly(a.option("at", 1));
    OrderVerdict v = r_order(D, r, cap, budget);
    Record rec{{"verdict", to_string(v)}};
    if (!v.certificate.empty()) rec.emplace_back("certificate", v.certificate);
    return rec;
  }
  if (a.verb == "classify") {
    OpPtr D = parse_op(a.option("op", 0));
    DiffClass v = classify(D, budget, cap);
    return {{"verdict", friendly_class(v, D, cap)}, {"raw", to_string(v)}};
  }
  if (a.verb == "build-dalpha") {
    auto alpha = parse_ordinal(a.option("alpha", 0));
    if (!alpha) throw Usage("invalid ordinal");
    BuiltOperator b = build_D(*alpha);
    OrdinalOrderVerdict v = ordinal_order(b.op);
    ProbeReport rep = verify_order_probes(b.op, *alpha, budget);
    return {{"order", to_string(v)},
            {"probes", rep.consistent ? "consistent" : "inconsistent"},
            {"detail", rep.detail}};
  }
  if (a.verb == "torsion") {
    TorsionSetup setup = make_preset(a.option("preset"));
    if (a.sub == "classify")
      return {{"verdict", friendly_torsion(classify_module(setup, budget))}};
    Monomial m = single_monomial(parse_poly(a.option("elt", 0)));
    if (a.sub == "rank")
      return {{"verdict", to_string(quite_rank(m, setup, 4 * budget))}};
    if (a.sub == "level")
      return {{"verdict", to_string(strong_level(m, setup, cap))}};
    if (a.sub == "element")
      return {{"verdict", to_string(is_torsion_element(m, setup, cap))}};
    // adversary
    std::string strat = a.flags.count("strategy") ? a.flags.at("strategy")
                                                  : "distinct";
    Adversary s = strat == "constant" ? Adversary::ConstantGenerator
                  : strat == "greedy" ? Adversary::GreedyByRank
                  : strat == "distinct"
                      ? Adversary::DistinctGenerators
                      : throw Usage("unknown strategy: " + strat);
    AdversaryRun run = run_adversary(m, setup, s, a.number("cap", 16));
    return {{"sequence", join_vars(run.sequence, !run.reached_zero)},
            {"verdict", run.reached_zero ? "annihilated" : "survived"}};
  }
  if (a.verb == "localize") {
    OpPtr D = parse_op(a.option("op", 0));
    Poly f = parse_poly(a.option("at", 1));
    LocalOperator ds = extend(D, f, cap);
    if (a.sub == "extend")
      return {{"verdict", "extends; order " + std::to_string(ds.f_order()) +
                              " with respect to " + f.to_string()}};
    LocalizedPoly in = parse_local(a.option("input", 2), f);
    return {{"result", to_string(apply_local(ds, in), f)}};
  }
  if (a.verb == "glue") {
    Poly f = parse_poly(a.option("f"));
    Poly g = parse_poly(a.option("g"));
    OpPtr D1 = parse_op(a.option("op1", 0));
    OpPtr D2 = a.flags.count("op2") ? parse_op(a.flags.at("op2")) : D1;
    std::vector<Var> vs = f.variables();
    Var x = vs.empty() ? 1 : vs[0];
    std::vector<Poly> inputs;
    for (std::uint64_t d = 0; d <= a.number("deg", 10); ++d)
      inputs.push_back(d == 0 ? Poly::constant(1)
                              : Poly::term(Monomial::var(x, d), 1));
    GlueResult r = glue(extend(D1, f, cap), extend(D2, g, cap), inputs);
    Record rec{{"inputs", std::to_string(r.table.size())}};
    rec.emplace_back("operator",
                     r.op ? to_string(r.op) : "no finite reconstruction");
    return rec;
  }
  if (a.verb == "colocal") {
    Poly f = parse_poly(a.option("f", 0));
    return {{"verdict", to_string(hom_vanishing(f))}};
  }
  throw Usage("unknown command: " + a.verb);
}

std::string render(const Record& rec, const std::string& format,
                   const std::string& verb) {
  std::ostringstream os;
  if (format == "record") {
    os << "verb: " << verb << "\n";
    for (const auto& [k, v] : rec) os << k << ": " << v << "\n";
    os << "status: ok\n";
    return os.str();
  }
  bool first = true;
  for (const auto& [k, v] : rec) {
    if (k == "raw" || k == "certificate" || k == "detail") continue;
    if (!first) os << "; ";
    first = false;
    if (k == "verdict" || k == "result")
      os << v;
    else
      os << k << " " << v;
  }
  os << "\n";
  return os.str();
}

}  // namespace

RunResult run_command(const std::vector<std::string>& args) {
  std::string format = "plain", verb = args.empty() ? "" : args[0];
  try {
    Args a = parse_args(args);
    format = a.flags.count("format") ? a.flags.at("format") : "plain";
    if (format != "plain" && format != "record")
      throw Usage("--format must be plain or record");
    return {0, render(dispatch(a), format, a.verb)};
  } catch (const Usage& e) {
    return {2, std::string("error: ") + e.what() + "\n"};
  } catch (const MalformedTerm& e) {
    return {2, std::string("parse error: ") + e.what() + "\n"};
  } catch (const UnsupportedFamily& e) {
    return {2, std::string("parse error: ") + e.what() + "\n"};
  } catch (const std::invalid_argument& e) {
    return {2, std::string("error: ") + e.what() + "\n"};
  } catch (const InfiniteLocalOrder& e) {
    return {0, std::string("infinite-local-order: ") + e.what() + "\n"};
  } catch (const OrderUnknown& e) {
    return {0, std::string("order-unknown: ") + e.what() + "\n"};
  } catch (const NotCompatible& e) {
    return {0, std::string("not-compatible: ") + e.what() + "\n"};
  } catch (const NotCoprime& e) {
    return {0, std::string("not-coprime: ") + e.what() + "\n"};
  } catch (const ZeroOperator& e) {
    return {0, std::string("zero-operator: ") + e.what() + "\n"};
  } catch (const ZeroElement& e) {
    return {0, std::string("zero-element: ") + e.what() + "\n"};
  } catch (const std::exception& e) {
    return {1, std::string("internal error: ") + e.what() + "\n"};
  }
}

}  // namespace ordo
