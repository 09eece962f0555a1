#include <iostream>
#include <string>
#include <vector>

#include "ordo/cli.hpp"

namespace {

const char kUsage[] =
    "usage: ordo <command> [args] [--budget N] [--cap N] [--format plain|record]\n"
    "\n"
    "commands:\n"
    "  apply <op> <poly>             apply an operator to a polynomial\n"
    "  theta <op> <poly>             commutator theta_r(D) = rD - Dr\n"
    "  order <op>                    ordinal order of the operator\n"
    "  rorder <op> <poly>            order with respect to a single element\n"
    "  classify <op>                 differential classification\n"
    "  build-dalpha <ordinal>        build and check D_alpha (e.g. \"w^2 + 1\")\n"
    "  torsion classify --preset P   torsion class of a preset module\n"
    "  torsion rank|level|element --preset P <monomial>\n"
    "  torsion adversary --preset P <monomial> [--strategy constant|distinct|greedy]\n"
    "  localize extend <op> <poly>   extend an operator to R[f^-1]\n"
    "  localize apply <op> <poly> <input>   input like \"(1) / (x1)^2\"\n"
    "  glue --f <poly> --g <poly> <op> [--op2 E] [--deg N]\n"
    "  colocal hom <poly>            Hom-vanishing for the localization\n"
    "\n"
    "operator syntax: d(x1)^2 + x2*d(x3), family(i>=1, d(x[i])^i),\n"
    "                 prefixfamily(i>=1), family(i>=0, (1/fact(i))*d(x[1])^i),\n"
    "                 tensorder(E, y, n), compose(E1, E2)\n"
    "reads one expression per line from stdin when invoked as: ordo <command> -\n";

}  // namespace

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  if (args.empty() || args[0] == "--help" || args[0] == "-h") {
    std::cout << kUsage;
    return args.empty() ? 2 : 0;
  }
  // long expressions can come from stdin: a lone "-" is replaced by one line
  for (auto& a : args)
    if (a == "-") std::getline(std::cin, a);
  ordo::RunResult r = ordo::run_command(args);
  std::cout << r.out;
  return r.status;
}
