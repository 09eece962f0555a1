// Command dispatch for the text front end. run_command is the whole CLI as a
// pure function so the binary stays a thin wrapper and the golden outputs can
// be tested directly.
#pragma once

#include <string>
#include <vector>

namespace ordo {

struct RunResult {
  int status = 0;  // 0: computed verdict (including unknown); 2: input error
  std::string out;
};

// args are the words after the program name, e.g.
//   {"classify", "prefixfamily(i>=1)"}
//   {"torsion", "classify", "--preset", "squares", "--format", "record"}
RunResult run_command(const std::vector<std::string>& args);

}  // namespace ordo
