#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace lk::cli {

enum ExitCode : int { ok = 0, negative = 1, input_error = 2 };

// `args` excludes the program name. Results go to `out`, diagnostics to `err`.
//
//   measure <set> [--measure M] [--tol q]
//   integrate <f> [--engine E] [--measure M] [--tol q] [--depth k] [--bound q]
//   cantor [--depth k]
//   cover [--tol q]
//   converge <template> [--mode m] [--limit f] [--dominator g] [--n-min k] [--N k]
//   fourier <f> [--N k] [--emit-plot grid=k] [--jobs k]
//   l2check <f> <g>
//
// Every subcommand accepts --format json|csv.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace lk::cli
