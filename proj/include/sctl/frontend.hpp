#pragma once

// Model files and the command-line driver.

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "sctl/formula.hpp"
#include "sctl/model_def.hpp"

namespace sctl {

struct ParseResult {
  std::optional<ModelDef> model;  // set when there are no errors
  std::vector<Diagnostic> diagnostics;
  bool ok() const { return model.has_value(); }
};

/// Syntax, then check_model.
ParseResult parse_model(const std::string& text);
ParseResult parse_model_file(const std::string& path);

/// A formula in model-file syntax, e.g. "AG(x, p(x) || q(x), ini)".
std::optional<SugaredFormula> parse_formula(const std::string& text,
                                            std::vector<Diagnostic>* diagnostics = nullptr);

/// The closed core formula a spec denotes, `ini` bound to `init`.
Formula spec_formula(const SugaredFormula& spec, StateId init);

/// Runs the command line (args excludes the program name). Exit codes:
/// 0 done, 2 diagnostics, 3 resource limits.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace sctl
