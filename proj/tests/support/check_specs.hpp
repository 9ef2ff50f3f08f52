#pragma once

// Runs every spec of a model definition through the engine and the oracle
// (fair variants when the model has a fairness section).

#include <string>
#include <vector>

#include "sctl/engine.hpp"
#include "sctl/frontend.hpp"
#include "sctl/kripke.hpp"
#include "sctl/oracle.hpp"

namespace sctl::testing {

struct SpecOutcome {
  std::string name;
  bool engine = false;
  bool oracle = false;
};

inline std::vector<SpecOutcome> check_specs(const ModelDef& def, const EngineOptions& opts = {}) {
  auto m = compile(def);
  std::vector<Formula> C;
  for (const auto& c : def.fairness) C.push_back(expand_abbrev(c));
  std::vector<SpecOutcome> out;
  for (const auto& s : def.specs) {
    Formula phi = spec_formula(s.formula, m->initial());
    SpecOutcome o{s.name};
    o.engine = C.empty() ? prove(*m, phi, opts).provable : prove_fair(*m, phi, C, opts).provable;
    o.oracle = C.empty() ? valid(*m, phi) : valid_fair(*m, phi, C);
    out.push_back(o);
  }
  return out;
}

}  // namespace sctl::testing
