#pragma once

// Benchmark model generators: random concurrent boolean programs (CP and
// CSP) with their 24 properties, and the mutual exclusion and ring
// families with fairness. Randomness comes from std::mt19937_64 so a seed
// pins the instance on every platform.

#include <cstdint>
#include <string>
#include <vector>

#include "sctl/formula.hpp"
#include "sctl/model_def.hpp"

namespace sctl {

struct CpParams {
  int a = 3;   // processes
  int b = 12;  // all variables
  int c = 6;   // shared
  int d = 2;   // locals per process
  std::uint64_t seed = 1;
};

struct CspParams : CpParams {
  int t = 6;  // transitions per process
  int p = 4;  // assignments per transition
  CspParams() { a = 2; d = 3; }
};

/// c = b/2, d = c/a.
CpParams cp_params(int a, int b, std::uint64_t seed);
/// c = b/2, d = c/a, t = c, p = 4.
CspParams csp_params(int a, int b, std::uint64_t seed);

/// Variables v1..vb (v1..vc shared, then d locals per process), one
/// atomic vi(s) per variable, no specs. Throws InputError on inconsistent
/// parameters.
ModelDef gen_cp(const CpParams& p);
/// As gen_cp plus a location counter loc<k> : (0 .. t-1) per process.
ModelDef gen_csp(const CspParams& p);

/// Property P01..P24 over v1..vc, anchored at `ini`. Throws InputError
/// for an index outside 1..24 or c < 3.
SugaredFormula property(int index, int c);

/// Adds P01..P24 as specs.
void add_properties(ModelDef& def, int c);

struct FairBench {
  ModelDef model;  // properties as specs, fairness section filled in
  std::vector<std::string> property_names;
};

/// n processes scheduled round-robin, each cycling noncritical, trying,
/// critical. Properties P1..P5. Throws InputError when n < 2.
FairBench gen_mutex(int n);

/// n processes in a ring, each a 5-bit shift register fed by its input
/// xor the previous output. Properties P1..P4. Throws InputError when n < 3.
FairBench gen_ring(int n);

}  // namespace sctl
