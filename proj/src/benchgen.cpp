#include "sctl/benchgen.hpp"

#include <algorithm>
#include <numeric>
#include <random>

#include "sctl/error.hpp"

namespace sctl {

namespace {

using SF = SugaredFormula;

// uniform in [0, n); std::uniform_int_distribution is not portable across
// standard libraries, this is
std::size_t pick(std::mt19937_64& rng, std::size_t n) { return static_cast<std::size_t>(rng() % n); }

std::string vname(int i) { return "v" + std::to_string(i); }

Expr eq_int(const std::string& v, std::int64_t k) { return Expr::binary(BinOp::Eq, Expr::var(v), Expr::integer(k)); }
Expr conj(Expr a, Expr b) { return Expr::binary(BinOp::And, std::move(a), std::move(b)); }

Assignment assign(std::string v, Expr e) {
  Assignment a;
  a.var = std::move(v);
  a.value = std::move(e);
  return a;
}

VarDecl bool_var(std::string n) {
  VarDecl v;
  v.name = std::move(n);
  return v;
}

VarDecl int_var(std::string n, std::int64_t lo, std::int64_t hi) {
  VarDecl v;
  v.name = std::move(n);
  v.is_bool = false;
  v.lo = lo;
  v.hi = hi;
  return v;
}

AtomicDef atomic(std::string name, Expr body_on_s) {
  AtomicDef a;
  a.name = std::move(name);
  a.params = {"s"};
  a.body = std::move(body_on_s);
  return a;
}

// s(v) = true
Expr access_true(const std::string& v) {
  return Expr::binary(BinOp::Eq, Expr::access("s", v), Expr::boolean(true));
}

void check_cp(const CpParams& p) {
  if (p.a < 1 || p.c < 1 || p.d < 0) throw InputError("benchmark parameters must be positive");
  if (p.b != p.c + p.a * p.d)
    throw InputError("inconsistent parameters: b = " + std::to_string(p.b) + " but c + a*d = " +
                     std::to_string(p.c + p.a * p.d));
}

// shared variables, then the locals of process k
std::vector<std::string> visible(const CpParams& p, int k) {
  std::vector<std::string> out;
  for (int i = 1; i <= p.c; ++i) out.push_back(vname(i));
  for (int j = 0; j < p.d; ++j) out.push_back(vname(p.c + k * p.d + j + 1));
  return out;
}

void bool_program(ModelDef& d, const CpParams& p, std::mt19937_64& rng) {
  for (int i = 1; i <= p.b; ++i) d.vars.push_back(bool_var(vname(i)));
  for (int i = 1; i <= p.b; ++i)
    d.init.push_back(assign(vname(i), Expr::boolean(i <= p.c ? pick(rng, 2) == 1 : false)));
  for (int i = 1; i <= p.b; ++i) d.atomics.push_back(atomic(vname(i), access_true(vname(i))));
}

SF at(const std::string& p, const std::string& x) { return SF::atom(p, {Term::var(x)}); }
SF nat(const std::string& p, const std::string& x) { return SF::neg_atom(p, {Term::var(x)}); }
SF band(SF a, SF b) { return SF::binary(SOp::And, std::move(a), std::move(b)); }
SF bor(SF a, SF b) { return SF::binary(SOp::Or, std::move(a), std::move(b)); }
SF implies(SF a, SF b) { return SF::binary(SOp::Implies, std::move(a), std::move(b)); }
SF u(SOp op, const std::string& x, SF body, const std::string& t) {
  return SF::unary_modal(op, x, std::move(body), Term::var(t));
}
SF b(SOp op, const std::string& x, const std::string& y, SF f1, SF f2, const std::string& t) {
  return SF::binary_modal(op, x, y, std::move(f1), std::move(f2), Term::var(t));
}

}  // namespace

CpParams cp_params(int a, int b, std::uint64_t seed) {
  CpParams p;
  p.a = a;
  p.b = b;
  p.c = b / 2;
  p.d = a > 0 ? p.c / a : 0;
  p.seed = seed;
  return p;
}

CspParams csp_params(int a, int b, std::uint64_t seed) {
  CspParams p;
  static_cast<CpParams&>(p) = cp_params(a, b, seed);
  p.t = p.c;
  p.p = 4;
  return p;
}

ModelDef gen_cp(const CpParams& p) {
  check_cp(p);
  std::mt19937_64 rng(p.seed);
  ModelDef d;
  d.name = "cp";
  bool_program(d, p, rng);
  // one transition per process: every visible variable takes the negation
  // of a visible variable chosen once, here
  for (int k = 0; k < p.a; ++k) {
    auto vis = visible(p, k);
    TransitionDef t;
    t.guard = Expr::boolean(true);
    for (const auto& v : vis) t.assigns.push_back(assign(v, Expr::negate(Expr::var(vis[pick(rng, vis.size())]))));
    d.transitions.push_back(std::move(t));
  }
  return d;
}

ModelDef gen_csp(const CspParams& p) {
  check_cp(p);
  if (p.t < 1 || p.p < 0) throw InputError("benchmark parameters must be positive");
  std::mt19937_64 rng(p.seed);
  ModelDef d;
  d.name = "csp";
  bool_program(d, p, rng);
  for (int k = 0; k < p.a; ++k) {
    std::string loc = "loc" + std::to_string(k);
    d.vars.push_back(int_var(loc, 0, p.t - 1));
    d.init.push_back(assign(loc, Expr::integer(0)));
  }
  for (int k = 0; k < p.a; ++k) {
    std::string loc = "loc" + std::to_string(k);
    auto vis = visible(p, k);
    if (static_cast<std::size_t>(p.p) > vis.size())
      throw InputError("more assignments per transition than visible variables");
    for (int i = 0; i < p.t; ++i) {
      TransitionDef t;
      t.guard = eq_int(loc, i);
      t.assigns.push_back(assign(loc, Expr::integer((i + 1) % p.t)));
      // p distinct targets, each negating a random source
      std::vector<std::size_t> idx(vis.size());
      std::iota(idx.begin(), idx.end(), 0);
      for (int j = 0; j < p.p; ++j) {
        std::size_t r = j + pick(rng, idx.size() - j);
        std::swap(idx[j], idx[r]);
        t.assigns.push_back(assign(vis[idx[j]], Expr::negate(Expr::var(vis[pick(rng, vis.size())]))));
      }
      d.transitions.push_back(std::move(t));
    }
  }
  return d;
}

SugaredFormula property(int index, int c) {
  if (index < 1 || index > 24) throw InputError("property index must be in 1..24");
  if (c < 3) throw InputError("properties need at least 3 variables");
  // P13..P24 swap the roles of the binary and the big connective
  bool dual = index > 12;
  int k = dual ? index - 12 : index;
  auto big = [&](int from, const std::string& x) {
    SF acc = at(vname(from), x);
    for (int i = from + 1; i <= c; ++i) acc = dual ? band(acc, at(vname(i), x)) : bor(acc, at(vname(i), x));
    return acc;
  };
  auto small = [&](SF l, SF r) { return dual ? bor(std::move(l), std::move(r)) : band(std::move(l), std::move(r)); };
  auto v = [](int i, const std::string& x) { return at(vname(i), x); };
  switch (k) {
    case 1: return u(SOp::AG, "x", big(1, "x"), "ini");
    case 2: return u(SOp::AF, "x", big(1, "x"), "ini");
    case 3: return u(SOp::AG, "x", implies(v(1, "x"), u(SOp::AF, "y", small(v(2, "y"), big(3, "y")), "x")), "ini");
    case 4: return u(SOp::AG, "x", implies(v(1, "x"), u(SOp::EF, "y", small(v(2, "y"), big(3, "y")), "x")), "ini");
    case 5: return u(SOp::EG, "x", implies(v(1, "x"), u(SOp::AF, "y", small(v(2, "y"), big(3, "y")), "x")), "ini");
    case 6: return u(SOp::EG, "x", implies(v(1, "x"), u(SOp::EF, "y", small(v(2, "y"), big(3, "y")), "x")), "ini");
    case 7: return b(SOp::AU, "x", "y", v(1, "x"), b(SOp::AU, "u", "w", v(2, "u"), big(3, "w"), "y"), "ini");
    case 8: return b(SOp::AU, "x", "y", v(1, "x"), b(SOp::EU, "u", "w", v(2, "u"), big(3, "w"), "y"), "ini");
    case 9: return b(SOp::AU, "x", "y", v(1, "x"), b(SOp::AR, "u", "w", v(2, "u"), big(3, "w"), "y"), "ini");
    case 10: return b(SOp::AU, "x", "y", v(1, "x"), b(SOp::ER, "u", "w", v(2, "u"), big(3, "w"), "y"), "ini");
    case 11:
      return b(SOp::AR, "x", "y", u(SOp::AX, "u", v(1, "u"), "x"),
               u(SOp::AX, "u", b(SOp::AU, "w", "z", v(2, "w"), big(3, "z"), "u"), "y"), "ini");
    default:
      return b(SOp::AR, "x", "y", u(SOp::EX, "u", v(1, "u"), "x"),
               u(SOp::EX, "u", b(SOp::EU, "w", "z", v(2, "w"), big(3, "z"), "u"), "y"), "ini");
  }
}

void add_properties(ModelDef& def, int c) {
  for (int i = 1; i <= 24; ++i) {
    SpecDef s;
    s.name = std::string(i < 10 ? "P0" : "P") + std::to_string(i);
    s.formula = property(i, c);
    def.specs.push_back(std::move(s));
  }
}

// Mutual exclusion. st<i> is 0 noncritical, 1 trying, 2 critical; `turn`
// names the scheduled process and advances round-robin on every step. A
// scheduled noncritical process may start trying or stay; a trying one
// enters when nobody else is critical and waits otherwise; a critical one
// may stay or leave. The fairness constraints forbid waiting forever: each
// process is infinitely often not trying.
FairBench gen_mutex(int n) {
  if (n < 2) throw InputError("mutual exclusion needs at least 2 processes");
  FairBench fb;
  ModelDef& d = fb.model;
  d.name = "mutex" + std::to_string(n);
  auto st = [](int i) { return "st" + std::to_string(i); };
  for (int i = 0; i < n; ++i) d.vars.push_back(int_var(st(i), 0, 2));
  d.vars.push_back(int_var("turn", 0, n - 1));
  for (int i = 0; i < n; ++i) d.init.push_back(assign(st(i), Expr::integer(0)));
  d.init.push_back(assign("turn", Expr::integer(0)));
  for (int i = 0; i < n; ++i) {
    Expr mine = eq_int("turn", i);
    Assignment pass = assign("turn", Expr::integer((i + 1) % n));
    auto step = [&](Expr guard, std::vector<Assignment> as) {
      TransitionDef t;
      t.guard = conj(mine, std::move(guard));
      as.push_back(pass);
      t.assigns = std::move(as);
      d.transitions.push_back(std::move(t));
    };
    Expr nobody;
    bool first = true;
    for (int j = 0; j < n; ++j) {
      if (j == i) continue;
      Expr e = Expr::binary(BinOp::Ne, Expr::var(st(j)), Expr::integer(2));
      nobody = first ? e : conj(std::move(nobody), std::move(e));
      first = false;
    }
    step(eq_int(st(i), 0), {});
    step(eq_int(st(i), 0), {assign(st(i), Expr::integer(1))});
    step(conj(eq_int(st(i), 1), nobody), {assign(st(i), Expr::integer(2))});
    step(conj(eq_int(st(i), 1), Expr::negate(nobody)), {});
    step(eq_int(st(i), 2), {});
    step(eq_int(st(i), 2), {assign(st(i), Expr::integer(0))});
  }
  const char* names[] = {"non", "try", "cri"};
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < 3; ++k)
      d.atomics.push_back(atomic(names[k] + std::to_string(i),
                                 Expr::binary(BinOp::Eq, Expr::access("s", st(i)), Expr::integer(k))));
  for (int i = 0; i < n; ++i) d.fairness.push_back(nat("try" + std::to_string(i), "s"));

  auto spec = [&](std::string name, SF f) {
    SpecDef s;
    s.name = name;
    s.formula = std::move(f);
    d.specs.push_back(std::move(s));
    fb.property_names.push_back(std::move(name));
  };
  spec("P1", u(SOp::EF, "x", band(at("cri0", "x"), at("cri1", "x")), "ini"));
  spec("P2", u(SOp::AG, "x", implies(at("try0", "x"), u(SOp::AF, "y", at("cri0", "y"), "x")), "ini"));
  spec("P3", u(SOp::AG, "x", implies(at("try1", "x"), u(SOp::AF, "y", at("cri1", "y"), "x")), "ini"));
  auto handover = [&](const std::string& me, const std::string& other) {
    return u(SOp::AG, "x",
             implies(at(me, "x"), b(SOp::AU, "y", "z", at(me, "y"),
                                    band(nat(me, "z"), b(SOp::AU, "u", "w", nat(me, "u"), at(other, "w"), "z")),
                                    "x")),
             "ini");
  };
  spec("P4", handover("cri0", "cri1"));
  spec("P5", handover("cri1", "cri0"));
  return fb;
}

// Ring. Process i owns r<i>_0..r<i>_4 and out<i>. A step of process i
// shifts its input xor the previous process's output into the register and
// outputs the bit shifted out of the top. The input is chosen
// nondeterministically when the process first runs and then kept (in<i> = 2
// until then); a fresh bit on every step would make all 2^18 register
// contents reachable. `last` records which process moved; fairness asks
// every process to move infinitely often.
FairBench gen_ring(int n) {
  if (n < 3) throw InputError("ring needs at least 3 processes");
  FairBench fb;
  ModelDef& d = fb.model;
  d.name = "ring" + std::to_string(n);
  auto r = [](int i, int k) { return "r" + std::to_string(i) + "_" + std::to_string(k); };
  auto out = [](int i) { return "out" + std::to_string(i); };
  for (int i = 0; i < n; ++i) {
    for (int k = 0; k < 5; ++k) d.vars.push_back(bool_var(r(i, k)));
    d.vars.push_back(bool_var(out(i)));
  }
  auto in = [](int i) { return "in" + std::to_string(i); };
  for (int i = 0; i < n; ++i) d.vars.push_back(int_var(in(i), 0, 2));
  d.vars.push_back(int_var("last", 0, n - 1));
  for (int i = 0; i < n; ++i) {
    for (int k = 0; k < 5; ++k) d.init.push_back(assign(r(i, k), Expr::boolean(false)));
    d.init.push_back(assign(out(i), Expr::boolean(false)));
  }
  for (int i = 0; i < n; ++i) d.init.push_back(assign(in(i), Expr::integer(2)));
  d.init.push_back(assign("last", Expr::integer(0)));
  for (int i = 0; i < n; ++i) {
    int prev = (i + n - 1) % n;
    auto step = [&](Expr guard, Expr bit, int fix) {
      TransitionDef t;
      t.guard = std::move(guard);
      // xor: out != bit
      t.assigns.push_back(assign(r(i, 0), Expr::binary(BinOp::Ne, Expr::var(out(prev)), std::move(bit))));
      for (int k = 1; k < 5; ++k) t.assigns.push_back(assign(r(i, k), Expr::var(r(i, k - 1))));
      t.assigns.push_back(assign(out(i), Expr::var(r(i, 4))));
      if (fix >= 0) t.assigns.push_back(assign(in(i), Expr::integer(fix)));
      t.assigns.push_back(assign("last", Expr::integer(i)));
      d.transitions.push_back(std::move(t));
    };
    step(eq_int(in(i), 2), Expr::boolean(false), 0);
    step(eq_int(in(i), 2), Expr::boolean(true), 1);
    step(Expr::binary(BinOp::Ne, Expr::var(in(i)), Expr::integer(2)), eq_int(in(i), 1), -1);
  }
  for (int i = 0; i < n; ++i) d.atomics.push_back(atomic(out(i), access_true(out(i))));
  for (int i = 0; i < n; ++i)
    d.atomics.push_back(atomic("moved" + std::to_string(i),
                               Expr::binary(BinOp::Eq, Expr::access("s", "last"), Expr::integer(i))));
  for (int i = 0; i < n; ++i) d.fairness.push_back(at("moved" + std::to_string(i), "s"));

  auto spec = [&](std::string name, SOp outer, SOp inner) {
    auto half = [&](SF lit) { return u(outer, "x", u(inner, "y", std::move(lit), "x"), "ini"); };
    SpecDef s;
    s.name = name;
    s.formula = band(half(at("out0", "y")), half(nat("out0", "y")));
    d.specs.push_back(std::move(s));
    fb.property_names.push_back(std::move(name));
  };
  spec("P1", SOp::AG, SOp::AF);
  spec("P2", SOp::AG, SOp::EF);
  spec("P3", SOp::EG, SOp::AF);
  spec("P4", SOp::EG, SOp::EF);
  return fb;
}

}  // namespace sctl
