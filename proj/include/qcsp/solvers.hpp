#pragma once

// Normal-form synthesis and polynomial-time decision procedures for
// quantified expressions over Horn, anti-Horn, bijunctive and affine
// constraint sets.
//
//   affine      quantifier elimination by Gaussian elimination over GF(2)
//   bijunctive  quantified 2-SAT on the implication graph (strong components)
//   Horn        one Horn-SAT instance combining the all-ones universal play
//               with every play that sets a single universal to 0
//   anti-Horn   Horn on the complemented expression

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "qcsp/classifier.hpp"
#include "qcsp/complement.hpp"
#include "qcsp/evaluator.hpp"

namespace qcsp {

enum class NormalFormKind { HornCNF, AntiHornCNF, TwoCNF, XorCNF };
enum class TractableClass { Horn, AntiHorn, Bijunctive, Affine };

inline std::string to_string(TractableClass c) {
  switch (c) {
    case TractableClass::Horn: return "horn";
    case TractableClass::AntiHorn: return "anti-horn";
    case TractableClass::Bijunctive: return "bijunctive";
    case TractableClass::Affine: return "affine";
  }
  return "?";
}

inline Property class_property(TractableClass c) {
  switch (c) {
    case TractableClass::Horn: return Property::Horn;
    case TractableClass::AntiHorn: return Property::AntiHorn;
    case TractableClass::Bijunctive: return Property::Bijunctive;
    case TractableClass::Affine: return Property::Affine;
  }
  return Property::Horn;
}

struct Literal {
  int var = 0;
  bool positive = true;
  friend bool operator==(const Literal&, const Literal&) = default;
};

using CnfClause = std::vector<Literal>;

struct XorEquation {
  std::vector<int> vars;
  bool parity = false;
  friend bool operator==(const XorEquation&, const XorEquation&) = default;
};

/// Clauses over v1..vk (stored 0-based) for the CNF kinds, or linear
/// equations for XorCNF. An empty clause, or an equation with no variables
/// and parity 1, is unsatisfiable.
struct ClauseForm {
  NormalFormKind kind = NormalFormKind::TwoCNF;
  int arity = 0;
  std::vector<CnfClause> clauses;
  std::vector<XorEquation> equations;
};

inline std::string to_string(const ClauseForm& f) {
  std::string out = "{";
  auto sep = [&, first = true]() mutable {
    if (!first) out += ", ";
    first = false;
  };
  if (f.kind == NormalFormKind::XorCNF) {
    for (const auto& e : f.equations) {
      sep();
      if (e.vars.empty()) out += "0";
      for (std::size_t i = 0; i < e.vars.size(); ++i) out += (i ? " ^ v" : "v") + std::to_string(e.vars[i] + 1);
      out += e.parity ? " = 1" : " = 0";
    }
  } else {
    for (const auto& c : f.clauses) {
      sep();
      out += "(";
      for (std::size_t i = 0; i < c.size(); ++i) {
        out += (i ? " | " : "") + std::string(c[i].positive ? "" : "!") + "v" + std::to_string(c[i].var + 1);
      }
      out += ")";
    }
  }
  return out + "}";
}

inline constexpr int kSynthesisMaxArity = 8;

namespace detail {

// Clause as row-aligned masks: argument i is bit (k-1-i), as in table rows.
struct MaskClause {
  std::uint32_t pos = 0;
  std::uint32_t neg = 0;
  bool satisfied_by(std::uint32_t row) const { return (row & pos) || (~row & neg); }
};

inline bool kind_allows(NormalFormKind kind, std::uint32_t pos, std::uint32_t neg) {
  switch (kind) {
    case NormalFormKind::HornCNF: return std::popcount(pos) <= 1;
    case NormalFormKind::AntiHornCNF: return std::popcount(neg) <= 1;
    case NormalFormKind::TwoCNF: return std::popcount(pos) + std::popcount(neg) <= 2;
    default: return false;
  }
}

inline CnfClause to_literals(const MaskClause& m, int k) {
  CnfClause c;
  for (int i = 0; i < k; ++i) {
    const std::uint32_t bit = std::uint32_t{1} << (k - 1 - i);
    if (m.pos & bit) c.push_back({i, true});
    if (m.neg & bit) c.push_back({i, false});
  }
  return c;
}

inline std::optional<ClauseForm> synthesize_cnf(const Constraint& c, NormalFormKind kind) {
  const int k = c.arity();
  const auto sat = c.satisfying_rows();
  std::vector<MaskClause> kept;
  // Each variable is absent, positive or negative: walk all 3^k sign vectors.
  std::vector<int> sign(static_cast<std::size_t>(k), 0);
  for (;;) {
    MaskClause m;
    for (int i = 0; i < k; ++i) {
      const std::uint32_t bit = std::uint32_t{1} << (k - 1 - i);
      if (sign[static_cast<std::size_t>(i)] == 1) m.pos |= bit;
      if (sign[static_cast<std::size_t>(i)] == 2) m.neg |= bit;
    }
    if (kind_allows(kind, m.pos, m.neg) &&
        std::all_of(sat.begin(), sat.end(), [&](auto r) { return m.satisfied_by(r); })) {
      kept.push_back(m);
    }
    int i = 0;
    while (i < k && sign[static_cast<std::size_t>(i)] == 2) sign[static_cast<std::size_t>(i++)] = 0;
    if (i == k) break;
    ++sign[static_cast<std::size_t>(i)];
  }
  for (std::uint32_t r = 0; r < c.rows(); ++r) {
    if (c.value(r)) continue;
    if (std::all_of(kept.begin(), kept.end(), [&](const auto& m) { return m.satisfied_by(r); })) return std::nullopt;
  }
  ClauseForm form{kind, k, {}, {}};
  for (std::size_t i = 0; i < kept.size(); ++i) {
    bool subsumed = false;
    for (std::size_t j = 0; j < kept.size() && !subsumed; ++j) {
      if (i == j) continue;
      const bool inside = (kept[j].pos & ~kept[i].pos) == 0 && (kept[j].neg & ~kept[i].neg) == 0;
      const bool same = kept[j].pos == kept[i].pos && kept[j].neg == kept[i].neg;
      subsumed = inside && !same;
    }
    if (!subsumed) form.clauses.push_back(to_literals(kept[i], k));
  }
  return form;
}

// Gaussian reduction of equations given as (row-aligned var mask, parity).
// Returns an independent basis; drops 0 = 0.
inline std::vector<std::pair<std::uint32_t, bool>> xor_basis(std::vector<std::pair<std::uint32_t, bool>> eqs) {
  std::vector<std::pair<std::uint32_t, bool>> basis;
  for (auto [mask, parity] : eqs) {
    for (const auto& [bm, bp] : basis) {
      const std::uint32_t lead = std::bit_floor(bm);
      if (mask & lead) {
        mask ^= bm;
        parity ^= bp;
      }
    }
    if (mask == 0 && !parity) continue;
    // Keep the basis fully reduced on leading bits.
    const std::uint32_t lead = mask ? std::bit_floor(mask) : 0;
    for (auto& [bm, bp] : basis) {
      if (lead && (bm & lead)) {
        bm ^= mask;
        bp ^= parity;
      }
    }
    basis.emplace_back(mask, parity);
    if (mask == 0) return {{0, true}};  // inconsistent
  }
  std::sort(basis.begin(), basis.end(), [](const auto& a, const auto& b) { return a.first > b.first; });
  return basis;
}

inline XorEquation to_equation(std::uint32_t mask, bool parity, int k) {
  XorEquation e{{}, parity};
  for (int i = 0; i < k; ++i) {
    if (mask & (std::uint32_t{1} << (k - 1 - i))) e.vars.push_back(i);
  }
  return e;
}

inline std::optional<ClauseForm> synthesize_xor(const Constraint& c) {
  const int k = c.arity();
  const auto sat = c.satisfying_rows();
  std::vector<std::pair<std::uint32_t, bool>> kept;
  for (std::uint32_t mask = 0; mask < c.rows(); ++mask) {
    for (int parity = 0; parity < 2; ++parity) {
      if (mask == 0 && parity == 0) continue;
      if (std::all_of(sat.begin(), sat.end(), [&](auto r) { return (std::popcount(r & mask) & 1) == parity; })) {
        kept.emplace_back(mask, parity == 1);
      }
    }
  }
  for (std::uint32_t r = 0; r < c.rows(); ++r) {
    if (c.value(r)) continue;
    if (std::all_of(kept.begin(), kept.end(),
                    [&](const auto& e) { return (std::popcount(r & e.first) & 1) == static_cast<int>(e.second); })) {
      return std::nullopt;
    }
  }
  ClauseForm form{NormalFormKind::XorCNF, k, {}, {}};
  for (const auto& [mask, parity] : xor_basis(kept)) form.equations.push_back(to_equation(mask, parity, k));
  return form;
}

}  // namespace detail

/// Searches all clauses of `kind` over v1..vk, keeps those satisfied by every
/// satisfying row and checks that their conjunction is exact. Redundant
/// clauses are removed (subsumed clauses; dependent equations). Returns
/// nullopt when no formula of that kind defines `c`.
inline std::optional<ClauseForm> synthesize_normal_form(const Constraint& c, NormalFormKind kind) {
  if (c.arity() > kSynthesisMaxArity) {
    throw InvalidArgument("normal-form synthesis supports arity up to " + std::to_string(kSynthesisMaxArity) +
                          ", '" + c.name() + "' has arity " + std::to_string(c.arity()));
  }
  if (kind == NormalFormKind::XorCNF) return detail::synthesize_xor(c);
  return detail::synthesize_cnf(c, kind);
}

namespace detail {

// Clause forms for constraints beyond the synthesis limit, derived directly
// from the closure structure. Returns nullopt if the constraint lacks the
// property.
inline std::optional<ClauseForm> derive_normal_form(const Constraint& c, NormalFormKind kind) {
  const int k = c.arity();
  const std::uint32_t full = c.rows() - 1;
  if (kind == NormalFormKind::TwoCNF) {
    if (!is_bijunctive(c)) return std::nullopt;
    ClauseForm form{kind, k, {}, {}};
    const auto sat = c.satisfying_rows();
    if (sat.empty()) {
      form.clauses.push_back({});
      return form;
    }
    for (int i = 0; i < k; ++i) {
      for (int j = i; j < k; ++j) {
        for (int si = 0; si < 2; ++si) {
          for (int sj = 0; sj < 2; ++sj) {
            if (i == j && si != sj) continue;
            MaskClause m;
            const std::uint32_t bi = std::uint32_t{1} << (k - 1 - i), bj = std::uint32_t{1} << (k - 1 - j);
            (si ? m.pos : m.neg) |= bi;
            (sj ? m.pos : m.neg) |= bj;
            if (std::all_of(sat.begin(), sat.end(), [&](auto r) { return m.satisfied_by(r); })) {
              form.clauses.push_back(to_literals(m, k));
            }
          }
        }
      }
    }
    return form;
  }
  if (kind == NormalFormKind::XorCNF) {
    if (!is_affine(c)) return std::nullopt;
    ClauseForm form{kind, k, {}, {}};
    const auto sat = c.satisfying_rows();
    if (sat.empty()) {
      form.equations.push_back({{}, true});
      return form;
    }
    // The coset is s0 + V; its equations are a basis of V's orthogonal complement.
    const std::uint32_t s0 = sat[0];
    std::vector<std::uint32_t> span;
    for (auto s : sat) span.push_back(s ^ s0);
    std::vector<std::pair<std::uint32_t, bool>> eqs;
    for (std::uint32_t mask = 1; mask <= full; ++mask) {
      bool orthogonal = true;
      for (auto v : span) {
        if (std::popcount(v & mask) & 1) {
          orthogonal = false;
          break;
        }
      }
      if (orthogonal) eqs.emplace_back(mask, (std::popcount(s0 & mask) & 1) == 1);
    }
    for (const auto& [mask, parity] : xor_basis(eqs)) form.equations.push_back(to_equation(mask, parity, k));
    return form;
  }
  // Horn: one clause per unsatisfying row x. If no satisfying row lies above
  // x the clause negates the ones of x; otherwise it derives a bit that every
  // satisfying row above x has set and x lacks.
  const bool anti = kind == NormalFormKind::AntiHornCNF;
  if (!(anti ? is_anti_horn(c) : is_horn(c))) return std::nullopt;
  auto value = [&](std::uint32_t r) { return c.value(anti ? complement_row(r, k) : r); };
  ClauseForm form{kind, k, {}, {}};
  for (std::uint32_t x = 0; x < c.rows(); ++x) {
    if (value(x)) continue;
    std::uint32_t g = full;
    bool above = false;
    for (std::uint32_t r = 0; r < c.rows(); ++r) {
      if (value(r) && (r & x) == x) {
        g &= r;
        above = true;
      }
    }
    MaskClause m;
    m.neg = x;
    if (above) m.pos = std::bit_floor(g & ~x);
    if (anti) std::swap(m.pos, m.neg);
    form.clauses.push_back(to_literals(m, k));
  }
  return form;
}

}  // namespace detail

/// Normal form used for solving: synthesized for small arity, derived from
/// the closure structure above the synthesis limit.
inline std::optional<ClauseForm> normal_form(const Constraint& c, NormalFormKind kind) {
  if (c.arity() <= kSynthesisMaxArity) return synthesize_normal_form(c, kind);
  return detail::derive_normal_form(c, kind);
}

/// Instantiates a clause form on concrete arguments. `index` maps a variable
/// name to its position in the expression. Constant literals are resolved:
/// true literals drop their clause, false ones are removed. Variables are
/// renumbered to expression positions.
template <typename IndexFn>
ClauseForm substitute_form(const ClauseForm& form, const std::vector<Argument>& args, IndexFn&& index) {
  ClauseForm out{form.kind, form.arity, {}, {}};
  if (form.kind == NormalFormKind::XorCNF) {
    for (const auto& e : form.equations) {
      XorEquation eq{{}, e.parity};
      for (int v : e.vars) {
        const Argument& a = args[static_cast<std::size_t>(v)];
        if (a.is_constant()) {
          eq.parity ^= a.constant_value();
        } else {
          const int x = index(a.name());
          auto it = std::find(eq.vars.begin(), eq.vars.end(), x);
          if (it == eq.vars.end()) {
            eq.vars.push_back(x);
          } else {
            eq.vars.erase(it);
          }
        }
      }
      if (eq.vars.empty() && !eq.parity) continue;
      std::sort(eq.vars.begin(), eq.vars.end());
      out.equations.push_back(std::move(eq));
    }
    return out;
  }
  for (const auto& clause : form.clauses) {
    CnfClause c;
    bool satisfied = false;
    for (const auto& lit : clause) {
      const Argument& a = args[static_cast<std::size_t>(lit.var)];
      if (a.is_constant()) {
        if (a.constant_value() == lit.positive) satisfied = true;
        continue;
      }
      const Literal l{index(a.name()), lit.positive};
      if (std::find(c.begin(), c.end(), Literal{l.var, !l.positive}) != c.end()) satisfied = true;
      if (std::find(c.begin(), c.end(), l) == c.end()) c.push_back(l);
    }
    if (!satisfied) out.clauses.push_back(std::move(c));
  }
  return out;
}

namespace detail {

struct Compiled {
  std::vector<Quantifier> quant;  // per variable, prefix order
  std::vector<int> block;         // block index per variable
  std::vector<CnfClause> clauses;
  std::vector<XorEquation> equations;
};

inline Compiled compile(const QuantifiedExpression& expr, NormalFormKind kind) {
  Compiled out;
  std::unordered_map<std::string, int> index;
  for (std::size_t b = 0; b < expr.prefix().size(); ++b) {
    for (const auto& v : expr.prefix()[b].vars) {
      index.emplace(v, static_cast<int>(out.quant.size()));
      out.quant.push_back(expr.prefix()[b].quantifier);
      out.block.push_back(static_cast<int>(b));
    }
  }
  std::vector<std::pair<const Constraint*, ClauseForm>> cache;
  for (const auto& app : expr.matrix()) {
    const Constraint* c = app.constraint().get();
    auto it = std::find_if(cache.begin(), cache.end(), [&](const auto& e) { return e.first == c; });
    if (it == cache.end()) {
      auto form = normal_form(*c, kind);
      if (!form) throw InvalidArgument("constraint '" + c->name() + "' has no normal form of the requested class");
      cache.emplace_back(c, std::move(*form));
      it = std::prev(cache.end());
    }
    auto sub = substitute_form(it->second, app.args(), [&](const std::string& n) { return index.at(n); });
    for (auto& cl : sub.clauses) out.clauses.push_back(std::move(cl));
    for (auto& eq : sub.equations) out.equations.push_back(std::move(eq));
  }
  return out;
}

using Bits = std::vector<std::uint64_t>;

inline bool test_bit(const Bits& b, int i) { return (b[static_cast<std::size_t>(i) / 64] >> (i % 64)) & 1U; }
inline void flip_bit(Bits& b, int i) { b[static_cast<std::size_t>(i) / 64] ^= std::uint64_t{1} << (i % 64); }

inline bool solve_affine(const Compiled& f) {
  const int n = static_cast<int>(f.quant.size());
  const std::size_t words = (static_cast<std::size_t>(n) + 63) / 64 + 1;
  struct Row {
    Bits vars;
    bool parity;
    bool alive;
  };
  std::vector<Row> rows;
  for (const auto& e : f.equations) {
    Row r{Bits(words, 0), e.parity, true};
    for (int v : e.vars) flip_bit(r.vars, v);
    rows.push_back(std::move(r));
  }
  auto is_zero = [](const Bits& b) { return std::all_of(b.begin(), b.end(), [](auto w) { return w == 0; }); };
  for (const auto& r : rows) {
    if (is_zero(r.vars) && r.parity) return false;
  }
  for (int x = n - 1; x >= 0; --x) {
    int pivot = -1;
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (rows[i].alive && test_bit(rows[i].vars, x)) {
        pivot = static_cast<int>(i);
        break;
      }
    }
    if (pivot < 0) continue;
    // Innermost remaining variable: a universal one can always be set to
    // violate an equation it occurs in.
    if (f.quant[static_cast<std::size_t>(x)] == Quantifier::Forall) return false;
    const Row& p = rows[static_cast<std::size_t>(pivot)];
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (static_cast<int>(i) == pivot || !rows[i].alive || !test_bit(rows[i].vars, x)) continue;
      for (std::size_t w = 0; w < words; ++w) rows[i].vars[w] ^= p.vars[w];
      rows[i].parity ^= p.parity;
      if (is_zero(rows[i].vars)) {
        if (rows[i].parity) return false;
        rows[i].alive = false;
      }
    }
    rows[static_cast<std::size_t>(pivot)].alive = false;
  }
  return true;
}

// Literal node: 2*var for the positive literal, 2*var+1 for the negative.
inline int lit_node(const Literal& l) { return 2 * l.var + (l.positive ? 0 : 1); }

inline bool solve_bijunctive(const Compiled& f) {
  const int n = static_cast<int>(f.quant.size());
  const int nodes = 2 * n;
  std::vector<std::vector<int>> adj(static_cast<std::size_t>(nodes));
  for (const auto& c : f.clauses) {
    if (c.empty()) return false;
    const int a = lit_node(c[0]);
    const int b = c.size() == 1 ? a : lit_node(c[1]);
    adj[static_cast<std::size_t>(a ^ 1)].push_back(b);
    if (a != b) adj[static_cast<std::size_t>(b ^ 1)].push_back(a);
  }
  // Tarjan, iterative.
  std::vector<int> comp(static_cast<std::size_t>(nodes), -1), low(static_cast<std::size_t>(nodes)),
      num(static_cast<std::size_t>(nodes), -1);
  std::vector<int> stack, call;
  std::vector<std::size_t> edge(static_cast<std::size_t>(nodes), 0);
  std::vector<char> on_stack(static_cast<std::size_t>(nodes), 0);
  int counter = 0, comps = 0;
  for (int root = 0; root < nodes; ++root) {
    if (num[static_cast<std::size_t>(root)] >= 0) continue;
    call.push_back(root);
    while (!call.empty()) {
      const int v = call.back();
      const auto vs = static_cast<std::size_t>(v);
      if (num[vs] < 0) {
        num[vs] = low[vs] = counter++;
        stack.push_back(v);
        on_stack[vs] = 1;
      }
      if (edge[vs] < adj[vs].size()) {
        const int w = adj[vs][edge[vs]++];
        const auto ws = static_cast<std::size_t>(w);
        if (num[ws] < 0) {
          call.push_back(w);
        } else if (on_stack[ws]) {
          low[vs] = std::min(low[vs], num[ws]);
        }
        continue;
      }
      if (low[vs] == num[vs]) {
        int w;
        do {
          w = stack.back();
          stack.pop_back();
          on_stack[static_cast<std::size_t>(w)] = 0;
          comp[static_cast<std::size_t>(w)] = comps;
        } while (w != v);
        ++comps;
      }
      call.pop_back();
      if (!call.empty()) {
        const auto p = static_cast<std::size_t>(call.back());
        low[p] = std::min(low[p], low[vs]);
      }
    }
  }
  auto is_universal = [&](int node) { return f.quant[static_cast<std::size_t>(node / 2)] == Quantifier::Forall; };
  // Per component: earliest existential variable in it, and its universal literals.
  std::vector<int> first_exist(static_cast<std::size_t>(comps), n);
  std::vector<std::vector<int>> univ_in(static_cast<std::size_t>(comps));
  for (int v = 0; v < nodes; ++v) {
    const auto c = static_cast<std::size_t>(comp[static_cast<std::size_t>(v)]);
    if (is_universal(v)) {
      univ_in[c].push_back(v);
    } else {
      first_exist[c] = std::min(first_exist[c], v / 2);
    }
  }
  for (int x = 0; x < n; ++x) {
    if (comp[static_cast<std::size_t>(2 * x)] == comp[static_cast<std::size_t>(2 * x + 1)]) return false;
  }
  for (int c = 0; c < comps; ++c) {
    for (int u : univ_in[static_cast<std::size_t>(c)]) {
      if (first_exist[static_cast<std::size_t>(c)] < u / 2) return false;
    }
    if (univ_in[static_cast<std::size_t>(c)].size() > 1) return false;
  }
  // A path between two distinct universal literals. Tarjan numbers components
  // in reverse topological order, so successors have smaller ids.
  std::vector<int> univ_id(static_cast<std::size_t>(nodes), -1);
  int nu = 0;
  for (int v = 0; v < nodes; ++v) {
    if (is_universal(v)) univ_id[static_cast<std::size_t>(v)] = nu++;
  }
  if (nu == 0) return true;
  const std::size_t words = (static_cast<std::size_t>(nu) + 63) / 64;
  std::vector<Bits> reach(static_cast<std::size_t>(comps), Bits(words, 0));
  std::vector<std::vector<int>> members(static_cast<std::size_t>(comps));
  for (int v = 0; v < nodes; ++v) members[static_cast<std::size_t>(comp[static_cast<std::size_t>(v)])].push_back(v);
  for (int c = 0; c < comps; ++c) {
    auto& r = reach[static_cast<std::size_t>(c)];
    for (int v : members[static_cast<std::size_t>(c)]) {
      if (univ_id[static_cast<std::size_t>(v)] >= 0) flip_bit(r, univ_id[static_cast<std::size_t>(v)]);
      for (int w : adj[static_cast<std::size_t>(v)]) {
        const int d = comp[static_cast<std::size_t>(w)];
        if (d == c) continue;
        const auto& rd = reach[static_cast<std::size_t>(d)];
        for (std::size_t i = 0; i < words; ++i) r[i] |= rd[i];
      }
    }
    // Each universal literal of this component reaches only itself.
    int count = 0;
    for (auto w : r) count += std::popcount(w);
    if (count > static_cast<int>(univ_in[static_cast<std::size_t>(c)].size())) {
      if (!univ_in[static_cast<std::size_t>(c)].empty()) return false;
    }
  }
  return true;
}

// Forward chaining for a Horn clause set over `n` variables.
inline bool horn_sat(int n, const std::vector<CnfClause>& clauses) {
  std::vector<int> missing(clauses.size(), 0);
  std::vector<std::vector<int>> watch(static_cast<std::size_t>(n));
  std::vector<char> value(static_cast<std::size_t>(n), 0);
  std::vector<int> queue;
  auto head = [&](std::size_t ci) -> int {
    for (const auto& l : clauses[ci]) {
      if (l.positive) return l.var;
    }
    return -1;
  };
  auto fire = [&](std::size_t ci) {
    const int h = head(ci);
    if (h < 0) return false;
    if (!value[static_cast<std::size_t>(h)]) {
      value[static_cast<std::size_t>(h)] = 1;
      queue.push_back(h);
    }
    return true;
  };
  for (std::size_t ci = 0; ci < clauses.size(); ++ci) {
    for (const auto& l : clauses[ci]) {
      if (!l.positive) {
        ++missing[ci];
        watch[static_cast<std::size_t>(l.var)].push_back(static_cast<int>(ci));
      }
    }
    if (missing[ci] == 0 && !fire(ci)) return false;
  }
  while (!queue.empty()) {
    const int v = queue.back();
    queue.pop_back();
    for (int ci : watch[static_cast<std::size_t>(v)]) {
      if (--missing[static_cast<std::size_t>(ci)] == 0 && !fire(static_cast<std::size_t>(ci))) return false;
    }
  }
  return true;
}

// A Horn formula is true iff it survives the all-ones universal play together
// with every play that sets exactly one universal y to 0: models of Horn
// clauses are closed under AND and every universal assignment is the AND of
// such plays. Existentials quantified before y see the same universal values
// in both plays and share one copy.
inline bool solve_horn(const Compiled& f) {
  const int n = static_cast<int>(f.quant.size());
  std::vector<int> universals;
  for (int v = 0; v < n; ++v) {
    if (f.quant[static_cast<std::size_t>(v)] == Quantifier::Forall) universals.push_back(v);
  }
  std::vector<int> base(static_cast<std::size_t>(n), -1);
  int next = 0;
  for (int v = 0; v < n; ++v) {
    if (f.quant[static_cast<std::size_t>(v)] == Quantifier::Exists) base[static_cast<std::size_t>(v)] = next++;
  }
  std::vector<CnfClause> all;
  auto add_play = [&](int zero_univ, const std::vector<int>& copy) {
    for (const auto& c : f.clauses) {
      CnfClause out;
      bool satisfied = false;
      for (const auto& l : c) {
        const auto v = static_cast<std::size_t>(l.var);
        if (f.quant[v] == Quantifier::Forall) {
          const bool val = l.var != zero_univ;
          if (val == l.positive) satisfied = true;
        } else {
          out.push_back({copy[v], l.positive});
        }
      }
      if (satisfied) continue;
      if (out.empty()) {
        all.clear();
        all.push_back({});
        return false;
      }
      all.push_back(std::move(out));
    }
    return true;
  };
  if (!add_play(-1, base)) return false;
  for (int y : universals) {
    std::vector<int> copy = base;
    for (int v = y + 1; v < n; ++v) {
      if (f.quant[static_cast<std::size_t>(v)] == Quantifier::Exists) copy[static_cast<std::size_t>(v)] = next++;
    }
    if (!add_play(y, copy)) return false;
  }
  return horn_sat(next, all);
}

}  // namespace detail

/// Exact truth value of `expr`, in polynomial time, for expressions whose
/// constraints all belong to `cls`. Constants may occur.
inline bool solve_tractable(const QuantifiedExpression& expr, TractableClass cls) {
  for (const auto& c : expr.constraints()) {
    if (!has_property(*c, class_property(cls))) {
      throw InvalidArgument("constraint '" + c->name() + "' is not " + to_string(cls));
    }
  }
  switch (cls) {
    case TractableClass::Affine: return detail::solve_affine(detail::compile(expr, NormalFormKind::XorCNF));
    case TractableClass::Bijunctive: return detail::solve_bijunctive(detail::compile(expr, NormalFormKind::TwoCNF));
    case TractableClass::Horn: return detail::solve_horn(detail::compile(expr, NormalFormKind::HornCNF));
    case TractableClass::AntiHorn:
      return detail::solve_horn(detail::compile(complement_expression(expr), NormalFormKind::HornCNF));
  }
  return false;
}

struct SolveResult {
  bool value = false;
  /// "affine", "bijunctive", "horn", "anti-horn", or "oracle".
  std::string path;
};

/// Dispatches to a polynomial procedure when the constraint set of `expr` is
/// Schaefer, and to the brute-force evaluator otherwise.
inline SolveResult solve_auto(const QuantifiedExpression& expr, const EvalBudget& budget = {}) {
  const auto cs = expr.constraints();
  if (!cs.empty()) {
    const auto flags = classify_set(cs).flags;
    for (auto cls : {TractableClass::Affine, TractableClass::Bijunctive, TractableClass::Horn, TractableClass::AntiHorn}) {
      if (flags.get(class_property(cls))) return {solve_tractable(expr, cls), to_string(cls)};
    }
  } else {
    return {true, to_string(TractableClass::Affine)};
  }
  return {eval(expr, budget), "oracle"};
}

}  // namespace qcsp
