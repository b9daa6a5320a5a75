#pragma once

// Built-in constraint library. Tables follow the row convention of
// constraint.hpp (row 0 first, first argument most significant).

#include <string_view>
#include <vector>

#include "qcsp/constraint.hpp"

namespace qcsp::presets {

struct PresetEntry {
  std::string_view name;
  int arity;
  std::string_view bits;
};

inline constexpr PresetEntry kTable[] = {
    // The 3CNF clause set: x|y|z, x|y|!z, x|!y|!z, !x|!y|!z.
    {"OR3", 3, "01111111"},
    {"OR3_1n", 3, "10111111"},
    {"OR3_2n", 3, "11101111"},
    {"OR3_3n", 3, "11111110"},
    {"OIT", 3, "01101000"},     // exactly one argument is 1
    {"SYMOR1", 3, "11011011"},  // (!x & (!y | z)) | (x & (!z | y))
    {"XOR2", 2, "0110"},
    {"EQ2", 2, "1001"},
    {"OR2", 2, "0111"},
    {"NAND2", 2, "1110"},
    {"AND2", 2, "0001"},
    {"IMP2", 2, "1101"},   // !x | y
    {"ANDN2", 2, "0100"},  // !x & y
    {"ID1", 1, "01"},
    {"NOT1", 1, "10"},
};

inline ConstraintRef get(std::string_view name) {
  for (const auto& e : kTable) {
    if (e.name == name) return make_constraint(std::string(e.name), e.arity, e.bits);
  }
  return nullptr;
}

inline bool is_preset(const Constraint& c) {
  for (const auto& e : kTable) {
    if (e.name == c.name()) return e.arity == c.arity() && e.bits == c.bits();
  }
  return false;
}

inline std::vector<ConstraintRef> all() {
  std::vector<ConstraintRef> out;
  for (const auto& e : kTable) out.push_back(make_constraint(std::string(e.name), e.arity, e.bits));
  return out;
}

inline ConstraintRef or3() { return get("OR3"); }
inline ConstraintRef oit() { return get("OIT"); }
inline ConstraintRef symor1() { return get("SYMOR1"); }
inline ConstraintRef xor2() { return get("XOR2"); }
inline ConstraintRef eq2() { return get("EQ2"); }
inline ConstraintRef or2() { return get("OR2"); }
inline ConstraintRef nand2() { return get("NAND2"); }
inline ConstraintRef and2() { return get("AND2"); }
inline ConstraintRef imp2() { return get("IMP2"); }
inline ConstraintRef andn2() { return get("ANDN2"); }
inline ConstraintRef id1() { return get("ID1"); }
inline ConstraintRef not1() { return get("NOT1"); }

/// The four 3-clauses whose QSAT_i is the canonical Sigma_i^p-complete problem.
inline std::vector<ConstraintRef> cnf3_set() {
  return {get("OR3"), get("OR3_1n"), get("OR3_2n"), get("OR3_3n")};
}

}  // namespace qcsp::presets
