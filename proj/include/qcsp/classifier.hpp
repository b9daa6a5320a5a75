#pragma once

// The seven structural properties of a constraint and the complexity verdicts
// they imply for SAT, SAT with constants, and (bounded-alternation) QSAT.
//
// Horn, anti-Horn, bijunctive and affine are decided through closure of the
// satisfying rows under coordinatewise AND, OR, majority and ternary XOR.

#include <algorithm>
#include <array>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "qcsp/constraint.hpp"

namespace qcsp {

enum class Property { ZeroValid, OneValid, Horn, AntiHorn, Bijunctive, Affine, Complementive };

inline constexpr std::array<Property, 7> kAllProperties = {Property::ZeroValid, Property::OneValid,
                                                          Property::Horn,      Property::AntiHorn,
                                                          Property::Bijunctive, Property::Affine,
                                                          Property::Complementive};

inline const char* property_key(Property p) {
  switch (p) {
    case Property::ZeroValid: return "zero_valid";
    case Property::OneValid: return "one_valid";
    case Property::Horn: return "horn";
    case Property::AntiHorn: return "anti_horn";
    case Property::Bijunctive: return "bijunctive";
    case Property::Affine: return "affine";
    case Property::Complementive: return "complementive";
  }
  return "?";
}

struct PropertyFlags {
  bool zero_valid = true;
  bool one_valid = true;
  bool horn = true;
  bool anti_horn = true;
  bool bijunctive = true;
  bool affine = true;
  bool complementive = true;

  bool get(Property p) const {
    switch (p) {
      case Property::ZeroValid: return zero_valid;
      case Property::OneValid: return one_valid;
      case Property::Horn: return horn;
      case Property::AntiHorn: return anti_horn;
      case Property::Bijunctive: return bijunctive;
      case Property::Affine: return affine;
      case Property::Complementive: return complementive;
    }
    return false;
  }
  void set(Property p, bool v) {
    switch (p) {
      case Property::ZeroValid: zero_valid = v; break;
      case Property::OneValid: one_valid = v; break;
      case Property::Horn: horn = v; break;
      case Property::AntiHorn: anti_horn = v; break;
      case Property::Bijunctive: bijunctive = v; break;
      case Property::Affine: affine = v; break;
      case Property::Complementive: complementive = v; break;
    }
  }

  /// Horn, anti-Horn, affine or bijunctive: the tractable side for every
  /// problem variant with constants or quantifiers.
  bool schaefer() const { return horn || anti_horn || affine || bijunctive; }

  friend bool operator==(const PropertyFlags&, const PropertyFlags&) = default;
};

/// Rows of a constraint showing that a property fails. For the closure
/// properties these are satisfying rows whose combination is unsatisfying;
/// for 0-/1-valid the single unsatisfied constant row; for complementive a
/// satisfying row whose complement is unsatisfying. The large-arity
/// bijunctive test reports a single unsatisfying row consistent with every
/// binary projection.
struct Witness {
  std::string constraint;
  int arity = 0;
  std::vector<std::uint32_t> rows;
};

inline std::string row_string(std::uint32_t row, int arity) {
  std::string s(static_cast<std::size_t>(arity), '0');
  for (int i = 0; i < arity; ++i) {
    if (row_bit(row, arity, i)) s[static_cast<std::size_t>(i)] = '1';
  }
  return s;
}

namespace detail {

// Satisfying sets up to this size use the plain pair/triple loops.
inline constexpr std::size_t kLiteralClosureLimit = 64;

inline std::vector<std::uint8_t> membership(const Constraint& c) {
  std::vector<std::uint8_t> in(c.rows());
  for (std::uint32_t r = 0; r < c.rows(); ++r) in[r] = c.value(r);
  return in;
}

template <typename Op>
std::optional<std::vector<std::uint32_t>> pair_closure_literal(const std::vector<std::uint32_t>& sat,
                                                                const std::vector<std::uint8_t>& in, Op op) {
  for (std::size_t i = 0; i < sat.size(); ++i) {
    for (std::size_t j = i + 1; j < sat.size(); ++j) {
      if (!in[op(sat[i], sat[j])]) return std::vector<std::uint32_t>{sat[i], sat[j]};
    }
  }
  return std::nullopt;
}

template <typename Op>
std::optional<std::vector<std::uint32_t>> triple_closure_literal(const std::vector<std::uint32_t>& sat,
                                                                  const std::vector<std::uint8_t>& in, Op op) {
  for (std::size_t i = 0; i < sat.size(); ++i) {
    for (std::size_t j = i + 1; j < sat.size(); ++j) {
      for (std::size_t l = j + 1; l < sat.size(); ++l) {
        if (!in[op(sat[i], sat[j], sat[l])]) return std::vector<std::uint32_t>{sat[i], sat[j], sat[l]};
      }
    }
  }
  return std::nullopt;
}

// AND-closure through the superset transform: g[x] is the AND of all
// satisfying rows containing x. The set is closed iff g[x] is satisfying
// whenever x has a satisfying superset.
inline std::optional<std::vector<std::uint32_t>> and_closure_fast(const std::vector<std::uint32_t>& sat,
                                                                   const std::vector<std::uint8_t>& in, int arity) {
  const std::uint32_t n = std::uint32_t{1} << arity;
  const std::uint32_t full = n - 1;
  constexpr std::uint32_t kNone = 0xFFFFFFFFU;
  std::vector<std::uint32_t> g(n, kNone);
  for (auto s : sat) g[s] = s;
  for (int b = 0; b < arity; ++b) {
    const std::uint32_t bit = std::uint32_t{1} << b;
    for (std::uint32_t x = 0; x < n; ++x) {
      if (x & bit) continue;
      const std::uint32_t up = g[x | bit];
      if (up == kNone) continue;
      g[x] = g[x] == kNone ? up : (g[x] & up);
    }
  }
  for (std::uint32_t x = 0; x < n; ++x) {
    if (g[x] == kNone || in[g[x]]) continue;
    // Fold the supersets of g[x]; the first step leaving the set is a witness.
    const std::uint32_t target = g[x];
    std::uint32_t acc = full;
    bool started = false;
    for (auto s : sat) {
      if ((s & target) != target) continue;
      if (!started) {
        acc = s;
        started = true;
        continue;
      }
      const std::uint32_t next = acc & s;
      if (!in[next]) return std::vector<std::uint32_t>{acc, s};
      acc = next;
    }
  }
  return std::nullopt;
}

// XOR3-closure: the set must be a coset of a linear space. Grows the coset
// one basis vector at a time; the first element outside the set is a ⊕ b ⊕ c
// of three satisfying rows.
inline std::optional<std::vector<std::uint32_t>> affine_fast(const std::vector<std::uint32_t>& sat,
                                                              const std::vector<std::uint8_t>& in) {
  if (sat.empty()) return std::nullopt;
  const std::uint32_t s0 = sat[0];
  std::vector<std::uint32_t> coset{s0};
  std::array<std::uint32_t, 32> pivot{};  // basis vector by leading bit
  for (auto s : sat) {
    std::uint32_t v = s ^ s0;
    for (int b = 31; b >= 0 && v; --b) {
      if (!((v >> b) & 1U)) continue;
      if (!pivot[static_cast<std::size_t>(b)]) {
        pivot[static_cast<std::size_t>(b)] = v;
        break;
      }
      v ^= pivot[static_cast<std::size_t>(b)];
    }
    if (v == 0) continue;
    const std::size_t size = coset.size();
    for (std::size_t i = 0; i < size; ++i) {
      const std::uint32_t e = coset[i] ^ s ^ s0;
      if (!in[e]) return std::vector<std::uint32_t>{coset[i], s, s0};
      coset.push_back(e);
    }
  }
  return std::nullopt;
}

// Majority-closure: the set must equal the rows consistent with all of its
// binary projections.
inline std::optional<std::vector<std::uint32_t>> bijunctive_fast(const Constraint& c,
                                                                  const std::vector<std::uint8_t>& in) {
  const int k = c.arity();
  std::vector<std::uint8_t> proj(static_cast<std::size_t>(k * k), 0);  // 4-bit mask per pair
  for (std::uint32_t r = 0; r < c.rows(); ++r) {
    if (!in[r]) continue;
    for (int i = 0; i < k; ++i) {
      for (int j = i + 1; j < k; ++j) {
        proj[static_cast<std::size_t>(i * k + j)] |=
            static_cast<std::uint8_t>(1U << (row_bit(r, k, i) * 2 + row_bit(r, k, j)));
      }
    }
  }
  for (std::uint32_t r = 0; r < c.rows(); ++r) {
    if (in[r]) continue;
    bool consistent = true;
    for (int i = 0; i < k && consistent; ++i) {
      for (int j = i + 1; j < k && consistent; ++j) {
        const unsigned pat = row_bit(r, k, i) * 2 + row_bit(r, k, j);
        consistent = (proj[static_cast<std::size_t>(i * k + j)] >> pat) & 1U;
      }
    }
    // With k = 1 there are no pairs; unary relations are always bijunctive.
    if (consistent && k >= 2) return std::vector<std::uint32_t>{r};
  }
  return std::nullopt;
}

inline std::uint32_t maj3(std::uint32_t a, std::uint32_t b, std::uint32_t c) { return (a & b) | (a & c) | (b & c); }

}  // namespace detail

/// Returns the failure witness for property `p`, or nullopt if `c` has it.
inline std::optional<Witness> property_witness(const Constraint& c, Property p) {
  const int k = c.arity();
  const std::uint32_t all_ones = c.rows() - 1;
  auto wrap = [&](std::optional<std::vector<std::uint32_t>> rows) -> std::optional<Witness> {
    if (!rows) return std::nullopt;
    return Witness{c.name(), k, std::move(*rows)};
  };
  switch (p) {
    case Property::ZeroValid:
      return c.value(0) ? std::nullopt : std::optional<Witness>(Witness{c.name(), k, {0}});
    case Property::OneValid:
      return c.value(all_ones) ? std::nullopt : std::optional<Witness>(Witness{c.name(), k, {all_ones}});
    case Property::Complementive:
      for (std::uint32_t r = 0; r < c.rows(); ++r) {
        if (c.value(r) != c.value(complement_row(r, k))) {
          const std::uint32_t sat = c.value(r) ? r : complement_row(r, k);
          return Witness{c.name(), k, {sat, complement_row(sat, k)}};
        }
      }
      return std::nullopt;
    default:
      break;
  }
  const auto sat = c.satisfying_rows();
  const auto in = detail::membership(c);
  const bool literal = sat.size() <= detail::kLiteralClosureLimit;
  switch (p) {
    case Property::Horn:
      if (literal) return wrap(detail::pair_closure_literal(sat, in, [](auto a, auto b) { return a & b; }));
      return wrap(detail::and_closure_fast(sat, in, k));
    case Property::AntiHorn: {
      if (literal) return wrap(detail::pair_closure_literal(sat, in, [](auto a, auto b) { return a | b; }));
      // OR-closure of S is AND-closure of the complemented rows.
      std::vector<std::uint32_t> csat;
      std::vector<std::uint8_t> cin(in.size(), 0);
      for (auto s : sat) {
        csat.push_back(complement_row(s, k));
        cin[complement_row(s, k)] = 1;
      }
      std::sort(csat.begin(), csat.end());
      auto w = detail::and_closure_fast(csat, cin, k);
      if (w) {
        for (auto& r : *w) r = complement_row(r, k);
      }
      return wrap(std::move(w));
    }
    case Property::Bijunctive:
      if (literal) return wrap(detail::triple_closure_literal(sat, in, detail::maj3));
      return wrap(detail::bijunctive_fast(c, in));
    case Property::Affine:
      if (literal) {
        return wrap(detail::triple_closure_literal(sat, in, [](auto a, auto b, auto d) { return a ^ b ^ d; }));
      }
      return wrap(detail::affine_fast(sat, in));
    default:
      return std::nullopt;
  }
}

inline bool has_property(const Constraint& c, Property p) { return !property_witness(c, p).has_value(); }

inline bool is_zero_valid(const Constraint& c) { return c.value(0); }
inline bool is_one_valid(const Constraint& c) { return c.value(c.rows() - 1); }
inline bool is_complementive(const Constraint& c) { return has_property(c, Property::Complementive); }
inline bool is_horn(const Constraint& c) { return has_property(c, Property::Horn); }
inline bool is_anti_horn(const Constraint& c) { return has_property(c, Property::AntiHorn); }
inline bool is_bijunctive(const Constraint& c) { return has_property(c, Property::Bijunctive); }
inline bool is_affine(const Constraint& c) { return has_property(c, Property::Affine); }

inline PropertyFlags classify(const Constraint& c) {
  PropertyFlags f;
  for (auto p : kAllProperties) f.set(p, has_property(c, p));
  return f;
}

enum class Verdict { P, NPComplete, PSPACEComplete, SigmaComplete };

/// "Sigma_i-complete" stands for completeness at the level the verdict is
/// reported for.
inline std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::P: return "P";
    case Verdict::NPComplete: return "NP-complete";
    case Verdict::PSPACEComplete: return "PSPACE-complete";
    case Verdict::SigmaComplete: return "Sigma_i-complete";
  }
  return "?";
}

struct ClassificationReport {
  std::vector<std::string> constraints;
  PropertyFlags flags;
  Verdict sat = Verdict::P;
  Verdict sat_c = Verdict::P;
  Verdict qsat = Verdict::P;
  Verdict qsat_c = Verdict::P;
  /// Level 1: a Sigma_1 expression is a SAT instance.
  Verdict qsat_1 = Verdict::P;
  Verdict qsat_1c = Verdict::P;
  /// Every level i >= 2.
  Verdict qsat_i = Verdict::P;
  Verdict qsat_ic = Verdict::P;
  /// Constant-true / constant-false members; they are bijunctive and can be
  /// dropped by reductions.
  std::vector<std::string> constant_members;
  /// One entry per property the set lacks.
  std::vector<std::pair<Property, Witness>> witnesses;

  bool schaefer() const { return flags.schaefer(); }

  /// Verdict for QSAT_i (with_constants = false) or QSAT_{i,c} at level i >= 1.
  Verdict qsat_level(int level, bool with_constants) const {
    if (level < 1) throw InvalidArgument("level must be at least 1");
    if (level == 1) return with_constants ? qsat_1c : qsat_1;
    return with_constants ? qsat_ic : qsat_i;
  }
};

/// Flags are conjunctive over the set; the set must be nonempty.
inline ClassificationReport classify_set(const std::vector<ConstraintRef>& cs) {
  if (cs.empty()) throw InvalidArgument("cannot classify an empty constraint set");
  ClassificationReport r;
  for (const auto& c : cs) {
    r.constraints.push_back(c->name());
    if (c->is_constant_true() || c->is_constant_false()) r.constant_members.push_back(c->name());
  }
  for (auto p : kAllProperties) {
    for (const auto& c : cs) {
      if (auto w = property_witness(*c, p)) {
        r.flags.set(p, false);
        r.witnesses.emplace_back(p, std::move(*w));
        break;
      }
    }
  }
  const bool schaefer = r.flags.schaefer();
  const bool sat_easy = schaefer || r.flags.zero_valid || r.flags.one_valid;
  r.sat = sat_easy ? Verdict::P : Verdict::NPComplete;
  r.sat_c = schaefer ? Verdict::P : Verdict::NPComplete;
  r.qsat = schaefer ? Verdict::P : Verdict::PSPACEComplete;
  r.qsat_c = r.qsat;
  r.qsat_1 = r.sat;
  r.qsat_1c = r.sat_c;
  r.qsat_i = schaefer ? Verdict::P : Verdict::SigmaComplete;
  r.qsat_ic = r.qsat_i;
  return r;
}

inline std::string to_text(const ClassificationReport& r) {
  std::ostringstream out;
  out << "constraints=";
  for (std::size_t i = 0; i < r.constraints.size(); ++i) out << (i ? "," : "") << r.constraints[i];
  out << "\n";
  for (auto p : kAllProperties) out << "flags." << property_key(p) << "=" << (r.flags.get(p) ? "true" : "false") << "\n";
  out << "flags.schaefer=" << (r.schaefer() ? "true" : "false") << "\n";
  out << "verdicts.sat=" << to_string(r.sat) << "\n";
  out << "verdicts.sat_c=" << to_string(r.sat_c) << "\n";
  out << "verdicts.qsat=" << to_string(r.qsat) << "\n";
  out << "verdicts.qsat_c=" << to_string(r.qsat_c) << "\n";
  out << "verdicts.qsat_1=" << to_string(r.qsat_1) << "\n";
  out << "verdicts.qsat_1c=" << to_string(r.qsat_1c) << "\n";
  out << "verdicts.qsat_i=" << to_string(r.qsat_i) << "\n";
  out << "verdicts.qsat_ic=" << to_string(r.qsat_ic) << "\n";
  out << "constant_members=";
  for (std::size_t i = 0; i < r.constant_members.size(); ++i) out << (i ? "," : "") << r.constant_members[i];
  out << "\n";
  for (const auto& [p, w] : r.witnesses) {
    out << "witnesses." << property_key(p) << "=" << w.constraint << ":";
    for (std::size_t i = 0; i < w.rows.size(); ++i) out << (i ? "," : "") << row_string(w.rows[i], w.arity);
    out << "\n";
  }
  return out.str();
}

inline nlohmann::json to_json(const ClassificationReport& r) {
  nlohmann::json j;
  j["constraints"] = r.constraints;
  for (auto p : kAllProperties) j["flags"][property_key(p)] = r.flags.get(p);
  j["flags"]["schaefer"] = r.schaefer();
  j["verdicts"]["sat"] = to_string(r.sat);
  j["verdicts"]["sat_c"] = to_string(r.sat_c);
  j["verdicts"]["qsat"] = to_string(r.qsat);
  j["verdicts"]["qsat_c"] = to_string(r.qsat_c);
  j["verdicts"]["qsat_1"] = to_string(r.qsat_1);
  j["verdicts"]["qsat_1c"] = to_string(r.qsat_1c);
  j["verdicts"]["qsat_i"] = to_string(r.qsat_i);
  j["verdicts"]["qsat_ic"] = to_string(r.qsat_ic);
  j["constant_members"] = r.constant_members;
  j["witnesses"] = nlohmann::json::object();
  for (const auto& [p, w] : r.witnesses) {
    std::vector<std::string> rows;
    for (auto row : w.rows) rows.push_back(row_string(row, w.arity));
    j["witnesses"][property_key(p)] = {{"constraint", w.constraint}, {"rows", rows}};
  }
  return j;
}

}  // namespace qcsp
