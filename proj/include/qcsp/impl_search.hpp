#pragma once

// Perfect implementations C(X) ≡ ∃Y S(X,Y) and a bounded search for them.
//
// The search works on witness tables. Fix one extension Y(x) for every
// satisfying row x of the target; each auxiliary variable is then a column,
// a bit vector over the satisfying rows. An application is usable iff it holds
// on every row of the table. The table yields an implementation iff the
// usable applications can exclude every assignment (x, y) with C(x) = 0;
// that is a set-cover problem over those assignments.
//
// Two auxiliary columns that agree on all satisfying rows can be merged, as
// can an auxiliary column equal to a primary one, so only sets of distinct
// columns are searched. Column sets are generated lazily: a new column only
// enters through an application that holds on every row, which restricts it
// row by row. Sets are visited by increasing size, so the first witness uses
// the fewest auxiliary variables, and within that the fewest applications.

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <unordered_set>
#include <vector>

#include "qcsp/classifier.hpp"
#include "qcsp/expression.hpp"

namespace qcsp {

struct Implementation {
  ConstraintRef target;
  std::vector<std::string> primary_vars;
  std::vector<std::string> aux_vars;
  std::vector<ConstraintApplication> apps;
};

inline std::string to_string(const Implementation& impl) {
  std::string out = impl.target->name() + "(";
  for (std::size_t i = 0; i < impl.primary_vars.size(); ++i) out += (i ? ", " : "") + impl.primary_vars[i];
  out += ") := E";
  for (std::size_t i = 0; i < impl.aux_vars.size(); ++i) out += (i ? ", " : " ") + impl.aux_vars[i];
  out += " :";
  for (std::size_t i = 0; i < impl.apps.size(); ++i) {
    out += i ? ", " : " ";
    out += impl.apps[i].constraint()->name() + "(";
    for (std::size_t j = 0; j < impl.apps[i].args().size(); ++j) {
      const auto& a = impl.apps[i].args()[j];
      out += (j ? ", " : "") + (a.is_constant() ? std::string(a.constant_value() ? "1" : "0") : a.name());
    }
    out += ")";
  }
  return out + ";";
}

/// Exhaustive check of C(X) ≡ ∃Y S(X,Y) over all assignments. Also rejects
/// structurally broken implementations (wrong primary count, repeated or
/// unknown variables).
inline bool check_implementation(const Implementation& impl) {
  if (!impl.target) return false;
  const int m = impl.target->arity();
  if (static_cast<int>(impl.primary_vars.size()) != m) return false;
  std::vector<std::string> vars = impl.primary_vars;
  vars.insert(vars.end(), impl.aux_vars.begin(), impl.aux_vars.end());
  if (vars.size() > 24) return false;
  {
    auto sorted = vars;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) return false;
  }
  struct App {
    const Constraint* c;
    std::vector<int> args;  // variable index, -1 / -2 for constants 0 / 1
  };
  std::vector<App> apps;
  for (const auto& a : impl.apps) {
    App app{a.constraint().get(), {}};
    for (const auto& arg : a.args()) {
      if (arg.is_constant()) {
        app.args.push_back(arg.constant_value() ? -2 : -1);
        continue;
      }
      auto it = std::find(vars.begin(), vars.end(), arg.name());
      if (it == vars.end()) return false;
      app.args.push_back(static_cast<int>(it - vars.begin()));
    }
    apps.push_back(std::move(app));
  }
  const int a = static_cast<int>(impl.aux_vars.size());
  const int n = m + a;
  for (std::uint32_t x = 0; x < (std::uint32_t{1} << m); ++x) {
    bool exists = false;
    for (std::uint32_t y = 0; y < (std::uint32_t{1} << a) && !exists; ++y) {
      const std::uint32_t full = (x << a) | y;  // variable i is bit n-1-i
      exists = std::all_of(apps.begin(), apps.end(), [&](const App& app) {
        std::uint32_t row = 0;
        for (int v : app.args) {
          const std::uint32_t bit = v == -1 ? 0U : v == -2 ? 1U : (full >> (n - 1 - v)) & 1U;
          row = (row << 1) | bit;
        }
        return app.c->value(row);
      });
    }
    if (exists != impl.target->value(x)) return false;
  }
  return true;
}

struct SearchBounds {
  int max_aux = 6;
  int max_apps = 8;
};

struct SearchOptions {
  /// Let applications use the constants 0 and 1.
  bool allow_constants = false;
  /// Generate column sets lazily and canonically. When false every subset of
  /// candidate columns is tried in lexicographic order; both modes return the
  /// same answers within the bounds.
  bool prune = true;
  /// Upper bound on visited column sets plus set-cover calls. Hitting it ends
  /// the search with exhaustive = false.
  std::uint64_t effort_limit = 4'000'000;
};

struct SearchResult {
  std::optional<Implementation> implementation;
  /// True when NotFound is definitive within the bounds.
  bool exhaustive = true;
  std::uint64_t effort = 0;
  /// Why the search stopped without a witness.
  std::string reason;

  bool found() const noexcept { return implementation.has_value(); }
};

namespace detail {

inline constexpr int kSearchMaxTargetArity = 6;
inline constexpr int kSearchMaxVariables = 16;

using Word = std::uint64_t;
using TupleSet = std::vector<Word>;

// Column index meaning: 0..m-1 primary, m.. auxiliary, kConst0 / kConst1.
inline constexpr int kConst0 = -1;
inline constexpr int kConst1 = -2;

struct SearchApp {
  int d;                  // index into Ds
  std::vector<int> args;  // column indices
  TupleSet excludes;
};

class ImplementationSearch {
 public:
  ImplementationSearch(const std::vector<ConstraintRef>& ds, const ConstraintRef& target, SearchBounds bounds,
                       SearchOptions options)
      : ds_(ds), target_(target), bounds_(bounds), options_(options) {
    m_ = target->arity();
    sat_ = target->satisfying_rows();
    ns_ = static_cast<int>(sat_.size());
    row_mask_ = ns_ == 64 ? ~Word{0} : ((Word{1} << ns_) - 1);
    for (int j = 0; j < m_; ++j) {
      Word col = 0;
      for (int r = 0; r < ns_; ++r) {
        if (row_bit(sat_[static_cast<std::size_t>(r)], m_, j)) col |= Word{1} << r;
      }
      primary_.push_back(col);
    }
    for (const auto& d : ds_) {
      std::vector<std::uint32_t> unsat;
      for (std::uint32_t r = 0; r < d->rows(); ++r) {
        if (!d->value(r)) unsat.push_back(r);
      }
      unsat_.push_back(std::move(unsat));
    }
  }

  SearchResult run() {
    SearchResult res;
    if (options_.prune) {
      run_lazy(res);
    } else {
      run_naive(res);
    }
    res.effort = effort_;
    return res;
  }

 private:
  // ---- columns and tuple space ----

  Word column(const std::vector<Word>& aux, int idx) const {
    if (idx == kConst0) return 0;
    if (idx == kConst1) return row_mask_;
    return idx < m_ ? primary_[static_cast<std::size_t>(idx)] : aux[static_cast<std::size_t>(idx - m_)];
  }

  bool consistent(int d, const std::vector<int>& args, const std::vector<Word>& aux) const {
    const int k = ds_[static_cast<std::size_t>(d)]->arity();
    for (auto p : unsat_[static_cast<std::size_t>(d)]) {
      Word rows = row_mask_;
      for (int i = 0; i < k && rows; ++i) {
        const Word col = column(aux, args[static_cast<std::size_t>(i)]);
        rows &= row_bit(p, k, i) ? col : ~col;
      }
      if (rows) return false;
    }
    return true;
  }

  struct TupleSpace {
    int vars = 0;
    std::size_t words = 0;
    std::vector<TupleSet> var_bits;  // tuples where variable j is 1
    TupleSet bad;                    // tuples whose primary part is unsatisfying
  };

  const TupleSpace& tuple_space(int a) {
    auto it = spaces_.find(a);
    if (it != spaces_.end()) return it->second;
    TupleSpace s;
    s.vars = m_ + a;
    const std::size_t count = std::size_t{1} << s.vars;
    s.words = (count + 63) / 64;
    s.var_bits.assign(static_cast<std::size_t>(s.vars), TupleSet(s.words, 0));
    s.bad.assign(s.words, 0);
    for (std::size_t t = 0; t < count; ++t) {
      for (int j = 0; j < s.vars; ++j) {
        if ((t >> (s.vars - 1 - j)) & 1U) s.var_bits[static_cast<std::size_t>(j)][t / 64] |= Word{1} << (t % 64);
      }
      if (!target_->value(static_cast<std::uint32_t>(t >> a))) s.bad[t / 64] |= Word{1} << (t % 64);
    }
    return spaces_.emplace(a, std::move(s)).first->second;
  }

  TupleSet excluded_tuples(const TupleSpace& s, int d, const std::vector<int>& args) const {
    const int k = ds_[static_cast<std::size_t>(d)]->arity();
    TupleSet out(s.words, 0), term(s.words);
    for (auto p : unsat_[static_cast<std::size_t>(d)]) {
      std::fill(term.begin(), term.end(), ~Word{0});
      for (int i = 0; i < k; ++i) {
        const int idx = args[static_cast<std::size_t>(i)];
        const bool want = row_bit(p, k, i);
        if (idx < 0) {
          if (want != (idx == kConst1)) std::fill(term.begin(), term.end(), 0);
          continue;
        }
        const auto& vb = s.var_bits[static_cast<std::size_t>(idx)];
        for (std::size_t w = 0; w < s.words; ++w) term[w] &= want ? vb[w] : ~vb[w];
      }
      for (std::size_t w = 0; w < s.words; ++w) out[w] |= term[w];
    }
    for (std::size_t w = 0; w < s.words; ++w) out[w] &= s.bad[w];
    return out;
  }

  // ---- argument tuples ----

  std::vector<int> argument_domain(int columns) const {
    std::vector<int> dom;
    for (int i = 0; i < columns; ++i) dom.push_back(i);
    if (options_.allow_constants) {
      dom.push_back(kConst0);
      dom.push_back(kConst1);
    }
    return dom;
  }

  template <typename Fn>
  static void for_each_tuple(const std::vector<int>& dom, int k, Fn&& fn) {
    if (dom.empty()) return;
    std::vector<std::size_t> pos(static_cast<std::size_t>(k), 0);
    std::vector<int> args(static_cast<std::size_t>(k));
    for (;;) {
      for (int i = 0; i < k; ++i) args[static_cast<std::size_t>(i)] = dom[pos[static_cast<std::size_t>(i)]];
      fn(args);
      int i = k - 1;
      while (i >= 0 && ++pos[static_cast<std::size_t>(i)] == dom.size()) pos[static_cast<std::size_t>(i--)] = 0;
      if (i < 0) return;
    }
  }

  // ---- feasibility of one column set ----

  std::optional<Implementation> try_columns(const std::vector<Word>& aux) {
    ++effort_;
    const int a = static_cast<int>(aux.size());
    const TupleSpace& s = tuple_space(a);
    std::vector<SearchApp> apps;
    TupleSet reach(s.words, 0);
    const auto dom = argument_domain(m_ + a);
    for (std::size_t d = 0; d < ds_.size(); ++d) {
      for_each_tuple(dom, ds_[d]->arity(), [&](const std::vector<int>& args) {
        if (!consistent(static_cast<int>(d), args, aux)) return;
        TupleSet ex = excluded_tuples(s, static_cast<int>(d), args);
        if (std::all_of(ex.begin(), ex.end(), [](Word w) { return w == 0; })) return;
        for (std::size_t w = 0; w < s.words; ++w) reach[w] |= ex[w];
        apps.push_back({static_cast<int>(d), args, std::move(ex)});
      });
    }
    if (reach != s.bad) return std::nullopt;
    auto chosen = cover(s, apps);
    if (!chosen) return std::nullopt;
    return build(aux, apps, *chosen);
  }

  // Smallest set of applications covering every bad tuple, up to max_apps.
  std::optional<std::vector<std::size_t>> cover(const TupleSpace& s, std::vector<SearchApp>& apps) const {
    // Drop applications excluding a subset of what another one excludes;
    // among equal sets keep the first.
    std::vector<std::size_t> keep;
    if (apps.size() <= 4000) {
      for (std::size_t i = 0; i < apps.size(); ++i) {
        bool dominated = false;
        for (std::size_t j = 0; j < apps.size() && !dominated; ++j) {
          if (i == j) continue;
          bool subset = true, equal = true;
          for (std::size_t w = 0; w < s.words && subset; ++w) {
            const Word ei = apps[i].excludes[w], ej = apps[j].excludes[w];
            subset = (ei & ~ej) == 0;
            equal = equal && ei == ej;
          }
          dominated = subset && (!equal || j < i);
        }
        if (!dominated) keep.push_back(i);
      }
    } else {
      for (std::size_t i = 0; i < apps.size(); ++i) keep.push_back(i);
    }
    TupleSet uncovered = s.bad;
    std::vector<std::size_t> chosen;
    for (int limit = 0; limit <= bounds_.max_apps; ++limit) {
      if (cover_dfs(s, apps, keep, uncovered, limit, chosen)) return chosen;
    }
    return std::nullopt;
  }

  static int popcount(const TupleSet& t) {
    int n = 0;
    for (Word w : t) n += std::popcount(w);
    return n;
  }

  bool cover_dfs(const TupleSpace& s, const std::vector<SearchApp>& apps, const std::vector<std::size_t>& keep,
                 const TupleSet& uncovered, int left, std::vector<std::size_t>& chosen) const {
    std::size_t first = s.words * 64;
    for (std::size_t w = 0; w < s.words; ++w) {
      if (uncovered[w]) {
        first = w * 64 + static_cast<std::size_t>(std::countr_zero(uncovered[w]));
        break;
      }
    }
    if (first == s.words * 64) return true;
    if (left == 0) return false;
    const int need = popcount(uncovered);
    int best = 0;
    for (auto i : keep) {
      int gain = 0;
      for (std::size_t w = 0; w < s.words; ++w) gain += std::popcount(apps[i].excludes[w] & uncovered[w]);
      best = std::max(best, gain);
    }
    if (best * left < need) return false;
    TupleSet next(s.words);
    for (auto i : keep) {
      if (!((apps[i].excludes[first / 64] >> (first % 64)) & 1U)) continue;
      for (std::size_t w = 0; w < s.words; ++w) next[w] = uncovered[w] & ~apps[i].excludes[w];
      chosen.push_back(i);
      if (cover_dfs(s, apps, keep, next, left - 1, chosen)) return true;
      chosen.pop_back();
    }
    return false;
  }

  Implementation build(const std::vector<Word>& aux, const std::vector<SearchApp>& apps,
                       std::vector<std::size_t> chosen) const {
    Implementation impl;
    impl.target = target_;
    for (int j = 0; j < m_; ++j) impl.primary_vars.push_back("x" + std::to_string(j + 1));
    // Number only the auxiliary columns the chosen applications use.
    std::vector<int> used;
    for (auto i : chosen) {
      for (int c : apps[i].args) {
        if (c >= m_ && std::find(used.begin(), used.end(), c) == used.end()) used.push_back(c);
      }
    }
    std::sort(used.begin(), used.end());
    for (std::size_t i = 0; i < used.size(); ++i) impl.aux_vars.push_back("y" + std::to_string(i + 1));
    std::sort(chosen.begin(), chosen.end());
    for (auto i : chosen) {
      std::vector<Argument> args;
      for (int c : apps[i].args) {
        if (c == kConst0 || c == kConst1) {
          args.push_back(Argument::constant(c == kConst1));
        } else if (c < m_) {
          args.push_back(Argument::variable(impl.primary_vars[static_cast<std::size_t>(c)]));
        } else {
          const auto pos = std::find(used.begin(), used.end(), c) - used.begin();
          args.push_back(Argument::variable(impl.aux_vars[static_cast<std::size_t>(pos)]));
        }
      }
      impl.apps.emplace_back(ds_[static_cast<std::size_t>(apps[i].d)], std::move(args));
    }
    (void)aux;
    return impl;
  }

  bool budget_left(SearchResult& res) {
    if (effort_ < options_.effort_limit) return true;
    res.exhaustive = false;
    res.reason = "effort limit of " + std::to_string(options_.effort_limit) + " reached";
    return false;
  }

  bool fresh_column(Word col, const std::vector<Word>& aux) const {
    if (std::find(primary_.begin(), primary_.end(), col) != primary_.end()) return false;
    return std::find(aux.begin(), aux.end(), col) == aux.end();
  }

  // ---- lazy canonical generation ----

  void run_lazy(SearchResult& res) {
    std::vector<std::set<std::vector<Word>>> levels(static_cast<std::size_t>(bounds_.max_aux) + 1);
    levels[0].insert(std::vector<Word>{});
    for (int a = 0; a <= bounds_.max_aux; ++a) {
      for (const auto& node : levels[static_cast<std::size_t>(a)]) {
        if (!budget_left(res)) return;
        if (auto impl = try_columns(node)) {
          res.implementation = std::move(impl);
          return;
        }
      }
      for (const auto& node : levels[static_cast<std::size_t>(a)]) {
        if (!budget_left(res)) return;
        expand(node, levels);
      }
      levels[static_cast<std::size_t>(a)].clear();
    }
    res.reason = "no implementation within " + std::to_string(bounds_.max_aux) + " auxiliary variables and " +
                 std::to_string(bounds_.max_apps) + " applications";
  }

  // Adds every column set obtained from `node` by one application that
  // introduces at least one new column and holds on every row.
  void expand(const std::vector<Word>& node, std::vector<std::set<std::vector<Word>>>& levels) {
    ++effort_;
    const int a = static_cast<int>(node.size());
    const int room = bounds_.max_aux - a;
    if (room <= 0 || ns_ == 0) return;
    const int old_cols = m_ + a;
    for (std::size_t d = 0; d < ds_.size(); ++d) {
      const int k = ds_[d]->arity();
      // Slot values: existing columns, constants, or new column j (encoded
      // as old_cols + j). New columns appear in increasing order.
      std::vector<int> slots(static_cast<std::size_t>(k), 0);
      const auto dom = argument_domain(old_cols);
      enumerate_slots(node, static_cast<int>(d), k, dom, old_cols, room, 0, 0, slots, levels);
    }
  }

  void enumerate_slots(const std::vector<Word>& node, int d, int k, const std::vector<int>& dom, int old_cols, int room,
                       int i, int new_count, std::vector<int>& slots,
                       std::vector<std::set<std::vector<Word>>>& levels) {
    if (i == k) {
      if (new_count > 0) extend_with(node, d, slots, old_cols, new_count, levels);
      return;
    }
    for (int v : dom) {
      slots[static_cast<std::size_t>(i)] = v;
      enumerate_slots(node, d, k, dom, old_cols, room, i + 1, new_count, slots, levels);
    }
    for (int j = 0; j < new_count; ++j) {
      slots[static_cast<std::size_t>(i)] = old_cols + j;
      enumerate_slots(node, d, k, dom, old_cols, room, i + 1, new_count, slots, levels);
    }
    if (new_count < room) {
      slots[static_cast<std::size_t>(i)] = old_cols + new_count;
      enumerate_slots(node, d, k, dom, old_cols, room, i + 1, new_count + 1, slots, levels);
    }
  }

  // Enumerates the values of the new columns row by row: on each satisfying
  // row the application's argument tuple must satisfy D.
  void extend_with(const std::vector<Word>& node, int d, const std::vector<int>& slots, int old_cols, int new_count,
                   std::vector<std::set<std::vector<Word>>>& levels) {
    const Constraint& c = *ds_[static_cast<std::size_t>(d)];
    const int k = c.arity();
    std::vector<std::vector<std::uint32_t>> choices(static_cast<std::size_t>(ns_));
    for (int r = 0; r < ns_; ++r) {
      for (std::uint32_t nv = 0; nv < (std::uint32_t{1} << new_count); ++nv) {
        std::uint32_t row = 0;
        for (int i = 0; i < k; ++i) {
          const int s = slots[static_cast<std::size_t>(i)];
          std::uint32_t bit;
          if (s >= old_cols) {
            bit = (nv >> (s - old_cols)) & 1U;
          } else {
            bit = (column(node, s) >> r) & 1U;
          }
          row = (row << 1) | bit;
        }
        if (c.value(row)) choices[static_cast<std::size_t>(r)].push_back(nv);
      }
      if (choices[static_cast<std::size_t>(r)].empty()) return;
    }
    std::vector<Word> fresh(static_cast<std::size_t>(new_count), 0);
    assign_rows(node, choices, 0, fresh, levels);
  }

  void assign_rows(const std::vector<Word>& node, const std::vector<std::vector<std::uint32_t>>& choices, int r,
                   std::vector<Word>& fresh, std::vector<std::set<std::vector<Word>>>& levels) {
    if (r == ns_) {
      std::vector<Word> next = node;
      for (Word col : fresh) {
        if (!fresh_column(col, next)) return;
        next.push_back(col);
      }
      std::sort(next.begin(), next.end());
      auto& bucket = levels[next.size()];
      bucket.insert(std::move(next));
      return;
    }
    for (auto nv : choices[static_cast<std::size_t>(r)]) {
      for (std::size_t j = 0; j < fresh.size(); ++j) {
        if ((nv >> j) & 1U) {
          fresh[j] |= Word{1} << r;
        } else {
          fresh[j] &= ~(Word{1} << r);
        }
      }
      assign_rows(node, choices, r + 1, fresh, levels);
    }
  }

  // ---- plain enumeration of column subsets ----

  void run_naive(SearchResult& res) {
    std::vector<Word> candidates;
    if (ns_ > 20) {
      res.exhaustive = false;
      res.reason = "plain enumeration supports at most 20 satisfying rows";
      return;
    }
    if (ns_ > 0) {
      const Word limit = ns_ == 64 ? ~Word{0} : (Word{1} << ns_) - 1;
      for (Word col = 0;; ++col) {
        if (fresh_column(col, {})) candidates.push_back(col);
        if (col == limit) break;
      }
    }
    for (int a = 0; a <= bounds_.max_aux && a <= static_cast<int>(candidates.size()); ++a) {
      std::vector<std::size_t> idx(static_cast<std::size_t>(a));
      for (int i = 0; i < a; ++i) idx[static_cast<std::size_t>(i)] = static_cast<std::size_t>(i);
      for (;;) {
        if (!budget_left(res)) return;
        std::vector<Word> aux;
        for (auto i : idx) aux.push_back(candidates[i]);
        if (auto impl = try_columns(aux)) {
          res.implementation = std::move(impl);
          return;
        }
        int i = a - 1;
        while (i >= 0 && idx[static_cast<std::size_t>(i)] == candidates.size() - static_cast<std::size_t>(a - i)) --i;
        if (i < 0) break;
        ++idx[static_cast<std::size_t>(i)];
        for (int j = i + 1; j < a; ++j) idx[static_cast<std::size_t>(j)] = idx[static_cast<std::size_t>(j - 1)] + 1;
      }
    }
    res.reason = "no implementation within " + std::to_string(bounds_.max_aux) + " auxiliary variables and " +
                 std::to_string(bounds_.max_apps) + " applications";
  }

  std::vector<ConstraintRef> ds_;
  ConstraintRef target_;
  SearchBounds bounds_;
  SearchOptions options_;
  int m_ = 0;
  int ns_ = 0;
  Word row_mask_ = 0;
  std::vector<std::uint32_t> sat_;
  std::vector<Word> primary_;
  std::vector<std::vector<std::uint32_t>> unsat_;
  std::map<int, TupleSpace> spaces_;
  std::uint64_t effort_ = 0;
};

}  // namespace detail

/// Returns the property every member of `ds` has and `target` lacks, if any.
/// Such a property is preserved by every implementation, so no
/// implementation of `target` from `ds` exists at all.
inline std::optional<Property> separating_property(const std::vector<ConstraintRef>& ds, const Constraint& target) {
  for (auto p : kAllProperties) {
    if (has_property(target, p)) continue;
    if (std::all_of(ds.begin(), ds.end(), [&](const auto& d) { return has_property(*d, p); })) return p;
  }
  return std::nullopt;
}

/// Bounded search for a perfect implementation of `target` by `ds`. Returns
/// the witness with the fewest auxiliary variables, then the fewest
/// applications. The witness is re-verified before it is returned.
inline SearchResult find_implementation(const std::vector<ConstraintRef>& ds, const ConstraintRef& target,
                                        SearchBounds bounds = {}, SearchOptions options = {}) {
  if (!target) throw InvalidArgument("implementation search without a target");
  if (bounds.max_aux < 0 || bounds.max_apps < 0) throw InvalidArgument("search bounds must be non-negative");
  if (target->arity() > detail::kSearchMaxTargetArity) {
    throw InvalidArgument("implementation search supports targets of arity up to " +
                          std::to_string(detail::kSearchMaxTargetArity));
  }
  if (target->arity() + bounds.max_aux > detail::kSearchMaxVariables) {
    throw InvalidArgument("implementation search supports at most " + std::to_string(detail::kSearchMaxVariables) +
                          " variables in total");
  }
  if (!options.allow_constants) {
    if (auto p = separating_property(ds, *target)) {
      SearchResult res;
      res.reason = std::string("every constraint is ") + property_key(*p) + " but the target is not";
      return res;
    }
  }
  SearchResult res = detail::ImplementationSearch(ds, target, bounds, options).run();
  if (res.implementation && !check_implementation(*res.implementation)) {
    throw Error("internal error: implementation search produced an invalid witness for '" + target->name() + "'");
  }
  return res;
}

}  // namespace qcsp
