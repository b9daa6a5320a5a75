#pragma once

// Command-line front end. run_cli is the whole program; tools/qcsp.cpp only
// forwards to it, which keeps the commands testable in-process.
//
// Exit codes: 0 success, 1 verification failures, 2 usage or parse error,
// 3 evaluation budget or search bound exhausted, 4 reduction not applicable.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qcsp/classifier.hpp"
#include "qcsp/evaluator.hpp"
#include "qcsp/gadgets.hpp"
#include "qcsp/harness.hpp"
#include "qcsp/impl_search.hpp"
#include "qcsp/parser.hpp"
#include "qcsp/solvers.hpp"

namespace qcsp::cli {

enum ExitCode : int { kOk = 0, kFailed = 1, kUsage = 2, kBudget = 3, kNotApplicable = 4 };

namespace detail {

class UsageError : public Error {
 public:
  using Error::Error;
};

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline std::vector<std::string> split_names(const std::string& list) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : list) {
    if (ch == ',' || ch == ' ') {
      if (!cur.empty()) out.push_back(cur);
      cur.clear();
    } else {
      cur += ch;
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

inline std::vector<ConstraintRef> resolve(const SourceDocument& doc, const std::vector<std::string>& names) {
  std::vector<ConstraintRef> out;
  for (const auto& n : names) {
    auto c = doc.find_constraint(n);
    if (!c) throw UsageError("unknown constraint '" + n + "'");
    out.push_back(c);
  }
  return out;
}

inline const QuantifiedExpression& expression(const SourceDocument& doc, const std::string& name) {
  const auto* e = doc.find_expression(name);
  if (!e) throw UsageError("no expression named '" + name + "'");
  return *e;
}

inline std::size_t default_max_vars() {
  if (const char* env = std::getenv("QCSP_MAX_VARS")) {
    try {
      const long v = std::stol(env);
      if (v >= 1) return static_cast<std::size_t>(v);
    } catch (const std::exception&) {
    }
    throw UsageError(std::string("QCSP_MAX_VARS must be a positive integer, got '") + env + "'");
  }
  return EvalBudget{}.max_variables;
}

/// Smallest level whose nominal shape the expression fits.
inline int natural_level(const QuantifiedExpression& expr) {
  const auto s = prefix_shape(expr);
  if (s.level == 0) return 1;
  return fits_level(s, s.level) ? s.level : s.level + 1;
}

}  // namespace detail

inline int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Classify Boolean constraint sets, decide quantified expressions, and run the reductions"};
  app.require_subcommand(1);

  std::string input, expr_name, format = "text";
  std::string constraint_list;
  auto* classify = app.add_subcommand("classify", "Print the classification report of a constraint set");
  classify->add_option("input", input, "DSL file")->required();
  classify->add_option("--format", format, "text or json")->check(CLI::IsMember({"text", "json"}));
  classify->add_option("--constraints", constraint_list,
                       "Comma-separated constraint names (default: all constraints the file defines)");

  bool oracle = false;
  std::optional<std::size_t> max_vars;
  std::optional<int> level;
  auto* solve = app.add_subcommand("solve", "Decide the truth of an expression");
  solve->add_option("input", input, "DSL file")->required();
  solve->add_option("expr", expr_name, "Expression name")->required();
  solve->add_flag("--oracle", oracle, "Force the brute-force evaluator");
  solve->add_option("--max-vars", max_vars, "Evaluator variable budget")->check(CLI::PositiveNumber);
  solve->add_option("--level", level, "Also report QSAT_i membership at this level")->check(CLI::PositiveNumber);

  std::string mode = "remove-constants", target_name, with_list;
  std::uint64_t seed = 1;
  SearchBounds bounds;
  auto* reduce = app.add_subcommand("reduce", "Transform an expression and print the result");
  reduce->add_option("input", input, "DSL file")->required();
  reduce->add_option("expr", expr_name, "Expression name")->required();
  reduce->add_option("--mode", mode, "remove-constants, complement, eliminate-unary or substitute")
      ->check(CLI::IsMember({"remove-constants", "complement", "eliminate-unary", "substitute"}));
  reduce->add_option("--level", level, "Level i for remove-constants (default: smallest fitting level)")
      ->check(CLI::PositiveNumber);
  reduce->add_option("--seed", seed, "Seed (the reductions themselves are deterministic)");
  reduce->add_option("--constraints", constraint_list,
                     "Constraint set for remove-constants (default: the constraints of the expression)");
  reduce->add_option("--target", target_name, "substitute: constraint to replace");
  reduce->add_option("--with", with_list, "substitute: comma-separated implementing constraints");
  reduce->add_option("--max-aux", bounds.max_aux, "Search bound on auxiliary variables")->check(CLI::NonNegativeNumber);
  reduce->add_option("--max-apps", bounds.max_apps, "Search bound on applications")->check(CLI::NonNegativeNumber);

  std::string targets;
  auto* implement = app.add_subcommand("implement", "Search perfect implementations");
  implement->add_option("input", input, "DSL file")->required();
  implement->add_option("--targets", targets, "Comma-separated target constraints")->required();
  implement->add_option("--with", with_list,
                        "Comma-separated implementing constraints (default: the file's constraints minus the targets)");
  implement->add_option("--max-aux", bounds.max_aux, "Bound on auxiliary variables")->check(CLI::NonNegativeNumber);
  implement->add_option("--max-apps", bounds.max_apps, "Bound on applications")->check(CLI::NonNegativeNumber);

  std::string suite = "all";
  int instances = 200;
  auto* verify = app.add_subcommand("verify", "Run the differential verification suites");
  verify->add_option("--suite", suite, "classifier, reductions, solvers or all")
      ->check(CLI::IsMember(suite_names()));
  verify->add_option("--seed", seed, "Seed");
  verify->add_option("--instances", instances, "Random instances per family")->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  }

  try {
    if (*classify) {
      const auto doc = parse_document(detail::read_file(input));
      std::vector<ConstraintRef> cs =
          constraint_list.empty() ? doc.constraints : detail::resolve(doc, detail::split_names(constraint_list));
      if (cs.empty()) throw detail::UsageError("no constraints to classify");
      const auto report = classify_set(cs);
      if (format == "json") {
        out << to_json(report).dump(2) << "\n";
      } else {
        out << to_text(report);
      }
      return kOk;
    }

    if (*solve) {
      const auto doc = parse_document(detail::read_file(input));
      const auto& expr = detail::expression(doc, expr_name);
      if (level && !fits_level(prefix_shape(expr), *level)) {
        throw ShapeMismatch("expression of shape " + to_string(prefix_shape(expr)) + " is not a " +
                            to_string(nominal_shape(*level)) + " expression");
      }
      EvalBudget budget;
      budget.max_variables = max_vars ? *max_vars : detail::default_max_vars();
      SolveResult res;
      if (oracle) {
        res = {eval(expr, budget), "oracle"};
      } else {
        res = solve_auto(expr, budget);
      }
      out << (res.value ? "true" : "false") << "\n";
      out << "path=" << res.path << "\n";
      if (level) {
        const bool member = *level % 2 == 1 ? res.value : !res.value;
        out << "qsat_" << *level << ".polarity=" << (*level % 2 == 1 ? "truth" : "falsity") << "\n";
        out << "qsat_" << *level << ".member=" << (member ? 1 : 0) << "\n";
      }
      return kOk;
    }

    if (*reduce) {
      const auto doc = parse_document(detail::read_file(input));
      const auto& expr = detail::expression(doc, expr_name);
      ReductionResult res;
      std::vector<ConstraintRef> extra;
      if (mode == "complement") {
        res.expression = complement_expression(expr);
      } else if (mode == "eliminate-unary") {
        res = eliminate_unary(expr);
      } else if (mode == "substitute") {
        if (target_name.empty() || with_list.empty()) throw detail::UsageError("substitute needs --target and --with");
        const auto target = detail::resolve(doc, {target_name}).front();
        const auto ds = detail::resolve(doc, detail::split_names(with_list));
        const auto found = find_implementation(ds, target, bounds);
        if (!found.found()) throw ImplementationNotFound("no implementation of " + target_name + ": " + found.reason);
        res.expression = substitute_implementation(expr, *found.implementation);
        res.implementations_used.push_back(*found.implementation);
      } else {
        const auto cs = constraint_list.empty() ? expr.constraints()
                                                : detail::resolve(doc, detail::split_names(constraint_list));
        if (cs.empty()) throw detail::UsageError("no constraints to reduce over");
        RemovalOptions opt;
        opt.bounds = bounds;
        res = remove_constants(expr, cs, level ? *level : detail::natural_level(expr), opt);
        extra = cs;
      }
      if (res.case_used) out << "# case " << to_string(*res.case_used) << "\n";
      for (const auto& impl : res.implementations_used) out << "# using " << to_string(impl) << "\n";
      if (res.trivially_false()) {
        out << "TRIVIALLY_FALSE\n";
      } else {
        std::vector<ConstraintRef> defs;
        for (const auto& c : extra) {
          if (!c->is_constant_true() && !c->is_constant_false()) defs.push_back(c);
        }
        out << render_document({{expr_name, *res.expression}}, defs);
      }
      return kOk;
    }

    if (*implement) {
      const auto doc = parse_document(detail::read_file(input));
      const auto target_names = detail::split_names(targets);
      const auto target_cs = detail::resolve(doc, target_names);
      std::vector<ConstraintRef> ds;
      if (!with_list.empty()) {
        ds = detail::resolve(doc, detail::split_names(with_list));
      } else {
        for (const auto& c : doc.constraints) {
          if (std::find(target_names.begin(), target_names.end(), c->name()) == target_names.end()) ds.push_back(c);
        }
      }
      if (ds.empty()) throw detail::UsageError("no implementing constraints (use --with)");
      for (const auto& t : target_cs) {
        const auto res = find_implementation(ds, t, bounds);
        if (res.found()) {
          out << t->name() << ": FOUND aux=" << res.implementation->aux_vars.size()
              << " apps=" << res.implementation->apps.size() << "\n";
          out << "  " << to_string(*res.implementation) << "\n";
        } else {
          out << t->name() << ": NOT_FOUND" << (res.exhaustive ? "" : " (search incomplete)") << " " << res.reason
              << "\n";
        }
      }
      return kOk;
    }

    if (*verify) {
      HarnessConfig cfg;
      cfg.seed = seed;
      cfg.instances = instances;
      cfg.budget.max_variables = detail::default_max_vars();
      bool ok = true;
      for (const auto& rep : run_suite(suite, cfg)) {
        out << "suite=" << rep.name << " passed=" << rep.passed << " failed=" << rep.failed
            << " skipped=" << rep.skipped << " seconds=" << rep.seconds << " " << (rep.ok() ? "PASS" : "FAIL") << "\n";
        for (const auto& f : rep.failures) out << "  failure: " << f << "\n";
        ok = ok && rep.ok();
      }
      return ok ? kOk : kFailed;
    }
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << "\n";
    return kUsage;
  } catch (const detail::UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const ShapeMismatch& e) {
    err << "shape mismatch: " << e.what() << "\n";
    return kUsage;
  } catch (const BudgetExceeded& e) {
    err << "budget exceeded: " << e.what() << "\n";
    return kBudget;
  } catch (const ImplementationNotFound& e) {
    err << "implementation not found: " << e.what() << "\n";
    return kBudget;
  } catch (const NotApplicable& e) {
    err << e.what() << "\n";
    return kNotApplicable;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}

}  // namespace qcsp::cli
