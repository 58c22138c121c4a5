#pragma once

#include <limits>
#include <map>
#include <set>
#include <string>
#include <vector>

// Minimal reader and evaluator for LP-format text models: enough of the
// format to parse what this project emits plus ordinary hand-written files.
// Deliberately shares no code with the exporter so the two sides stay
// independent checks of each other.
namespace rla::lp {

struct LinearExpr {
  std::map<std::string, double> coefficients;
  double constant = 0.0;
};

enum class Relation { LessEq, GreaterEq, Equal };

struct Constraint {
  std::string name;
  LinearExpr lhs;
  Relation relation = Relation::LessEq;
  double rhs = 0.0;
};

struct Bound {
  double lo = -std::numeric_limits<double>::infinity();
  double hi = std::numeric_limits<double>::infinity();
};

struct Model {
  bool minimize = true;
  LinearExpr objective;
  std::vector<Constraint> constraints;
  std::map<std::string, Bound> bounds;
  std::set<std::string> binaries;
  std::set<std::string> variables;  // every name seen anywhere
};

/// Parses LP text. Throws std::invalid_argument on malformed input.
Model parse(const std::string& text);

using Assignment = std::map<std::string, double>;

double evaluate(const LinearExpr& expr, const Assignment& assignment);

struct Violation {
  std::string what;
  double amount = 0.0;
};

/// Checks every constraint, bound, and binary integrality condition at the
/// assignment; missing variables evaluate as zero. Returns the violations
/// exceeding `tolerance`.
std::vector<Violation> check(const Model& model, const Assignment& assignment,
                             double tolerance = 1e-9);

}  // namespace rla::lp
