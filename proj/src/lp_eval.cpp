#include "rla/lp_eval.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdlib>
#include <stdexcept>

namespace rla::lp {

namespace {

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

// Strips comments (backslash to end of line) and turns the text into a flat
// token stream. Relational operators become their own tokens; line breaks
// are kept as "\n" tokens because bounds and binary sections are
// line-oriented.
std::vector<std::string> tokenize(const std::string& text) {
  std::vector<std::string> tokens;
  std::string current;
  const auto flush = [&]() {
    if (!current.empty()) {
      tokens.push_back(current);
      current.clear();
    }
  };
  for (size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (c == '\\') {
      flush();
      while (i + 1 < text.size() && text[i + 1] != '\n') ++i;
      continue;
    }
    if (c == '\n') {
      flush();
      tokens.emplace_back("\n");
      continue;
    }
    if (std::isspace(static_cast<unsigned char>(c))) {
      flush();
      continue;
    }
    if (c == '<' || c == '>' || c == '=') {
      flush();
      std::string op(1, c);
      if ((c == '<' || c == '>') && i + 1 < text.size() && text[i + 1] == '=') {
        op += '=';
        ++i;
      }
      tokens.push_back(op);
      continue;
    }
    if (c == ':') {
      flush();
      tokens.emplace_back(1, c);
      continue;
    }
    if (c == '+' || c == '-') {
      // Keep the sign of a scientific-notation exponent inside its number.
      const bool in_number = !current.empty() &&
                             (std::isdigit(static_cast<unsigned char>(current.front())) ||
                              current.front() == '.') &&
                             (current.back() == 'e' || current.back() == 'E');
      if (in_number) {
        current += c;
        continue;
      }
      flush();
      tokens.emplace_back(1, c);
      continue;
    }
    current += c;
  }
  flush();
  return tokens;
}

bool is_number(const std::string& token, double* value) {
  if (token.empty()) return false;
  char* end = nullptr;
  const double v = std::strtod(token.c_str(), &end);
  if (end != token.c_str() + token.size()) return false;
  if (value) *value = v;
  return true;
}

bool is_section(const std::string& token, std::string* section) {
  const std::string t = lower(token);
  if (t == "minimize" || t == "minimise" || t == "min") *section = "minimize";
  else if (t == "maximize" || t == "maximise" || t == "max") *section = "maximize";
  else if (t == "subject" || t == "st" || t == "s.t." || t == "such") *section = "constraints";
  else if (t == "bounds" || t == "bound") *section = "bounds";
  else if (t == "binary" || t == "binaries" || t == "bin") *section = "binary";
  else if (t == "general" || t == "generals" || t == "gen") *section = "general";
  else if (t == "end") *section = "end";
  else return false;
  return true;
}

struct Parser {
  std::vector<std::string> tokens;
  size_t pos = 0;

  bool done() const { return pos >= tokens.size(); }
  const std::string& peek() const { return tokens[pos]; }
  std::string take() { return tokens[pos++]; }
  void skip_newlines() {
    while (!done() && peek() == "\n") ++pos;
  }

  // Parses "name:"-prefixed linear expressions terminated by a line break
  // (unless a sign operator is pending, which continues a wrapped line), a
  // relational operator, a section keyword, or a following "name:" label.
  void parse_expression(LinearExpr* expr, std::string* label, Model& model) {
    skip_newlines();
    if (pos + 1 < tokens.size()) {
      std::string section_probe;
      if (!is_number(tokens[pos], nullptr) && !is_section(tokens[pos], &section_probe) &&
          tokens[pos] != "\n" && tokens[pos + 1] == ":") {
        *label = take();
        take();  // ':'
        skip_newlines();
      }
    }
    double sign = 1.0;
    bool pending_sign = false;
    bool any_term = false;
    while (!done()) {
      std::string section_probe;
      const std::string& token = peek();
      if (token == "\n") {
        if (pending_sign || !any_term) {
          take();
          continue;
        }
        break;
      }
      if (token == "<=" || token == ">=" || token == "=" || token == "<" || token == ">") break;
      if (is_section(token, &section_probe)) break;
      if (!pending_sign && pos + 1 < tokens.size() && tokens[pos + 1] == ":" &&
          !is_number(token, nullptr)) {
        break;  // next labeled constraint
      }
      if (token == "+") {
        take();
        sign = 1.0;
        pending_sign = true;
        continue;
      }
      if (token == "-") {
        take();
        sign = -1.0;
        pending_sign = true;
        continue;
      }
      double value = 0.0;
      if (is_number(token, &value)) {
        take();
        // coefficient followed by a variable, or a bare constant
        if (!done() && !is_number(peek(), nullptr) && peek() != "+" && peek() != "-" &&
            peek() != "<=" && peek() != ">=" && peek() != "=" && peek() != ":" &&
            peek() != "\n" && !is_section(peek(), &section_probe)) {
          const std::string var = take();
          expr->coefficients[var] += sign * value;
          model.variables.insert(var);
        } else {
          expr->constant += sign * value;
        }
      } else {
        const std::string var = take();
        expr->coefficients[var] += sign;
        model.variables.insert(var);
      }
      sign = 1.0;
      pending_sign = false;
      any_term = true;
    }
    if (pending_sign) throw std::invalid_argument("lp parse: dangling sign in expression");
  }
};

Relation relation_from(const std::string& token) {
  if (token == "<=" || token == "<") return Relation::LessEq;
  if (token == ">=" || token == ">") return Relation::GreaterEq;
  if (token == "=") return Relation::Equal;
  throw std::invalid_argument("lp parse: unknown relation " + token);
}

}  // namespace

Model parse(const std::string& text) {
  Parser parser{tokenize(text)};
  Model model;
  std::string section;

  parser.skip_newlines();
  if (parser.done()) throw std::invalid_argument("lp parse: empty model");
  if (!is_section(parser.peek(), &section) ||
      (section != "minimize" && section != "maximize")) {
    throw std::invalid_argument("lp parse: model must start with Minimize or Maximize");
  }
  parser.take();
  model.minimize = section == "minimize";

  std::string label;
  parser.parse_expression(&model.objective, &label, model);

  while (!parser.done()) {
    parser.skip_newlines();
    if (parser.done()) break;
    std::string next_section;
    if (is_section(parser.peek(), &next_section)) {
      parser.take();
      if (next_section == "constraints" && !parser.done()) {
        const std::string t = lower(parser.peek());
        if (t == "to" || t == "that") parser.take();
      }
      if (next_section == "end") break;
      section = next_section;
      continue;
    }
    if (section == "constraints" || section == "minimize" || section == "maximize") {
      Constraint constraint;
      parser.parse_expression(&constraint.lhs, &constraint.name, model);
      if (parser.done()) throw std::invalid_argument("lp parse: constraint missing relation");
      constraint.relation = relation_from(parser.take());
      LinearExpr rhs;
      std::string ignored;
      parser.parse_expression(&rhs, &ignored, model);
      if (!rhs.coefficients.empty()) {
        // move variables to the left-hand side
        for (const auto& [var, coef] : rhs.coefficients) {
          constraint.lhs.coefficients[var] -= coef;
        }
      }
      constraint.rhs = rhs.constant - constraint.lhs.constant;
      constraint.lhs.constant = 0.0;
      model.constraints.push_back(std::move(constraint));
    } else if (section == "bounds") {
      // forms: "lo <= x <= hi", "x <= hi", "x >= lo", "x = v", "lo <= x"
      LinearExpr first;
      std::string ignored;
      parser.parse_expression(&first, &ignored, model);
      if (parser.done()) throw std::invalid_argument("lp parse: dangling bounds line");
      const Relation rel1 = relation_from(parser.take());
      LinearExpr second;
      parser.parse_expression(&second, &ignored, model);

      if (first.coefficients.empty() && second.coefficients.size() == 1) {
        const std::string var = second.coefficients.begin()->first;
        auto& bound = model.bounds[var];
        if (rel1 == Relation::LessEq) bound.lo = std::max(bound.lo, first.constant);
        else if (rel1 == Relation::GreaterEq) bound.hi = std::min(bound.hi, first.constant);
        else bound.lo = bound.hi = first.constant;
        if (!parser.done() && (parser.peek() == "<=" || parser.peek() == ">=")) {
          const Relation rel2 = relation_from(parser.take());
          LinearExpr third;
          parser.parse_expression(&third, &ignored, model);
          if (!third.coefficients.empty()) {
            throw std::invalid_argument("lp parse: malformed three-part bound");
          }
          if (rel2 == Relation::LessEq) bound.hi = std::min(bound.hi, third.constant);
          else bound.lo = std::max(bound.lo, third.constant);
        }
      } else if (first.coefficients.size() == 1 && second.coefficients.empty()) {
        const std::string var = first.coefficients.begin()->first;
        auto& bound = model.bounds[var];
        if (rel1 == Relation::LessEq) bound.hi = std::min(bound.hi, second.constant);
        else if (rel1 == Relation::GreaterEq) bound.lo = std::max(bound.lo, second.constant);
        else bound.lo = bound.hi = second.constant;
      } else {
        throw std::invalid_argument("lp parse: malformed bounds line");
      }
    } else if (section == "binary" || section == "general") {
      const std::string var = parser.take();
      model.variables.insert(var);
      if (section == "binary") model.binaries.insert(var);
    } else {
      throw std::invalid_argument("lp parse: token outside any section: " + parser.peek());
    }
  }
  return model;
}

double evaluate(const LinearExpr& expr, const Assignment& assignment) {
  double total = expr.constant;
  for (const auto& [var, coef] : expr.coefficients) {
    const auto it = assignment.find(var);
    if (it != assignment.end()) total += coef * it->second;
  }
  return total;
}

std::vector<Violation> check(const Model& model, const Assignment& assignment,
                             double tolerance) {
  std::vector<Violation> violations;
  const auto value_of = [&](const std::string& var) {
    const auto it = assignment.find(var);
    return it == assignment.end() ? 0.0 : it->second;
  };

  for (const auto& constraint : model.constraints) {
    const double lhs = evaluate(constraint.lhs, assignment);
    double gap = 0.0;
    switch (constraint.relation) {
      case Relation::LessEq: gap = lhs - constraint.rhs; break;
      case Relation::GreaterEq: gap = constraint.rhs - lhs; break;
      case Relation::Equal: gap = std::abs(lhs - constraint.rhs); break;
    }
    if (gap > tolerance) {
      violations.push_back({"constraint " + constraint.name, gap});
    }
  }
  for (const auto& [var, bound] : model.bounds) {
    const double v = value_of(var);
    if (v < bound.lo - tolerance) violations.push_back({"lower bound of " + var, bound.lo - v});
    if (v > bound.hi + tolerance) violations.push_back({"upper bound of " + var, v - bound.hi});
  }
  for (const auto& var : model.binaries) {
    const double v = value_of(var);
    const double gap = std::min(std::abs(v), std::abs(v - 1.0));
    if (gap > tolerance) violations.push_back({"integrality of " + var, gap});
  }
  return violations;
}

}  // namespace rla::lp
