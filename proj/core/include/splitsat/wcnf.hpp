#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace splitsat {

using Weight = std::uint64_t;

/// A variable occurrence with polarity. Variables are 1-based, matching the
/// DIMACS convention; literal -3 is {var = 3, negated = true}.
struct Literal {
  int var = 0;
  bool negated = false;

  int encoded() const { return negated ? -var : var; }
  static Literal decode(int lit) { return {lit < 0 ? -lit : lit, lit < 0}; }
  bool operator==(const Literal&) const = default;
};

struct Clause {
  std::vector<Literal> literals;
  Weight weight = 1;

  bool operator==(const Clause&) const = default;
};

/// A weighted CNF instance. `hard_threshold`, when present, marks every
/// clause with weight >= threshold as hard (classic WCNF `top` semantics).
struct WcnfFormula {
  int num_vars = 0;
  std::vector<Clause> clauses;
  std::optional<Weight> hard_threshold;

  Weight total_weight() const;
  bool is_hard(const Clause& c) const {
    return hard_threshold && c.weight >= *hard_threshold;
  }
  bool operator==(const WcnfFormula&) const = default;
};

/// Truth assignment in the +-1 encoding: values[v-1] == +1 means variable v
/// is true, -1 means false. The 0/1 convention appears only at I/O
/// boundaries.
struct Assignment {
  std::vector<std::int8_t> values;

  Assignment() = default;
  explicit Assignment(std::vector<std::int8_t> v) : values(std::move(v)) {}
  static Assignment constant(int n, std::int8_t sign) {
    return Assignment(std::vector<std::int8_t>(static_cast<size_t>(n), sign));
  }

  int size() const { return static_cast<int>(values.size()); }
  bool is_true(const Literal& l) const {
    const bool pos = values[static_cast<size_t>(l.var - 1)] > 0;
    return l.negated ? !pos : pos;
  }
  void flip(int var) { values[static_cast<size_t>(var - 1)] *= -1; }
  bool operator==(const Assignment&) const = default;
};

class ParseError : public std::runtime_error {
 public:
  ParseError(int line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

/// Parses DIMACS CNF ("p cnf n m", all weights 1) or classic WCNF
/// ("p wcnf n m [top]"). Clause order is preserved. Malformed input raises
/// ParseError carrying the offending line number.
WcnfFormula parse_dimacs(std::istream& in);
WcnfFormula parse_dimacs(const std::string& text);
WcnfFormula parse_dimacs_file(const std::filesystem::path& path);

/// Canonical WCNF serialization; parse(write(f)) is structurally equal to f.
void write_dimacs(const WcnfFormula& formula, std::ostream& out);
std::string write_dimacs(const WcnfFormula& formula);

bool clause_satisfied(const Clause& clause, const Assignment& alpha);

/// Sum of weights of clauses falsified by alpha (the ΔObj of a solution).
Weight cost(const WcnfFormula& formula, const Assignment& alpha);

/// True iff every hard clause is satisfied. Vacuously true without a
/// hard threshold.
bool is_feasible(const WcnfFormula& formula, const Assignment& alpha);

}  // namespace splitsat
