#include "splitsat/wcnf.hpp"

#include <cctype>
#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace splitsat {

Weight WcnfFormula::total_weight() const {
  Weight sum = 0;
  for (const auto& c : clauses) sum += c.weight;
  return sum;
}

namespace {

// Whitespace tokenizer tracking line numbers; comment lines ('c' ...) are
// skipped wholesale. Tokens never span lines but clauses may.
class Tokenizer {
 public:
  explicit Tokenizer(std::istream& in) : in_(in) {}

  std::string next() {
    for (;;) {
      int ch = in_.get();
      if (ch == EOF) return {};
      if (ch == '\n') {
        ++line_;
        line_start_ = true;
        continue;
      }
      if (std::isspace(static_cast<unsigned char>(ch))) continue;
      if (ch == 'c' && line_start_) {
        std::string rest;
        std::getline(in_, rest);
        ++line_;
        continue;
      }
      line_start_ = false;
      std::string tok(1, static_cast<char>(ch));
      while ((ch = in_.peek()) != EOF && !std::isspace(static_cast<unsigned char>(ch)))
        tok.push_back(static_cast<char>(in_.get()));
      return tok;
    }
  }

  // Consumes the remainder of the current line and returns it.
  std::string rest_of_line() {
    std::string rest;
    std::getline(in_, rest);
    ++line_;
    line_start_ = true;
    return rest;
  }

  int line() const { return line_; }

 private:
  std::istream& in_;
  int line_ = 1;
  bool line_start_ = true;
};

std::int64_t parse_int(const std::string& tok, int line, const char* what) {
  std::int64_t value = 0;
  const char* begin = tok.data();
  const char* end = begin + tok.size();
  auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc{} || ptr != end)
    throw ParseError(line, std::string("expected ") + what + ", got '" + tok + "'");
  return value;
}

Weight parse_weight(const std::string& tok, int line) {
  if (!tok.empty() && tok[0] == '-')
    throw ParseError(line, "negative clause weight '" + tok + "'");
  Weight value = 0;
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
  if (ec != std::errc{} || ptr != tok.data() + tok.size())
    throw ParseError(line, "expected clause weight, got '" + tok + "'");
  if (value == 0) throw ParseError(line, "zero clause weight");
  return value;
}

}  // namespace

WcnfFormula parse_dimacs(std::istream& in) {
  Tokenizer tz(in);

  std::string tok = tz.next();
  if (tok != "p") throw ParseError(tz.line(), "expected 'p' header, got '" + tok + "'");
  const int header_line = tz.line();
  std::istringstream header(tz.rest_of_line());

  std::string fmt;
  header >> fmt;
  const bool weighted = fmt == "wcnf";
  if (!weighted && fmt != "cnf")
    throw ParseError(header_line, "unknown format '" + fmt + "' (expected cnf or wcnf)");

  std::int64_t n = -1, m = -1;
  if (!(header >> n >> m) || n < 0 || m < 0)
    throw ParseError(header_line, "malformed header counts");

  WcnfFormula formula;
  formula.num_vars = static_cast<int>(n);
  formula.clauses.reserve(static_cast<size_t>(m));

  std::string top_tok;
  if (header >> top_tok) {
    if (!weighted) throw ParseError(header_line, "top weight on a cnf header");
    formula.hard_threshold = parse_weight(top_tok, header_line);
    std::string extra;
    if (header >> extra) throw ParseError(header_line, "trailing header field '" + extra + "'");
  }

  std::vector<bool> seen(static_cast<size_t>(n) + 1, false);
  while (static_cast<std::int64_t>(formula.clauses.size()) < m) {
    Clause clause;
    if (weighted) {
      tok = tz.next();
      if (tok.empty()) throw ParseError(tz.line(), "unexpected end of file in clause list");
      clause.weight = parse_weight(tok, tz.line());
    }
    for (;;) {
      tok = tz.next();
      if (tok.empty()) throw ParseError(tz.line(), "unexpected end of file in clause");
      const std::int64_t lit = parse_int(tok, tz.line(), "literal");
      if (lit == 0) break;
      const std::int64_t var = lit < 0 ? -lit : lit;
      if (var > n)
        throw ParseError(tz.line(), "literal " + std::to_string(lit) + " exceeds declared " +
                                        std::to_string(n) + " variables");
      if (seen[static_cast<size_t>(var)])
        throw ParseError(tz.line(), "variable " + std::to_string(var) + " repeated in clause " +
                                        std::to_string(formula.clauses.size() + 1));
      seen[static_cast<size_t>(var)] = true;
      clause.literals.push_back(Literal::decode(static_cast<int>(lit)));
    }
    if (clause.literals.empty())
      throw ParseError(tz.line(), "empty clause " + std::to_string(formula.clauses.size() + 1));
    for (const auto& l : clause.literals) seen[static_cast<size_t>(l.var)] = false;
    formula.clauses.push_back(std::move(clause));
  }

  tok = tz.next();
  if (!tok.empty())
    throw ParseError(tz.line(), "trailing content after " + std::to_string(m) + " clauses");
  return formula;
}

WcnfFormula parse_dimacs(const std::string& text) {
  std::istringstream in(text);
  return parse_dimacs(in);
}

WcnfFormula parse_dimacs_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  return parse_dimacs(in);
}

void write_dimacs(const WcnfFormula& formula, std::ostream& out) {
  out << "p wcnf " << formula.num_vars << ' ' << formula.clauses.size();
  if (formula.hard_threshold) out << ' ' << *formula.hard_threshold;
  out << '\n';
  for (const auto& clause : formula.clauses) {
    out << clause.weight;
    for (const auto& lit : clause.literals) out << ' ' << lit.encoded();
    out << " 0\n";
  }
}

std::string write_dimacs(const WcnfFormula& formula) {
  std::ostringstream out;
  write_dimacs(formula, out);
  return out.str();
}

bool clause_satisfied(const Clause& clause, const Assignment& alpha) {
  for (const auto& lit : clause.literals)
    if (alpha.is_true(lit)) return true;
  return false;
}

Weight cost(const WcnfFormula& formula, const Assignment& alpha) {
  if (alpha.size() != formula.num_vars)
    throw std::invalid_argument("assignment length " + std::to_string(alpha.size()) +
                                " does not match " + std::to_string(formula.num_vars) +
                                " variables");
  Weight total = 0;
  for (const auto& clause : formula.clauses)
    if (!clause_satisfied(clause, alpha)) total += clause.weight;
  return total;
}

bool is_feasible(const WcnfFormula& formula, const Assignment& alpha) {
  if (!formula.hard_threshold) return true;
  for (const auto& clause : formula.clauses)
    if (formula.is_hard(clause) && !clause_satisfied(clause, alpha)) return false;
  return true;
}

}  // namespace splitsat
