#pragma once

#include <cstdint>
#include <vector>

#include "splitsat/rng.hpp"
#include "splitsat/wcnf.hpp"

namespace splitsat {

enum class Family { UF, PL, PHP };

struct GenSpec {
  Family family = Family::UF;
  int k = 3;             // clause length (UF/PL)
  int n = 20;            // variables (UF/PL)
  int m = 80;            // clauses (UF/PL)
  double beta = 2.5;     // power-law exponent (PL)
  bool weighted = true;  // uniform weights in [1,100]
  std::uint64_t seed = 1;
  int pigeons = 4;       // PHP
  int holes = 3;         // PHP
  bool php_hard_pairs = false;  // mark at-most-one clauses hard

  void validate() const;
};

/// Uniform random k-CNF: k distinct variables per clause, fair-coin
/// polarities, weights uniform in [1,100] when weighted.
WcnfFormula gen_uniform(const GenSpec& spec);

/// Power-law variable selection: variable i drawn with probability
/// proportional to i^(-beta), distinct within a clause by rejection.
WcnfFormula gen_powerlaw(const GenSpec& spec);

/// Pigeonhole principle: variables x_{i,j} (pigeon i in hole j), one
/// at-least-one clause per pigeon and pairwise at-most-one clauses per hole.
/// All weights 1; with hard pairs, the at-most-one clauses get a top weight
/// and the formula carries the matching hard threshold.
WcnfFormula gen_php(int pigeons, int holes, bool hard_pairs = false);

WcnfFormula generate(const GenSpec& spec);

/// The PL variable sampler (1-based), exposed for distribution tests.
class PowerLawSampler {
 public:
  PowerLawSampler(int n, double beta);
  int sample(Rng& rng) const;

 private:
  std::vector<double> cdf_;
};

}  // namespace splitsat
