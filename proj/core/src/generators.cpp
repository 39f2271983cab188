#include "splitsat/generators.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace splitsat {

void GenSpec::validate() const {
  if (family == Family::PHP) {
    if (pigeons < 1 || holes < 1) throw std::invalid_argument("PHP needs pigeons, holes >= 1");
    return;
  }
  if (k < 1) throw std::invalid_argument("clause length must be at least 1");
  if (k > n) throw std::invalid_argument("clause length exceeds variable count");
  if (m < 0) throw std::invalid_argument("negative clause count");
  if (family == Family::PL && beta < 0) throw std::invalid_argument("beta must be non-negative");
}

namespace {

Weight draw_weight(const GenSpec& spec, Rng& rng) {
  return spec.weighted ? static_cast<Weight>(rng.uniform_int(1, 100)) : 1;
}

Clause make_clause(const std::vector<int>& vars, const GenSpec& spec, Rng& rng) {
  Clause c;
  c.literals.reserve(vars.size());
  for (const int v : vars) c.literals.push_back({v, rng.coin()});
  c.weight = draw_weight(spec, rng);
  return c;
}

}  // namespace

WcnfFormula gen_uniform(const GenSpec& spec) {
  spec.validate();
  Rng rng(spec.seed);
  WcnfFormula f;
  f.num_vars = spec.n;
  f.clauses.reserve(static_cast<size_t>(spec.m));
  std::vector<int> vars(static_cast<size_t>(spec.k));
  for (int j = 0; j < spec.m; ++j) {
    // Floyd's algorithm: k distinct values in [1, n].
    vars.clear();
    for (int t = spec.n - spec.k; t < spec.n; ++t) {
      const int v = rng.uniform_int(1, t + 1);
      if (std::find(vars.begin(), vars.end(), v) != vars.end())
        vars.push_back(t + 1);
      else
        vars.push_back(v);
    }
    f.clauses.push_back(make_clause(vars, spec, rng));
  }
  return f;
}

PowerLawSampler::PowerLawSampler(int n, double beta) {
  cdf_.resize(static_cast<size_t>(n));
  double acc = 0.0;
  for (int i = 1; i <= n; ++i) {
    acc += std::pow(static_cast<double>(i), -beta);
    cdf_[static_cast<size_t>(i - 1)] = acc;
  }
  for (auto& v : cdf_) v /= acc;
  cdf_.back() = 1.0;
}

int PowerLawSampler::sample(Rng& rng) const {
  const double u = rng.uniform_real();
  const auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
  return static_cast<int>(it - cdf_.begin()) + 1;
}

WcnfFormula gen_powerlaw(const GenSpec& spec) {
  spec.validate();
  Rng rng(spec.seed);
  const PowerLawSampler sampler(spec.n, spec.beta);
  WcnfFormula f;
  f.num_vars = spec.n;
  f.clauses.reserve(static_cast<size_t>(spec.m));
  std::vector<int> vars;
  for (int j = 0; j < spec.m; ++j) {
    vars.clear();
    while (static_cast<int>(vars.size()) < spec.k) {
      const int v = sampler.sample(rng);
      if (std::find(vars.begin(), vars.end(), v) == vars.end()) vars.push_back(v);
    }
    f.clauses.push_back(make_clause(vars, spec, rng));
  }
  return f;
}

WcnfFormula gen_php(int pigeons, int holes, bool hard_pairs) {
  if (pigeons < 1 || holes < 1) throw std::invalid_argument("PHP needs pigeons, holes >= 1");
  WcnfFormula f;
  f.num_vars = pigeons * holes;
  auto var = [&](int pigeon, int hole) { return (pigeon - 1) * holes + hole; };

  const Weight pair_weight =
      hard_pairs ? static_cast<Weight>(pigeons) + 1 : 1;  // exceeds total soft weight
  for (int i = 1; i <= pigeons; ++i) {
    Clause c;
    for (int j = 1; j <= holes; ++j) c.literals.push_back({var(i, j), false});
    c.weight = 1;
    f.clauses.push_back(std::move(c));
  }
  for (int j = 1; j <= holes; ++j)
    for (int i1 = 1; i1 <= pigeons; ++i1)
      for (int i2 = i1 + 1; i2 <= pigeons; ++i2) {
        Clause c;
        c.literals.push_back({var(i1, j), true});
        c.literals.push_back({var(i2, j), true});
        c.weight = pair_weight;
        f.clauses.push_back(std::move(c));
      }
  if (hard_pairs) f.hard_threshold = pair_weight;
  return f;
}

WcnfFormula generate(const GenSpec& spec) {
  switch (spec.family) {
    case Family::UF:
      return gen_uniform(spec);
    case Family::PL:
      return gen_powerlaw(spec);
    case Family::PHP:
      return gen_php(spec.pigeons, spec.holes, spec.php_hard_pairs);
  }
  throw std::logic_error("unknown family");
}

}  // namespace splitsat
