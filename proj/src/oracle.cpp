#include "andor/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "andor/errors.hpp"

namespace andor::oracle {

namespace {

int popcount(unsigned long long x) {
  int c = 0;
  while (x) {
    x &= x - 1;
    ++c;
  }
  return c;
}

double parity_sign(int exponent) { return (exponent % 2 == 0) ? 1.0 : -1.0; }

// sum over every L subset T of (-1)^{|T|-|L|} f(L), enumerating submasks of T.
template <typename F>
double alternating_sum(unsigned long long t, F f) {
  const int order = popcount(t);
  double sum = 0.0;
  unsigned long long l = t;
  while (true) {
    sum += parity_sign(order - popcount(l)) * f(l);
    if (l == 0) break;
    l = (l - 1) & t;
  }
  return sum;
}

}  // namespace

LatticeVector brute_and(const LatticeVector& u) {
  check_variable_count(u.n(), config::kMaxOracleVariables);
  const unsigned long long size = 1ULL << u.n();
  std::vector<double> out(size);
  for (unsigned long long t = 0; t < size; ++t) {
    out[t] = alternating_sum(t, [&](unsigned long long l) { return u[static_cast<Mask>(l)]; });
  }
  return {u.n(), std::move(out)};
}

LatticeVector brute_or(const LatticeVector& u) {
  check_variable_count(u.n(), config::kMaxOracleVariables);
  const unsigned long long size = 1ULL << u.n();
  const unsigned long long full = size - 1;
  std::vector<double> out(size);
  for (unsigned long long t = 0; t < size; ++t) {
    out[t] = -alternating_sum(
        t, [&](unsigned long long l) { return u[static_cast<Mask>(full & ~l)]; });
  }
  return {u.n(), std::move(out)};
}

LatticeVector brute_zeta(const LatticeVector& effects) {
  check_variable_count(effects.n(), config::kMaxOracleVariables);
  const unsigned long long size = 1ULL << effects.n();
  std::vector<double> out(size);
  for (unsigned long long s = 0; s < size; ++s) {
    double sum = 0.0;
    unsigned long long t = s;
    while (true) {
      sum += effects[static_cast<Mask>(t)];
      if (t == 0) break;
      t = (t - 1) & s;
    }
    out[s] = sum;
  }
  return {effects.n(), std::move(out)};
}

double verify_matching(const ValueTable& v, const Decomposition& d, const InteractionSet& set) {
  const int n = v.n();
  check_variable_count(n, config::kMaxOracleVariables);
  if (set.n() != n || d.delta.n() != n) {
    throw SizeError("table, decomposition and interaction set disagree on n");
  }
  const unsigned long long size = 1ULL << n;
  double worst = 0.0;
  for (unsigned long long s = 0; s < size; ++s) {
    double h = set.bias;
    for (unsigned long long t = 1; t < size; ++t) {
      if ((t & s) == t) h += set.i_and[static_cast<Mask>(t)];
      if ((t & s) != 0) h += set.i_or[static_cast<Mask>(t)];
    }
    const double target = v.values[static_cast<Mask>(s)] - d.delta[static_cast<Mask>(s)];
    worst = std::max(worst, std::abs(h - target));
  }
  return worst;
}

double conditioned_and(const ValueTable& v, Mask t, int variable) {
  const int n = v.n();
  if (variable < 1 || variable > n) {
    throw ArgumentError("variable " + std::to_string(variable) + " outside 1.." +
                        std::to_string(n));
  }
  const unsigned long long bit = 1ULL << (variable - 1);
  if (t & bit) throw ArgumentError("conditioning variable must not belong to T");
  if (t >= (1ULL << n)) throw ArgumentError("mask beyond n");
  return alternating_sum(t, [&](unsigned long long l) {
    return v.values[static_cast<Mask>(l | bit)];
  });
}

}  // namespace andor::oracle
