#pragma once

// Subsets of N = {1..n} as bitmasks (variable i <-> bit i-1, index 0 is the
// empty set) and the signed subset-sum transforms on tables indexed by them.

#include <bit>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <vector>

#include "andor/config.hpp"

namespace andor {

using Mask = std::uint32_t;

inline int order_of(Mask m) { return std::popcount(m); }

inline std::size_t table_size(int n) { return std::size_t{1} << n; }

inline Mask full_mask(int n) { return static_cast<Mask>(table_size(n) - 1); }

// Throws SizeError unless 1 <= n <= max_n.
void check_variable_count(int n, int max_n = config::kMaxVariables);

class SubsetIndex {
 public:
  SubsetIndex(Mask bits, int n);

  // Variables are numbered from 1.
  static SubsetIndex of(std::initializer_list<int> variables, int n);

  Mask bits() const { return bits_; }
  int n() const { return n_; }
  int order() const { return order_of(bits_); }
  bool empty() const { return bits_ == 0; }
  bool contains(int variable) const { return (bits_ >> (variable - 1)) & 1U; }
  SubsetIndex complement() const { return {full_mask(n_) & ~bits_, n_}; }

  friend bool operator==(const SubsetIndex&, const SubsetIndex&) = default;

 private:
  Mask bits_;
  int n_;
};

// 2^n finite reals indexed by subset bitmask. Immutable once built.
class LatticeVector {
 public:
  LatticeVector(int n, std::vector<double> values);

  static LatticeVector zeros(int n);
  static LatticeVector constant(int n, double c);

  int n() const { return n_; }
  std::size_t size() const { return values_.size(); }
  double operator[](Mask s) const { return values_[s]; }
  double operator[](const SubsetIndex& s) const { return values_[s.bits()]; }
  std::span<const double> values() const { return values_; }
  std::vector<double> release() && { return std::move(values_); }

  double max_abs() const;

 private:
  int n_;
  std::vector<double> values_;
};

LatticeVector operator+(const LatticeVector& a, const LatticeVector& b);
LatticeVector operator-(const LatticeVector& a, const LatticeVector& b);
LatticeVector operator*(double s, const LatticeVector& a);

// I[T] = sum_{L subset T} (-1)^{|T|-|L|} u[L].
LatticeVector mobius_and(const LatticeVector& u);

// I[T] = -sum_{L subset T} (-1)^{|T|-|L|} u[N \ L]. The T = empty entry is
// returned as the formula gives it (-u[N]); callers that attribute the empty
// set elsewhere zero it themselves.
LatticeVector mobius_or(const LatticeVector& u);

// g[S] = sum_{T subset S} I[T]; inverse of mobius_and.
LatticeVector zeta_subsets(const LatticeVector& effects);

// w[L] = u[N \ L].
LatticeVector complement_reindex(const LatticeVector& u);

// Relabels variables: variable i (0-based) becomes perm[i], so that
// out[pi S] = u[S]. perm must be a permutation of 0..n-1.
LatticeVector permute_variables(const LatticeVector& u, std::span<const int> perm);

Mask permute_mask(Mask s, std::span<const int> perm);

namespace kernels {

// In-place dimension-by-dimension transforms on a table of length 2^n.
// These split the independent pairs of every dimension across OpenMP threads
// once n >= config::kParallelMinVariables.

// t[S] <- sum_{T subset S} (-1)^{|S|-|T|} t[T]
void subset_mobius(std::span<double> t, int n);
// t[S] <- sum_{T subset S} t[T]
void subset_zeta(std::span<double> t, int n);
// t[S] <- sum_{T superset S} (-1)^{|T|-|S|} t[T]   (adjoint of subset_mobius)
void superset_mobius(std::span<double> t, int n);
// t[S] <- sum_{T superset S} t[T]                   (adjoint of subset_zeta)
void superset_zeta(std::span<double> t, int n);

// Single-threaded versions of the same four transforms. Same arithmetic in
// the same order per entry, so results are bit-identical to the parallel
// ones; kept as the reference for tests and the benchmark.
namespace serial {
void subset_mobius(std::span<double> t, int n);
void subset_zeta(std::span<double> t, int n);
void superset_mobius(std::span<double> t, int n);
void superset_zeta(std::span<double> t, int n);
}  // namespace serial

}  // namespace kernels

}  // namespace andor
