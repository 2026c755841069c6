#include "andor/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>

#include "andor/errors.hpp"

namespace andor {

void check_variable_count(int n, int max_n) {
  if (n < 1 || n > max_n) {
    throw SizeError("variable count " + std::to_string(n) + " outside [1, " +
                    std::to_string(max_n) + "]");
  }
}

SubsetIndex::SubsetIndex(Mask bits, int n) : bits_(bits), n_(n) {
  check_variable_count(n);
  if (bits > full_mask(n)) {
    throw ArgumentError("mask " + std::to_string(bits) + " has bits beyond n = " +
                        std::to_string(n));
  }
}

SubsetIndex SubsetIndex::of(std::initializer_list<int> variables, int n) {
  check_variable_count(n);
  Mask bits = 0;
  for (int v : variables) {
    if (v < 1 || v > n) {
      throw ArgumentError("variable " + std::to_string(v) + " outside 1.." + std::to_string(n));
    }
    bits |= Mask{1} << (v - 1);
  }
  return {bits, n};
}

LatticeVector::LatticeVector(int n, std::vector<double> values) : n_(n), values_(std::move(values)) {
  check_variable_count(n);
  if (values_.size() != table_size(n)) {
    throw SizeError("table for n = " + std::to_string(n) + " needs " +
                    std::to_string(table_size(n)) + " entries, got " +
                    std::to_string(values_.size()));
  }
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (!std::isfinite(values_[i])) {
      throw NumericalError("non-finite table entry at mask " + std::to_string(i));
    }
  }
}

LatticeVector LatticeVector::zeros(int n) { return constant(n, 0.0); }

LatticeVector LatticeVector::constant(int n, double c) {
  check_variable_count(n);
  return {n, std::vector<double>(table_size(n), c)};
}

double LatticeVector::max_abs() const {
  double m = 0.0;
  for (double x : values_) m = std::max(m, std::abs(x));
  return m;
}

namespace {

void require_same_n(const LatticeVector& a, const LatticeVector& b) {
  if (a.n() != b.n()) {
    throw SizeError("lattice vectors over n = " + std::to_string(a.n()) + " and n = " +
                    std::to_string(b.n()));
  }
}

std::vector<double> copy_values(const LatticeVector& u) {
  return {u.values().begin(), u.values().end()};
}

}  // namespace

LatticeVector operator+(const LatticeVector& a, const LatticeVector& b) {
  require_same_n(a, b);
  auto out = copy_values(a);
  for (std::size_t i = 0; i < out.size(); ++i) out[i] += b[static_cast<Mask>(i)];
  return {a.n(), std::move(out)};
}

LatticeVector operator-(const LatticeVector& a, const LatticeVector& b) {
  require_same_n(a, b);
  auto out = copy_values(a);
  for (std::size_t i = 0; i < out.size(); ++i) out[i] -= b[static_cast<Mask>(i)];
  return {a.n(), std::move(out)};
}

LatticeVector operator*(double s, const LatticeVector& a) {
  auto out = copy_values(a);
  for (double& x : out) x *= s;
  return {a.n(), std::move(out)};
}

LatticeVector mobius_and(const LatticeVector& u) {
  auto t = copy_values(u);
  kernels::subset_mobius(t, u.n());
  return {u.n(), std::move(t)};
}

LatticeVector mobius_or(const LatticeVector& u) {
  auto t = std::move(complement_reindex(u)).release();
  kernels::subset_mobius(t, u.n());
  for (double& x : t) x = -x;
  return {u.n(), std::move(t)};
}

LatticeVector zeta_subsets(const LatticeVector& effects) {
  auto t = copy_values(effects);
  kernels::subset_zeta(t, effects.n());
  return {effects.n(), std::move(t)};
}

LatticeVector complement_reindex(const LatticeVector& u) {
  const Mask full = full_mask(u.n());
  std::vector<double> out(u.size());
  for (std::size_t s = 0; s < out.size(); ++s) out[s] = u[full & ~static_cast<Mask>(s)];
  return {u.n(), std::move(out)};
}

Mask permute_mask(Mask s, std::span<const int> perm) {
  Mask out = 0;
  for (std::size_t i = 0; i < perm.size(); ++i) {
    if ((s >> i) & 1U) out |= Mask{1} << perm[i];
  }
  return out;
}

LatticeVector permute_variables(const LatticeVector& u, std::span<const int> perm) {
  const int n = u.n();
  if (static_cast<int>(perm.size()) != n) {
    throw ArgumentError("permutation length " + std::to_string(perm.size()) +
                        " does not match n = " + std::to_string(n));
  }
  std::vector<bool> seen(n, false);
  for (int p : perm) {
    if (p < 0 || p >= n || seen[p]) throw ArgumentError("not a permutation of 0..n-1");
    seen[p] = true;
  }
  std::vector<double> out(u.size());
  for (std::size_t s = 0; s < out.size(); ++s) {
    out[permute_mask(static_cast<Mask>(s), perm)] = u[static_cast<Mask>(s)];
  }
  return {n, std::move(out)};
}

namespace kernels {

namespace {

// Low dimensions are finished chunk by chunk while the chunk is in cache;
// each high dimension then pairs contiguous runs of one chunk length. Every
// entry still sees the dimensions in increasing order.
constexpr int kChunkBits = 10;

template <typename Op>
void chunk_pass(double* base, int low_bits, Op op) {
  const std::size_t chunk = std::size_t{1} << low_bits;
  int bit = 0;
  // The three lowest dimensions, unrolled over blocks of 8.
  if (low_bits >= 3) {
    for (std::size_t block = 0; block < chunk; block += 8) {
      double* x = base + block;
      op(x[0], x[1]), op(x[2], x[3]), op(x[4], x[5]), op(x[6], x[7]);
      op(x[0], x[2]), op(x[1], x[3]), op(x[4], x[6]), op(x[5], x[7]);
      op(x[0], x[4]), op(x[1], x[5]), op(x[2], x[6]), op(x[3], x[7]);
    }
    bit = 3;
  }
  for (; bit < low_bits; ++bit) {
    const std::size_t half = std::size_t{1} << bit;
    for (std::size_t block = 0; block < chunk; block += 2 * half) {
      double* a = base + block;
      double* b = a + half;
      for (std::size_t j = 0; j < half; ++j) op(a[j], b[j]);
    }
  }
}

template <typename Op>
void run_pass(double* data, int bit, int low_bits, std::size_t r, Op op) {
  const std::size_t half = std::size_t{1} << bit;
  const std::size_t k = r << low_bits;
  const std::size_t lo = ((k >> bit) << (bit + 1)) | (k & (half - 1));
  double* a = data + lo;
  double* b = a + half;
  const std::size_t chunk = std::size_t{1} << low_bits;
  for (std::size_t j = 0; j < chunk; ++j) op(a[j], b[j]);
}

template <typename Op>
void for_each_pair(std::span<double> t, int n, Op op) {
  const int low_bits = std::min(n, kChunkBits);
  const auto chunks = static_cast<std::int64_t>(t.size() >> low_bits);
  const auto runs = static_cast<std::int64_t>((t.size() / 2) >> low_bits);
  if (n < config::kParallelMinVariables) {
    for (std::int64_t c = 0; c < chunks; ++c) chunk_pass(t.data() + (c << low_bits), low_bits, op);
    for (int bit = low_bits; bit < n; ++bit) {
      for (std::int64_t r = 0; r < runs; ++r) run_pass(t.data(), bit, low_bits, r, op);
    }
    return;
  }
#pragma omp parallel for schedule(static)
  for (std::int64_t c = 0; c < chunks; ++c) chunk_pass(t.data() + (c << low_bits), low_bits, op);
  for (int bit = low_bits; bit < n; ++bit) {
#pragma omp parallel for schedule(static)
    for (std::int64_t r = 0; r < runs; ++r) run_pass(t.data(), bit, low_bits, r, op);
  }
}

void check_span(std::span<double> t, int n) {
  if (t.size() != table_size(n)) throw SizeError("kernel span length does not match 2^n");
}

}  // namespace

void subset_mobius(std::span<double> t, int n) {
  check_span(t, n);
  for_each_pair(t, n, [](double& lo, double& hi) { hi -= lo; });
}

void subset_zeta(std::span<double> t, int n) {
  check_span(t, n);
  for_each_pair(t, n, [](double& lo, double& hi) { hi += lo; });
}

void superset_mobius(std::span<double> t, int n) {
  check_span(t, n);
  for_each_pair(t, n, [](double& lo, double& hi) { lo -= hi; });
}

void superset_zeta(std::span<double> t, int n) {
  check_span(t, n);
  for_each_pair(t, n, [](double& lo, double& hi) { lo += hi; });
}

namespace serial {

namespace {

template <typename Op>
void blocked(std::span<double> t, int n, Op op) {
  check_span(t, n);
  const std::size_t size = t.size();
  for (int bit = 0; bit < n; ++bit) {
    const std::size_t half = std::size_t{1} << bit;
    for (std::size_t base = 0; base < size; base += 2 * half) {
      for (std::size_t j = base; j < base + half; ++j) op(t[j], t[j + half]);
    }
  }
}

}  // namespace

void subset_mobius(std::span<double> t, int n) {
  blocked(t, n, [](double& lo, double& hi) { hi -= lo; });
}

void subset_zeta(std::span<double> t, int n) {
  blocked(t, n, [](double& lo, double& hi) { hi += lo; });
}

void superset_mobius(std::span<double> t, int n) {
  blocked(t, n, [](double& lo, double& hi) { lo -= hi; });
}

void superset_zeta(std::span<double> t, int n) {
  blocked(t, n, [](double& lo, double& hi) { lo += hi; });
}

}  // namespace serial

}  // namespace kernels

}  // namespace andor
