#include <gtest/gtest.h>

#include "andor/errors.hpp"
#include "andor/extraction.hpp"
#include "andor/oracle.hpp"
#include "test_support.hpp"

namespace andor {
namespace {

using test::as_vector;
using test::lattice;

TEST(Oracle, BruteAndOnFourEntries) {
  EXPECT_EQ(as_vector(oracle::brute_and(lattice({0, 1, 2, 5}))), (std::vector<double>{0, 1, 2, 2}));
}

TEST(Oracle, ZeroTables) {
  const auto z = LatticeVector::zeros(5);
  EXPECT_EQ(oracle::brute_and(z).max_abs(), 0.0);
  EXPECT_EQ(oracle::brute_or(z).max_abs(), 0.0);
}

TEST(Oracle, BruteOrRecoversSingleOrFunction) {
  const auto v = interaction_function_table(SubsetIndex(0b1010, 4), 3.0, EffectKind::kOr);
  const auto i = oracle::brute_or(v.values);
  for (std::size_t t = 1; t < i.size(); ++t) EXPECT_NEAR(i[static_cast<Mask>(t)], t == 0b1010 ? 3.0 : 0.0, 1e-12);
}

TEST(Oracle, SizeCap) {
  EXPECT_THROW(oracle::brute_and(LatticeVector::zeros(15)), SizeError);
  EXPECT_THROW(oracle::brute_or(LatticeVector::zeros(15)), SizeError);
}

TEST(Oracle, ConditionedAnd) {
  const ValueTable v{lattice({0, 1, 2, 5}), "", ""};
  EXPECT_EQ(oracle::conditioned_and(v, 0b01, 2), 3.0);
  // I^and_{1,2} = 3 - I^and_{1} = 2
  EXPECT_EQ(oracle::conditioned_and(v, 0b01, 2) - mobius_and(v.values)[0b01], mobius_and(v.values)[0b11]);
  EXPECT_EQ(oracle::conditioned_and(v, 0, 2), 2.0);
  EXPECT_THROW(oracle::conditioned_and(v, 0b10, 2), ArgumentError);
}

TEST(Oracle, VerifyMatchingOnEmptyGameIsExact) {
  const ValueTable v{LatticeVector::zeros(4), "", ""};
  const auto d = Decomposition::all_and(v);
  EXPECT_EQ(oracle::verify_matching(v, d, extract(v, d)), 0.0);
}

TEST(Oracle, VerifyMatchingSeesPerturbation) {
  const ValueTable v = test::random_table(6, 11);
  const auto d = Decomposition::even_split(v);
  const InteractionSet set = extract(v, d);
  EXPECT_LE(oracle::verify_matching(v, d, set), 1e-8 * std::max(1.0, v.values.max_abs()));

  const double eps = 0.25;
  auto values = as_vector(set.i_or);
  values[0b000110] += eps;
  const InteractionSet bumped{set.i_and, LatticeVector(6, values), set.bias, set.label};
  EXPECT_GE(oracle::verify_matching(v, d, bumped), eps * (1 - 1e-9));
}

}  // namespace
}  // namespace andor
