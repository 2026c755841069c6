#pragma once

// Literal-summation reference implementations. Nothing here calls the fast
// transforms in lattice.hpp; each sum is written out directly so the two
// routes stay independent.

#include "andor/extraction.hpp"
#include "andor/lattice.hpp"
#include "andor/models.hpp"

namespace andor::oracle {

LatticeVector brute_and(const LatticeVector& u);
LatticeVector brute_or(const LatticeVector& u);
// g[S] = sum_{T subset S} I[T], by submask enumeration.
LatticeVector brute_zeta(const LatticeVector& effects);

// Max over all S of |b + sum_{0 != T subset S} I^and_T + sum_{T cap S != 0} I^or_T
// - (v(x_S) - delta_S)|. Reports the error; does not judge it.
double verify_matching(const ValueTable& v, const Decomposition& d, const InteractionSet& set);

// sum_{L subset T} (-1)^{|T|-|L|} v(x_{L cup {i}}), variable i numbered from 1.
double conditioned_and(const ValueTable& v, Mask t, int variable);

}  // namespace andor::oracle
