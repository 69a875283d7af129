#pragma once

#include <vector>

#include "gme/exact_linalg.h"
#include "gme/partition_vector.h"

namespace gme {

/// Largest party count the dense oracle accepts (B_5 = 52 columns).
constexpr std::size_t kKernelOracleMaxParties = 5;

/// Exact null space of V -> (V ∧ kappa) for kappa in downset(K), computed by fraction-free
/// elimination of the 0/1 matrix A[(kappa, tau), pi] = [pi ∧ kappa == tau].
///
/// Independent of the Möbius construction; used to cross-check solve_meet_vanishing.
std::vector<PartitionVector> kernel_oracle(const PartySetRef& parties, const std::vector<Partition>& constraints,
                                           std::size_t max_parties = kKernelOracleMaxParties);

/// Coordinates of each vector in the enumeration basis of the lattice.
std::vector<RationalRow> to_rows(const PartitionLattice& lattice, const std::vector<PartitionVector>& vectors);

/// Exact equality of spans.
bool same_span(const PartitionLattice& lattice, const std::vector<PartitionVector>& a,
               const std::vector<PartitionVector>& b);

}  // namespace gme
