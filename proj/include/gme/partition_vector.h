#pragma once

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "gme/partition.h"
#include "gme/rational.h"

namespace gme {

/// Formal linear combination of partitions with exact rational coefficients.
/// Zero coefficients are never stored.
class PartitionVector {
   public:
    explicit PartitionVector(PartySetRef parties);
    static PartitionVector basis(const Partition& pi, const Rational& coeff = 1);

    /// Accepts "2*A|B|C - 1*AB|C + ABC" and "1/2*AB|C".
    static PartitionVector parse(PartySetRef parties, std::string_view text);

    const PartySetRef& parties() const { return parties_; }
    const std::map<Partition, Rational>& terms() const { return terms_; }
    Rational coefficient(const Partition& pi) const;
    bool is_zero() const { return terms_.empty(); }
    std::size_t support_size() const { return terms_.size(); }

    void add(const Partition& pi, const Rational& coeff);

    PartitionVector& operator+=(const PartitionVector& other);
    PartitionVector& operator-=(const PartitionVector& other);
    PartitionVector& operator*=(const Rational& scale);
    friend PartitionVector operator+(PartitionVector a, const PartitionVector& b) { return a += b; }
    friend PartitionVector operator-(PartitionVector a, const PartitionVector& b) { return a -= b; }
    friend PartitionVector operator*(PartitionVector a, const Rational& s) { return a *= s; }
    friend bool operator==(const PartitionVector& a, const PartitionVector& b) { return a.terms_ == b.terms_; }

    /// "1*ABC - 1*AB|C + 2*A|B|C", terms in enumeration order; "0" for the zero vector.
    std::string to_string() const;

   private:
    void require_compatible(const Partition& pi) const;

    PartySetRef parties_;
    std::map<Partition, Rational> terms_;
};

/// Bilinear meet with a single partition: sum of c_pi (pi ∧ kappa).
PartitionVector meet_extend(const PartitionVector& v, const Partition& kappa);

/// M_rho = sum over pi <= rho of mu(pi, rho) pi. Unitriangular: the coefficient of rho is 1.
struct MobiusVector {
    Partition rho;
    PartitionVector vector;
};

MobiusVector mobius_vector(const Partition& rho);

/// Basis {M_rho : rho not in downset(K)} of the space of V with V ∧ kappa = 0 for all kappa in K,
/// sorted by enumeration index of rho.
std::vector<MobiusVector> solve_meet_vanishing(const PartySetRef& parties, const std::vector<Partition>& constraints);

/// Constraint families used by the signal constructions.
std::vector<Partition> singleton_cut_constraints(const PartySetRef& parties);  // type (1, q-1)
std::vector<Partition> proper_constraints(const PartySetRef& parties);         // every pi != 1

}  // namespace gme
