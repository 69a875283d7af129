#pragma once

#include <cstddef>
#include <map>
#include <vector>

#include "gme/rational.h"

namespace gme {

using RationalRow = std::vector<Rational>;
using IntegerRow = std::vector<BigInt>;

/// Incremental fraction-free row echelon form over the integers.
///
/// Each inserted row is reduced against the stored pivot rows (leftmost pivot first) by
/// cross-multiplication, then divided by the gcd of its entries. Pivot order is the order
/// of first appearance, so the result is deterministic for a given insertion order.
class IntegerEchelon {
   public:
    explicit IntegerEchelon(std::size_t columns) : columns_(columns) {}

    /// Returns true when the row increased the rank.
    bool insert(IntegerRow row);

    std::size_t rank() const { return pivots_.size(); }
    std::size_t columns() const { return columns_; }

    /// Reduced row echelon form over the rationals (pivots equal to 1), rows ordered by pivot column.
    std::vector<RationalRow> reduced() const;

   private:
    std::size_t columns_;
    std::map<std::size_t, IntegerRow> pivots_;
};

/// Reduced row echelon form of arbitrary rational rows; zero rows dropped.
std::vector<RationalRow> rref(const std::vector<RationalRow>& rows, std::size_t columns);

std::size_t rank(const std::vector<RationalRow>& rows, std::size_t columns);

bool same_row_space(const std::vector<RationalRow>& a, const std::vector<RationalRow>& b, std::size_t columns);

/// Null space basis of the matrix whose reduced rows are given: one vector per free column,
/// with that column set to 1.
std::vector<RationalRow> kernel_from_rref(const std::vector<RationalRow>& reduced, std::size_t columns);

}  // namespace gme
