#include "gme/exact_linalg.h"

#include <boost/integer/common_factor.hpp>

#include "gme/errors.h"

namespace gme {

namespace {

void normalize_content(IntegerRow& row) {
    BigInt g = 0;
    for (const auto& x : row) {
        if (x != 0) {
            g = boost::multiprecision::gcd(g, BigInt(abs(x)));
            if (g == 1) {
                break;
            }
        }
    }
    if (g > 1) {
        for (auto& x : row) {
            x /= g;
        }
    }
}

std::size_t leading(const IntegerRow& row) {
    for (std::size_t i = 0; i < row.size(); i++) {
        if (row[i] != 0) {
            return i;
        }
    }
    return row.size();
}

}  // namespace

bool IntegerEchelon::insert(IntegerRow row) {
    if (row.size() != columns_) {
        throw DomainError("row width does not match the echelon form");
    }
    std::size_t lead = leading(row);
    while (lead < columns_) {
        auto it = pivots_.find(lead);
        if (it == pivots_.end()) {
            break;
        }
        const IntegerRow& p = it->second;
        BigInt a = p[lead];
        BigInt b = row[lead];
        for (std::size_t j = lead; j < columns_; j++) {
            row[j] = row[j] * a - p[j] * b;
        }
        normalize_content(row);
        lead = leading(row);
    }
    if (lead == columns_) {
        return false;
    }
    if (row[lead] < 0) {
        for (auto& x : row) {
            x = -x;
        }
    }
    normalize_content(row);
    pivots_.emplace(lead, std::move(row));
    return true;
}

std::vector<RationalRow> IntegerEchelon::reduced() const {
    std::vector<RationalRow> rows;
    std::vector<std::size_t> pivot_cols;
    for (const auto& [col, row] : pivots_) {
        RationalRow r(columns_);
        for (std::size_t j = 0; j < columns_; j++) {
            r[j] = Rational(row[j], row[col]);
        }
        rows.push_back(std::move(r));
        pivot_cols.push_back(col);
    }
    // Back substitution from the bottom.
    for (std::size_t i = rows.size(); i-- > 0;) {
        std::size_t c = pivot_cols[i];
        for (std::size_t k = 0; k < i; k++) {
            Rational f = rows[k][c];
            if (f != 0) {
                for (std::size_t j = c; j < columns_; j++) {
                    rows[k][j] -= f * rows[i][j];
                }
            }
        }
    }
    return rows;
}

std::vector<RationalRow> rref(const std::vector<RationalRow>& rows, std::size_t columns) {
    IntegerEchelon echelon(columns);
    for (const auto& r : rows) {
        if (r.size() != columns) {
            throw DomainError("row width mismatch");
        }
        // Clear denominators so the row is integral.
        BigInt lcm = 1;
        for (const auto& x : r) {
            lcm = boost::multiprecision::lcm(lcm, BigInt(denominator(x)));
        }
        IntegerRow ints(columns);
        for (std::size_t j = 0; j < columns; j++) {
            ints[j] = numerator(r[j]) * (lcm / denominator(r[j]));
        }
        echelon.insert(std::move(ints));
    }
    return echelon.reduced();
}

std::size_t rank(const std::vector<RationalRow>& rows, std::size_t columns) {
    return rref(rows, columns).size();
}

bool same_row_space(const std::vector<RationalRow>& a, const std::vector<RationalRow>& b, std::size_t columns) {
    return rref(a, columns) == rref(b, columns);
}

std::vector<RationalRow> kernel_from_rref(const std::vector<RationalRow>& reduced, std::size_t columns) {
    std::vector<std::size_t> pivot_of_row;
    std::vector<bool> is_pivot(columns, false);
    for (const auto& r : reduced) {
        std::size_t c = 0;
        while (c < columns && r[c] == 0) {
            c++;
        }
        pivot_of_row.push_back(c);
        is_pivot[c] = true;
    }
    std::vector<RationalRow> basis;
    for (std::size_t free = 0; free < columns; free++) {
        if (is_pivot[free]) {
            continue;
        }
        RationalRow v(columns, Rational(0));
        v[free] = 1;
        for (std::size_t i = 0; i < reduced.size(); i++) {
            v[pivot_of_row[i]] = -reduced[i][free];
        }
        basis.push_back(std::move(v));
    }
    return basis;
}

}  // namespace gme
