#include "gme/kernel_oracle.h"

#include <set>

#include "gme/errors.h"

namespace gme {

std::vector<PartitionVector> kernel_oracle(const PartySetRef& parties, const std::vector<Partition>& constraints,
                                           std::size_t max_parties) {
    if (parties->size() > max_parties) {
        throw SizeLimitError("kernel oracle supports at most " + std::to_string(max_parties) + " parties");
    }
    PartitionLattice lattice(parties, max_parties);
    std::size_t n = lattice.size();
    std::vector<bool> in_downset(n, false);
    for (const auto& k : constraints) {
        std::size_t ki = lattice.index_of(k);
        for (std::size_t r = 0; r < n; r++) {
            if (lattice.leq(r, ki)) {
                in_downset[r] = true;
            }
        }
    }

    std::vector<std::size_t> meets(n * n);
    for (std::size_t a = 0; a < n; a++) {
        for (std::size_t b = 0; b < n; b++) {
            meets[a * n + b] = lattice.meet(a, b);
        }
    }

    IntegerEchelon echelon(n);
    std::set<std::vector<std::uint8_t>> seen;
    for (std::size_t k = 0; k < n && echelon.rank() < n; k++) {
        if (!in_downset[k]) {
            continue;
        }
        for (std::size_t tau = 0; tau < n; tau++) {
            std::vector<std::uint8_t> pattern(n, 0);
            bool any = false;
            for (std::size_t pi = 0; pi < n; pi++) {
                if (meets[pi * n + k] == tau) {
                    pattern[pi] = 1;
                    any = true;
                }
            }
            if (!any || !seen.insert(pattern).second) {
                continue;
            }
            IntegerRow row(pattern.begin(), pattern.end());
            echelon.insert(std::move(row));
        }
    }

    std::vector<PartitionVector> basis;
    for (const auto& v : kernel_from_rref(echelon.reduced(), n)) {
        PartitionVector pv(parties);
        for (std::size_t i = 0; i < n; i++) {
            pv.add(lattice.at(i), v[i]);
        }
        basis.push_back(std::move(pv));
    }
    return basis;
}

std::vector<RationalRow> to_rows(const PartitionLattice& lattice, const std::vector<PartitionVector>& vectors) {
    std::vector<RationalRow> rows;
    for (const auto& v : vectors) {
        RationalRow r(lattice.size(), Rational(0));
        for (const auto& [pi, c] : v.terms()) {
            r[lattice.index_of(pi)] = c;
        }
        rows.push_back(std::move(r));
    }
    return rows;
}

bool same_span(const PartitionLattice& lattice, const std::vector<PartitionVector>& a,
               const std::vector<PartitionVector>& b) {
    return same_row_space(to_rows(lattice, a), to_rows(lattice, b), lattice.size());
}

}  // namespace gme
