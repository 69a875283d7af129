#include <gtest/gtest.h>

#include <algorithm>

#include "gme/errors.h"
#include "gme/exact_linalg.h"
#include "gme/kernel_oracle.h"
#include "gme/partition_vector.h"
#include "gme/random.h"

namespace gme {
namespace {

PartitionVector pv(const PartySetRef& ps, const char* text) {
    return PartitionVector::parse(ps, text);
}

TEST(PartitionVector, ParseFormatRoundTrip) {
    auto ps = letter_parties(3);
    auto v = pv(ps, "2*A|B|C - 1*AB|C - 1*AC|B - 1*BC|A + 1*ABC");
    EXPECT_EQ(v.to_string(), "1*ABC - 1*AB|C - 1*AC|B - 1*A|BC + 2*A|B|C");
    EXPECT_EQ(PartitionVector::parse(ps, v.to_string()), v);
    EXPECT_EQ(pv(ps, "1/2*AB|C + 1/2*AB|C").coefficient(Partition::parse(ps, "AB|C")), Rational(1));
    EXPECT_TRUE(pv(ps, "AB|C - AB|C").is_zero());
    EXPECT_EQ(PartitionVector(ps).to_string(), "0");
    EXPECT_THROW(pv(ps, "2*AB|C 3*ABC"), DomainError);
}

TEST(PartitionVector, RejectsForeignParties) {
    PartitionVector v(letter_parties(3));
    EXPECT_THROW(v.add(Partition::coarsest(letter_parties(4)), 1), DomainError);
}

TEST(MeetExtend, Examples) {
    auto ps = letter_parties(3);
    auto bottom = Partition::finest(ps);
    for (const auto& k : enumerate_partitions(ps)) {
        EXPECT_EQ(meet_extend(PartitionVector::basis(bottom), k), PartitionVector::basis(bottom));
        auto zero = PartitionVector::basis(k) - PartitionVector::basis(k);
        EXPECT_TRUE(meet_extend(zero, k).is_zero());
    }
}

TEST(MobiusVector, Examples) {
    auto ps3 = letter_parties(3);
    EXPECT_EQ(mobius_vector(Partition::finest(ps3)).vector, PartitionVector::basis(Partition::finest(ps3)));
    // μ-formula expansion oracle.
    EXPECT_EQ(mobius_vector(Partition::coarsest(ps3)).vector, pv(ps3, "ABC - AB|C - AC|B - A|BC + 2*A|B|C"));
    auto ps4 = letter_parties(4);
    EXPECT_EQ(mobius_vector(Partition::parse(ps4, "AB|CD")).vector,
              pv(ps4, "AB|CD - A|B|CD - AB|C|D + A|B|C|D"));
}

TEST(MobiusVector, SelectionIdentityExhaustive) {
    for (std::size_t q = 1; q <= 4; q++) {
        auto parts = enumerate_partitions(letter_parties(q));
        for (const auto& rho : parts) {
            auto m = mobius_vector(rho).vector;
            EXPECT_EQ(m.coefficient(rho), Rational(1));
            for (const auto& [pi, c] : m.terms()) {
                EXPECT_TRUE(leq(pi, rho));
            }
            for (const auto& k : parts) {
                auto lhs = meet_extend(m, k);
                if (leq(rho, k)) {
                    ASSERT_EQ(lhs, m) << rho.to_string() << " ∧ " << k.to_string();
                } else {
                    ASSERT_TRUE(lhs.is_zero()) << rho.to_string() << " ∧ " << k.to_string();
                }
            }
        }
    }
}

TEST(MobiusVector, UnitriangularFullRank) {
    for (std::size_t q = 1; q <= 5; q++) {
        PartitionLattice lat(letter_parties(q));
        std::vector<PartitionVector> ms;
        for (const auto& rho : lat.elements()) {
            ms.push_back(mobius_vector(rho).vector);
        }
        auto rows = to_rows(lat, ms);
        for (std::size_t i = 0; i < rows.size(); i++) {
            EXPECT_EQ(rows[i][i], Rational(1));
            for (std::size_t j = 0; j < i; j++) {
                // Support lies on finer partitions, which come later in enumeration order.
                EXPECT_EQ(rows[i][j], Rational(0));
            }
        }
        EXPECT_EQ(rank(rows, lat.size()), lat.size());
    }
}

TEST(SolveMeetVanishing, Examples) {
    auto ps3 = letter_parties(3);
    EXPECT_EQ(solve_meet_vanishing(ps3, {}).size(), 5u);
    auto pre = solve_meet_vanishing(ps3, proper_constraints(ps3));
    ASSERT_EQ(pre.size(), 1u);
    EXPECT_TRUE(pre[0].rho.is_coarsest());

    auto ps4 = letter_parties(4);
    auto sig = solve_meet_vanishing(ps4, singleton_cut_constraints(ps4));
    std::vector<std::string> rhos;
    for (const auto& m : sig) {
        rhos.push_back(m.rho.to_string());
    }
    EXPECT_EQ(rhos, (std::vector<std::string>{"ABCD", "AB|CD", "AC|BD", "AD|BC"}));
}

TEST(SolveMeetVanishing, DownsetStable) {
    auto ps = letter_parties(4);
    auto k = singleton_cut_constraints(ps);
    auto a = solve_meet_vanishing(ps, k);
    auto b = solve_meet_vanishing(ps, downset(k));
    ASSERT_EQ(a.size(), b.size());
    for (std::size_t i = 0; i < a.size(); i++) {
        EXPECT_EQ(a[i].rho, b[i].rho);
    }
}

TEST(ExactLinalg, RrefAndKernel) {
    std::vector<RationalRow> rows = {{2, 4, 6}, {1, 2, 3}, {0, 1, 1}};
    auto r = rref(rows, 3);
    ASSERT_EQ(r.size(), 2u);
    EXPECT_EQ(r[0], (RationalRow{1, 0, 1}));
    EXPECT_EQ(r[1], (RationalRow{0, 1, 1}));
    auto k = kernel_from_rref(r, 3);
    ASSERT_EQ(k.size(), 1u);
    EXPECT_EQ(k[0], (RationalRow{-1, -1, 1}));
    EXPECT_TRUE(same_row_space({{1, 1, 2}}, {{Rational(1, 2), Rational(1, 2), 1}}, 3));
    EXPECT_FALSE(same_row_space({{1, 0, 0}}, {{0, 1, 0}}, 3));
}

TEST(KernelOracle, TrivialCases) {
    auto ps = letter_parties(3);
    PartitionLattice lat(ps);
    EXPECT_TRUE(kernel_oracle(ps, {Partition::coarsest(ps)}).empty());
    EXPECT_EQ(kernel_oracle(ps, {}).size(), lat.size());
    EXPECT_THROW(kernel_oracle(letter_parties(6), {}), SizeLimitError);
}

TEST(KernelOracle, MatchesMobiusSolutionOnRandomConstraints) {
    auto ps = letter_parties(4);
    PartitionLattice lat(ps);
    CounterRng rng(3);
    for (int trial = 0; trial < 50; trial++) {
        std::vector<Partition> k;
        for (const auto& p : lat.elements()) {
            if (rng.below(5) == 0) {
                k.push_back(p);
            }
        }
        auto kernel = kernel_oracle(ps, k);
        std::vector<PartitionVector> mobius;
        for (auto& m : solve_meet_vanishing(ps, k)) {
            mobius.push_back(std::move(m.vector));
        }
        EXPECT_EQ(kernel.size(), lat.size() - downset(k).size());
        EXPECT_TRUE(same_span(lat, kernel, mobius));
    }
}

}  // namespace
}  // namespace gme
