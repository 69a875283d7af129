#include <gtest/gtest.h>

#include <cmath>
#include <cstdlib>

#include "gme/errors.h"
#include "gme/invariant.h"
#include "gme/state_factory.h"

namespace gme {
namespace {

const double kLn2 = std::log(2.0);

PermutationTuple random_tuple(std::size_t n, std::size_t q, CounterRng& rng) {
    std::vector<Permutation> sigmas;
    for (std::size_t a = 0; a < q; a++) {
        sigmas.push_back(random_permutation(n, rng));
    }
    return PermutationTuple(n, sigmas);
}

PureState rotate_locally(const PureState& psi, CounterRng& rng) {
    std::vector<Eigen::MatrixXcd> us;
    for (std::size_t a = 0; a < psi.q(); a++) {
        us.push_back(random_unitary(psi.dim(a), rng));
    }
    return apply_local_unitaries(psi, us);
}

TEST(Renyi, Examples) {
    auto product = catalog_state("product", 3, 2);
    auto bell = catalog_state("bell", 2, 2);
    for (unsigned n = 1; n <= 4; n++) {
        EXPECT_NEAR(renyi_entropy(product, 0b001, n), 0.0, 1e-12);
        EXPECT_NEAR(renyi_entropy(bell, 0b01, n), kLn2, 1e-12);
    }
    // Partial-trace + eigenvalue oracle.
    EXPECT_NEAR(renyi_entropy(catalog_state("ghz", 4, 2), "AB", 2), 0.6931471805599457, 1e-12);
    EXPECT_THROW(renyi_entropy(bell, 0b01, 0), DomainError);
    EXPECT_THROW(renyi_entropy(bell, 0u, 2), DomainError);
    EXPECT_THROW(renyi_entropy(bell, "Q", 2), DomainError);
}

TEST(Renyi, NonNegativeAndMonotoneInOrder) {
    for (std::uint64_t seed = 0; seed < 10; seed++) {
        auto psi = random_state(3, 3, seed);
        double prev = 1e9;
        for (unsigned n = 1; n <= 5; n++) {
            double s = renyi_entropy(psi, 0b001, n);
            EXPECT_GE(s, -1e-9);
            EXPECT_LE(s, prev + 1e-12);
            prev = s;
        }
    }
}

TEST(Permutations, Basics) {
    Permutation c{1, 2, 0};
    EXPECT_EQ(compose(c, inverse(c)), identity_permutation(3));
    EXPECT_EQ(all_permutations(3).size(), 6u);
    EXPECT_FALSE(is_permutation({0, 0, 1}));
    EXPECT_THROW(PermutationTuple(2, {{0, 1}, {0, 0}}), DomainError);
    auto t = PermutationTuple::from_one_based({{2, 3, 1}, {1, 2, 3}});
    EXPECT_EQ(t.sigma(0), c);
    EXPECT_EQ(t.to_string(), "(2 3 1)(1 2 3)");
    EXPECT_EQ(tuple_from_json(tuple_to_json(t)), t);
    EXPECT_THROW(tuple_from_json(nlohmann::json::parse(R"({"n":2,"sigmas":[[0,1]]})")), DomainError);
}

TEST(MultiInvariant, TrivialTuples) {
    auto psi = random_state(3, 2, 1);
    auto id = identity_permutation(3);
    EXPECT_NEAR(std::abs(multi_invariant_Z(PermutationTuple(3, {id, id, id}), psi) - 1.0), 0.0, 1e-12);
    Permutation c{1, 2, 0};
    EXPECT_NEAR(std::abs(multi_invariant_Z(PermutationTuple(3, {c, c, c}), psi) - 1.0), 0.0, 1e-12);
    EXPECT_NEAR(log_multi_invariant_E(PermutationTuple(3, {id, id, id}), psi), 0.0, 1e-12);
}

TEST(MultiInvariant, SwapGivesPurity) {
    auto bell = catalog_state("bell", 2, 2);
    auto t = PermutationTuple::from_one_based({{2, 1}, {1, 2}});
    auto z = multi_invariant_Z(t, bell);
    EXPECT_NEAR(z.real(), 0.5, 1e-12);
    EXPECT_NEAR(z.imag(), 0.0, 1e-12);
    for (std::uint64_t seed = 0; seed < 5; seed++) {
        auto psi = random_state(2, 3, seed);
        for (std::size_t n = 2; n <= 4; n++) {
            Permutation cycle(n);
            for (std::size_t k = 0; k < n; k++) {
                cycle[k] = (k + 1) % n;
            }
            PermutationTuple tn(n, {cycle, identity_permutation(n)});
            double expected = -std::log(std::exp((1.0 - static_cast<double>(n)) * renyi_entropy(psi, 0b01, static_cast<unsigned>(n)))) /
                              static_cast<double>(n);
            EXPECT_NEAR(log_multi_invariant_E(tn, psi), expected, 1e-10);
        }
    }
}

TEST(MultiInvariant, BoundedAndRelabelingInvariant) {
    CounterRng rng(17);
    for (int draw = 0; draw < 100; draw++) {
        std::size_t q = 2 + rng.below(2);
        std::size_t n = 2 + rng.below(2);
        auto psi = random_state(uniform_parties(q, 2), rng);
        auto t = random_tuple(n, q, rng);
        auto z = multi_invariant_Z(t, psi);
        EXPECT_LE(std::abs(z), 1 + 1e-9);
        auto relabeled = relabel_tuple(t, random_permutation(n, rng), random_permutation(n, rng));
        EXPECT_LT(std::abs(multi_invariant_Z(relabeled, psi) - z), 1e-10);
    }
}

TEST(MultiInvariant, NormalizingFirstEntry) {
    CounterRng rng(2);
    auto t = random_tuple(3, 3, rng);
    auto g = random_permutation(3, rng);
    auto r = relabel_tuple(t, g, inverse(t.sigma(0)));
    EXPECT_EQ(r.sigma(0), g);
    EXPECT_EQ(relabel_tuple(t, identity_permutation(3), identity_permutation(3)), t);
}

TEST(MultiInvariant, AdditiveUnderLayers) {
    CounterRng rng(8);
    auto t = PermutationTuple::from_one_based({{1, 2, 3}, {2, 3, 1}, {3, 1, 2}});
    for (int trial = 0; trial < 5; trial++) {
        auto a = random_state(uniform_parties(3, 2), rng);
        auto b = random_state(uniform_parties(3, 2), rng);
        auto ab = tensor_product(a, b, ProductMode::Layer);
        EXPECT_NEAR(log_multi_invariant_E(t, ab), log_multi_invariant_E(t, a) + log_multi_invariant_E(t, b), 1e-9);
    }
}

TEST(MultiInvariant, FactorizedPartyDegeneracy) {
    auto ps = letter_parties(3);
    auto kappa = Partition::parse(ps, "A|BC");
    auto psi = make_separable({kappa, {2, 2, 2}, {}}, 5);
    Permutation s2{1, 2, 0}, s3{0, 2, 1};
    double reference = log_multi_invariant_E(PermutationTuple(3, {identity_permutation(3), s2, s3}), psi);
    for (const auto& s1 : all_permutations(3)) {
        EXPECT_NEAR(log_multi_invariant_E(PermutationTuple(3, {s1, s2, s3}), psi), reference, 1e-9);
    }
}

TEST(MultiInvariant, LocalUnitaryInvariance) {
    CounterRng rng(4);
    for (int trial = 0; trial < 10; trial++) {
        auto psi = random_state(uniform_parties(3, 2), rng);
        auto t = random_tuple(3, 3, rng);
        auto rotated = rotate_locally(psi, rng);
        EXPECT_LT(std::abs(multi_invariant_Z(t, psi) - multi_invariant_Z(t, rotated)), 1e-9);
        EXPECT_NEAR(renyi_entropy(psi, 0b011, 2), renyi_entropy(rotated, 0b011, 2), 1e-9);
    }
}

TEST(MultiInvariant, BudgetAndArity) {
    auto psi = random_state(3, 2, 1);
    auto t = PermutationTuple(3, {identity_permutation(3), identity_permutation(3), identity_permutation(3)});
    EXPECT_THROW(multi_invariant_Z(t, psi, 100), SizeLimitError);
    EXPECT_NO_THROW(multi_invariant_Z(t, psi, 512));
    EXPECT_THROW(multi_invariant_Z(t.restrict(2), psi), DomainError);
    setenv("GME_MAX_TENSOR_TERMS", "10", 1);
    EXPECT_EQ(max_tensor_terms(), 10u);
    EXPECT_THROW(multi_invariant_Z(t, psi), SizeLimitError);
    unsetenv("GME_MAX_TENSOR_TERMS");
    EXPECT_EQ(max_tensor_terms(), kDefaultMaxTensorTerms);
}

TEST(MultiInvariant, NonPositiveZRejected) {
    EXPECT_THROW(log_of_Z(Complex(-0.5, 0), 2), PositivityError);
    EXPECT_THROW(log_of_Z(Complex(0.5, 1e-6), 2), PositivityError);
    EXPECT_NEAR(log_of_Z(Complex(0.25, 0), 2), std::log(2.0), 1e-15);
}

}  // namespace
}  // namespace gme
