#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "gme/errors.h"
#include "gme/invariant.h"
#include "gme/state.h"
#include "gme/state_factory.h"
#include "gme/state_io.h"

namespace gme {
namespace {

PureState letters(std::size_t q, std::size_t d, std::initializer_list<std::pair<std::size_t, double>> amps) {
    std::size_t total = 1;
    for (std::size_t i = 0; i < q; i++) {
        total *= d;
    }
    Eigen::VectorXcd v = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(total));
    for (auto [i, a] : amps) {
        v[static_cast<Eigen::Index>(i)] = a;
    }
    std::vector<Party> parties;
    for (std::size_t i = 0; i < q; i++) {
        parties.push_back({std::string(1, static_cast<char>('A' + i)), d});
    }
    return PureState::renormalized(parties, v);
}

std::vector<double> sorted_nonzero(std::vector<double> v) {
    std::erase_if(v, [](double x) { return x < 1e-12; });
    std::sort(v.begin(), v.end());
    return v;
}

TEST(PureState, Validation) {
    EXPECT_THROW(PureState({{"A", 2}}, Eigen::Vector2cd(1, 1)), DomainError);
    EXPECT_THROW(PureState({{"A", 2}, {"A", 2}}, Eigen::Vector4cd(1, 0, 0, 0)), DomainError);
    EXPECT_THROW(PureState({{"A", 3}}, Eigen::Vector2cd(1, 0)), DomainError);
    EXPECT_THROW(PureState::renormalized({{"A", 2}}, Eigen::Vector2cd(0, 0)), DomainError);
    EXPECT_NO_THROW(PureState({{"A", 2}}, Eigen::Vector2cd(1, 1e-11)));
}

TEST(TensorProduct, DisjointAndLayer) {
    auto zero = catalog_state("product", 1, 2);
    PureState b({{"B", 2}}, zero.amplitudes());
    auto ab = tensor_product(zero, b);
    EXPECT_EQ(ab.labels(), (std::vector<std::string>{"A", "B"}));
    EXPECT_EQ(ab.amplitudes()[0], Complex(1));
    EXPECT_THROW(tensor_product(zero, zero), DomainError);
    auto layered = tensor_product(zero, zero, ProductMode::Layer);
    EXPECT_EQ(layered.dim(0), 4u);
    EXPECT_NEAR(layered.norm(), 1.0, 1e-12);
}

TEST(TensorProduct, AppendixLayerState) {
    auto psi = catalog_state("appendixA-psi", 3, 4);
    EXPECT_EQ(psi.dims(), (std::vector<std::size_t>{4, 4, 4}));
    // (|0>|00>|0> + |0>|01>|1> + |1>|10>|0> + |1>|11>|1>)/2 in (A1A2, B1B2, C1C2) with A2 = C1 = 0.
    std::vector<std::size_t> support;
    for (Eigen::Index i = 0; i < psi.amplitudes().size(); i++) {
        if (std::abs(psi.amplitudes()[i]) > 1e-12) {
            EXPECT_NEAR(std::abs(psi.amplitudes()[i]), 0.5, 1e-12);
            support.push_back(static_cast<std::size_t>(i));
        }
    }
    auto idx = [](std::size_t a, std::size_t b, std::size_t c) { return a * 16 + b * 4 + c; };
    EXPECT_EQ(support, (std::vector<std::size_t>{idx(0, 0, 0), idx(0, 1, 1), idx(2, 2, 0), idx(2, 3, 1)}));
}

TEST(CoarseGrain, Examples) {
    auto psi = random_state(5, 2, 1);
    auto ps = psi.party_set();
    auto grouped = coarse_grain(psi, Partition::parse(ps, "AB|CDE"));
    EXPECT_EQ(grouped.labels(), (std::vector<std::string>{"AB", "CDE"}));
    EXPECT_EQ(grouped.dims(), (std::vector<std::size_t>{4, 8}));
    EXPECT_EQ(grouped.amplitudes(), psi.amplitudes());
    auto one = coarse_grain(psi, Partition::coarsest(ps));
    EXPECT_EQ(one.q(), 1u);
    EXPECT_NEAR(one.norm(), 1.0, 1e-12);
    auto same = coarse_grain(psi, Partition::finest(ps));
    EXPECT_EQ(same.amplitudes(), psi.amplitudes());
    EXPECT_THROW(coarse_grain(psi, Partition::coarsest(letter_parties(4))), DomainError);
}

TEST(CoarseGrain, Functorial) {
    auto psi = random_state(4, 2, 2);
    auto ps = psi.party_set();
    auto kappa = Partition::parse(ps, "AC|B|D");
    auto pi = Partition::parse(ps, "ACD|B");
    auto step = coarse_grain(psi, kappa);  // parties AC, B, D
    auto induced = Partition::parse(step.party_set(), "AC,D|B");
    auto twice = coarse_grain(step, induced);
    auto direct = coarse_grain(psi, pi);
    EXPECT_EQ(twice.dims(), direct.dims());
    EXPECT_LT((twice.amplitudes() - direct.amplitudes()).norm(), 1e-15);
}

TEST(Embed, PadsAndPreservesInvariants) {
    auto psi = random_state(3, 2, 3);
    auto big = embed(psi, 3);
    EXPECT_EQ(big.dims(), (std::vector<std::size_t>{3, 3, 3}));
    EXPECT_NEAR(big.norm(), 1.0, 1e-12);
    for (std::uint32_t mask = 1; mask < 7; mask++) {
        EXPECT_NEAR(renyi_entropy(psi, mask, 2), renyi_entropy(big, mask, 2), 1e-10);
    }
    EXPECT_THROW(embed(psi, 1), DomainError);
    // Embedding then grouping agrees with grouping then embedding each block.
    auto pi = Partition::parse(psi.party_set(), "AB|C");
    auto a = coarse_grain(big, Partition::parse(big.party_set(), "AB|C"));
    auto b = embed(coarse_grain(psi, pi), 9);
    EXPECT_NEAR(renyi_entropy(a, 1, 2), renyi_entropy(b, 1, 2), 1e-10);
}

TEST(ReducedDensity, Examples) {
    auto bell = catalog_state("bell", 2, 2);
    auto rho = reduced_density(bell, 0b01);
    EXPECT_LT((rho.matrix() - 0.5 * Eigen::Matrix2cd::Identity()).norm(), 1e-12);
    auto full = reduced_density(bell, 0b11);
    EXPECT_LT((full.matrix() - bell.amplitudes() * bell.amplitudes().adjoint()).norm(), 1e-12);
    auto ghz = catalog_state("ghz", 3, 2);
    auto ab = reduced_density(ghz, std::vector<std::string>{"A", "B"});
    auto spec = sorted_nonzero(ab.spectrum());
    ASSERT_EQ(spec.size(), 2u);
    EXPECT_NEAR(spec[0], 0.5, 1e-12);
    EXPECT_NEAR(spec[1], 0.5, 1e-12);
    EXPECT_THROW(reduced_density(ghz, std::vector<std::string>{"Z"}), DomainError);
}

TEST(ReducedDensity, SchmidtDuality) {
    for (std::uint64_t seed = 0; seed < 10; seed++) {
        auto psi = random_state(4, 2, seed);
        for (std::uint32_t mask = 1; mask < 15; mask++) {
            auto a = sorted_nonzero(reduced_density(psi, mask).spectrum());
            auto b = sorted_nonzero(reduced_density(psi, 15 & ~mask).spectrum());
            ASSERT_EQ(a.size(), b.size());
            for (std::size_t i = 0; i < a.size(); i++) {
                EXPECT_NEAR(a[i], b[i], 1e-9);
            }
        }
    }
}

TEST(DensityMatrix, Validation) {
    Eigen::Matrix2cd m;
    m << 0.5, 0.1, 0.2, 0.5;
    EXPECT_THROW(DensityMatrix({{"A", 2}}, m), DomainError);
    m << 1.5, 0, 0, -0.5;
    EXPECT_THROW(DensityMatrix({{"A", 2}}, m), PositivityError);
    m << 0.6, 0, 0, 0.6;
    EXPECT_THROW(DensityMatrix({{"A", 2}}, m), DomainError);
}

TEST(Purification, Examples) {
    Eigen::Matrix2cd half = 0.5 * Eigen::Matrix2cd::Identity();
    auto bell = canonical_purification(DensityMatrix({{"A", 2}}, half));
    EXPECT_EQ(bell.labels(), (std::vector<std::string>{"A", "A*"}));
    EXPECT_NEAR(renyi_entropy(bell, 1, 1), std::log(2.0), 1e-12);

    Eigen::Matrix2cd pure = Eigen::Matrix2cd::Zero();
    pure(0, 0) = 1;
    auto product = canonical_purification(DensityMatrix({{"A", 2}}, pure));
    EXPECT_NEAR(renyi_entropy(product, 1, 1), 0.0, 1e-12);
}

TEST(Purification, RoundTripAndInterleaving) {
    for (std::uint64_t seed = 0; seed < 5; seed++) {
        auto psi = random_state(3, 2, seed);
        auto rho = reduced_density(psi, 0b011);
        auto purified = canonical_purification(rho);
        EXPECT_EQ(purified.labels(), (std::vector<std::string>{"A", "A*", "B", "B*"}));
        auto back = reduced_density(purified, 0b0101);
        EXPECT_LT((back.matrix() - rho.matrix()).norm(), 1e-9);
    }
}

TEST(Separable, BlocksHaveZeroEntropy) {
    auto ps = letter_parties(4);
    for (const auto& kappa : enumerate_partitions(ps)) {
        auto psi = make_separable({kappa, {2, 2, 2, 2}, {}}, 9);
        for (auto b : kappa.blocks()) {
            EXPECT_NEAR(renyi_entropy(psi, b, 2), 0.0, 1e-9) << kappa.to_string();
        }
    }
    // Deterministic in the seed.
    auto kappa = Partition::parse(ps, "AB|CD");
    EXPECT_EQ(make_separable({kappa, {2, 2, 2, 2}, {}}, 4).amplitudes(),
              make_separable({kappa, {2, 2, 2, 2}, {}}, 4).amplitudes());
}

TEST(Separable, CatalogBlock) {
    auto ps = letter_parties(3);
    auto kappa = Partition::parse(ps, "AB|C");
    auto psi = make_separable({kappa, {2, 2, 2}, {BlockRecipe::from_catalog("bell"), BlockRecipe::random()}}, 1);
    EXPECT_NEAR(renyi_entropy(psi, 0b001, 2), std::log(2.0), 1e-12);
    EXPECT_NEAR(renyi_entropy(psi, 0b011, 2), 0.0, 1e-12);
    EXPECT_THROW(make_separable({kappa, {2, 2, 2}, {BlockRecipe::random()}}, 1), DomainError);
}

TEST(Catalog, KnownStates) {
    auto ghz = catalog_state("ghz", 3, 2);
    EXPECT_NEAR(ghz.amplitudes()[0].real(), 1 / std::sqrt(2.0), 1e-15);
    EXPECT_NEAR(ghz.amplitudes()[7].real(), 1 / std::sqrt(2.0), 1e-15);
    auto w = catalog_state("w", 3, 2);
    EXPECT_NEAR(w.amplitudes()[1].real(), 1 / std::sqrt(3.0), 1e-15);
    EXPECT_THROW(catalog_state("bell", 3, 2), DomainError);
    EXPECT_THROW(catalog_state("nope", 3, 2), DomainError);
    EXPECT_THROW(catalog_state("appendixA-psi1", 3, 2), DomainError);
    for (const auto& name : catalog_names()) {
        bool appendix = name.rfind("appendixA", 0) == 0;
        auto s = catalog_state(name, appendix || name != "bell" ? 3 : 2, appendix ? 4 : 2);
        EXPECT_NEAR(s.norm(), 1.0, 1e-12);
    }
}

TEST(Random, NormalizedAndDeterministic) {
    auto a = random_state(3, 2, 7);
    auto b = random_state(3, 2, 7);
    auto c = random_state(3, 2, 8);
    EXPECT_NEAR(a.norm(), 1.0, 1e-12);
    EXPECT_EQ(a.amplitudes(), b.amplitudes());
    EXPECT_NE(a.amplitudes(), c.amplitudes());
}

TEST(Random, UnitaryIsUnitary) {
    CounterRng rng(1);
    auto u = random_unitary(4, rng);
    EXPECT_LT((u.adjoint() * u - Eigen::MatrixXcd::Identity(4, 4)).norm(), 1e-12);
}

TEST(Layerwise, RejectsEntangledLayers) {
    auto ps = letter_parties(3);
    EXPECT_THROW(random_layerwise({{Partition::coarsest(ps), {2, 2, 2}}}, 1), ContractError);
    auto psi = random_layerwise({{Partition::parse(ps, "A|BC"), {2, 2, 2}}, {Partition::parse(ps, "AB|C"), {2, 2, 2}}}, 1);
    EXPECT_EQ(psi.dims(), (std::vector<std::size_t>{4, 4, 4}));
}

TEST(Kraus, IdentityAndTracePreservation) {
    auto psi = random_state(2, 2, 1);
    auto out = apply_kraus(psi, {{{"A"}, Eigen::Matrix2cd::Identity()}});
    ASSERT_EQ(out.size(), 1u);
    EXPECT_NEAR(out[0].probability, 1.0, 1e-12);
    EXPECT_LT(amplitude_distance(*out[0].state, psi), 1e-12);
    EXPECT_THROW(apply_kraus(psi, {{{"A"}, 0.5 * Eigen::Matrix2cd::Identity()}}), ContractError);
}

TEST(Kraus, MeasurementOnProductStaysProduct) {
    auto psi = make_separable({Partition::finest(letter_parties(3)), {2, 2, 2}, {}}, 3);
    Eigen::Matrix2cd p0 = Eigen::Matrix2cd::Zero(), p1 = Eigen::Matrix2cd::Zero();
    p0(0, 0) = 1;
    p1(1, 1) = 1;
    auto out = apply_kraus(psi, {{{"B"}, p0}, {{"B"}, p1}});
    EXPECT_NEAR(out[0].probability + out[1].probability, 1.0, 1e-9);
    for (const auto& o : out) {
        for (std::uint32_t a = 0; a < 3; a++) {
            EXPECT_NEAR(renyi_entropy(*o.state, 1u << a, 2), 0.0, 1e-9);
        }
    }
}

TEST(Kraus, AppendixMeasurement) {
    auto psi = catalog_state("appendixA-psi", 3, 4);
    Eigen::Matrix4cd e1 = Eigen::Matrix4cd::Zero(), e2 = Eigen::Matrix4cd::Zero();
    e1(0, 0) = e1(3, 3) = 1;
    e2(1, 1) = e2(2, 2) = 1;
    auto out = apply_kraus(psi, {{{"B"}, e1}, {{"B"}, e2}});
    ASSERT_EQ(out.size(), 2u);
    EXPECT_NEAR(out[0].probability, 0.5, 1e-12);
    EXPECT_NEAR(out[1].probability, 0.5, 1e-12);
    EXPECT_LT(amplitude_distance(*out[0].state, catalog_state("appendixA-psi1", 3, 4)), 1e-12);
    EXPECT_LT(amplitude_distance(*out[1].state, catalog_state("appendixA-psi2", 3, 4)), 1e-12);
    auto ghz = restrict_local_support(*out[0].state, {{0, 2}, {0, 3}, {0, 1}});
    EXPECT_LT(amplitude_distance(ghz, catalog_state("ghz", 3, 2)), 1e-12);
}

TEST(LocalUnitaries, PreserveNorm) {
    auto psi = random_state(3, 2, 4);
    CounterRng rng(2);
    std::vector<Eigen::MatrixXcd> us;
    for (int a = 0; a < 3; a++) {
        us.push_back(random_unitary(2, rng));
    }
    auto out = apply_local_unitaries(psi, us);
    EXPECT_NEAR(out.norm(), 1.0, 1e-12);
}

TEST(StateIo, RoundTrip) {
    auto psi = random_state(3, 2, 5);
    auto j = state_to_json(psi);
    auto back = state_from_json(j);
    EXPECT_EQ(back.labels(), psi.labels());
    EXPECT_EQ(back.amplitudes(), psi.amplitudes());
    j["amplitudes"][0] = {5.0, 0.0};
    EXPECT_THROW(state_from_json(j), DomainError);
    EXPECT_THROW(state_from_json(nlohmann::json::parse(R"({"parties":[]})")), DomainError);
}

}  // namespace
}  // namespace gme
