#include <gtest/gtest.h>

#include <cmath>

#include "gme/errors.h"
#include "gme/kernel_oracle.h"
#include "gme/signal.h"
#include "gme/state_factory.h"

namespace gme {
namespace {

const double kLn2 = std::log(2.0);

SeedFamily multi_family() {
    // Only the coefficient structure matters for the symbolic tests.
    return SeedFamily::log_multi_invariant(TupleTable(std::vector<PermutationTuple>{
        PermutationTuple::from_one_based({{1, 2}, {2, 1}, {1, 2}, {2, 1}})}));
}

std::string render_pre_signal(std::size_t q, bool reduce) {
    auto spec = build_signal_basis(multi_family(), q, SignalMode::PreSignal).at(0);
    return render_grouped(expand_grouped(spec, reduce));
}

// Number of set partitions of q elements without singleton blocks.
std::size_t singleton_free_count(std::size_t q) {
    static const std::size_t table[] = {1, 0, 1, 1, 4, 11, 41};
    return table[q];
}

TEST(Basis, SizesAndConstraints) {
    auto f = SeedFamily::renyi_sum(2);
    for (std::size_t q = 2; q <= 6; q++) {
        auto ps = letter_parties(q);
        auto basis = build_signal_basis(f, ps, SignalMode::Signal);
        EXPECT_EQ(basis.size(), singleton_free_count(q)) << q;
        auto cons = constraint_set(ps, SignalMode::Signal);
        EXPECT_EQ(cons.size(), q);
        for (const auto& spec : basis) {
            ASSERT_TRUE(spec.rho.has_value());
            EXPECT_FALSE(spec.rho->has_singleton_block());
            EXPECT_EQ(spec.provenance, Provenance::MobiusVector);
            EXPECT_TRUE(satisfies_constraints(spec.terms, cons)) << spec.rho->to_string();
            EXPECT_EQ(spec.terms, mobius_vector(*spec.rho).vector);
        }
        auto pre = build_signal_basis(f, ps, SignalMode::PreSignal);
        ASSERT_EQ(pre.size(), 1u);
        EXPECT_TRUE(pre[0].rho->is_coarsest());
        EXPECT_TRUE(satisfies_constraints(pre[0].terms, constraint_set(ps, SignalMode::PreSignal)));
    }
    auto q4 = build_signal_basis(f, 4, SignalMode::Signal);
    std::vector<std::string> rhos;
    for (const auto& s : q4) {
        rhos.push_back(s.rho->to_string());
    }
    EXPECT_EQ(rhos, (std::vector<std::string>{"ABCD", "AB|CD", "AC|BD", "AD|BC"}));
}

TEST(Basis, NonAdditiveSignalRejected) {
    auto sq = SeedFamily::composed(SeedFamily::renyi_sum(2), ComposeMap::Square);
    EXPECT_THROW(build_signal_basis(sq, 3, SignalMode::Signal), ContractError);
    EXPECT_EQ(build_signal_basis(sq, 3, SignalMode::PreSignal).size(), 1u);
}

TEST(Basis, PreSignalSpanIsOneDimensional) {
    // Exact kernel of the all-proper constraint system.
    for (std::size_t q = 2; q <= 4; q++) {
        auto ps = letter_parties(q);
        auto k = kernel_oracle(ps, proper_constraints(ps));
        EXPECT_EQ(k.size(), 1u) << q;
    }
}

TEST(Basis, SpanCombination) {
    auto f = SeedFamily::renyi_sum(2);
    auto ps = letter_parties(4);
    std::vector<std::pair<Partition, Rational>> w = {{Partition::coarsest(ps), Rational(1, 2)},
                                                     {Partition::parse(ps, "AB|CD"), Rational(-3)}};
    auto spec = span_combination(f, w);
    EXPECT_EQ(spec.provenance, Provenance::SpanCombination);
    EXPECT_TRUE(satisfies_constraints(spec.terms, constraint_set(ps, SignalMode::Signal)));
    auto psi = random_state(4, 2, 3);
    auto basis = build_signal_basis(f, ps, SignalMode::Signal);
    double expect = 0.5 * evaluate(basis[0], psi) - 3 * evaluate(basis[1], psi);
    EXPECT_NEAR(evaluate(spec, psi), expect, 1e-10);
    // A ρ with a singleton block is not a signal direction.
    EXPECT_THROW(span_combination(f, {{Partition::parse(ps, "A|BCD"), Rational(1)}}), DomainError);
}

TEST(Grouped, PreSignalExpansions) {
    EXPECT_EQ(render_pre_signal(2, true), "-S_2(A,B)");
    EXPECT_EQ(render_pre_signal(3, true), "-(S_2(AB,C)+...) +2 S_3(A,B,C)");
    EXPECT_EQ(render_pre_signal(4, true),
              "-(S_2(ABC,D)+...) -(S_2(AB,CD)+...) +2(S_3(AB,C,D)+...) -6 S_4(A,B,C,D)");
    // Raw mode keeps the single-block term.
    EXPECT_EQ(render_pre_signal(3, false), "S_1(ABC) -(S_2(AB,C)+...) +2 S_3(A,B,C)");
}

TEST(Grouped, PairPartitionVector) {
    auto ps = letter_parties(4);
    auto basis = build_signal_basis(multi_family(), ps, SignalMode::Signal);
    ASSERT_EQ(basis[1].rho->to_string(), "AB|CD");
    auto terms = expand_grouped(basis[1], true);
    ASSERT_EQ(terms.size(), 4u);
    EXPECT_EQ(terms[0].descriptor, "S_2(AB,CD)");
    EXPECT_EQ(terms[0].coeff, Rational(1));
    EXPECT_EQ(render_grouped(terms), "S_2(AB,CD) -S_3(A,B,CD) -S_3(AB,C,D) +S_4(A,B,C,D)");
}

TEST(Grouped, CoefficientsMatchMobiusFunction) {
    auto ps = letter_parties(4);
    auto spec = build_signal_basis(SeedFamily::renyi_sum(1), ps, SignalMode::PreSignal)[0];
    auto one = Partition::coarsest(ps);
    for (const auto& t : expand_grouped(spec)) {
        EXPECT_EQ(t.coeff, mobius(t.pi, one)) << t.descriptor;
        EXPECT_EQ(t.descriptor, grouped_descriptor("S", t.pi));
    }
    EXPECT_EQ(expand_grouped(spec).size(), 15u);
}

TEST(QInformation, ClosedFormMatchesPartitionSum) {
    for (std::size_t q = 2; q <= 6; q++) {
        auto ps = letter_parties(q);
        auto spec = build_signal_basis(SeedFamily::renyi_sum(2), ps, SignalMode::PreSignal)[0];
        auto from_partitions = subset_expansion(spec).reduce_pure(SubsetExpansion::Fold::Canonical);
        auto closed = alternating_subset_sum(ps, 2).reduce_pure(SubsetExpansion::Fold::Canonical);
        EXPECT_EQ(from_partitions, closed) << q;
    }
}

TEST(QInformation, PurityReducedForms) {
    auto form = [](std::size_t q, SubsetExpansion::Fold fold) {
        return subset_expansion(q_information(q, 2)).reduce_pure(fold);
    };
    auto q2 = form(2, SubsetExpansion::Fold::Canonical);
    EXPECT_EQ(q2.coefficients().size(), 1u);
    EXPECT_EQ(q2.coefficient(0b1), Rational(-2));

    EXPECT_EQ(form(4, SubsetExpansion::Fold::Display).render(), "(S_AB+...) -2(S_A+...)");
    auto q4 = form(4, SubsetExpansion::Fold::Canonical);
    for (std::uint32_t m : {0b0011u, 0b0101u, 0b1001u}) {
        EXPECT_EQ(q4.coefficient(m), Rational(2));
    }
    for (std::uint32_t m : {0b0001u, 0b0010u, 0b0100u, 0b1000u}) {
        EXPECT_EQ(q4.coefficient(m), Rational(-2));
    }
    EXPECT_EQ(q4.coefficients().size(), 7u);

    // Direct sign count: coefficient (-1)^(6-|A|) on A plus the same on its complement.
    EXPECT_EQ(form(6, SubsetExpansion::Fold::Display).render(), "-(S_ABC+...) +2(S_AB+...) -2(S_A+...)");
}

TEST(QInformation, GhzFourValue) {
    // Every proper subset of GHZ_4 has S = ln 2: -4 + 6 - 4 = -2.
    auto ghz = catalog_state("ghz", 4, 2);
    auto spec = q_information(4, 2);
    EXPECT_NEAR(evaluate(spec, ghz), -2 * kLn2, 1e-9);
    EXPECT_NEAR(spec.subsets->evaluate(ghz), -2 * kLn2, 1e-9);
    EXPECT_NEAR(evaluate(spec, ghz), -1.3862943611198912, 1e-12);
}

TEST(PureStateVanishing, OddQAndPairVectorsVanish) {
    auto f = SeedFamily::renyi_sum(2);
    for (std::size_t q : {3u, 5u}) {
        auto spec = build_signal_basis(f, q, SignalMode::PreSignal)[0];
        for (std::uint64_t s = 0; s < 5; s++) {
            EXPECT_NEAR(evaluate(spec, random_state(q, 2, 100 + s)), 0.0, 1e-9) << q;
        }
    }
    auto basis = build_signal_basis(f, 4, SignalMode::Signal);
    for (std::uint64_t s = 0; s < 5; s++) {
        auto psi = random_state(4, 2, 200 + s);
        for (std::size_t i = 1; i < basis.size(); i++) {
            EXPECT_NEAR(evaluate(basis[i], psi), 0.0, 1e-9) << basis[i].rho->to_string();
        }
        EXPECT_GT(std::abs(evaluate(basis[0], psi)), 1e-3);
        EXPECT_NEAR(evaluate(basis[0], psi), alternating_subset_sum(letter_parties(4), 2).evaluate(psi), 1e-9);
    }
}

TEST(Vanishing, PreSignalOnSeparableEnsembles) {
    for (const auto& f : {SeedFamily::renyi_sum(1), SeedFamily::renyi_sum(2),
                          SeedFamily::composed(SeedFamily::renyi_sum(2), ComposeMap::Square)}) {
        auto ps = letter_parties(3);
        auto spec = build_signal_basis(f, ps, SignalMode::PreSignal)[0];
        std::vector<EnsembleConfig> ensembles;
        for (const auto& kappa : enumerate_partitions(ps)) {
            if (!kappa.is_coarsest()) {
                EnsembleConfig c;
                c.cls = EnsembleConfig::Class::KappaSeparable;
                c.q = 3;
                c.samples = 4;
                c.kappa = kappa;
                ensembles.push_back(c);
            }
        }
        EnsembleConfig cat;
        cat.cls = EnsembleConfig::Class::Catalog;
        cat.q = 3;
        cat.catalog = {"ghz", "w"};
        ensembles.push_back(cat);
        auto report = vanishing_report(spec, ensembles, 7);
        // Odd q: the additive pre-signal vanishes on every pure state, GHZ included.
        if (f.additive()) {
            ASSERT_FALSE(report.classes.back().pass);
            EXPECT_LT(report.classes.back().max_abs, 1e-8);
            report.classes.pop_back();
        }
        EXPECT_TRUE(report.pass()) << f.name();
    }
}

TEST(Vanishing, SignalsOnLayerwiseStates) {
    auto f = SeedFamily::renyi_sum(2);
    auto basis = build_signal_basis(f, 4, SignalMode::Signal);
    EnsembleConfig c;
    c.cls = EnsembleConfig::Class::Layerwise;
    c.q = 4;
    c.samples = 4;
    for (const auto& spec : basis) {
        auto report = vanishing_report(spec, {c}, 3);
        EXPECT_TRUE(report.pass()) << spec.rho->to_string() << " " << report.classes[0].max_abs;
    }
    EnsembleConfig cat;
    cat.cls = EnsembleConfig::Class::Catalog;
    cat.q = 4;
    cat.catalog = {"ghz"};
    auto report = vanishing_report(basis[0], {c, cat}, 3);
    EXPECT_TRUE(report.pass());
    EXPECT_NEAR(report.classes[1].max_abs, 2 * kLn2, 1e-9);
}

TEST(ZeroSumTensor, Validation) {
    EXPECT_THROW(ZeroSumTensor(2, 2, {Rational(1), Rational(0), Rational(0), Rational(0)}), ContractError);
    EXPECT_THROW(ZeroSumTensor(2, 2, {Rational(1)}), DomainError);
    ZeroSumTensor ok(2, 2, {Rational(1), Rational(-1), Rational(-1), Rational(1)});
    EXPECT_EQ(ok.at({1, 1}), Rational(1));
    EXPECT_EQ(ok.unflatten(2), (std::vector<std::size_t>{1, 0}));
    EXPECT_THROW(ZeroSumTensor::outer({{Rational(1), Rational(0)}, {Rational(1), Rational(-1)}}), ContractError);
    auto outer = ZeroSumTensor::outer({{Rational(1), Rational(-1)}, {Rational(2), Rational(-2)}});
    EXPECT_EQ(outer.at({0, 1}), Rational(-2));
}

TEST(MinimalSignal, ZeroTensorGivesZero) {
    auto spec = build_nonsymmetric(2, {identity_permutation(2), {1, 0}}, ZeroSumTensor::zero(3, 2));
    EXPECT_EQ(evaluate_nonsymmetric(spec, random_state(3, 2, 1)), 0.0);
    EXPECT_THROW(build_nonsymmetric(2, {identity_permutation(2)}, ZeroSumTensor::zero(3, 2)), DomainError);
    EXPECT_THROW(build_nonsymmetric(2, {identity_permutation(3), identity_permutation(2)}, ZeroSumTensor::zero(3, 2)),
                 DomainError);
}

TEST(MinimalSignal, ShippedMinimalSignal) {
    auto spec = shipped_minimal_signal_q3();
    auto ghz = catalog_state("ghz", 3, 2);
    EXPECT_NEAR(evaluate_nonsymmetric(spec, ghz), -2.0 / 3.0 * kLn2, 1e-10);
    EXPECT_NEAR(evaluate_nonsymmetric(spec, ghz), -0.46209812037329701, 1e-12);

    EnsembleConfig layer;
    layer.cls = EnsembleConfig::Class::Layerwise;
    layer.q = 3;
    layer.samples = 5;
    EnsembleConfig sep;
    sep.cls = EnsembleConfig::Class::KappaSeparable;
    sep.q = 3;
    sep.samples = 3;
    sep.kappa = Partition::parse(letter_parties(3), "A|BC");
    auto fn = [&](const PureState& psi) { return evaluate_nonsymmetric(spec, psi); };
    auto report = vanishing_report(fn, {layer, sep}, 11);
    EXPECT_TRUE(report.pass()) << report.classes[0].max_abs << " " << report.classes[1].max_abs;
}

TEST(MinimalSignal, TwoCopyMinimalSignalsVanishOnGhz) {
    // At n = 2 every tuple's Z on GHZ_3 depends only on how many parties carry the swap, and
    // the minimal-signal tensor cancels those counts.
    auto sig = minimal_signal({identity_permutation(2), {1, 0}, identity_permutation(2)});
    EXPECT_NEAR(evaluate_nonsymmetric(sig, catalog_state("ghz", 3, 2)), 0.0, 1e-12);
}

TEST(MinimalSignal, MinimalSignalTensorStructure) {
    Permutation c1 = {1, 2, 0};
    auto spec = minimal_signal({identity_permutation(3), c1, identity_permutation(3)});
    // Distinct sigmas in order of first appearance.
    ASSERT_EQ(spec.sigma_list.size(), 2u);
    EXPECT_EQ(spec.tensor.rank(), 3u);
    // (e1-e2) ⊗ (e2-e1) ⊗ (e1-e1) = 0 because the third factor is zero.
    for (const auto& e : spec.tensor.entries()) {
        EXPECT_EQ(e, Rational(0));
    }
}

TEST(Json, SymmetricRoundTrip) {
    auto spec = q_information(4, 2);
    auto back = spec_from_json(spec_to_json(spec));
    EXPECT_EQ(back.terms, spec.terms);
    EXPECT_EQ(back.provenance, Provenance::QInformation);
    EXPECT_EQ(back.family.name(), "renyi:2");

    auto tampered = spec_to_json(build_signal_basis(SeedFamily::renyi_sum(2), 3, SignalMode::PreSignal)[0]);
    tampered["terms"][0]["coeff"] = "5";
    EXPECT_THROW(spec_from_json(tampered), ContractError);
}

TEST(Json, NonSymmetricRoundTrip) {
    auto spec = shipped_minimal_signal_q3();
    auto back = nonsymmetric_from_json(nonsymmetric_to_json(spec));
    EXPECT_EQ(back.n, spec.n);
    EXPECT_EQ(back.sigma_list, spec.sigma_list);
    EXPECT_EQ(back.tensor.entries(), spec.tensor.entries());
}

TEST(Provenance, Names) {
    EXPECT_EQ(to_string(Provenance::MobiusVector), "mobius-vector");
    EXPECT_EQ(to_string(SignalMode::PreSignal), "pre-signal");
}

}  // namespace
}  // namespace gme
