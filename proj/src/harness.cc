#include "gme/harness.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <future>
#include <map>
#include <set>
#include <sstream>

#include "gme/ensemble.h"
#include "gme/errors.h"
#include "gme/kernel_oracle.h"
#include "gme/partition_vector.h"
#include "gme/seed_family.h"
#include "gme/signal.h"
#include "gme/state_factory.h"

namespace gme {

CheckRecord check_below(std::string name, double value, double tolerance) {
    return {std::move(name), value, tolerance, Compare::Below, value < tolerance};
}

CheckRecord check_above(std::string name, double value, double threshold) {
    return {std::move(name), value, threshold, Compare::Above, value > threshold};
}

CheckRecord check_exact(std::string name, std::size_t mismatches) {
    return {std::move(name), static_cast<double>(mismatches), 0.0, Compare::Exact, mismatches == 0};
}

bool SuiteResult::pass() const {
    return !error && std::all_of(checks.begin(), checks.end(), [](const CheckRecord& c) { return c.pass; });
}

bool Report::pass() const {
    return std::all_of(suites.begin(), suites.end(), [](const SuiteResult& s) { return s.pass(); });
}

namespace {

std::string compare_name(Compare c) {
    switch (c) {
        case Compare::Below:
            return "below";
        case Compare::Above:
            return "above";
        case Compare::Exact:
            return "exact";
    }
    return "";
}

nlohmann::json checks_json(const std::vector<CheckRecord>& checks) {
    auto arr = nlohmann::json::array();
    for (const auto& c : checks) {
        arr.push_back({{"name", c.name},
                       {"value", c.value},
                       {"tolerance", c.tolerance},
                       {"compare", compare_name(c.compare)},
                       {"pass", c.pass}});
    }
    return arr;
}

nlohmann::json suite_json(const SuiteResult& s) {
    nlohmann::json j = {{"name", s.name}, {"pass", s.pass()}, {"checks", checks_json(s.checks)}};
    if (s.error) {
        j["error"] = *s.error;
    }
    return j;
}

// ---------------------------------------------------------------------------------------
// Shared helpers.

std::uint64_t mix_seed(std::uint64_t seed, const std::string& name) {
    // FNV-1a over the name, folded into the seed.
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char ch : name) {
        h = (h ^ ch) * 1099511628211ull;
    }
    return seed * 0x9E3779B97F4A7C15ull ^ h;
}

std::vector<std::size_t> uniform_dims(std::size_t q, std::size_t d) { return std::vector<std::size_t>(q, d); }

PureState random_separable(const Partition& kappa, std::size_t d, CounterRng& rng) {
    return make_separable({kappa, uniform_dims(kappa.q(), d), {}}, rng);
}

/// Layers of type (1, q-1) with independently chosen isolated parties.
PureState random_layered(std::size_t q, std::size_t layers, std::size_t d, CounterRng& rng) {
    auto ps = letter_parties(q, kHardMaxParties);
    std::vector<LayerSpec> specs;
    for (std::size_t l = 0; l < layers; l++) {
        specs.push_back({singleton_cut(ps, rng.below(q)), uniform_dims(q, d)});
    }
    return random_layerwise(specs, rng);
}

std::vector<Partition> proper_partitions(const PartySetRef& ps) {
    std::vector<Partition> out;
    for (auto& p : enumerate_partitions(ps, kHardMaxParties)) {
        if (!p.is_coarsest()) {
            out.push_back(std::move(p));
        }
    }
    return out;
}

PureState rotate_locally(const PureState& psi, CounterRng& rng) {
    std::vector<Eigen::MatrixXcd> us;
    for (std::size_t a = 0; a < psi.q(); a++) {
        us.push_back(random_unitary(psi.dim(a), rng));
    }
    return apply_local_unitaries(psi, us);
}

PureState with_reference_party(const PureState& psi, const std::string& label, std::size_t d) {
    Eigen::VectorXcd ref = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(d));
    ref(0) = 1;
    return tensor_product(psi, PureState({{label, d}}, ref));
}

std::size_t bounded(std::size_t q_max, std::size_t cap) { return std::min(q_max, cap); }

/// n = 2 multi-entropy tuples for arities 2..4: 2^(m-1) copies labelled by bit strings, the
/// first party acts trivially and party k flips bit k-1.
TupleTable multi_entropy_table() {
    TupleTable t;
    for (std::size_t m = 2; m <= 4; m++) {
        std::size_t copies = std::size_t{1} << (m - 1);
        std::vector<Permutation> sigmas{identity_permutation(copies)};
        for (std::size_t k = 0; k + 1 < m; k++) {
            Permutation p(copies);
            for (std::size_t x = 0; x < copies; x++) {
                p[x] = x ^ (std::size_t{1} << k);
            }
            sigmas.push_back(p);
        }
        t.add(PermutationTuple(copies, sigmas));
    }
    return t;
}

/// The three-copy tuple (id, (1 2 3), (1 3 2)), positive on the states used here.
PermutationTuple triangle_tuple() { return PermutationTuple::from_one_based({{1, 2, 3}, {2, 3, 1}, {3, 1, 2}}); }

/// Tr rho_A^3 as a tuple.
PermutationTuple renyi_tuple_q3() { return PermutationTuple::from_one_based({{2, 3, 1}, {1, 2, 3}, {1, 2, 3}}); }

// ---------------------------------------------------------------------------------------
// partition-lattice suites.

std::vector<CheckRecord> suite_lattice_axioms(const VerifyOptions& o, CounterRng&) {
    std::vector<CheckRecord> out;
    for (std::size_t q = 1; q <= bounded(o.q_max, 5); q++) {
        PartitionLattice lat(letter_parties(q));
        const auto& el = lat.elements();
        std::size_t comm = 0, absorb = 0, glb = 0, lub = 0, assoc = 0;
        for (const auto& a : el) {
            for (const auto& b : el) {
                auto m = meet(a, b), j = join(a, b);
                comm += !(m == meet(b, a)) + !(j == join(b, a));
                absorb += !(meet(a, join(a, b)) == a) + !(join(a, meet(a, b)) == a);
                bool m_ok = leq(m, a) && leq(m, b);
                bool j_ok = leq(a, j) && leq(b, j);
                for (const auto& c : el) {
                    if (leq(c, a) && leq(c, b) && !leq(c, m)) {
                        m_ok = false;
                    }
                    if (leq(a, c) && leq(b, c) && !leq(j, c)) {
                        j_ok = false;
                    }
                }
                glb += !m_ok;
                lub += !j_ok;
            }
        }
        // Triples are cubic in B_q; q = 5 samples a fixed stride instead of all 140k.
        std::size_t stride = q <= 4 ? 1 : 7;
        for (std::size_t i = 0; i < el.size(); i++) {
            for (std::size_t k = 0; k < el.size(); k++) {
                for (std::size_t l = (i + k) % stride; l < el.size(); l += stride) {
                    const auto &a = el[i], &b = el[k], &c = el[l];
                    assoc += !(meet(meet(a, b), c) == meet(a, meet(b, c)));
                    assoc += !(join(join(a, b), c) == join(a, join(b, c)));
                }
            }
        }
        auto tag = "q=" + std::to_string(q) + " ";
        out.push_back(check_exact(tag + "commutativity", comm));
        out.push_back(check_exact(tag + "associativity", assoc));
        out.push_back(check_exact(tag + "absorption", absorb));
        out.push_back(check_exact(tag + "meet is greatest lower bound", glb));
        out.push_back(check_exact(tag + "join is least upper bound", lub));
    }
    return out;
}

std::vector<CheckRecord> suite_canonical_form(const VerifyOptions& o, CounterRng&) {
    std::vector<CheckRecord> out;
    for (std::size_t q = 1; q <= bounded(o.q_max, 6); q++) {
        auto ps = letter_parties(q);
        auto all = enumerate_partitions(ps);
        std::set<std::uint64_t> keys;
        std::size_t bad = 0;
        for (const auto& p : all) {
            keys.insert(p.key());
            // Reverse the block order and the letters inside each block before reparsing.
            std::vector<std::string> blocks;
            for (auto b : p.blocks()) {
                std::string s;
                for (std::size_t a = q; a-- > 0;) {
                    if (b >> a & 1) {
                        s += ps->labels()[a];
                    }
                }
                blocks.push_back(s);
            }
            std::string scrambled;
            for (std::size_t i = blocks.size(); i-- > 0;) {
                scrambled += blocks[i] + (i ? "|" : "");
            }
            bad += !(Partition::parse(ps, p.to_string()) == p) + !(Partition::parse(ps, scrambled) == p);
        }
        auto tag = "q=" + std::to_string(q) + " ";
        out.push_back(check_exact(tag + "parse round-trip", bad));
        out.push_back(check_exact(tag + "no duplicates", all.size() - keys.size()));
        out.push_back(check_exact(tag + "count equals Bell number",
                                  all.size() == bell_number(q) ? 0 : 1));
    }
    return out;
}

std::vector<CheckRecord> suite_mobius_relation(const VerifyOptions& o, CounterRng&) {
    std::vector<CheckRecord> out;
    for (std::size_t q = 1; q <= bounded(o.q_max, 5); q++) {
        PartitionLattice lat(letter_parties(q));
        std::size_t n = lat.size(), bad = 0;
        std::vector<std::int64_t> mu(n * n, 0);
        for (std::size_t k = 0; k < n; k++) {
            for (std::size_t p = 0; p < n; p++) {
                if (lat.leq(k, p)) {
                    mu[k * n + p] = mobius(lat.at(k), lat.at(p));
                }
            }
        }
        for (std::size_t k = 0; k < n; k++) {
            for (std::size_t p = 0; p < n; p++) {
                if (!lat.leq(k, p)) {
                    continue;
                }
                std::int64_t sum = 0;
                for (std::size_t t = 0; t < n; t++) {
                    if (lat.leq(k, t) && lat.leq(t, p)) {
                        sum += mu[k * n + t];
                    }
                }
                bad += sum != (k == p ? 1 : 0);
            }
        }
        out.push_back(check_exact("q=" + std::to_string(q) + " defining relation", bad));
    }
    return out;
}

std::vector<CheckRecord> suite_mobius_inversion(const VerifyOptions& o, CounterRng& rng) {
    std::vector<CheckRecord> out;
    for (std::size_t q = 1; q <= bounded(o.q_max, 5); q++) {
        PartitionLattice lat(letter_parties(q));
        std::size_t n = lat.size(), bad = 0;
        for (int trial = 0; trial < 3; trial++) {
            std::vector<std::int64_t> g(n);
            for (auto& x : g) {
                x = static_cast<std::int64_t>(rng.below(201)) - 100;
            }
            // Down-variant: f(pi) = Σ_{k<=pi} μ(k,pi) g(k), then Σ_{k<=pi} f(k) = g(pi).
            std::vector<std::int64_t> f(n, 0);
            for (std::size_t p = 0; p < n; p++) {
                for (std::size_t k = 0; k < n; k++) {
                    if (lat.leq(k, p)) {
                        f[p] += mobius(lat.at(k), lat.at(p)) * g[k];
                    }
                }
            }
            for (std::size_t p = 0; p < n; p++) {
                std::int64_t back = 0;
                for (std::size_t k = 0; k < n; k++) {
                    if (lat.leq(k, p)) {
                        back += f[k];
                    }
                }
                bad += back != g[p];
            }
            // Up-variant: f(pi) = Σ_{k>=pi} μ(pi,k) g(k), then Σ_{k>=pi} f(k) = g(pi).
            std::fill(f.begin(), f.end(), 0);
            for (std::size_t p = 0; p < n; p++) {
                for (std::size_t k = 0; k < n; k++) {
                    if (lat.leq(p, k)) {
                        f[p] += mobius(lat.at(p), lat.at(k)) * g[k];
                    }
                }
            }
            for (std::size_t p = 0; p < n; p++) {
                std::int64_t back = 0;
                for (std::size_t k = 0; k < n; k++) {
                    if (lat.leq(p, k)) {
                        back += f[k];
                    }
                }
                bad += back != g[p];
            }
        }
        out.push_back(check_exact("q=" + std::to_string(q) + " inversion round-trip", bad));
    }
    return out;
}

std::vector<CheckRecord> suite_downset_closure(const VerifyOptions& o, CounterRng& rng) {
    std::vector<CheckRecord> out;
    for (std::size_t q = 2; q <= bounded(o.q_max, 5); q++) {
        auto ps = letter_parties(q);
        auto all = enumerate_partitions(ps);
        std::size_t contains = 0, idem = 0, mono = 0;
        for (int trial = 0; trial < 30; trial++) {
            std::vector<Partition> k;
            std::size_t count = 1 + rng.below(3);
            for (std::size_t i = 0; i < count; i++) {
                k.push_back(all[rng.below(all.size())]);
            }
            auto d = downset(k);
            std::set<std::uint64_t> dkeys;
            for (const auto& p : d) {
                dkeys.insert(p.key());
            }
            for (const auto& p : k) {
                contains += !dkeys.count(p.key());
            }
            idem += !(downset(d) == d);
            auto bigger = k;
            bigger.push_back(all[rng.below(all.size())]);
            std::set<std::uint64_t> bkeys;
            for (const auto& p : downset(bigger)) {
                bkeys.insert(p.key());
            }
            mono += !std::includes(bkeys.begin(), bkeys.end(), dkeys.begin(), dkeys.end());
        }
        auto tag = "q=" + std::to_string(q) + " ";
        out.push_back(check_exact(tag + "contains generators", contains));
        out.push_back(check_exact(tag + "idempotent", idem));
        out.push_back(check_exact(tag + "monotone", mono));
    }
    return out;
}

// ---------------------------------------------------------------------------------------
// lattice-algebra suites.

std::vector<CheckRecord> suite_mobius_vector_algebra(const VerifyOptions& o, CounterRng&) {
    std::vector<CheckRecord> out;
    for (std::size_t q = 1; q <= bounded(o.q_max, 5); q++) {
        auto ps = letter_parties(q);
        PartitionLattice lat(ps);
        std::vector<PartitionVector> ms;
        std::size_t diag = 0;
        for (const auto& rho : lat.elements()) {
            auto m = mobius_vector(rho);
            diag += m.vector.coefficient(rho) != Rational(1);
            for (const auto& [pi, c] : m.vector.terms()) {
                diag += !leq(pi, rho);
            }
            ms.push_back(m.vector);
        }
        auto tag = "q=" + std::to_string(q) + " ";
        out.push_back(check_exact(tag + "unit diagonal, support below rho", diag));
        out.push_back(check_exact(tag + "rank equals Bell number", rank(to_rows(lat, ms), lat.size()) == lat.size() ? 0 : 1));
        if (q <= bounded(o.q_max, 4)) {
            std::size_t sel = 0;
            for (const auto& rho : lat.elements()) {
                auto m = mobius_vector(rho).vector;
                for (const auto& kappa : lat.elements()) {
                    auto got = meet_extend(m, kappa);
                    sel += leq(rho, kappa) ? !(got == m) : !got.is_zero();
                }
            }
            out.push_back(check_exact(tag + "selection identity", sel));
        }
    }
    return out;
}

std::vector<Partition> maximal_elements(const std::vector<Partition>& d) {
    std::vector<Partition> out;
    for (const auto& a : d) {
        bool maximal = std::none_of(d.begin(), d.end(), [&](const Partition& b) { return !(a == b) && leq(a, b); });
        if (maximal) {
            out.push_back(a);
        }
    }
    return out;
}

std::vector<PartitionVector> vectors_of(const std::vector<MobiusVector>& ms) {
    std::vector<PartitionVector> out;
    for (const auto& m : ms) {
        out.push_back(m.vector);
    }
    return out;
}

struct KernelSweep {
    std::size_t cases = 0;
    std::size_t span_mismatch = 0;
    std::size_t stability_mismatch = 0;
};

KernelSweep kernel_sweep_all(std::size_t q) {
    auto ps = letter_parties(q);
    PartitionLattice lat(ps);
    KernelSweep s;
    for (const auto& d : enumerate_downsets(lat)) {
        auto gens = maximal_elements(d);
        auto solved = vectors_of(solve_meet_vanishing(ps, gens));
        s.cases++;
        s.span_mismatch += !same_span(lat, solved, kernel_oracle(ps, gens));
        s.stability_mismatch += !same_span(lat, solved, vectors_of(solve_meet_vanishing(ps, d)));
    }
    return s;
}

KernelSweep kernel_sweep_random(std::size_t q, std::size_t samples, CounterRng& rng) {
    auto ps = letter_parties(q);
    PartitionLattice lat(ps);
    KernelSweep s;
    for (std::size_t i = 0; i < samples; i++) {
        std::vector<Partition> gens;
        std::size_t count = 1 + rng.below(4);
        for (std::size_t g = 0; g < count; g++) {
            gens.push_back(lat.at(rng.below(lat.size())));
        }
        auto solved = vectors_of(solve_meet_vanishing(ps, gens));
        s.cases++;
        s.span_mismatch += !same_span(lat, solved, kernel_oracle(ps, gens));
        s.stability_mismatch += !same_span(lat, solved, vectors_of(solve_meet_vanishing(ps, downset(gens))));
    }
    return s;
}

std::vector<CheckRecord> suite_kernel_oracle(const VerifyOptions& o, CounterRng& rng) {
    std::vector<CheckRecord> out;
    for (std::size_t q = 1; q <= bounded(o.q_max, 4); q++) {
        auto s = kernel_sweep_all(q);
        auto tag = "q=" + std::to_string(q) + " all " + std::to_string(s.cases) + " downsets ";
        out.push_back(check_exact(tag + "span equals oracle kernel", s.span_mismatch));
        out.push_back(check_exact(tag + "downset stability", s.stability_mismatch));
    }
    if (o.q_max >= 5) {
        auto s = kernel_sweep_random(5, 50, rng);
        out.push_back(check_exact("q=5 50 random downsets span equals oracle kernel", s.span_mismatch));
        out.push_back(check_exact("q=5 50 random downsets downset stability", s.stability_mismatch));
    }
    return out;
}

// ---------------------------------------------------------------------------------------
// state-engine suites.

std::vector<CheckRecord> suite_state_normalization(const VerifyOptions& o, CounterRng& rng) {
    double worst = 0;
    for (std::size_t q = 2; q <= bounded(o.q_max, 5); q++) {
        auto ps = letter_parties(q);
        for (int trial = 0; trial < 5; trial++) {
            auto a = random_state(uniform_parties(q, 2), rng);
            auto b = random_state(uniform_parties(q, 2), rng);
            worst = std::max(worst, std::abs(tensor_product(a, b, ProductMode::Layer).norm() - 1));
            worst = std::max(worst, std::abs(embed(a, 3).norm() - 1));
            for (const auto& pi : enumerate_partitions(ps)) {
                worst = std::max(worst, std::abs(coarse_grain(a, pi).norm() - 1));
            }
        }
    }
    auto small = random_state(uniform_parties(2, 2), rng);
    PureState other({{"X", 3}}, random_state(1, 3, rng.next_u64()).amplitudes());
    worst = std::max(worst, std::abs(tensor_product(small, other).norm() - 1));
    return {check_below("norm drift after tensor_product, coarse_grain, embed", worst, 1e-12)};
}

std::vector<CheckRecord> suite_coarse_grain_functoriality(const VerifyOptions& o, CounterRng& rng) {
    std::size_t bad = 0, pairs = 0;
    for (std::size_t q = 2; q <= bounded(o.q_max, 4); q++) {
        auto ps = letter_parties(q);
        auto psi = random_state(uniform_parties(q, 2), rng);
        auto all = enumerate_partitions(ps);
        for (const auto& kappa : all) {
            auto step = coarse_grain(psi, kappa);
            for (const auto& pi : all) {
                if (!leq(kappa, pi)) {
                    continue;
                }
                pairs++;
                // Block j of kappa is party j of the coarse-grained state.
                std::vector<std::uint32_t> induced;
                std::vector<std::size_t> order;
                for (auto pb : pi.blocks()) {
                    std::uint32_t mask = 0;
                    for (std::size_t j = 0; j < kappa.num_blocks(); j++) {
                        if ((kappa.blocks()[j] & pb) == kappa.blocks()[j]) {
                            mask |= std::uint32_t{1} << j;
                            for (std::size_t a = 0; a < q; a++) {
                                if (kappa.blocks()[j] >> a & 1) {
                                    order.push_back(a);
                                }
                            }
                        }
                    }
                    induced.push_back(mask);
                }
                auto twice = coarse_grain(step, Partition::from_blocks(step.party_set(), induced));
                auto direct = coarse_grain(psi, pi);
                // Equal up to the order of original parties inside each block.
                bad += twice.amplitudes() != permute_parties(psi, order).amplitudes();
                bad += twice.dims() != direct.dims();
            }
        }
    }
    return {check_exact("grouping twice equals grouping once over " + std::to_string(pairs) + " pairs", bad)};
}

std::vector<CheckRecord> suite_schmidt_duality(const VerifyOptions& o, CounterRng& rng) {
    double worst = 0;
    for (std::size_t q = 2; q <= bounded(o.q_max, 5); q++) {
        std::uint32_t full = (std::uint32_t{1} << q) - 1;
        for (int trial = 0; trial < 3; trial++) {
            auto psi = random_state(uniform_parties(q, 2), rng);
            for (std::uint32_t s = 1; s < full; s++) {
                auto a = subset_spectrum(psi, s), b = subset_spectrum(psi, full & ~s);
                std::sort(a.rbegin(), a.rend());
                std::sort(b.rbegin(), b.rend());
                std::size_t n = std::max(a.size(), b.size());
                a.resize(n, 0.0);
                b.resize(n, 0.0);
                for (std::size_t i = 0; i < n; i++) {
                    worst = std::max(worst, std::abs(a[i] - b[i]));
                }
            }
        }
    }
    return {check_below("spectrum of S vs complement", worst, 1e-9)};
}

std::vector<CheckRecord> suite_kraus_probability(const VerifyOptions&, CounterRng& rng) {
    auto total = [](const std::vector<KrausOutcome>& outs) {
        double p = 0;
        for (const auto& o : outs) {
            p += o.probability;
        }
        return p;
    };
    double worst = 0;
    Eigen::Matrix4cd e1 = Eigen::Matrix4cd::Zero(), e2 = Eigen::Matrix4cd::Zero();
    e1(0, 0) = e1(3, 3) = 1;
    e2(1, 1) = e2(2, 2) = 1;
    worst = std::max(worst, std::abs(total(apply_kraus(catalog_state("appendixA-psi", 3, 4),
                                                       {{{"B"}, e1}, {{"B"}, e2}})) - 1));
    Eigen::Matrix2cd p0 = Eigen::Matrix2cd::Zero(), p1 = Eigen::Matrix2cd::Zero();
    p0(0, 0) = 1;
    p1(1, 1) = 1;
    for (const auto& name : {"product", "ghz", "w"}) {
        for (std::size_t q : {3u, 4u}) {
            worst = std::max(worst, std::abs(total(apply_kraus(catalog_state(name, q, 2), {{{"A"}, p0}, {{"A"}, p1}})) - 1));
        }
    }
    // Two-outcome instrument K1 = diag(c), K2 = U diag(s) with c^2 + s^2 = 1.
    for (int trial = 0; trial < 5; trial++) {
        auto psi = random_state(uniform_parties(3, 2), rng);
        double t0 = rng.uniform() * M_PI / 2, t1 = rng.uniform() * M_PI / 2;
        Eigen::MatrixXcd k1 = Eigen::MatrixXcd::Zero(2, 2), s = Eigen::MatrixXcd::Zero(2, 2);
        k1(0, 0) = std::cos(t0);
        k1(1, 1) = std::cos(t1);
        s(0, 0) = std::sin(t0);
        s(1, 1) = std::sin(t1);
        Eigen::MatrixXcd k2 = random_unitary(2, rng) * s;
        worst = std::max(worst, std::abs(total(apply_kraus(psi, {{{"B"}, k1}, {{"B"}, k2}})) - 1));
    }
    return {check_below("outcome probabilities sum to one", worst, 1e-9)};
}

std::vector<CheckRecord> suite_purification_roundtrip(const VerifyOptions& o, CounterRng& rng) {
    double worst = 0;
    for (std::size_t q = 2; q <= bounded(o.q_max, 4); q++) {
        std::uint32_t full = (std::uint32_t{1} << q) - 1;
        auto psi = random_state(uniform_parties(q, 2), rng);
        for (std::uint32_t s = 1; s < full; s++) {
            if (std::popcount(s) > 2) {
                continue;
            }
            auto rho = reduced_density(psi, s);
            auto purified = canonical_purification(rho);
            // Unstarred parties sit at even positions.
            std::uint32_t unstarred = 0;
            for (std::size_t a = 0; a < rho.parties().size(); a++) {
                unstarred |= std::uint32_t{1} << (2 * a);
            }
            auto back = reduced_density(purified, unstarred);
            worst = std::max(worst, (back.matrix() - rho.matrix()).norm());
        }
    }
    return {check_below("partial trace over starred parties (Frobenius)", worst, 1e-9)};
}

// ---------------------------------------------------------------------------------------
// invariant-engine suites.

std::vector<CheckRecord> suite_lu_invariance(const VerifyOptions& o, CounterRng& rng) {
    TupleTable table(std::vector<PermutationTuple>{triangle_tuple()});
    std::vector<SeedFamily> families = {SeedFamily::renyi_sum(1), SeedFamily::renyi_sum(2), SeedFamily::residual(),
                                        SeedFamily::composed(SeedFamily::renyi_sum(2), ComposeMap::Square),
                                        SeedFamily::log_multi_invariant(table)};
    double worst_entropy = 0, worst_family = 0, worst_z = 0, worst_signal = 0;
    for (std::size_t q = 2; q <= bounded(o.q_max, 4); q++) {
        std::uint32_t full = (std::uint32_t{1} << q) - 1;
        auto pre = build_signal_basis(SeedFamily::renyi_sum(2), q, SignalMode::PreSignal)[0];
        for (int trial = 0; trial < 3; trial++) {
            auto psi = random_state(uniform_parties(q, 2), rng);
            auto rot = rotate_locally(psi, rng);
            for (std::uint32_t s = 1; s < full; s++) {
                for (unsigned n : {1u, 2u, 3u}) {
                    worst_entropy = std::max(worst_entropy, std::abs(renyi_entropy(psi, s, n) - renyi_entropy(rot, s, n)));
                }
            }
            for (const auto& f : families) {
                if (f.kind() == SeedFamily::Kind::LogMultiInvariant && q != 3) {
                    continue;
                }
                worst_family = std::max(worst_family, std::abs(f.value(psi) - f.value(rot)));
            }
            std::vector<Permutation> sigmas;
            for (std::size_t a = 0; a < q; a++) {
                sigmas.push_back(random_permutation(3, rng));
            }
            PermutationTuple t(3, sigmas);
            worst_z = std::max(worst_z, std::abs(multi_invariant_Z(t, psi) - multi_invariant_Z(t, rot)));
            worst_signal = std::max(worst_signal, std::abs(evaluate(pre, psi) - evaluate(pre, rot)));
        }
    }
    return {check_below("Renyi subset entropies n=1,2,3", worst_entropy, 1e-9),
            check_below("seed families f_1, f_2, (f_1)^2, E", worst_family, 1e-9),
            check_below("multi-invariant Z", worst_z, 1e-9), check_below("pre-signal value", worst_signal, 1e-9)};
}

std::vector<CheckRecord> suite_layer_additivity(const VerifyOptions& o, CounterRng& rng) {
    double worst_f = 0, worst_e = 0;
    for (std::size_t q = 2; q <= bounded(o.q_max, 4); q++) {
        for (int trial = 0; trial < 3; trial++) {
            auto a = random_state(uniform_parties(q, 2), rng);
            auto b = random_state(uniform_parties(q, 2), rng);
            auto ab = tensor_product(a, b, ProductMode::Layer);
            for (unsigned n : {1u, 2u, 3u}) {
                auto f = SeedFamily::renyi_sum(n);
                worst_f = std::max(worst_f, std::abs(f.value(ab) - f.value(a) - f.value(b)));
            }
            if (q == 3) {
                for (const auto& t : {triangle_tuple(), renyi_tuple_q3()}) {
                    worst_e = std::max(worst_e, std::abs(log_multi_invariant_E(t, ab) - log_multi_invariant_E(t, a) -
                                                         log_multi_invariant_E(t, b)));
                }
            }
        }
    }
    return {check_below("f_1 (n=1,2,3) additive over layers", worst_f, 1e-9),
            check_below("E additive over layers (q=3)", worst_e, 1e-9)};
}

std::vector<CheckRecord> suite_z_bound(const VerifyOptions& o, CounterRng& rng) {
    double worst = 0;
    for (int draw = 0; draw < 100; draw++) {
        std::size_t q = 1 + rng.below(bounded(o.q_max, 3));
        std::size_t n = 1 + rng.below(3);
        auto psi = random_state(uniform_parties(q, 2), rng);
        std::vector<Permutation> sigmas;
        for (std::size_t a = 0; a < q; a++) {
            sigmas.push_back(random_permutation(n, rng));
        }
        worst = std::max(worst, std::abs(multi_invariant_Z(PermutationTuple(n, sigmas), psi)));
    }
    return {check_below("max |Z| over 100 draws", worst, 1 + 1e-9)};
}

std::vector<CheckRecord> suite_z_relabeling(const VerifyOptions& o, CounterRng& rng) {
    double worst = 0, worst_norm = 0;
    for (int draw = 0; draw < 100; draw++) {
        std::size_t q = 1 + rng.below(bounded(o.q_max, 3));
        std::size_t n = 1 + rng.below(3);
        auto psi = random_state(uniform_parties(q, 2), rng);
        std::vector<Permutation> sigmas;
        for (std::size_t a = 0; a < q; a++) {
            sigmas.push_back(random_permutation(n, rng));
        }
        PermutationTuple t(n, sigmas);
        auto z = multi_invariant_Z(t, psi);
        auto g = random_permutation(n, rng), h = random_permutation(n, rng);
        worst = std::max(worst, std::abs(z - multi_invariant_Z(relabel_tuple(t, g, h), psi)));
        auto normalized = relabel_tuple(t, identity_permutation(n), inverse(sigmas[0]));
        worst_norm = std::max(worst_norm, std::abs(z - multi_invariant_Z(normalized, psi)));
    }
    return {check_below("Z under 100 random (g, h)", worst, 1e-10),
            check_below("Z with first entry normalized to identity", worst_norm, 1e-10)};
}

std::vector<CheckRecord> suite_factorized_degeneracy(const VerifyOptions& o, CounterRng& rng) {
    double worst = 0;
    for (std::size_t q = 2; q <= bounded(o.q_max, 3); q++) {
        auto ps = letter_parties(q);
        auto kappa = singleton_cut(ps, 0);
        for (int trial = 0; trial < 3; trial++) {
            auto psi = random_separable(kappa, 2, rng);
            for (std::size_t n : {2u, 3u}) {
                std::vector<Permutation> rest;
                for (std::size_t a = 1; a < q; a++) {
                    rest.push_back(random_permutation(n, rng));
                }
                std::optional<double> ref;
                for (const auto& s1 : all_permutations(n)) {
                    std::vector<Permutation> sigmas{s1};
                    sigmas.insert(sigmas.end(), rest.begin(), rest.end());
                    double e = log_multi_invariant_E(PermutationTuple(n, sigmas), psi);
                    if (!ref) {
                        ref = e;
                    }
                    worst = std::max(worst, std::abs(e - *ref));
                }
            }
        }
    }
    return {check_below("E independent of the factorized party's permutation", worst, 1e-9)};
}

std::vector<CheckRecord> suite_restriction_consistency(const VerifyOptions&, CounterRng& rng) {
    TupleTable table(std::vector<PermutationTuple>{PermutationTuple::from_one_based({{1, 2}, {2, 1}, {2, 1}, {1, 2}})});
    std::vector<SeedFamily> families = {SeedFamily::renyi_sum(1), SeedFamily::renyi_sum(2),
                                        SeedFamily::composed(SeedFamily::renyi_sum(2), ComposeMap::Square),
                                        SeedFamily::residual("C"), SeedFamily::log_multi_invariant(table)};
    double worst = 0;
    for (int trial = 0; trial < 5; trial++) {
        auto psi = random_state(uniform_parties(3, 2), rng);
        for (std::size_t d : {2u, 3u}) {
            auto big = with_reference_party(psi, "D", d);
            for (const auto& f : families) {
                worst = std::max(worst, std::abs(f.value(big) - f.value(psi)));
            }
        }
    }
    return {check_below("adjoining a reference party", worst, 1e-10)};
}

std::vector<CheckRecord> suite_compatibility(const VerifyOptions& o, CounterRng& rng) {
    std::vector<CheckRecord> out;
    std::vector<SeedFamily> families = {SeedFamily::renyi_sum(1), SeedFamily::renyi_sum(2), SeedFamily::renyi_sum(3),
                                        SeedFamily::composed(SeedFamily::renyi_sum(2), ComposeMap::Square),
                                        SeedFamily::composed(SeedFamily::renyi_sum(1), ComposeMap::Exp)};
    for (const auto& f : families) {
        double worst = 0;
        for (std::size_t q = 2; q <= bounded(o.q_max, 4); q++) {
            auto ps = letter_parties(q);
            for (const auto& kappa : enumerate_partitions(ps)) {
                for (const auto& pi : enumerate_partitions(ps)) {
                    auto r = compatibility_check(f, {kappa, uniform_dims(q, 2), {}}, pi, 2, rng.next_u64());
                    worst = std::max(worst, r.max_deviation);
                }
            }
        }
        out.push_back(check_below(f.name() + " compatible", worst, 1e-9));
    }
    auto broken = SeedFamily::custom(
        "weighted",
        [](const PureState& psi) {
            double total = 0;
            for (std::size_t a = 0; a < psi.q(); a++) {
                total += static_cast<double>(a + 1) * renyi_entropy(psi, std::uint32_t{1} << a, 2);
            }
            return total;
        },
        false);
    auto ps = letter_parties(3);
    auto r = compatibility_check(broken, {Partition::parse(ps, "A|BC"), {2, 2, 2}, {}}, Partition::parse(ps, "AB|C"),
                                 3, rng.next_u64());
    out.push_back(check_above("position-weighted family detected as incompatible", r.max_deviation, 1e-2));
    return out;
}

// ---------------------------------------------------------------------------------------
// signal-builder suites.

std::vector<CheckRecord> suite_basis_constraints(const VerifyOptions& o, CounterRng&) {
    std::size_t bad = 0, specs = 0;
    for (std::size_t q = 2; q <= bounded(o.q_max, 6); q++) {
        auto ps = letter_parties(q);
        for (auto mode : {SignalMode::Signal, SignalMode::PreSignal}) {
            auto cons = constraint_set(ps, mode);
            for (const auto& spec : build_signal_basis(SeedFamily::renyi_sum(2), ps, mode)) {
                specs++;
                bad += !satisfies_constraints(spec.terms, cons);
            }
        }
    }
    std::vector<CheckRecord> out = {
        check_exact("meet with every constraint vanishes (" + std::to_string(specs) + " specs)", bad)};
    std::size_t dim_bad = 0;
    for (std::size_t q = 2; q <= bounded(o.q_max, 4); q++) {
        auto ps = letter_parties(q);
        dim_bad += kernel_oracle(ps, proper_constraints(ps)).size() != 1;
    }
    out.push_back(check_exact("pre-signal constraint kernel is one-dimensional", dim_bad));
    return out;
}

std::vector<CheckRecord> suite_presignal_vanishing(const VerifyOptions& o, CounterRng& rng) {
    std::vector<CheckRecord> out;
    std::vector<SeedFamily> families = {SeedFamily::renyi_sum(1), SeedFamily::renyi_sum(2),
                                        SeedFamily::composed(SeedFamily::renyi_sum(2), ComposeMap::Square)};
    for (const auto& f : families) {
        double worst = 0;
        for (std::size_t q = 2; q <= bounded(o.q_max, 4); q++) {
            auto ps = letter_parties(q);
            auto spec = build_signal_basis(f, ps, SignalMode::PreSignal)[0];
            for (const auto& kappa : proper_partitions(ps)) {
                for (int s = 0; s < 20; s++) {
                    worst = std::max(worst, std::abs(evaluate(spec, random_separable(kappa, 2, rng))));
                }
            }
        }
        out.push_back(check_below("M_1[" + f.name() + "] on kappa-separable states", worst, 1e-8));
    }
    // Residual information only vanishes when the traced remainder factorizes, i.e. for every
    // kappa except the cut isolating the traced party.
    double worst = 0;
    for (std::size_t q = 3; q <= bounded(o.q_max, 4); q++) {
        auto ps = letter_parties(q);
        auto spec = build_signal_basis(SeedFamily::residual(), ps, SignalMode::PreSignal)[0];
        auto excluded = singleton_cut(ps, q - 1);
        for (const auto& kappa : proper_partitions(ps)) {
            if (kappa == excluded) {
                continue;
            }
            for (int s = 0; s < 20; s++) {
                worst = std::max(worst, std::abs(evaluate(spec, random_separable(kappa, 2, rng))));
            }
        }
    }
    out.push_back(check_below("M_1[residual] where the traced remainder factorizes", worst, 1e-8));
    return out;
}

std::vector<CheckRecord> suite_signal_vanishing(const VerifyOptions& o, CounterRng& rng) {
    std::vector<CheckRecord> out;
    for (unsigned n : {1u, 2u, 3u}) {
        double worst = 0;
        for (std::size_t q = 2; q <= bounded(o.q_max, 4); q++) {
            auto basis = build_signal_basis(SeedFamily::renyi_sum(n), q, SignalMode::Signal);
            for (int s = 0; s < 20; s++) {
                auto psi = random_layered(q, 2 + s % 2, 2, rng);
                for (const auto& spec : basis) {
                    worst = std::max(worst, std::abs(evaluate(spec, psi)));
                }
            }
        }
        out.push_back(check_below("signal basis of renyi:" + std::to_string(n) + " on layerwise states", worst, 1e-8));
    }
    return out;
}

std::vector<CheckRecord> suite_signal_layer_additivity(const VerifyOptions& o, CounterRng& rng) {
    double worst = 0;
    for (std::size_t q = 2; q <= bounded(o.q_max, 4); q++) {
        auto basis = build_signal_basis(SeedFamily::renyi_sum(2), q, SignalMode::Signal);
        for (int trial = 0; trial < 3; trial++) {
            auto a = random_state(uniform_parties(q, 2), rng);
            auto b = random_state(uniform_parties(q, 2), rng);
            auto ab = tensor_product(a, b, ProductMode::Layer);
            for (const auto& spec : basis) {
                worst = std::max(worst, std::abs(evaluate(spec, ab) - evaluate(spec, a) - evaluate(spec, b)));
            }
        }
    }
    return {check_below("signal value additive over layers", worst, 1e-8)};
}

std::vector<CheckRecord> suite_pure_state_vanishing(const VerifyOptions&, CounterRng& rng) {
    auto f = SeedFamily::renyi_sum(2);
    double pairs = 0;
    auto basis = build_signal_basis(f, 4, SignalMode::Signal);
    for (int s = 0; s < 20; s++) {
        auto psi = random_state(uniform_parties(4, 2), rng);
        for (const auto& spec : basis) {
            if (!spec.rho->is_coarsest()) {
                pairs = std::max(pairs, std::abs(evaluate(spec, psi)));
            }
        }
    }
    std::vector<CheckRecord> out = {check_below("q=4 M_rho for rho in N minus 1 on pure states", pairs, 1e-9)};
    for (std::size_t q : {3u, 5u}) {
        auto spec = build_signal_basis(f, q, SignalMode::PreSignal)[0];
        double worst = 0;
        for (int s = 0; s < 20; s++) {
            worst = std::max(worst, std::abs(evaluate(spec, random_state(uniform_parties(q, 2), rng))));
        }
        out.push_back(check_below("q=" + std::to_string(q) + " M_1 on pure states", worst, 1e-9));
    }
    return out;
}

std::vector<CheckRecord> suite_q_information(const VerifyOptions&, CounterRng& rng) {
    std::vector<CheckRecord> out;
    for (std::size_t q : {4u, 6u}) {
        auto spec = q_information(q, 2);
        double worst = 0;
        for (int s = 0; s < 10; s++) {
            auto psi = random_state(uniform_parties(q, 2), rng);
            worst = std::max(worst, std::abs(spec.subsets->evaluate(psi) - evaluate(spec, psi)));
        }
        out.push_back(check_below("q=" + std::to_string(q) + " alternating sum equals M_1[f_1]", worst, 1e-9));
    }
    return out;
}

std::vector<CheckRecord> suite_minimal_signal_degeneracy(const VerifyOptions&, CounterRng& rng) {
    double worst = 0;
    auto ps = letter_parties(3);
    std::vector<NonSymmetricSignalSpec> specs = {shipped_minimal_signal_q3()};
    for (int i = 0; i < 3; i++) {
        specs.push_back(minimal_signal({random_permutation(3, rng), random_permutation(3, rng), random_permutation(3, rng)}));
    }
    for (std::size_t a = 0; a < 3; a++) {
        auto kappa = singleton_cut(ps, a);
        for (int s = 0; s < 3; s++) {
            auto psi = random_separable(kappa, 2, rng);
            for (const auto& spec : specs) {
                worst = std::max(worst, std::abs(evaluate_nonsymmetric(spec, psi)));
            }
        }
    }
    return {check_below("minimal signals with one factorized party", worst, 1e-8)};
}

std::vector<CheckRecord> suite_minimal_signal_vanishing(const VerifyOptions&, CounterRng& rng) {
    auto spec = shipped_minimal_signal_q3();
    double worst = 0;
    for (int s = 0; s < 20; s++) {
        worst = std::max(worst, std::abs(evaluate_nonsymmetric(spec, random_layered(3, 2, 2, rng))));
    }
    return {check_below("shipped minimal signal on layerwise states", worst, 1e-8)};
}

using SuiteFn = std::function<std::vector<CheckRecord>(const VerifyOptions&, CounterRng&)>;

struct SuiteEntry {
    SuiteInfo info;
    SuiteFn run;
};

const std::vector<SuiteEntry>& registry() {
    static const std::vector<SuiteEntry> entries = [] {
        std::vector<SuiteEntry> e = {
            {{"lattice-axioms", "partition-lattice", "meet/join axioms and bounds"}, suite_lattice_axioms},
            {{"lattice-canonical-form", "partition-lattice", "canonical parse and duplicate-free enumeration"},
             suite_canonical_form},
            {{"mobius-relation", "partition-lattice", "Möbius defining relation"}, suite_mobius_relation},
            {{"mobius-inversion", "partition-lattice", "Möbius inversion round-trip"}, suite_mobius_inversion},
            {{"downset-closure", "partition-lattice", "downset monotone, idempotent, extensive"}, suite_downset_closure},
            {{"mobius-vector-algebra", "lattice-algebra", "unitriangularity and selection identity"},
             suite_mobius_vector_algebra},
            {{"kernel-oracle", "lattice-algebra", "oracle equivalence and downset stability"}, suite_kernel_oracle},
            {{"state-normalization", "state-engine", "norm preserved by products, grouping, embedding"},
             suite_state_normalization},
            {{"coarse-grain-functoriality", "state-engine", "grouping composes"}, suite_coarse_grain_functoriality},
            {{"schmidt-duality", "state-engine", "complementary spectra agree"}, suite_schmidt_duality},
            {{"kraus-probability", "state-engine", "Kraus outcome probabilities sum to one"}, suite_kraus_probability},
            {{"purification-roundtrip", "state-engine", "purification traces back to the input"},
             suite_purification_roundtrip},
            {{"lu-invariance", "invariant-engine", "local unitary invariance"}, suite_lu_invariance},
            {{"layer-additivity", "invariant-engine", "f_1 and E additive over layers"}, suite_layer_additivity},
            {{"z-bound", "invariant-engine", "|Z| <= 1"}, suite_z_bound},
            {{"z-relabeling", "invariant-engine", "Z invariant under relabeling"}, suite_z_relabeling},
            {{"factorized-degeneracy", "invariant-engine", "E ignores a factorized party's permutation"},
             suite_factorized_degeneracy},
            {{"restriction-consistency", "invariant-engine", "reference parties contribute nothing"},
             suite_restriction_consistency},
            {{"compatibility", "invariant-engine", "compatible families and a broken counterexample"},
             suite_compatibility},
            {{"basis-constraints", "signal-builder", "basis satisfies its constraint system"}, suite_basis_constraints},
            {{"presignal-vanishing", "signal-builder", "pre-signals vanish on separable states"},
             suite_presignal_vanishing},
            {{"signal-vanishing", "signal-builder", "signals vanish on layerwise states"}, suite_signal_vanishing},
            {{"signal-layer-additivity", "signal-builder", "signal values additive over layers"},
             suite_signal_layer_additivity},
            {{"pure-state-vanishing", "signal-builder", "pair vectors and odd-q pre-signals vanish on pure states"},
             suite_pure_state_vanishing},
            {{"q-information", "signal-builder", "alternating subset sum equals M_1[f_1]"}, suite_q_information},
            {{"minimal-signal-degeneracy", "signal-builder", "non-symmetric signals vanish with a factorized party"},
             suite_minimal_signal_degeneracy},
            {{"minimal-signal-vanishing", "signal-builder", "non-symmetric signals vanish on layerwise states"},
             suite_minimal_signal_vanishing},
        };
        std::sort(e.begin(), e.end(), [](const SuiteEntry& a, const SuiteEntry& b) { return a.info.name < b.info.name; });
        return e;
    }();
    return entries;
}

SuiteResult run_suite(const SuiteEntry& entry, const VerifyOptions& options) {
    SuiteResult r{entry.info.name, {}, std::nullopt};
    CounterRng rng(mix_seed(options.seed, entry.info.name));
    try {
        r.checks = entry.run(options, rng);
    } catch (const std::exception& e) {
        r.error = e.what();
    }
    return r;
}

double seconds_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

// ---------------------------------------------------------------------------------------
// Scenarios.

std::uint64_t default_seed(const std::string& id) { return mix_seed(20260101, id) % 1000000; }

std::vector<CheckRecord> scenario_appendix_a(std::uint64_t) {
    std::vector<CheckRecord> out;
    // E_1 = |00><00| + |11><11|, E_2 = |01><01| + |10><10| on B = B_1 B_2 (B_2 fastest).
    Eigen::Matrix4cd e1 = Eigen::Matrix4cd::Zero(), e2 = Eigen::Matrix4cd::Zero();
    e1(0, 0) = e1(3, 3) = 1;
    e2(1, 1) = e2(2, 2) = 1;
    Eigen::Matrix4cd sum = e1.adjoint() * e1 + e2.adjoint() * e2;
    std::size_t mismatches = 0;
    for (int i = 0; i < 4; i++) {
        for (int j = 0; j < 4; j++) {
            mismatches += sum(i, j) != std::complex<double>(i == j ? 1.0 : 0.0, 0.0);
        }
    }
    out.push_back(check_exact("E1^dag E1 + E2^dag E2 = identity", mismatches));

    auto psi = catalog_state("appendixA-psi", 3, 4);
    Eigen::VectorXcd bell = Eigen::VectorXcd::Zero(4), zero = Eigen::VectorXcd::Zero(2);
    bell(0) = bell(3) = 1 / std::sqrt(2.0);
    zero(0) = 1;
    auto layer1 = tensor_product(PureState({{"A", 2}, {"B", 2}}, bell), PureState({{"C", 2}}, zero));
    auto layer2 = tensor_product(PureState({{"A", 2}}, zero), PureState({{"B", 2}, {"C", 2}}, bell));
    auto layers = tensor_product(layer1, layer2, ProductMode::Layer);
    out.push_back(check_below("input equals Bell_AB|0>_C layered with |0>_A Bell_BC", amplitude_distance(psi, layers), 1e-12));
    auto signal = shipped_minimal_signal_q3();
    out.push_back(check_below("input signal value", std::abs(evaluate_nonsymmetric(signal, psi)), 1e-8));

    auto outcomes = apply_kraus(psi, {{{"B"}, e1}, {{"B"}, e2}});
    const char* expected[] = {"appendixA-psi1", "appendixA-psi2"};
    // Keep only the occupied local indices, in the order that maps both outcomes onto GHZ_3.
    const std::vector<std::vector<std::size_t>> relabel[] = {{{0, 2}, {0, 3}, {0, 1}}, {{0, 2}, {1, 2}, {1, 0}}};
    for (std::size_t k = 0; k < 2; k++) {
        auto tag = "outcome " + std::to_string(k + 1) + " ";
        out.push_back(check_below(tag + "|p - 1/2|", std::abs(outcomes.at(k).probability - 0.5), 1e-9));
        if (!outcomes[k].state) {
            out.push_back(check_above(tag + "state present", 0, 0.5));
            continue;
        }
        const auto& st = *outcomes[k].state;
        out.push_back(check_below(tag + "matches the stated post-measurement state",
                                  amplitude_distance(st, catalog_state(expected[k], 3, 4)), 1e-12));
        out.push_back(check_above(tag + "|signal value|", std::abs(evaluate_nonsymmetric(signal, st)), 0.1));
        out.push_back(check_below(tag + "equals GHZ_3 after relabeling",
                                  amplitude_distance(restrict_local_support(st, relabel[k]), catalog_state("ghz", 3, 2)),
                                  1e-12));
    }
    return out;
}

std::vector<CheckRecord> scenario_odd_q(std::size_t q, std::size_t samples, std::uint64_t seed) {
    CounterRng rng(seed);
    std::vector<CheckRecord> out;
    for (unsigned n : {1u, 2u, 3u}) {
        auto spec = build_signal_basis(SeedFamily::renyi_sum(n), q, SignalMode::PreSignal)[0];
        double worst = 0;
        for (std::size_t s = 0; s < samples; s++) {
            worst = std::max(worst, std::abs(evaluate(spec, random_state(uniform_parties(q, 2), rng))));
        }
        out.push_back(check_below("q=" + std::to_string(q) + " max |M_1[renyi:" + std::to_string(n) + "]|", worst, 1e-8));
    }
    return out;
}

std::vector<CheckRecord> scenario_gm_basis(std::uint64_t seed) {
    std::vector<CheckRecord> out;
    auto ps = letter_parties(4);
    auto family = SeedFamily::log_multi_invariant(multi_entropy_table());
    auto basis = build_signal_basis(family, ps, SignalMode::Signal);
    std::vector<std::string> rhos;
    for (const auto& s : basis) {
        rhos.push_back(s.rho->to_string());
    }
    out.push_back(check_exact("basis is M_AB|CD, M_AC|BD, M_AD|BC, M_1",
                              rhos == std::vector<std::string>{"ABCD", "AB|CD", "AC|BD", "AD|BC"} ? 0 : 1));
    auto cons = constraint_set(ps, SignalMode::Signal);
    std::size_t bad = 0;
    std::vector<PartitionVector> vs;
    for (const auto& s : basis) {
        bad += !satisfies_constraints(s.terms, cons);
        vs.push_back(s.terms);
    }
    out.push_back(check_exact("every member satisfies the singleton-cut constraints", bad));
    PartitionLattice lat(ps);
    out.push_back(check_exact("span equals the exact constraint kernel",
                              same_span(lat, vs, kernel_oracle(ps, cons)) ? 0 : 1));

    auto m1 = expand_grouped(basis[0], true);
    out.push_back(check_exact("M_1 expansion matches the printed form",
                              render_grouped(m1) ==
                                      "-(S_2(ABC,D)+...) -(S_2(AB,CD)+...) +2(S_3(AB,C,D)+...) -6 S_4(A,B,C,D)"
                                  ? 0
                                  : 1));
    // The printed M_AB|CD omits the S_2(AB,CD) term that the Möbius formula puts there.
    auto pair = render_grouped(expand_grouped(basis[1], true));
    out.push_back(check_exact("M_AB|CD expansion matches the printed form",
                              pair == "-S_3(A,B,CD) -S_3(AB,C,D) +S_4(A,B,C,D)" ? 0 : 1));

    // Numerically the printed combination is not a signal: with f_1 it equals -2 S_AB, which
    // is nonzero on A|BCD-separable states.
    CounterRng rng(seed);
    auto f1 = SeedFamily::renyi_sum(2);
    auto printed = PartitionVector::parse(ps, "-1*A|B|CD - 1*AB|C|D + 1*A|B|C|D");
    SymmetricSignalSpec printed_spec{f1, printed, Provenance::Custom, std::nullopt, {}, std::nullopt};
    SymmetricSignalSpec ours = basis[1];
    ours.family = f1;
    double printed_max = 0, ours_max = 0;
    for (int s = 0; s < 10; s++) {
        auto psi = random_separable(Partition::parse(ps, "A|BCD"), 2, rng);
        printed_max = std::max(printed_max, std::abs(evaluate(printed_spec, psi)));
        ours_max = std::max(ours_max, std::abs(evaluate(ours, psi)));
    }
    out.push_back(check_below("M_AB|CD[f_1] on A|BCD-separable states", ours_max, 1e-8));
    out.push_back(check_above("printed M_AB|CD[f_1] on A|BCD-separable states", printed_max, 1e-2));

    double layered = 0;
    for (int s = 0; s < 10; s++) {
        auto psi = random_layered(4, 2, 2, rng);
        for (auto spec : basis) {
            spec.family = f1;
            layered = std::max(layered, std::abs(evaluate(spec, psi)));
        }
    }
    out.push_back(check_below("basis with f_1 on layerwise states", layered, 1e-8));
    return out;
}

std::vector<CheckRecord> scenario_compatibility(std::size_t q, std::size_t samples, std::uint64_t seed) {
    CounterRng rng(seed);
    std::vector<CheckRecord> out;
    auto ps = letter_parties(q);
    auto parts = enumerate_partitions(ps);
    for (const auto& f : {SeedFamily::renyi_sum(1), SeedFamily::renyi_sum(2),
                          SeedFamily::composed(SeedFamily::renyi_sum(2), ComposeMap::Square),
                          SeedFamily::composed(SeedFamily::renyi_sum(1), ComposeMap::Exp)}) {
        double worst = 0;
        for (const auto& kappa : parts) {
            for (const auto& pi : parts) {
                worst = std::max(worst,
                                 compatibility_check(f, {kappa, uniform_dims(q, 2), {}}, pi, samples, rng.next_u64())
                                     .max_deviation);
            }
        }
        out.push_back(check_below(f.name() + " max deviation over all (kappa, pi)", worst, 1e-9));
    }
    auto broken = SeedFamily::custom(
        "weighted",
        [](const PureState& psi) {
            double total = 0;
            for (std::size_t a = 0; a < psi.q(); a++) {
                total += static_cast<double>(a + 1) * renyi_entropy(psi, std::uint32_t{1} << a, 2);
            }
            return total;
        },
        false);
    double worst = 0;
    for (const auto& kappa : parts) {
        for (const auto& pi : parts) {
            worst = std::max(worst, compatibility_check(broken, {kappa, uniform_dims(q, 2), {}}, pi, samples,
                                                        rng.next_u64())
                                        .max_deviation);
        }
    }
    out.push_back(check_above("position-weighted family max deviation", worst, 1e-2));
    return out;
}

std::vector<CheckRecord> scenario_theorem4(std::size_t samples, std::uint64_t seed) {
    CounterRng rng(seed);
    std::vector<CheckRecord> out;
    auto spec = shipped_minimal_signal_q3();
    auto ps = letter_parties(3);
    double worst = 0;
    for (std::size_t s = 0; s < samples; s++) {
        worst = std::max(worst, std::abs(evaluate_nonsymmetric(spec, random_layered(3, 2, 2, rng))));
    }
    out.push_back(check_below("shipped signal on layerwise states", worst, 1e-8));
    worst = 0;
    for (const auto& kappa : proper_partitions(ps)) {
        for (int s = 0; s < 3; s++) {
            worst = std::max(worst, std::abs(evaluate_nonsymmetric(spec, random_separable(kappa, 2, rng))));
        }
    }
    out.push_back(check_below("shipped signal on kappa-separable states", worst, 1e-8));
    out.push_back(check_above("|shipped signal on GHZ_3|",
                              std::abs(evaluate_nonsymmetric(spec, catalog_state("ghz", 3, 2))), 1e-3));
    out.push_back(check_below("shipped signal on GHZ_3 vs -(2/3) ln 2",
                              std::abs(evaluate_nonsymmetric(spec, catalog_state("ghz", 3, 2)) + 2.0 / 3.0 * std::log(2.0)),
                              1e-10));
    worst = 0;
    for (std::size_t i = 0; i < 5; i++) {
        auto random_spec =
            minimal_signal({random_permutation(3, rng), random_permutation(3, rng), random_permutation(3, rng)});
        for (std::size_t a = 0; a < 3; a++) {
            worst = std::max(worst, std::abs(evaluate_nonsymmetric(random_spec,
                                                                   random_separable(singleton_cut(ps, a), 2, rng))));
        }
    }
    out.push_back(check_below("random minimal signals with a factorized party", worst, 1e-8));
    return out;
}

std::vector<CheckRecord> scenario_kernel(std::size_t q, std::size_t samples, std::uint64_t seed) {
    CounterRng rng(seed);
    auto s = q <= 4 ? kernel_sweep_all(q) : kernel_sweep_random(q, samples, rng);
    auto tag = "q=" + std::to_string(q) + " " + std::to_string(s.cases) + (q <= 4 ? " downsets (all) " : " random downsets ");
    return {check_exact(tag + "span equals oracle kernel", s.span_mismatch),
            check_exact(tag + "downset stability", s.stability_mismatch)};
}

}  // namespace

nlohmann::json report_to_json(const Report& report, bool include_wall_time) {
    nlohmann::json j = {{"schema", kReportSchema}, {"kind", report.kind},   {"id", report.id},
                        {"seed", report.seed},     {"version", kToolVersion}, {"params", report.params},
                        {"pass", report.pass()}};
    if (report.kind == "scenario" && report.suites.size() == 1) {
        j["checks"] = checks_json(report.suites[0].checks);
        if (report.suites[0].error) {
            j["error"] = *report.suites[0].error;
        }
    } else {
        auto suites = nlohmann::json::array();
        for (const auto& s : report.suites) {
            suites.push_back(suite_json(s));
        }
        j["suites"] = suites;
    }
    if (include_wall_time) {
        j["wall_time"] = report.wall_time;
    }
    return j;
}

std::string report_to_text(const Report& report) {
    std::ostringstream os;
    os.precision(6);
    for (const auto& s : report.suites) {
        if (report.kind != "scenario") {
            os << (s.pass() ? "PASS " : "FAIL ") << s.name << "\n";
        }
        std::string indent = report.kind == "scenario" ? "" : "  ";
        for (const auto& c : s.checks) {
            const char* op = c.compare == Compare::Below ? " < " : c.compare == Compare::Above ? " > " : " == ";
            os << indent << (c.pass ? "PASS " : "FAIL ") << c.name << ": " << c.value << op << c.tolerance << "\n";
        }
        if (s.error) {
            os << indent << "ERROR " << *s.error << "\n";
        }
    }
    os << (report.pass() ? "PASS" : "FAIL") << " " << report.kind << " " << report.id << " (seed " << report.seed
       << ", " << report.wall_time << " s)\n";
    return os.str();
}

const std::vector<std::string>& scenario_ids() {
    static const std::vector<std::string> ids = {"appendix-a-locc",      "odd-q-vanishing", "gm-basis-q4",
                                                 "compatibility-sweep", "theorem4-sweep",  "kernel-oracle-sweep"};
    return ids;
}

Report run_scenario(const std::string& id, const ScenarioOptions& options) {
    if (std::find(scenario_ids().begin(), scenario_ids().end(), id) == scenario_ids().end()) {
        throw DomainError("unknown scenario '" + id + "'");
    }
    auto start = std::chrono::steady_clock::now();
    Report r;
    r.kind = "scenario";
    r.id = id;
    r.seed = options.seed.value_or(default_seed(id));
    auto reject = [&](const std::string& what) { throw DomainError("scenario " + id + ": " + what); };
    auto no_q = [&] {
        if (options.q) {
            reject("takes no party count");
        }
    };
    auto no_samples = [&] {
        if (options.samples) {
            reject("takes no sample count");
        }
    };
    SuiteResult suite{id, {}, std::nullopt};
    if (id == "appendix-a-locc") {
        no_q();
        no_samples();
        suite.checks = scenario_appendix_a(r.seed);
    } else if (id == "odd-q-vanishing") {
        std::size_t q = options.q.value_or(5), samples = options.samples.value_or(10);
        if (q < 3 || q > 7 || q % 2 == 0) {
            reject("q must be odd and in 3..7");
        }
        if (samples == 0) {
            reject("samples must be positive");
        }
        r.params = {{"q", q}, {"samples", samples}};
        suite.checks = scenario_odd_q(q, samples, r.seed);
    } else if (id == "gm-basis-q4") {
        no_q();
        no_samples();
        suite.checks = scenario_gm_basis(r.seed);
    } else if (id == "compatibility-sweep") {
        std::size_t q = options.q.value_or(4), samples = options.samples.value_or(2);
        if (q < 2 || q > 5 || samples == 0) {
            reject("q must be in 2..5 and samples positive");
        }
        r.params = {{"q", q}, {"samples", samples}};
        suite.checks = scenario_compatibility(q, samples, r.seed);
    } else if (id == "theorem4-sweep") {
        if (options.q && *options.q != 3) {
            reject("the shipped minimal signal is three-partite");
        }
        std::size_t samples = options.samples.value_or(20);
        if (samples == 0) {
            reject("samples must be positive");
        }
        r.params = {{"q", 3}, {"samples", samples}};
        suite.checks = scenario_theorem4(samples, r.seed);
    } else {
        std::size_t q = options.q.value_or(4), samples = options.samples.value_or(50);
        if (q < 1 || q > kKernelOracleMaxParties || samples == 0) {
            reject("q must be in 1.." + std::to_string(kKernelOracleMaxParties) + " and samples positive");
        }
        r.params = {{"q", q}};
        if (q > 4) {
            r.params["samples"] = samples;
        }
        suite.checks = scenario_kernel(q, samples, r.seed);
    }
    r.suites.push_back(std::move(suite));
    r.wall_time = seconds_since(start);
    return r;
}

const std::vector<SuiteInfo>& verify_suites() {
    static const std::vector<SuiteInfo> infos = [] {
        std::vector<SuiteInfo> v;
        for (const auto& e : registry()) {
            v.push_back(e.info);
        }
        return v;
    }();
    return infos;
}

Report run_verify(const std::vector<std::string>& names, const VerifyOptions& options) {
    if (options.q_max < 2 || options.q_max > 6) {
        throw DomainError("--q-max must be in 2..6");
    }
    std::vector<const SuiteEntry*> selected;
    bool all = names.empty() || (names.size() == 1 && names[0] == "all");
    for (const auto& e : registry()) {
        if (all || std::find(names.begin(), names.end(), e.info.name) != names.end()) {
            selected.push_back(&e);
        }
    }
    if (!all) {
        for (const auto& n : names) {
            if (std::none_of(selected.begin(), selected.end(), [&](const SuiteEntry* e) { return e->info.name == n; })) {
                throw DomainError("unknown verify suite '" + n + "'");
            }
        }
    }
    auto start = std::chrono::steady_clock::now();
    Report r;
    r.kind = "verify";
    r.id = all ? "all" : names.size() == 1 ? names[0] : "selection";
    r.seed = options.seed;
    r.params = {{"q_max", options.q_max}};
    if (options.parallel) {
        std::vector<std::future<SuiteResult>> futures;
        for (const auto* e : selected) {
            futures.push_back(std::async(std::launch::async, [e, &options] { return run_suite(*e, options); }));
        }
        for (auto& f : futures) {
            r.suites.push_back(f.get());
        }
    } else {
        for (const auto* e : selected) {
            r.suites.push_back(run_suite(*e, options));
        }
    }
    r.wall_time = seconds_since(start);
    return r;
}

}  // namespace gme
