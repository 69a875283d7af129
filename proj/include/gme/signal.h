#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "gme/ensemble.h"
#include "gme/invariant.h"
#include "gme/partition_vector.h"
#include "gme/seed_family.h"

namespace gme {

enum class SignalMode { Signal, PreSignal };
enum class Provenance { MobiusVector, SpanCombination, QInformation, Custom };

std::string to_string(Provenance p);
std::string to_string(SignalMode m);

/// Linear combination of subset entropies Σ c_A S^(n)_A.
class SubsetExpansion {
   public:
    SubsetExpansion(PartySetRef parties, unsigned n);

    const PartySetRef& parties() const { return parties_; }
    unsigned renyi_order() const { return n_; }
    const std::map<std::uint32_t, Rational>& coefficients() const { return coeffs_; }
    Rational coefficient(std::uint32_t mask) const;
    void add(std::uint32_t mask, const Rational& c);

    enum class Fold {
        /// Drop S_X; replace S_A by S_{A^c} when |A| > q/2. Half-size subsets stay as they are.
        Display,
        /// As Display, and half-size subsets are folded onto the one containing the first party.
        Canonical,
    };
    /// Rewrites using S_X = 0 and S_A = S_{A^c}, valid on pure states.
    SubsetExpansion reduce_pure(Fold fold) const;

    /// "(S_AB+...) -2(S_A+...)": larger subsets first, full uniform orbits collapsed.
    std::string render() const;

    double evaluate(const PureState& psi) const;

    friend bool operator==(const SubsetExpansion& a, const SubsetExpansion& b) {
        return a.n_ == b.n_ && a.coeffs_ == b.coeffs_;
    }

   private:
    PartySetRef parties_;
    unsigned n_;
    std::map<std::uint32_t, Rational> coeffs_;
};

struct SymmetricSignalSpec {
    SeedFamily family;
    PartitionVector terms;
    Provenance provenance = Provenance::Custom;
    /// Set for Provenance::MobiusVector.
    std::optional<Partition> rho;
    /// a_rho weights for Provenance::SpanCombination.
    std::vector<std::pair<Partition, Rational>> weights;
    /// Closed-form subset sum for Provenance::QInformation.
    std::optional<SubsetExpansion> subsets;
};

/// Type-(1, q-1) cuts for Signal, every pi != 1 for PreSignal.
std::vector<Partition> constraint_set(const PartySetRef& parties, SignalMode mode);

/// Signal: one spec per singleton-free rho (requires an additive family, ContractError otherwise).
/// PreSignal: the single spec M_1.
std::vector<SymmetricSignalSpec> build_signal_basis(const SeedFamily& family, const PartySetRef& parties,
                                                    SignalMode mode);
std::vector<SymmetricSignalSpec> build_signal_basis(const SeedFamily& family, std::size_t q, SignalMode mode);

/// Σ a_rho M_rho.
SymmetricSignalSpec span_combination(const SeedFamily& family, const std::vector<std::pair<Partition, Rational>>& weights);

/// True when terms ∧ kappa is the zero vector for every kappa in constraints.
bool satisfies_constraints(const PartitionVector& terms, const std::vector<Partition>& constraints);

struct GroupedTerm {
    Rational coeff;
    Partition pi;
    /// e.g. "S_3(A,B,CD)"; blocks sorted by label.
    std::string descriptor;
};

/// c_pi f_pi rewritten as block-grouped invariants, ordered by number of blocks, then type, then
/// descriptor. With reduce_pure, single-block terms are dropped when the family vanishes on one party.
std::vector<GroupedTerm> expand_grouped(const SymmetricSignalSpec& spec, bool reduce_pure = false);
/// "-(S_2(AB,C)+...) +2 S_3(A,B,C)": full type orbits with one coefficient collapse to "rep+...".
std::string render_grouped(const std::vector<GroupedTerm>& terms);
std::string grouped_descriptor(const std::string& symbol, const Partition& pi);

/// Expands a Rényi-sum spec into subset entropies (each block of each pi contributes c_pi S_B).
SubsetExpansion subset_expansion(const SymmetricSignalSpec& spec);

/// Σ_{A proper, nonempty} (-1)^{q-|A|} S^(n)_A.
SubsetExpansion alternating_subset_sum(const PartySetRef& parties, unsigned n);

/// M_1 over the Rényi sum with the closed-form subset sum attached.
SymmetricSignalSpec q_information(std::size_t q, unsigned n);
SymmetricSignalSpec q_information(const PartySetRef& parties, unsigned n);

/// Σ c_pi f_pi(psi).
double evaluate(const SymmetricSignalSpec& spec, const PureState& psi);

nlohmann::json spec_to_json(const SymmetricSignalSpec& spec);
/// Party labels come from "parties" when present, otherwise from the partitions (single letters).
SymmetricSignalSpec spec_from_json(const nlohmann::json& j, const std::optional<TupleTable>& table = std::nullopt);

/// Real rational tensor of rank q and side s whose every axis slice sums to zero.
class ZeroSumTensor {
   public:
    ZeroSumTensor(std::size_t rank, std::size_t side, std::vector<Rational> entries);
    static ZeroSumTensor zero(std::size_t rank, std::size_t side);
    /// v_1 ⊗ ... ⊗ v_q; each factor must sum to zero.
    static ZeroSumTensor outer(const std::vector<std::vector<Rational>>& factors);

    std::size_t rank() const { return rank_; }
    std::size_t side() const { return side_; }
    const std::vector<Rational>& entries() const { return entries_; }
    const Rational& at(const std::vector<std::size_t>& index) const;
    std::vector<std::size_t> unflatten(std::size_t flat) const;

   private:
    std::size_t rank_;
    std::size_t side_;
    std::vector<Rational> entries_;
};

struct NonSymmetricSignalSpec {
    std::size_t n;
    std::vector<Permutation> sigma_list;
    ZeroSumTensor tensor;
};

/// Validates sizes; the tensor already enforces the slice condition.
NonSymmetricSignalSpec build_nonsymmetric(std::size_t n, std::vector<Permutation> sigma_list, ZeroSumTensor tensor);

/// E(σ_1 - σ_2, σ_2 - σ_1, σ_3 - σ_1, ..., σ_q - σ_1) expanded multilinearly.
NonSymmetricSignalSpec minimal_signal(const std::vector<Permutation>& sigmas);

/// Σ T_{i_1..i_q} E(σ_{i_1}, ..., σ_{i_q}; psi).
double evaluate_nonsymmetric(const NonSymmetricSignalSpec& spec, const PureState& psi,
                             std::uint64_t max_terms = max_tensor_terms());

nlohmann::json nonsymmetric_to_json(const NonSymmetricSignalSpec& spec);
NonSymmetricSignalSpec nonsymmetric_from_json(const nlohmann::json& j);

/// Minimal signal shipped for three parties: n = 3, σ = (id, (1 2 3), (1 3 2)).
NonSymmetricSignalSpec shipped_minimal_signal_q3();

enum class Expectation { Vanish, Nonzero };

struct VanishingClass {
    std::string name;
    std::size_t samples = 0;
    double max_abs = 0;
    double threshold = 0;
    Expectation expect = Expectation::Vanish;
    bool pass = false;
    /// Label of the sample attaining max_abs.
    std::string worst;
};

struct VanishingReport {
    std::vector<VanishingClass> classes;
    bool pass() const;
};

/// Evaluates over each ensemble. Catalog ensembles expect max |value| > nonzero_threshold,
/// the others expect max |value| < tolerance.
VanishingReport vanishing_report(const std::function<double(const PureState&)>& value,
                                 const std::vector<EnsembleConfig>& ensembles, std::uint64_t seed,
                                 double tolerance = 1e-8, double nonzero_threshold = 0.1);
VanishingReport vanishing_report(const SymmetricSignalSpec& spec, const std::vector<EnsembleConfig>& ensembles,
                                 std::uint64_t seed, double tolerance = 1e-8, double nonzero_threshold = 0.1);

}  // namespace gme
