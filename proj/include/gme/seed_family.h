#pragma once

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>

#include <json.hpp>

#include "gme/invariant.h"
#include "gme/partition.h"
#include "gme/state.h"
#include "gme/state_factory.h"

namespace gme {

/// One positive-type permutation tuple per arity, for the logarithmic multi-invariant family.
class TupleTable {
   public:
    TupleTable() = default;
    explicit TupleTable(std::vector<PermutationTuple> tuples);

    void add(PermutationTuple t);
    /// The tuple for arity m. Missing arities fall back to the smallest larger arity restricted
    /// to its first m permutations; DomainError when no larger arity exists either.
    PermutationTuple for_arity(std::size_t m) const;
    const std::map<std::size_t, PermutationTuple>& tuples() const { return tuples_; }

   private:
    std::map<std::size_t, PermutationTuple> tuples_;
};

/// {"tuples":[{"n":2,"sigmas":[[1,2],[2,1]]}, ...]}
nlohmann::json table_to_json(const TupleTable& t);
TupleTable table_from_json(const nlohmann::json& j);
TupleTable read_table_file(const std::string& path);

enum class ComposeMap { Square, Exp };

/// Arity-indexed family of LU invariants f_q. extend(pi, psi) evaluates f_{|pi|} on grp_pi(psi).
class SeedFamily {
   public:
    enum class Kind { RenyiSum, Residual, LogMultiInvariant, Composed, Custom };
    using Evaluator = std::function<double(const PureState&)>;

    /// f_1: Σ_a S^(n)_{A_a}.
    static SeedFamily renyi_sum(unsigned n);
    /// f_2: trace out the designated party (default the last one), canonically purify, and
    /// sum (S_{A A*}/2 - S_A) over the remaining parties with von Neumann entropies. Under
    /// coarse-graining the block containing the designated party is traced out.
    static SeedFamily residual(std::optional<std::string> traced_party = std::nullopt);
    /// f_3 slot: E of the table's tuple for the state's arity.
    static SeedFamily log_multi_invariant(TupleTable table, std::uint64_t max_terms = max_tensor_terms());
    /// g(f) for a base family; never additive.
    static SeedFamily composed(const SeedFamily& base, ComposeMap g);
    static SeedFamily custom(std::string name, Evaluator f, bool additive);

    Kind kind() const { return kind_; }
    bool additive() const { return additive_; }
    /// Rényi order for renyi-sum (and composed over it); 0 otherwise.
    unsigned renyi_order() const { return n_; }
    /// Short identifier, e.g. "renyi:2", "residual", "multi", "square(renyi:2)".
    std::string name() const;
    /// Symbol used in grouped expansions: S, R, G, F.
    std::string symbol() const;
    /// True when f_1 of a single-party pure state is zero for every state.
    bool vanishes_on_one_party() const;
    const SeedFamily* base() const { return base_.get(); }
    std::optional<ComposeMap> compose_map() const { return g_; }
    const TupleTable& table() const { return table_; }
    const std::optional<std::string>& traced_party() const { return traced_; }

    /// f_q(psi) with q = psi.q().
    double value(const PureState& psi) const;
    /// f_pi(psi) = f_{|pi|}(grp_pi psi).
    double extend(const Partition& pi, const PureState& psi) const;

   private:
    SeedFamily() = default;
    double value_tracing(const PureState& psi, std::size_t traced) const;
    double extend_impl(const Partition& pi, const PureState& psi) const;

    Kind kind_ = Kind::RenyiSum;
    bool additive_ = false;
    unsigned n_ = 0;
    std::optional<std::string> traced_;
    TupleTable table_;
    std::uint64_t max_terms_ = kDefaultMaxTensorTerms;
    std::shared_ptr<const SeedFamily> base_;
    std::optional<ComposeMap> g_;
    std::string custom_name_;
    Evaluator custom_;
};

/// Parses "renyi:2", "vn" (renyi:1), "residual", "residual:C", "square(renyi:2)", "exp(renyi:1)".
/// The multi-invariant family needs a table and is built by the caller.
SeedFamily parse_family(std::string_view text);

nlohmann::json family_to_json(const SeedFamily& f);
/// Accepts the kinds produced by family_to_json except custom.
SeedFamily family_from_json(const nlohmann::json& j);

/// Residual information of a mixed state: Σ_a (S_{A_a A_a*}/2 - S_{A_a}) on its canonical purification.
double residual_information(const DensityMatrix& rho);

struct CompatibilityReport {
    std::string family;
    std::string kappa;
    std::string pi;
    std::size_t samples = 0;
    double max_deviation = 0;
    bool compatible(double tolerance = 1e-9) const { return max_deviation < tolerance; }
};

/// Samples kappa-separable states from the template and compares f_pi with f_{pi ∧ kappa}.
CompatibilityReport compatibility_check(const SeedFamily& family, const SeparabilityTemplate& tmpl,
                                        const Partition& pi, std::size_t samples, std::uint64_t seed);

}  // namespace gme
