#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "gme/partition.h"

namespace gme {

using Complex = std::complex<double>;

/// Amplitude-norm tolerance applied when a state is constructed.
constexpr double kNormTolerance = 1e-10;
/// Hermiticity and unit-trace tolerance for density matrices.
constexpr double kDensityTolerance = 1e-10;
/// Eigenvalues above -kEigenFloor are clamped to zero; anything lower is an error.
constexpr double kEigenFloor = 1e-9;
/// Practical ceiling on the total Hilbert-space dimension of a dense state.
constexpr std::size_t kMaxTotalDim = std::size_t{1} << 20;
/// Ceiling on local dimensions of input states. Coarse-grained parties may exceed it.
constexpr std::size_t kMaxPartyDim = 64;

struct Party {
    std::string label;
    std::size_t dim;

    friend bool operator==(const Party&, const Party&) = default;
};

/// DomainError unless every local dimension is in 1..kMaxPartyDim.
void check_input_dims(const std::vector<Party>& parties);

/// Dense pure state on labeled parties. Amplitudes are row-major with the last party's index
/// fastest. The constructor rejects states whose norm differs from 1 by more than kNormTolerance.
class PureState {
   public:
    PureState(std::vector<Party> parties, Eigen::VectorXcd amplitudes);
    /// Divides by the norm instead of rejecting; throws DomainError for the zero vector.
    static PureState renormalized(std::vector<Party> parties, Eigen::VectorXcd amplitudes);

    const std::vector<Party>& parties() const { return parties_; }
    std::size_t q() const { return parties_.size(); }
    std::size_t dim(std::size_t party) const { return parties_.at(party).dim; }
    std::vector<std::size_t> dims() const;
    std::size_t total_dim() const { return static_cast<std::size_t>(amplitudes_.size()); }
    const Eigen::VectorXcd& amplitudes() const { return amplitudes_; }
    std::vector<std::string> labels() const;

    std::size_t party_index(std::string_view label) const;
    /// Bitmask of the named parties. Throws DomainError on unknown or repeated labels.
    std::uint32_t mask_of(std::span<const std::string> labels) const;
    /// Parses "AB", "A,B1" against this state's labels.
    std::uint32_t parse_subset(std::string_view text) const;
    std::uint32_t full_mask() const { return (std::uint32_t{1} << parties_.size()) - 1; }

    /// Partitions over this state's parties share one PartySet.
    PartySetRef party_set() const;

    double norm() const { return amplitudes_.norm(); }

   private:
    std::vector<Party> parties_;
    Eigen::VectorXcd amplitudes_;
};

/// Density matrix on labeled parties; Hermitian, unit trace and PSD up to tolerance.
class DensityMatrix {
   public:
    DensityMatrix(std::vector<Party> parties, Eigen::MatrixXcd matrix);

    const std::vector<Party>& parties() const { return parties_; }
    const Eigen::MatrixXcd& matrix() const { return matrix_; }
    /// Eigenvalues in ascending order, clamped at zero.
    std::vector<double> spectrum() const;

   private:
    std::vector<Party> parties_;
    Eigen::MatrixXcd matrix_;
};

enum class ProductMode {
    /// Disjoint label sets; parties are concatenated.
    Disjoint,
    /// Same labels in the same order; each party's space becomes H(a) ⊗ H(b), first factor major.
    Layer,
};

PureState tensor_product(const PureState& a, const PureState& b, ProductMode mode = ProductMode::Disjoint);

/// Reorders parties: new party i is old party order[i]. Amplitudes are permuted, not changed.
PureState permute_parties(const PureState& psi, std::span<const std::size_t> order);

/// grp_pi: one party per block of pi (canonical block order), labels concatenated in party order.
PureState coarse_grain(const PureState& psi, const Partition& pi);

/// Zero-pads every party to dimension d.
PureState embed(const PureState& psi, std::size_t d);

DensityMatrix reduced_density(const PureState& psi, std::span<const std::string> subset);
DensityMatrix reduced_density(const PureState& psi, std::uint32_t mask);

/// Nonzero-relevant spectrum of the reduced state on mask, computed on the smaller side of the cut.
std::vector<double> subset_spectrum(const PureState& psi, std::uint32_t mask);

/// Σ sqrt(λ_i) |v_i> ⊗ |v_i*>, with parties interleaved as A1, A1*, A2, A2*, ...
PureState canonical_purification(const DensityMatrix& rho);

/// Applies a local operator on the listed parties (matrix indexed in the listed order).
/// The result is not renormalized.
Eigen::VectorXcd apply_local_operator(const PureState& psi, std::span<const std::size_t> targets,
                                      const Eigen::MatrixXcd& op);

/// One unitary per party.
PureState apply_local_unitaries(const PureState& psi, const std::vector<Eigen::MatrixXcd>& unitaries);

struct KrausOperator {
    std::vector<std::string> targets;
    Eigen::MatrixXcd matrix;
};

struct KrausOutcome {
    double probability;
    /// Absent when the outcome has zero probability.
    std::optional<PureState> state;
};

/// Checks Σ E†E = 1 within 1e-10 on the targeted factor (ContractError otherwise).
std::vector<KrausOutcome> apply_kraus(const PureState& psi, const std::vector<KrausOperator>& ops);

/// Keeps, for each party, the listed basis vectors (in the given order) and drops the rest.
/// The dropped weight must be below the normalization tolerance.
PureState restrict_local_support(const PureState& psi, const std::vector<std::vector<std::size_t>>& kept);

/// Euclidean distance between amplitude vectors of equally shaped states.
double amplitude_distance(const PureState& a, const PureState& b);

}  // namespace gme
