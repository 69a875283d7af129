#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "gme/random.h"
#include "gme/state.h"

namespace gme {

/// Rényi entropy from a spectrum; n = 1 is the von Neumann entropy. Natural logarithm.
double renyi_from_spectrum(const std::vector<double>& spectrum, unsigned n);

/// S^(n) of the reduced state on the parties in mask. Throws DomainError for n = 0 or an empty mask.
double renyi_entropy(const PureState& psi, std::uint32_t mask, unsigned n);
double renyi_entropy(const PureState& psi, std::string_view subset, unsigned n);

/// Permutation of {0..n-1} in one-line notation, 0-based.
using Permutation = std::vector<std::size_t>;

Permutation identity_permutation(std::size_t n);
/// (a ∘ b)(k) = a(b(k)).
Permutation compose(const Permutation& a, const Permutation& b);
Permutation inverse(const Permutation& p);
bool is_permutation(const Permutation& p);
/// All n! permutations in lexicographic order.
std::vector<Permutation> all_permutations(std::size_t n);
Permutation random_permutation(std::size_t n, CounterRng& rng);

/// q permutations of n copies. Stored 0-based; JSON and text forms are 1-based.
class PermutationTuple {
   public:
    PermutationTuple(std::size_t n, std::vector<Permutation> sigmas);
    static PermutationTuple from_one_based(const std::vector<std::vector<std::size_t>>& sigmas);

    std::size_t n() const { return n_; }
    std::size_t q() const { return sigmas_.size(); }
    const std::vector<Permutation>& sigmas() const { return sigmas_; }
    const Permutation& sigma(std::size_t a) const { return sigmas_.at(a); }

    /// First m permutations.
    PermutationTuple restrict(std::size_t m) const;

    /// "(1 2 3)(2 3 1)" style, one-line notation, 1-based.
    std::string to_string() const;

    friend bool operator==(const PermutationTuple&, const PermutationTuple&) = default;

   private:
    std::size_t n_;
    std::vector<Permutation> sigmas_;
};

nlohmann::json tuple_to_json(const PermutationTuple& t);
PermutationTuple tuple_from_json(const nlohmann::json& j);

/// (g σ_1 h, ..., g σ_q h). Z is invariant under this map.
PermutationTuple relabel_tuple(const PermutationTuple& t, const Permutation& g, const Permutation& h);

constexpr std::uint64_t kDefaultMaxTensorTerms = std::uint64_t{1} << 24;

/// kDefaultMaxTensorTerms unless GME_MAX_TENSOR_TERMS holds a positive integer.
std::uint64_t max_tensor_terms();

/// Z = <ψ|^⊗n (σ_1 ⊗ ... ⊗ σ_q) |ψ>^⊗n.
///
/// Summation runs over n ket copies drawn from the nonzero amplitudes; bra copy k at party a
/// takes the ket index of copy σ_a^{-1}(k). The number of summed terms is nnz(ψ)^n and must not
/// exceed max_terms (SizeLimitError).
Complex multi_invariant_Z(const PermutationTuple& t, const PureState& psi, std::uint64_t max_terms = max_tensor_terms());

/// Tolerance on Im Z when taking a logarithm.
constexpr double kPositivityTolerance = 1e-10;

/// E = -(1/n) ln Z; PositivityError unless Z is real and positive within kPositivityTolerance.
double log_multi_invariant_E(const PermutationTuple& t, const PureState& psi,
                             std::uint64_t max_terms = max_tensor_terms());
double log_of_Z(Complex z, std::size_t n);

}  // namespace gme
