#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "gme/partition.h"
#include "gme/random.h"
#include "gme/state.h"

namespace gme {

/// Parties "A", "B", ... each of dimension d.
std::vector<Party> uniform_parties(std::size_t q, std::size_t d);

/// Names accepted by catalog_state.
const std::vector<std::string>& catalog_names();

/// product, bell, ghz, w on letter-labeled parties with local dimension d. The appendixA-*
/// states are fixed 3-party states with local dimension 4 (q = 3, d = 4 required).
PureState catalog_state(const std::string& name, std::size_t q, std::size_t d);

/// Complex-Gaussian amplitudes on letter-labeled parties, normalized.
PureState random_state(std::size_t q, std::size_t d, std::uint64_t seed);
PureState random_state(const std::vector<Party>& parties, CounterRng& rng);

/// How to fill one block of a separable state.
struct BlockRecipe {
    enum class Kind { Random, Catalog, Explicit };
    Kind kind = Kind::Random;
    std::string catalog;
    /// Row-major amplitudes over the block's parties in party order (Explicit only).
    Eigen::VectorXcd amplitudes;

    static BlockRecipe random() { return {}; }
    static BlockRecipe from_catalog(std::string name) { return {Kind::Catalog, std::move(name), {}}; }
    static BlockRecipe from_amplitudes(Eigen::VectorXcd a) { return {Kind::Explicit, {}, std::move(a)}; }
};

struct SeparabilityTemplate {
    Partition kappa;
    /// One dimension per party of kappa's party set.
    std::vector<std::size_t> dims;
    /// One recipe per block in canonical block order; empty means every block is random.
    std::vector<BlockRecipe> recipes;
};

/// Tensor product of independent block states, parties back in the original order.
PureState make_separable(const SeparabilityTemplate& tmpl, std::uint64_t seed);
PureState make_separable(const SeparabilityTemplate& tmpl, CounterRng& rng);

/// One layer of a layerwise-separable state: a random kappa-separable state, kappa != 1.
struct LayerSpec {
    Partition kappa;
    std::vector<std::size_t> dims;
};

/// Layer composition of random separable layers. Throws ContractError if a layer's kappa is 1.
PureState random_layerwise(const std::vector<LayerSpec>& layers, std::uint64_t seed);
PureState random_layerwise(const std::vector<LayerSpec>& layers, CounterRng& rng);

}  // namespace gme
