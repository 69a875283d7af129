#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "gme/partition.h"
#include "gme/state.h"

namespace gme {

struct EnsembleConfig {
    enum class Class { KappaSeparable, Layerwise, HaarRandom, Catalog };
    Class cls = Class::HaarRandom;
    std::size_t q = 3;
    /// Local dimension of each party (per layer for Layerwise).
    std::size_t d = 2;
    std::size_t samples = 1;
    /// KappaSeparable only.
    std::optional<Partition> kappa;
    /// Layerwise only: each layer is random and separable across a random (1, q-1) cut.
    std::size_t layers = 2;
    /// Catalog only; one state per name, samples ignored.
    std::vector<std::string> catalog;
};

struct EnsembleMember {
    PureState state;
    /// "AB|C #3", "layers A|BCD x C|ABD #0", "ghz".
    std::string label;
};

std::string to_string(EnsembleConfig::Class c);
EnsembleConfig::Class parse_ensemble_class(const std::string& text);

/// Deterministic in (config, seed).
std::vector<EnsembleMember> generate_ensemble(const EnsembleConfig& config, std::uint64_t seed);

/// The (1, q-1) cut isolating party a.
Partition singleton_cut(const PartySetRef& parties, std::size_t a);

}  // namespace gme
