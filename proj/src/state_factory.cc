#include "gme/state_factory.h"

#include <array>
#include <cmath>
#include <optional>

#include "gme/errors.h"

namespace gme {

namespace {

std::size_t flat_index(const std::vector<std::size_t>& idx, std::size_t d) {
    std::size_t f = 0;
    for (auto i : idx) {
        f = f * d + i;
    }
    return f;
}

PureState appendix_layer_state() {
    auto bell_ab = catalog_state("bell", 2, 2);
    PureState ab(std::vector<Party>{{"A", 2}, {"B", 2}}, bell_ab.amplitudes());
    PureState zero_c({{"C", 2}}, Eigen::Vector2cd(1, 0));
    PureState zero_a({{"A", 2}}, Eigen::Vector2cd(1, 0));
    PureState bc(std::vector<Party>{{"B", 2}, {"C", 2}}, bell_ab.amplitudes());
    return tensor_product(tensor_product(ab, zero_c), tensor_product(zero_a, bc), ProductMode::Layer);
}

/// Sparse 3-party state on dimension-4 parties from (A, B, C, amplitude) entries.
PureState sparse_abc(std::initializer_list<std::array<std::size_t, 3>> entries) {
    Eigen::VectorXcd amps = Eigen::VectorXcd::Zero(64);
    for (const auto& e : entries) {
        amps[static_cast<Eigen::Index>(flat_index({e[0], e[1], e[2]}, 4))] = 1.0;
    }
    return PureState::renormalized({{"A", 4}, {"B", 4}, {"C", 4}}, std::move(amps));
}

}  // namespace

std::vector<Party> uniform_parties(std::size_t q, std::size_t d) {
    auto ps = letter_parties(q, kHardMaxParties);
    std::vector<Party> parties;
    for (const auto& l : ps->labels()) {
        parties.push_back({l, d});
    }
    check_input_dims(parties);
    return parties;
}

const std::vector<std::string>& catalog_names() {
    static const std::vector<std::string> names = {"product", "bell", "ghz", "w",
                                                   "appendixA-psi", "appendixA-psi1", "appendixA-psi2"};
    return names;
}

PureState catalog_state(const std::string& name, std::size_t q, std::size_t d) {
    if (name.rfind("appendixA", 0) == 0) {
        if (q != 3 || d != 4) {
            throw DomainError("appendixA states are 3-party with local dimension 4");
        }
        if (name == "appendixA-psi") {
            return appendix_layer_state();
        }
        // A = A1 A2, B = B1 B2, C = C1 C2, each index = first * 2 + second.
        if (name == "appendixA-psi1") {
            return sparse_abc({{0, 0, 0}, {2, 3, 1}});
        }
        if (name == "appendixA-psi2") {
            return sparse_abc({{0, 1, 1}, {2, 2, 0}});
        }
        throw DomainError("unknown catalog state '" + name + "'");
    }
    if (q == 0 || d == 0) {
        throw DomainError("catalog states need q >= 1 and d >= 1");
    }
    auto parties = uniform_parties(q, d);
    std::size_t total = 1;
    for (std::size_t i = 0; i < q; i++) {
        total *= d;
        if (total > kMaxTotalDim) {
            throw SizeLimitError("state dimension exceeds " + std::to_string(kMaxTotalDim));
        }
    }
    Eigen::VectorXcd amps = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(total));
    if (name == "product") {
        amps[0] = 1.0;
    } else if (name == "bell" || name == "ghz") {
        if (name == "bell" && q != 2) {
            throw DomainError("bell is a 2-party state");
        }
        for (std::size_t i = 0; i < d; i++) {
            amps[static_cast<Eigen::Index>(flat_index(std::vector<std::size_t>(q, i), d))] = 1.0;
        }
    } else if (name == "w") {
        if (d < 2) {
            throw DomainError("w needs d >= 2");
        }
        for (std::size_t a = 0; a < q; a++) {
            std::vector<std::size_t> idx(q, 0);
            idx[a] = 1;
            amps[static_cast<Eigen::Index>(flat_index(idx, d))] = 1.0;
        }
    } else {
        throw DomainError("unknown catalog state '" + name + "'");
    }
    return PureState::renormalized(std::move(parties), std::move(amps));
}

PureState random_state(std::size_t q, std::size_t d, std::uint64_t seed) {
    CounterRng rng(seed);
    return random_state(uniform_parties(q, d), rng);
}

PureState random_state(const std::vector<Party>& parties, CounterRng& rng) {
    check_input_dims(parties);
    std::size_t total = 1;
    for (const auto& p : parties) {
        total *= p.dim;
        if (total > kMaxTotalDim) {
            throw SizeLimitError("state dimension exceeds " + std::to_string(kMaxTotalDim));
        }
    }
    Eigen::VectorXcd amps(static_cast<Eigen::Index>(total));
    for (Eigen::Index i = 0; i < amps.size(); i++) {
        amps[i] = rng.complex_normal();
    }
    return PureState::renormalized(parties, std::move(amps));
}

PureState make_separable(const SeparabilityTemplate& tmpl, std::uint64_t seed) {
    CounterRng rng(seed);
    return make_separable(tmpl, rng);
}

PureState make_separable(const SeparabilityTemplate& tmpl, CounterRng& rng) {
    const auto& kappa = tmpl.kappa;
    const auto& labels = kappa.party_set().labels();
    if (tmpl.dims.size() != kappa.q()) {
        throw DomainError("separability template needs one dimension per party");
    }
    for (std::size_t a = 0; a < kappa.q(); a++) {
        check_input_dims({{labels[a], tmpl.dims[a]}});
    }
    if (!tmpl.recipes.empty() && tmpl.recipes.size() != kappa.num_blocks()) {
        throw DomainError("separability template needs one recipe per block");
    }
    std::optional<PureState> acc;
    std::vector<std::size_t> order;
    for (std::size_t b = 0; b < kappa.num_blocks(); b++) {
        std::vector<Party> parties;
        for (std::size_t a = 0; a < kappa.q(); a++) {
            if (kappa.blocks()[b] >> a & 1) {
                parties.push_back({labels[a], tmpl.dims[a]});
                order.push_back(a);
            }
        }
        BlockRecipe recipe = tmpl.recipes.empty() ? BlockRecipe::random() : tmpl.recipes[b];
        std::optional<PureState> block;
        switch (recipe.kind) {
            case BlockRecipe::Kind::Random:
                block = random_state(parties, rng);
                break;
            case BlockRecipe::Kind::Catalog: {
                std::size_t d = parties.front().dim;
                for (const auto& p : parties) {
                    if (p.dim != d) {
                        throw DomainError("catalog block recipes need equal party dimensions");
                    }
                }
                auto c = catalog_state(recipe.catalog, parties.size(), d);
                if (c.dims() != std::vector<std::size_t>(parties.size(), d)) {
                    throw DomainError("catalog state '" + recipe.catalog + "' does not fit the block");
                }
                block = PureState(parties, c.amplitudes());
                break;
            }
            case BlockRecipe::Kind::Explicit:
                block = PureState(parties, recipe.amplitudes);
                break;
        }
        acc = acc ? tensor_product(*acc, *block) : *block;
    }
    // acc has parties in block order; new party a sits at position inverse[a].
    std::vector<std::size_t> inverse(order.size());
    for (std::size_t i = 0; i < order.size(); i++) {
        inverse[order[i]] = i;
    }
    return permute_parties(*acc, inverse);
}

PureState random_layerwise(const std::vector<LayerSpec>& layers, std::uint64_t seed) {
    CounterRng rng(seed);
    return random_layerwise(layers, rng);
}

PureState random_layerwise(const std::vector<LayerSpec>& layers, CounterRng& rng) {
    if (layers.empty()) {
        throw DomainError("need at least one layer");
    }
    std::optional<PureState> acc;
    for (const auto& layer : layers) {
        if (layer.kappa.is_coarsest()) {
            throw ContractError("every layer must be separable (kappa != 1)");
        }
        auto s = make_separable({layer.kappa, layer.dims, {}}, rng);
        acc = acc ? tensor_product(*acc, s, ProductMode::Layer) : s;
    }
    return *acc;
}

}  // namespace gme
