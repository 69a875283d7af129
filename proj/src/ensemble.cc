#include "gme/ensemble.h"

#include "gme/errors.h"
#include "gme/random.h"
#include "gme/state_factory.h"

namespace gme {

std::string to_string(EnsembleConfig::Class c) {
    switch (c) {
        case EnsembleConfig::Class::KappaSeparable:
            return "kappa-separable";
        case EnsembleConfig::Class::Layerwise:
            return "layerwise";
        case EnsembleConfig::Class::HaarRandom:
            return "haar-random";
        case EnsembleConfig::Class::Catalog:
            return "catalog";
    }
    return "";
}

EnsembleConfig::Class parse_ensemble_class(const std::string& text) {
    for (auto c : {EnsembleConfig::Class::KappaSeparable, EnsembleConfig::Class::Layerwise,
                   EnsembleConfig::Class::HaarRandom, EnsembleConfig::Class::Catalog}) {
        if (to_string(c) == text) {
            return c;
        }
    }
    throw DomainError("unknown ensemble class '" + text + "'");
}

Partition singleton_cut(const PartySetRef& parties, std::size_t a) {
    if (parties->size() < 2 || a >= parties->size()) {
        throw DomainError("a singleton cut needs q >= 2 and a valid party");
    }
    std::uint32_t single = std::uint32_t{1} << a;
    return Partition::from_blocks(parties, {single, parties->full_mask() & ~single});
}

std::vector<EnsembleMember> generate_ensemble(const EnsembleConfig& config, std::uint64_t seed) {
    std::vector<EnsembleMember> out;
    CounterRng rng(seed);
    auto parties = letter_parties(config.q, kHardMaxParties);
    switch (config.cls) {
        case EnsembleConfig::Class::KappaSeparable: {
            if (!config.kappa) {
                throw DomainError("kappa-separable ensembles need a partition");
            }
            std::vector<std::size_t> dims(config.kappa->q(), config.d);
            for (std::size_t s = 0; s < config.samples; s++) {
                out.push_back({make_separable({*config.kappa, dims, {}}, rng),
                               config.kappa->to_string() + " #" + std::to_string(s)});
            }
            break;
        }
        case EnsembleConfig::Class::Layerwise: {
            if (config.q < 2 || config.layers == 0) {
                throw DomainError("layerwise ensembles need q >= 2 and at least one layer");
            }
            for (std::size_t s = 0; s < config.samples; s++) {
                std::vector<LayerSpec> layers;
                std::string label = "layers";
                for (std::size_t l = 0; l < config.layers; l++) {
                    auto cut = singleton_cut(parties, rng.below(config.q));
                    label += (l ? " x " : " ") + cut.to_string();
                    layers.push_back({cut, std::vector<std::size_t>(config.q, config.d)});
                }
                out.push_back({random_layerwise(layers, rng), label + " #" + std::to_string(s)});
            }
            break;
        }
        case EnsembleConfig::Class::HaarRandom: {
            std::vector<Party> ps;
            for (const auto& l : parties->labels()) {
                ps.push_back({l, config.d});
            }
            for (std::size_t s = 0; s < config.samples; s++) {
                out.push_back({random_state(ps, rng), "haar #" + std::to_string(s)});
            }
            break;
        }
        case EnsembleConfig::Class::Catalog: {
            if (config.catalog.empty()) {
                throw DomainError("catalog ensembles need at least one name");
            }
            for (const auto& name : config.catalog) {
                bool appendix = name.rfind("appendixA", 0) == 0;
                out.push_back({catalog_state(name, appendix ? 3 : config.q, appendix ? 4 : config.d), name});
            }
            break;
        }
    }
    return out;
}

}  // namespace gme
