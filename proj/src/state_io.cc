#include "gme/state_io.h"

#include <fstream>

#include "gme/errors.h"

namespace gme {

nlohmann::json state_to_json(const PureState& psi) {
    nlohmann::json parties = nlohmann::json::array();
    for (const auto& p : psi.parties()) {
        parties.push_back({{"label", p.label}, {"dim", p.dim}});
    }
    nlohmann::json amps = nlohmann::json::array();
    for (Eigen::Index i = 0; i < psi.amplitudes().size(); i++) {
        amps.push_back({psi.amplitudes()[i].real(), psi.amplitudes()[i].imag()});
    }
    return {{"parties", parties}, {"amplitudes", amps}};
}

PureState state_from_json(const nlohmann::json& j) {
    try {
        std::vector<Party> parties;
        for (const auto& p : j.at("parties")) {
            auto dim = p.at("dim").get<long long>();
            if (dim <= 0) {
                throw DomainError("party dimension must be positive");
            }
            parties.push_back({p.at("label").get<std::string>(), static_cast<std::size_t>(dim)});
        }
        const auto& raw = j.at("amplitudes");
        Eigen::VectorXcd amps(static_cast<Eigen::Index>(raw.size()));
        for (std::size_t i = 0; i < raw.size(); i++) {
            const auto& a = raw[i];
            if (a.is_number()) {
                amps[static_cast<Eigen::Index>(i)] = a.get<double>();
            } else if (a.is_array() && a.size() == 2) {
                amps[static_cast<Eigen::Index>(i)] = Complex(a[0].get<double>(), a[1].get<double>());
            } else {
                throw DomainError("amplitude " + std::to_string(i) + " is not [re, im]");
            }
        }
        check_input_dims(parties);
        return PureState(std::move(parties), std::move(amps));
    } catch (const nlohmann::json::exception& e) {
        throw DomainError(std::string("malformed state file: ") + e.what());
    }
}

PureState read_state_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw DomainError("cannot open state file '" + path + "'");
    }
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw DomainError("'" + path + "' is not JSON: " + e.what());
    }
    return state_from_json(j);
}

void write_state_file(const PureState& psi, const std::string& path) {
    std::ofstream out(path);
    if (!out) {
        throw DomainError("cannot write '" + path + "'");
    }
    out << state_to_json(psi).dump(2) << "\n";
}

}  // namespace gme
