#include "gme/seed_family.h"

#include <cmath>
#include <fstream>

#include "gme/errors.h"

namespace gme {

TupleTable::TupleTable(std::vector<PermutationTuple> tuples) {
    for (auto& t : tuples) {
        add(std::move(t));
    }
}

void TupleTable::add(PermutationTuple t) {
    auto q = t.q();
    if (!tuples_.emplace(q, std::move(t)).second) {
        throw DomainError("tuple table has two entries of arity " + std::to_string(q));
    }
}

PermutationTuple TupleTable::for_arity(std::size_t m) const {
    auto it = tuples_.lower_bound(m);
    if (it == tuples_.end()) {
        throw DomainError("tuple table has no entry of arity >= " + std::to_string(m));
    }
    return it->first == m ? it->second : it->second.restrict(m);
}

nlohmann::json table_to_json(const TupleTable& t) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& [q, tuple] : t.tuples()) {
        arr.push_back(tuple_to_json(tuple));
    }
    return {{"tuples", arr}};
}

TupleTable table_from_json(const nlohmann::json& j) {
    if (!j.is_object() || !j.contains("tuples") || !j.at("tuples").is_array()) {
        throw DomainError("tuple table must be {\"tuples\": [...]}");
    }
    TupleTable t;
    for (const auto& entry : j.at("tuples")) {
        t.add(tuple_from_json(entry));
    }
    return t;
}

TupleTable read_table_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw DomainError("cannot open tuple table '" + path + "'");
    }
    try {
        return table_from_json(nlohmann::json::parse(in));
    } catch (const nlohmann::json::exception& e) {
        throw DomainError("'" + path + "' is not JSON: " + e.what());
    }
}

SeedFamily SeedFamily::renyi_sum(unsigned n) {
    if (n == 0) {
        throw DomainError("Rényi order must be at least 1");
    }
    SeedFamily f;
    f.kind_ = Kind::RenyiSum;
    f.additive_ = true;
    f.n_ = n;
    return f;
}

SeedFamily SeedFamily::residual(std::optional<std::string> traced_party) {
    SeedFamily f;
    f.kind_ = Kind::Residual;
    f.additive_ = true;
    f.traced_ = std::move(traced_party);
    return f;
}

SeedFamily SeedFamily::log_multi_invariant(TupleTable table, std::uint64_t max_terms) {
    if (table.tuples().empty()) {
        throw DomainError("empty tuple table");
    }
    SeedFamily f;
    f.kind_ = Kind::LogMultiInvariant;
    f.additive_ = true;
    f.table_ = std::move(table);
    f.max_terms_ = max_terms;
    return f;
}

SeedFamily SeedFamily::composed(const SeedFamily& base, ComposeMap g) {
    SeedFamily f;
    f.kind_ = Kind::Composed;
    f.additive_ = false;
    f.n_ = base.n_;
    f.base_ = std::make_shared<const SeedFamily>(base);
    f.g_ = g;
    return f;
}

SeedFamily SeedFamily::custom(std::string name, Evaluator fn, bool additive) {
    if (!fn) {
        throw DomainError("custom family without an evaluator");
    }
    SeedFamily f;
    f.kind_ = Kind::Custom;
    f.additive_ = additive;
    f.custom_name_ = std::move(name);
    f.custom_ = std::move(fn);
    return f;
}

std::string SeedFamily::name() const {
    switch (kind_) {
        case Kind::RenyiSum:
            return "renyi:" + std::to_string(n_);
        case Kind::Residual:
            return traced_ ? "residual:" + *traced_ : "residual";
        case Kind::LogMultiInvariant:
            return "multi";
        case Kind::Composed:
            return std::string(*g_ == ComposeMap::Square ? "square(" : "exp(") + base_->name() + ")";
        case Kind::Custom:
            return custom_name_;
    }
    return "";
}

std::string SeedFamily::symbol() const {
    switch (kind_) {
        case Kind::RenyiSum:
        case Kind::LogMultiInvariant:
            return "S";
        case Kind::Residual:
            return "R";
        case Kind::Composed:
            return "G";
        case Kind::Custom:
            return "F";
    }
    return "F";
}

bool SeedFamily::vanishes_on_one_party() const {
    switch (kind_) {
        case Kind::RenyiSum:
        case Kind::Residual:
        case Kind::LogMultiInvariant:
            return true;
        case Kind::Composed:
            return *g_ == ComposeMap::Square && base_->vanishes_on_one_party();
        case Kind::Custom:
            return false;
    }
    return false;
}

double SeedFamily::value(const PureState& psi) const {
    switch (kind_) {
        case Kind::RenyiSum: {
            if (psi.q() == 1) {
                return 0.0;
            }
            double s = 0;
            for (std::size_t a = 0; a < psi.q(); a++) {
                s += renyi_entropy(psi, std::uint32_t{1} << a, n_);
            }
            return s;
        }
        case Kind::Residual:
            return value_tracing(psi, traced_ ? psi.party_index(*traced_) : psi.q() - 1);
        case Kind::LogMultiInvariant:
            return log_multi_invariant_E(table_.for_arity(psi.q()), psi, max_terms_);
        case Kind::Composed: {
            double x = base_->value(psi);
            return *g_ == ComposeMap::Square ? x * x : std::exp(x);
        }
        case Kind::Custom:
            return custom_(psi);
    }
    return 0.0;
}

double SeedFamily::value_tracing(const PureState& psi, std::size_t traced) const {
    if (psi.q() == 1) {
        return 0.0;
    }
    auto keep = psi.full_mask() & ~(std::uint32_t{1} << traced);
    return residual_information(reduced_density(psi, keep));
}

double SeedFamily::extend(const Partition& pi, const PureState& psi) const {
    if (pi.q() != psi.q() || pi.party_set().labels() != psi.labels()) {
        throw DomainError("partition " + pi.to_string() + " is not over this state's parties");
    }
    return extend_impl(pi, psi);
}

double SeedFamily::extend_impl(const Partition& pi, const PureState& psi) const {
    switch (kind_) {
        case Kind::Residual: {
            std::size_t traced = traced_ ? psi.party_index(*traced_) : psi.q() - 1;
            return value_tracing(coarse_grain(psi, pi), pi.block_of(traced));
        }
        case Kind::Composed: {
            double x = base_->extend_impl(pi, psi);
            return *g_ == ComposeMap::Square ? x * x : std::exp(x);
        }
        default:
            return value(coarse_grain(psi, pi));
    }
}

double residual_information(const DensityMatrix& rho) {
    auto purified = canonical_purification(rho);
    double s = 0;
    for (std::size_t a = 0; a < rho.parties().size(); a++) {
        std::uint32_t single = std::uint32_t{1} << (2 * a);
        std::uint32_t pair = single | (single << 1);
        s += 0.5 * renyi_entropy(purified, pair, 1) - renyi_entropy(purified, single, 1);
    }
    return s;
}

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && s.front() == ' ') {
        s.remove_prefix(1);
    }
    while (!s.empty() && s.back() == ' ') {
        s.remove_suffix(1);
    }
    return s;
}

}  // namespace

SeedFamily parse_family(std::string_view text) {
    text = trim(text);
    for (auto [prefix, map] : {std::pair{std::string_view("square("), ComposeMap::Square},
                               std::pair{std::string_view("exp("), ComposeMap::Exp}}) {
        if (text.substr(0, prefix.size()) == prefix) {
            if (text.back() != ')') {
                throw DomainError("unbalanced parentheses in family '" + std::string(text) + "'");
            }
            auto inner = text.substr(prefix.size(), text.size() - prefix.size() - 1);
            return SeedFamily::composed(parse_family(inner), map);
        }
    }
    if (text == "vn") {
        return SeedFamily::renyi_sum(1);
    }
    if (text.substr(0, 6) == "renyi:") {
        auto digits = text.substr(6);
        if (digits.empty() || digits.find_first_not_of("0123456789") != std::string_view::npos) {
            throw DomainError("bad Rényi order in '" + std::string(text) + "'");
        }
        return SeedFamily::renyi_sum(static_cast<unsigned>(std::stoul(std::string(digits))));
    }
    if (text == "residual") {
        return SeedFamily::residual();
    }
    if (text.substr(0, 9) == "residual:") {
        return SeedFamily::residual(std::string(text.substr(9)));
    }
    if (text == "multi") {
        throw DomainError("the multi family needs a tuple table (--table)");
    }
    throw DomainError("unknown family '" + std::string(text) + "'");
}

nlohmann::json family_to_json(const SeedFamily& f) {
    switch (f.kind()) {
        case SeedFamily::Kind::RenyiSum:
            return {{"kind", "renyi-sum"}, {"n", f.renyi_order()}};
        case SeedFamily::Kind::Residual: {
            nlohmann::json j = {{"kind", "residual"}};
            if (f.traced_party()) {
                j["traced"] = *f.traced_party();
            }
            return j;
        }
        case SeedFamily::Kind::LogMultiInvariant: {
            auto j = table_to_json(f.table());
            j["kind"] = "log-multi-invariant";
            return j;
        }
        case SeedFamily::Kind::Composed:
            return {{"kind", "composed"},
                    {"map", *f.compose_map() == ComposeMap::Square ? "square" : "exp"},
                    {"base", family_to_json(*f.base())}};
        case SeedFamily::Kind::Custom:
            return {{"kind", "custom"}, {"name", f.name()}};
    }
    return {};
}

SeedFamily family_from_json(const nlohmann::json& j) {
    try {
        auto kind = j.at("kind").get<std::string>();
        if (kind == "renyi-sum") {
            return SeedFamily::renyi_sum(j.at("n").get<unsigned>());
        }
        if (kind == "residual") {
            return j.contains("traced") ? SeedFamily::residual(j.at("traced").get<std::string>())
                                        : SeedFamily::residual();
        }
        if (kind == "log-multi-invariant") {
            return SeedFamily::log_multi_invariant(table_from_json(j));
        }
        if (kind == "composed") {
            auto map = j.at("map").get<std::string>();
            if (map != "square" && map != "exp") {
                throw DomainError("unknown composing map '" + map + "'");
            }
            return SeedFamily::composed(family_from_json(j.at("base")),
                                        map == "square" ? ComposeMap::Square : ComposeMap::Exp);
        }
        throw DomainError("family kind '" + kind + "' cannot be read from JSON");
    } catch (const nlohmann::json::exception& e) {
        throw DomainError(std::string("malformed family: ") + e.what());
    }
}

CompatibilityReport compatibility_check(const SeedFamily& family, const SeparabilityTemplate& tmpl,
                                        const Partition& pi, std::size_t samples, std::uint64_t seed) {
    if (!pi.same_parties(tmpl.kappa)) {
        throw DomainError("pi and kappa live on different party sets");
    }
    CompatibilityReport report{family.name(), tmpl.kappa.to_string(), pi.to_string(), samples, 0.0};
    Partition lower = meet(pi, tmpl.kappa);
    CounterRng rng(seed);
    for (std::size_t s = 0; s < samples; s++) {
        auto psi = make_separable(tmpl, rng);
        double dev = std::abs(family.extend(pi, psi) - family.extend(lower, psi));
        report.max_deviation = std::max(report.max_deviation, dev);
    }
    return report;
}

}  // namespace gme
