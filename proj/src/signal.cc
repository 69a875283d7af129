#include "gme/signal.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <set>

#include "gme/errors.h"

namespace gme {

namespace {

struct RenderItem {
    Rational coeff;
    std::string body;
    bool orbit;
};

std::string render_items(const std::vector<RenderItem>& items) {
    if (items.empty()) {
        return "0";
    }
    std::string out;
    for (std::size_t i = 0; i < items.size(); i++) {
        const auto& it = items[i];
        bool negative = it.coeff < 0;
        Rational magnitude = negative ? Rational(-it.coeff) : it.coeff;
        out += i == 0 ? (negative ? "-" : "") : (negative ? " -" : " +");
        std::string m = magnitude == 1 ? "" : to_string(magnitude);
        if (it.orbit) {
            out += m + "(" + it.body + "+...)";
        } else {
            out += m + (m.empty() ? "" : " ") + it.body;
        }
    }
    return out;
}

std::string block_label(const PartySet& ps, std::uint32_t mask) {
    if (ps.single_char_labels() || std::popcount(mask) == 1) {
        return ps.format_subset(mask);
    }
    return "{" + ps.format_subset(mask) + "}";
}

std::uint64_t binomial(std::size_t n, std::size_t k) {
    std::uint64_t r = 1;
    for (std::size_t i = 1; i <= k; i++) {
        r = r * (n - k + i) / i;
    }
    return r;
}

void require_family_arity(const SymmetricSignalSpec& spec, const PureState& psi) {
    const auto& ps = (*spec.terms.parties());
    if (ps.labels() != psi.labels()) {
        throw DomainError("signal is over parties " + ps.format_subset(ps.full_mask()) +
                          " but the state has different parties");
    }
}

}  // namespace

std::string to_string(Provenance p) {
    switch (p) {
        case Provenance::MobiusVector:
            return "mobius-vector";
        case Provenance::SpanCombination:
            return "span-combination";
        case Provenance::QInformation:
            return "q-information";
        case Provenance::Custom:
            return "custom";
    }
    return "";
}

std::string to_string(SignalMode m) {
    return m == SignalMode::Signal ? "signal" : "pre-signal";
}

SubsetExpansion::SubsetExpansion(PartySetRef parties, unsigned n) : parties_(std::move(parties)), n_(n) {
    if (!parties_) {
        throw DomainError("subset expansion without a party set");
    }
}

Rational SubsetExpansion::coefficient(std::uint32_t mask) const {
    auto it = coeffs_.find(mask);
    return it == coeffs_.end() ? Rational(0) : it->second;
}

void SubsetExpansion::add(std::uint32_t mask, const Rational& c) {
    if (mask == 0 || (mask & ~parties_->full_mask()) != 0) {
        throw DomainError("subset outside the party set");
    }
    if (c == 0) {
        return;
    }
    auto [it, inserted] = coeffs_.try_emplace(mask, c);
    if (!inserted) {
        it->second += c;
        if (it->second == 0) {
            coeffs_.erase(it);
        }
    }
}

SubsetExpansion SubsetExpansion::reduce_pure(Fold fold) const {
    SubsetExpansion out(parties_, n_);
    std::uint32_t full = parties_->full_mask();
    std::size_t q = parties_->size();
    for (const auto& [mask, c] : coeffs_) {
        if (mask == full) {
            continue;
        }
        std::size_t k = static_cast<std::size_t>(std::popcount(mask));
        std::uint32_t target = mask;
        if (2 * k > q || (2 * k == q && fold == Fold::Canonical && !(mask & 1u))) {
            target = full & ~mask;
        }
        out.add(target, c);
    }
    return out;
}

std::string SubsetExpansion::render() const {
    std::map<std::size_t, std::vector<std::pair<std::uint32_t, Rational>>, std::greater<>> by_size;
    for (const auto& [mask, c] : coeffs_) {
        by_size[static_cast<std::size_t>(std::popcount(mask))].emplace_back(mask, c);
    }
    std::vector<RenderItem> items;
    for (const auto& [k, group] : by_size) {
        bool uniform = std::all_of(group.begin(), group.end(), [&](const auto& e) { return e.second == group[0].second; });
        if (group.size() > 1 && uniform && group.size() == binomial(parties_->size(), k)) {
            items.push_back({group[0].second, "S_" + parties_->format_subset(group[0].first), true});
        } else {
            for (const auto& [mask, c] : group) {
                items.push_back({c, "S_" + parties_->format_subset(mask), false});
            }
        }
    }
    return render_items(items);
}

double SubsetExpansion::evaluate(const PureState& psi) const {
    if (psi.labels() != parties_->labels()) {
        throw DomainError("subset expansion and state have different parties");
    }
    double total = 0;
    for (const auto& [mask, c] : coeffs_) {
        total += to_double(c) * renyi_entropy(psi, mask, n_);
    }
    return total;
}

std::vector<Partition> constraint_set(const PartySetRef& parties, SignalMode mode) {
    return mode == SignalMode::Signal ? singleton_cut_constraints(parties) : proper_constraints(parties);
}

std::vector<SymmetricSignalSpec> build_signal_basis(const SeedFamily& family, const PartySetRef& parties,
                                                    SignalMode mode) {
    if (mode == SignalMode::Signal && !family.additive()) {
        throw ContractError("family '" + family.name() + "' is not additive; only pre-signals can be built");
    }
    std::vector<SymmetricSignalSpec> out;
    for (auto& m : solve_meet_vanishing(parties, constraint_set(parties, mode))) {
        out.push_back({family, std::move(m.vector), Provenance::MobiusVector, m.rho, {}, std::nullopt});
    }
    return out;
}

std::vector<SymmetricSignalSpec> build_signal_basis(const SeedFamily& family, std::size_t q, SignalMode mode) {
    return build_signal_basis(family, letter_parties(q), mode);
}

SymmetricSignalSpec span_combination(const SeedFamily& family,
                                     const std::vector<std::pair<Partition, Rational>>& weights) {
    if (weights.empty()) {
        throw DomainError("span combination needs at least one weight");
    }
    PartitionVector v(weights.front().first.parties());
    for (const auto& [rho, a] : weights) {
        if (rho.has_singleton_block()) {
            throw DomainError("span combinations range over partitions without singleton blocks, got " +
                              rho.to_string());
        }
        v += mobius_vector(rho).vector * a;
    }
    return {family, std::move(v), Provenance::SpanCombination, std::nullopt, weights, std::nullopt};
}

bool satisfies_constraints(const PartitionVector& terms, const std::vector<Partition>& constraints) {
    return std::all_of(constraints.begin(), constraints.end(),
                       [&](const Partition& k) { return meet_extend(terms, k).is_zero(); });
}

std::string grouped_descriptor(const std::string& symbol, const Partition& pi) {
    std::vector<std::string> labels;
    for (auto b : pi.blocks()) {
        labels.push_back(block_label(pi.party_set(), b));
    }
    std::sort(labels.begin(), labels.end());
    std::string out = symbol + "_" + std::to_string(pi.num_blocks()) + "(";
    for (std::size_t i = 0; i < labels.size(); i++) {
        out += (i ? "," : "") + labels[i];
    }
    return out + ")";
}

std::vector<GroupedTerm> expand_grouped(const SymmetricSignalSpec& spec, bool reduce_pure) {
    std::vector<GroupedTerm> out;
    bool drop_single = reduce_pure && spec.family.vanishes_on_one_party();
    for (const auto& [pi, c] : spec.terms.terms()) {
        if (drop_single && pi.is_coarsest()) {
            continue;
        }
        out.push_back({c, pi, grouped_descriptor(spec.family.symbol(), pi)});
    }
    std::stable_sort(out.begin(), out.end(), [](const GroupedTerm& a, const GroupedTerm& b) {
        if (a.pi.num_blocks() != b.pi.num_blocks()) {
            return a.pi.num_blocks() < b.pi.num_blocks();
        }
        auto ta = partition_type(a.pi);
        auto tb = partition_type(b.pi);
        if (ta != tb) {
            return ta < tb;
        }
        return a.descriptor < b.descriptor;
    });
    return out;
}

std::string render_grouped(const std::vector<GroupedTerm>& terms) {
    if (terms.empty()) {
        return "0";
    }
    std::map<std::vector<std::size_t>, std::size_t> orbit_size;
    for (const auto& pi : enumerate_partitions(terms.front().pi.parties(), kHardMaxParties)) {
        orbit_size[partition_type(pi)]++;
    }
    std::vector<RenderItem> items;
    std::size_t i = 0;
    while (i < terms.size()) {
        auto type = partition_type(terms[i].pi);
        std::size_t j = i;
        while (j < terms.size() && partition_type(terms[j].pi) == type) {
            j++;
        }
        bool uniform = true;
        const GroupedTerm* rep = &terms[i];
        for (std::size_t k = i; k < j; k++) {
            uniform = uniform && terms[k].coeff == terms[i].coeff;
            if (terms[k].pi < rep->pi) {
                rep = &terms[k];
            }
        }
        if (j - i > 1 && uniform && j - i == orbit_size[type]) {
            items.push_back({terms[i].coeff, rep->descriptor, true});
        } else {
            for (std::size_t k = i; k < j; k++) {
                items.push_back({terms[k].coeff, terms[k].descriptor, false});
            }
        }
        i = j;
    }
    return render_items(items);
}

SubsetExpansion subset_expansion(const SymmetricSignalSpec& spec) {
    if (spec.family.kind() != SeedFamily::Kind::RenyiSum) {
        throw DomainError("subset expansions exist only for the Rényi-sum family");
    }
    SubsetExpansion out(spec.terms.parties(), spec.family.renyi_order());
    for (const auto& [pi, c] : spec.terms.terms()) {
        for (auto b : pi.blocks()) {
            out.add(b, c);
        }
    }
    return out;
}

SubsetExpansion alternating_subset_sum(const PartySetRef& parties, unsigned n) {
    SubsetExpansion out(parties, n);
    std::size_t q = parties->size();
    for (std::uint32_t mask = 1; mask < parties->full_mask(); mask++) {
        std::size_t k = static_cast<std::size_t>(std::popcount(mask));
        out.add(mask, (q - k) % 2 == 0 ? Rational(1) : Rational(-1));
    }
    return out;
}

SymmetricSignalSpec q_information(std::size_t q, unsigned n) {
    return q_information(letter_parties(q), n);
}

SymmetricSignalSpec q_information(const PartySetRef& parties, unsigned n) {
    if (parties->size() < 2) {
        throw DomainError("the q-information needs q >= 2");
    }
    auto top = Partition::coarsest(parties);
    return {SeedFamily::renyi_sum(n), mobius_vector(top).vector, Provenance::QInformation, top, {},
            alternating_subset_sum(parties, n)};
}

double evaluate(const SymmetricSignalSpec& spec, const PureState& psi) {
    require_family_arity(spec, psi);
    double total = 0;
    for (const auto& [pi, c] : spec.terms.terms()) {
        total += to_double(c) * spec.family.extend(pi, psi);
    }
    return total;
}

nlohmann::json spec_to_json(const SymmetricSignalSpec& spec) {
    nlohmann::json terms = nlohmann::json::array();
    for (const auto& [pi, c] : spec.terms.terms()) {
        terms.push_back({{"coeff", to_string(c)}, {"partition", pi.to_string()}});
    }
    nlohmann::json j = {{"parties", (*spec.terms.parties()).labels()},
                        {"family", family_to_json(spec.family)},
                        {"provenance", to_string(spec.provenance)},
                        {"terms", terms}};
    if (spec.rho) {
        j["rho"] = spec.rho->to_string();
    }
    if (!spec.weights.empty()) {
        nlohmann::json w = nlohmann::json::array();
        for (const auto& [rho, a] : spec.weights) {
            w.push_back({{"rho", rho.to_string()}, {"weight", to_string(a)}});
        }
        j["weights"] = w;
    }
    return j;
}

SymmetricSignalSpec spec_from_json(const nlohmann::json& j, const std::optional<TupleTable>& table) {
    try {
        PartySetRef parties;
        if (j.contains("parties")) {
            parties = make_party_set(j.at("parties").get<std::vector<std::string>>(), kHardMaxParties);
        } else {
            std::set<char> letters;
            for (const auto& t : j.at("terms")) {
                for (char ch : t.at("partition").get<std::string>()) {
                    if (ch != '|' && ch != ',' && ch != ' ') {
                        letters.insert(ch);
                    }
                }
            }
            std::vector<std::string> labels;
            for (char ch : letters) {
                labels.emplace_back(1, ch);
            }
            parties = make_party_set(labels, kHardMaxParties);
        }
        const auto& fj = j.at("family");
        std::optional<SeedFamily> family;
        if (fj.at("kind").get<std::string>() == "log-multi-invariant" && !fj.contains("tuples")) {
            if (!table) {
                throw DomainError("the multi family needs a tuple table");
            }
            family = SeedFamily::log_multi_invariant(*table);
        } else {
            family = family_from_json(fj);
        }
        PartitionVector terms(parties);
        for (const auto& t : j.at("terms")) {
            terms.add(Partition::parse(parties, t.at("partition").get<std::string>()),
                      parse_rational(t.at("coeff").get<std::string>()));
        }
        SymmetricSignalSpec spec{*family, terms, Provenance::Custom, std::nullopt, {}, std::nullopt};
        std::string prov = j.value("provenance", "custom");
        if (prov == "mobius-vector" || prov == "q-information") {
            spec.provenance = prov == "mobius-vector" ? Provenance::MobiusVector : Provenance::QInformation;
            spec.rho = prov == "q-information" ? Partition::coarsest(parties)
                                               : Partition::parse(parties, j.at("rho").get<std::string>());
            if (!(mobius_vector(*spec.rho).vector == terms)) {
                throw ContractError("terms do not match M_" + spec.rho->to_string());
            }
            if (spec.provenance == Provenance::QInformation) {
                if (family->kind() != SeedFamily::Kind::RenyiSum) {
                    throw ContractError("the q-information is defined over the Rényi-sum family");
                }
                spec.subsets = alternating_subset_sum(parties, family->renyi_order());
            }
        } else if (prov == "span-combination") {
            spec.provenance = Provenance::SpanCombination;
            PartitionVector expected(parties);
            for (const auto& w : j.at("weights")) {
                auto rho = Partition::parse(parties, w.at("rho").get<std::string>());
                auto a = parse_rational(w.at("weight").get<std::string>());
                spec.weights.emplace_back(rho, a);
                expected += mobius_vector(rho).vector * a;
            }
            if (!(expected == terms)) {
                throw ContractError("terms do not match the weighted Möbius vectors");
            }
        } else if (prov != "custom") {
            throw DomainError("unknown provenance '" + prov + "'");
        }
        return spec;
    } catch (const nlohmann::json::exception& e) {
        throw DomainError(std::string("malformed signal spec: ") + e.what());
    }
}

ZeroSumTensor::ZeroSumTensor(std::size_t rank, std::size_t side, std::vector<Rational> entries)
    : rank_(rank), side_(side), entries_(std::move(entries)) {
    if (rank_ == 0 || side_ == 0) {
        throw DomainError("tensor rank and side must be positive");
    }
    std::size_t size = 1;
    for (std::size_t k = 0; k < rank_; k++) {
        size *= side_;
        if (size > (std::size_t{1} << 24)) {
            throw SizeLimitError("tensor too large");
        }
    }
    if (entries_.size() != size) {
        throw DomainError("tensor needs " + std::to_string(size) + " entries");
    }
    std::size_t stride = 1;
    for (std::size_t axis = rank_; axis-- > 0;) {
        for (std::size_t flat = 0; flat < size; flat++) {
            if ((flat / stride) % side_ != 0) {
                continue;
            }
            Rational sum = 0;
            for (std::size_t i = 0; i < side_; i++) {
                sum += entries_[flat + i * stride];
            }
            if (sum != 0) {
                auto idx = unflatten(flat);
                std::string where;
                for (std::size_t a = 0; a < rank_; a++) {
                    where += (a ? "," : "") + (a == axis ? std::string(":") : std::to_string(idx[a] + 1));
                }
                throw ContractError("tensor slice [" + where + "] sums to " + to_string(sum) + ", not 0");
            }
        }
        stride *= side_;
    }
}

ZeroSumTensor ZeroSumTensor::zero(std::size_t rank, std::size_t side) {
    std::size_t size = 1;
    for (std::size_t k = 0; k < rank; k++) {
        size *= side;
    }
    return ZeroSumTensor(rank, side, std::vector<Rational>(size, Rational(0)));
}

ZeroSumTensor ZeroSumTensor::outer(const std::vector<std::vector<Rational>>& factors) {
    if (factors.empty()) {
        throw DomainError("outer product of no factors");
    }
    std::size_t side = factors.front().size();
    std::vector<Rational> entries{Rational(1)};
    for (const auto& f : factors) {
        if (f.size() != side) {
            throw DomainError("outer product factors must have equal length");
        }
        std::vector<Rational> next;
        next.reserve(entries.size() * side);
        for (const auto& e : entries) {
            for (const auto& x : f) {
                next.push_back(e * x);
            }
        }
        entries = std::move(next);
    }
    return ZeroSumTensor(factors.size(), side, std::move(entries));
}

const Rational& ZeroSumTensor::at(const std::vector<std::size_t>& index) const {
    if (index.size() != rank_) {
        throw DomainError("tensor index has wrong rank");
    }
    std::size_t flat = 0;
    for (auto i : index) {
        if (i >= side_) {
            throw DomainError("tensor index out of range");
        }
        flat = flat * side_ + i;
    }
    return entries_[flat];
}

std::vector<std::size_t> ZeroSumTensor::unflatten(std::size_t flat) const {
    std::vector<std::size_t> idx(rank_);
    for (std::size_t a = rank_; a-- > 0;) {
        idx[a] = flat % side_;
        flat /= side_;
    }
    return idx;
}

NonSymmetricSignalSpec build_nonsymmetric(std::size_t n, std::vector<Permutation> sigma_list, ZeroSumTensor tensor) {
    if (sigma_list.size() != tensor.side()) {
        throw DomainError("tensor side " + std::to_string(tensor.side()) + " does not match " +
                          std::to_string(sigma_list.size()) + " permutations");
    }
    for (const auto& s : sigma_list) {
        if (s.size() != n || !is_permutation(s)) {
            throw DomainError("sigma list entries must be permutations of " + std::to_string(n) + " copies");
        }
    }
    return {n, std::move(sigma_list), std::move(tensor)};
}

NonSymmetricSignalSpec minimal_signal(const std::vector<Permutation>& sigmas) {
    if (sigmas.size() < 2) {
        throw DomainError("a minimal signal needs at least two parties");
    }
    std::size_t n = sigmas.front().size();
    std::vector<Permutation> list;
    std::vector<std::size_t> idx;
    for (const auto& s : sigmas) {
        auto it = std::find(list.begin(), list.end(), s);
        idx.push_back(static_cast<std::size_t>(it - list.begin()));
        if (it == list.end()) {
            list.push_back(s);
        }
    }
    std::size_t side = list.size();
    auto diff = [&](std::size_t plus, std::size_t minus) {
        std::vector<Rational> v(side, Rational(0));
        v[plus] += 1;
        v[minus] -= 1;
        return v;
    };
    std::vector<std::vector<Rational>> factors;
    factors.push_back(diff(idx[0], idx[1]));
    factors.push_back(diff(idx[1], idx[0]));
    for (std::size_t a = 2; a < sigmas.size(); a++) {
        factors.push_back(diff(idx[a], idx[0]));
    }
    return build_nonsymmetric(n, std::move(list), ZeroSumTensor::outer(factors));
}

double evaluate_nonsymmetric(const NonSymmetricSignalSpec& spec, const PureState& psi, std::uint64_t max_terms) {
    if (spec.tensor.rank() != psi.q()) {
        throw DomainError("signal has rank " + std::to_string(spec.tensor.rank()) + " but the state has " +
                          std::to_string(psi.q()) + " parties");
    }
    std::map<std::vector<std::size_t>, double> cache;
    double total = 0;
    const auto& entries = spec.tensor.entries();
    for (std::size_t flat = 0; flat < entries.size(); flat++) {
        if (entries[flat] == 0) {
            continue;
        }
        auto idx = spec.tensor.unflatten(flat);
        std::vector<std::size_t> key = idx;
        auto it = cache.find(key);
        if (it == cache.end()) {
            std::vector<Permutation> sigmas;
            for (auto i : idx) {
                sigmas.push_back(spec.sigma_list[i]);
            }
            double e = log_multi_invariant_E(PermutationTuple(spec.n, std::move(sigmas)), psi, max_terms);
            it = cache.emplace(std::move(key), e).first;
        }
        total += to_double(entries[flat]) * it->second;
    }
    return total;
}

nlohmann::json nonsymmetric_to_json(const NonSymmetricSignalSpec& spec) {
    nlohmann::json list = nlohmann::json::array();
    for (const auto& s : spec.sigma_list) {
        nlohmann::json row = nlohmann::json::array();
        for (auto x : s) {
            row.push_back(x + 1);
        }
        list.push_back(row);
    }
    nlohmann::json entries = nlohmann::json::array();
    for (std::size_t flat = 0; flat < spec.tensor.entries().size(); flat++) {
        const auto& v = spec.tensor.entries()[flat];
        if (v != 0) {
            nlohmann::json index = nlohmann::json::array();
            for (auto i : spec.tensor.unflatten(flat)) {
                index.push_back(i + 1);
            }
            entries.push_back({{"index", index}, {"value", to_string(v)}});
        }
    }
    return {{"n", spec.n}, {"rank", spec.tensor.rank()}, {"sigma_list", list}, {"entries", entries}};
}

NonSymmetricSignalSpec nonsymmetric_from_json(const nlohmann::json& j) {
    try {
        std::size_t n = j.at("n").get<std::size_t>();
        std::size_t rank = j.at("rank").get<std::size_t>();
        std::vector<Permutation> list;
        for (const auto& row : j.at("sigma_list")) {
            Permutation p;
            for (const auto& x : row) {
                auto v = x.get<long long>();
                if (v <= 0) {
                    throw DomainError("one-line permutations are 1-based");
                }
                p.push_back(static_cast<std::size_t>(v - 1));
            }
            list.push_back(std::move(p));
        }
        std::size_t side = list.size();
        if (side == 0) {
            throw DomainError("empty sigma list");
        }
        std::size_t size = 1;
        for (std::size_t k = 0; k < rank; k++) {
            size *= side;
        }
        std::vector<Rational> entries(size, Rational(0));
        for (const auto& e : j.at("entries")) {
            std::size_t flat = 0;
            const auto& index = e.at("index");
            if (index.size() != rank) {
                throw DomainError("tensor entry index has wrong rank");
            }
            for (const auto& i : index) {
                auto v = i.get<long long>();
                if (v <= 0 || static_cast<std::size_t>(v) > side) {
                    throw DomainError("tensor entry index out of range");
                }
                flat = flat * side + static_cast<std::size_t>(v - 1);
            }
            entries[flat] += parse_rational(e.at("value").get<std::string>());
        }
        return build_nonsymmetric(n, std::move(list), ZeroSumTensor(rank, side, std::move(entries)));
    } catch (const nlohmann::json::exception& e) {
        throw DomainError(std::string("malformed non-symmetric signal: ") + e.what());
    }
}

NonSymmetricSignalSpec shipped_minimal_signal_q3() {
    return minimal_signal({{0, 1, 2}, {1, 2, 0}, {2, 0, 1}});
}

bool VanishingReport::pass() const {
    return std::all_of(classes.begin(), classes.end(), [](const VanishingClass& c) { return c.pass; });
}

VanishingReport vanishing_report(const std::function<double(const PureState&)>& value,
                                 const std::vector<EnsembleConfig>& ensembles, std::uint64_t seed, double tolerance,
                                 double nonzero_threshold) {
    VanishingReport report;
    for (std::size_t i = 0; i < ensembles.size(); i++) {
        const auto& config = ensembles[i];
        VanishingClass cls;
        cls.name = to_string(config.cls);
        if (config.kappa) {
            cls.name += "(" + config.kappa->to_string() + ")";
        }
        cls.expect = config.cls == EnsembleConfig::Class::Catalog ? Expectation::Nonzero : Expectation::Vanish;
        cls.threshold = cls.expect == Expectation::Vanish ? tolerance : nonzero_threshold;
        auto members = generate_ensemble(config, seed * 1000003ULL + i);
        cls.samples = members.size();
        for (const auto& m : members) {
            double v = std::abs(value(m.state));
            if (v >= cls.max_abs || cls.worst.empty()) {
                cls.max_abs = std::max(cls.max_abs, v);
                cls.worst = m.label;
            }
        }
        cls.pass = cls.expect == Expectation::Vanish ? cls.max_abs < tolerance : cls.max_abs > nonzero_threshold;
        report.classes.push_back(std::move(cls));
    }
    return report;
}

VanishingReport vanishing_report(const SymmetricSignalSpec& spec, const std::vector<EnsembleConfig>& ensembles,
                                 std::uint64_t seed, double tolerance, double nonzero_threshold) {
    return vanishing_report([&](const PureState& psi) { return evaluate(spec, psi); }, ensembles, seed, tolerance,
                            nonzero_threshold);
}

}  // namespace gme
