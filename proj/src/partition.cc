#include "gme/partition.h"

#include <algorithm>
#include <bit>
#include <numeric>
#include <set>

#include "gme/errors.h"

namespace gme {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) {
        s.remove_prefix(1);
    }
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) {
        s.remove_suffix(1);
    }
    return s;
}

std::uint64_t checked_mul(std::uint64_t a, std::uint64_t b) {
    std::uint64_t out;
    if (__builtin_mul_overflow(a, b, &out)) {
        throw SizeLimitError("integer overflow in Möbius product");
    }
    return out;
}

std::vector<std::uint8_t> rgs_from_blocks(std::size_t q, const std::vector<std::uint32_t>& blocks) {
    std::vector<std::uint32_t> sorted = blocks;
    std::sort(sorted.begin(), sorted.end(), [](std::uint32_t a, std::uint32_t b) {
        return std::countr_zero(a) < std::countr_zero(b);
    });
    std::vector<std::uint8_t> rgs(q, 0);
    for (std::size_t b = 0; b < sorted.size(); b++) {
        for (std::size_t i = 0; i < q; i++) {
            if (sorted[b] >> i & 1) {
                rgs[i] = static_cast<std::uint8_t>(b);
            }
        }
    }
    return rgs;
}

void require_same(const Partition& a, const Partition& b) {
    if (!a.same_parties(b)) {
        throw DomainError("partitions " + a.to_string() + " and " + b.to_string() + " live on different party sets");
    }
}

}  // namespace

PartySet::PartySet(std::vector<std::string> labels, std::size_t max_parties) : labels_(std::move(labels)) {
    if (labels_.empty()) {
        throw DomainError("a party set needs at least one label");
    }
    std::size_t limit = std::min(max_parties, kHardMaxParties);
    if (labels_.size() > limit) {
        throw SizeLimitError(
            "party set has " + std::to_string(labels_.size()) + " labels; the limit is " + std::to_string(limit));
    }
    std::set<std::string> seen;
    for (const auto& label : labels_) {
        if (label.empty()) {
            throw DomainError("party labels must be nonempty");
        }
        if (label.find_first_of("|, \t*+-/") != std::string::npos) {
            throw DomainError("party label '" + label + "' contains a reserved character");
        }
        if (!seen.insert(label).second) {
            throw DomainError("duplicate party label '" + label + "'");
        }
    }
}

PartySet PartySet::letters(std::size_t q, std::size_t max_parties) {
    if (q == 0 || q > 26) {
        throw DomainError("letter labels support 1..26 parties");
    }
    std::vector<std::string> labels;
    for (std::size_t i = 0; i < q; i++) {
        labels.emplace_back(1, static_cast<char>('A' + i));
    }
    return PartySet(std::move(labels), max_parties);
}

std::optional<std::size_t> PartySet::index_of(std::string_view label) const {
    for (std::size_t i = 0; i < labels_.size(); i++) {
        if (labels_[i] == label) {
            return i;
        }
    }
    return std::nullopt;
}

bool PartySet::single_char_labels() const {
    return std::all_of(labels_.begin(), labels_.end(), [](const std::string& s) { return s.size() == 1; });
}

std::string PartySet::format_subset(std::uint32_t mask) const {
    std::string out;
    bool compact = single_char_labels();
    for (std::size_t i = 0; i < labels_.size(); i++) {
        if (mask >> i & 1) {
            if (!compact && !out.empty()) {
                out += ',';
            }
            out += labels_[i];
        }
    }
    return out;
}

std::uint32_t PartySet::parse_subset(std::string_view text) const {
    text = trim(text);
    if (text.empty()) {
        throw DomainError("empty block");
    }
    std::uint32_t mask = 0;
    auto add = [&](std::string_view label) {
        auto idx = index_of(label);
        if (!idx) {
            throw DomainError("unknown party label '" + std::string(label) + "'");
        }
        if (mask >> *idx & 1) {
            throw DomainError("party '" + std::string(label) + "' repeated");
        }
        mask |= 1u << *idx;
    };
    if (text.find(',') != std::string_view::npos) {
        std::size_t start = 0;
        while (start <= text.size()) {
            std::size_t end = text.find(',', start);
            if (end == std::string_view::npos) {
                end = text.size();
            }
            add(trim(text.substr(start, end - start)));
            start = end + 1;
        }
        return mask;
    }
    // Juxtaposed labels: greedy longest match.
    std::size_t pos = 0;
    while (pos < text.size()) {
        std::size_t best = 0;
        for (const auto& label : labels_) {
            if (label.size() > best && text.substr(pos, label.size()) == label) {
                best = label.size();
            }
        }
        if (best == 0) {
            throw DomainError("cannot match a party label at '" + std::string(text.substr(pos)) + "'");
        }
        add(text.substr(pos, best));
        pos += best;
    }
    return mask;
}

PartySetRef make_party_set(std::vector<std::string> labels, std::size_t max_parties) {
    return std::make_shared<const PartySet>(std::move(labels), max_parties);
}

PartySetRef letter_parties(std::size_t q, std::size_t max_parties) {
    return std::make_shared<const PartySet>(PartySet::letters(q, max_parties));
}

Partition::Partition(PartySetRef parties, std::vector<std::uint8_t> rgs) : parties_(std::move(parties)), rgs_(std::move(rgs)) {
    if (!parties_) {
        throw DomainError("partition without a party set");
    }
    if (rgs_.size() != parties_->size()) {
        throw DomainError("restricted growth string length does not match the party count");
    }
    std::size_t next = 0;
    for (auto v : rgs_) {
        if (v > next) {
            throw DomainError("not a restricted growth string");
        }
        if (v == next) {
            next++;
        }
    }
    blocks_.assign(next, 0);
    for (std::size_t i = 0; i < rgs_.size(); i++) {
        blocks_[rgs_[i]] |= 1u << i;
    }
}

Partition Partition::from_blocks(PartySetRef parties, const std::vector<std::uint32_t>& blocks) {
    std::uint32_t seen = 0;
    for (auto b : blocks) {
        if (b == 0) {
            throw DomainError("partition has an empty block");
        }
        if (seen & b) {
            throw DomainError("partition blocks overlap");
        }
        seen |= b;
    }
    if (seen != parties->full_mask()) {
        throw DomainError("partition blocks do not cover the party set");
    }
    auto rgs = rgs_from_blocks(parties->size(), blocks);
    return Partition(std::move(parties), std::move(rgs));
}

Partition Partition::parse(PartySetRef parties, std::string_view text) {
    std::vector<std::uint32_t> blocks;
    std::size_t start = 0;
    while (start <= text.size()) {
        std::size_t end = text.find('|', start);
        if (end == std::string_view::npos) {
            end = text.size();
        }
        blocks.push_back(parties->parse_subset(text.substr(start, end - start)));
        start = end + 1;
    }
    return from_blocks(std::move(parties), blocks);
}

Partition Partition::finest(PartySetRef parties) {
    std::vector<std::uint8_t> rgs(parties->size());
    std::iota(rgs.begin(), rgs.end(), 0);
    return Partition(std::move(parties), std::move(rgs));
}

Partition Partition::coarsest(PartySetRef parties) {
    std::vector<std::uint8_t> rgs(parties->size(), 0);
    return Partition(std::move(parties), std::move(rgs));
}

std::uint64_t Partition::key() const {
    std::uint64_t k = 0;
    for (auto v : rgs_) {
        k = (k << 4) | v;
    }
    return k;
}

bool Partition::has_singleton_block() const {
    return std::any_of(blocks_.begin(), blocks_.end(), [](std::uint32_t b) { return std::popcount(b) == 1; });
}

std::string Partition::to_string() const {
    std::string out;
    for (std::size_t b = 0; b < blocks_.size(); b++) {
        if (b) {
            out += '|';
        }
        out += parties_->format_subset(blocks_[b]);
    }
    return out;
}

bool Partition::same_parties(const Partition& other) const {
    return parties_ == other.parties_ || *parties_ == *other.parties_;
}

std::vector<Partition> enumerate_partitions(const PartySetRef& parties, std::size_t max_parties) {
    std::size_t q = parties->size();
    if (q > std::min(max_parties, kHardMaxParties)) {
        throw SizeLimitError("cannot enumerate partitions of " + std::to_string(q) + " parties (limit " +
                             std::to_string(max_parties) + ")");
    }
    std::vector<Partition> out;
    std::vector<std::uint8_t> rgs(q, 0);
    // Odometer over restricted growth strings in lexicographic order.
    while (true) {
        out.emplace_back(parties, rgs);
        std::size_t i = q;
        bool advanced = false;
        while (i > 1) {
            i--;
            std::uint8_t prefix_max = *std::max_element(rgs.begin(), rgs.begin() + i);
            if (rgs[i] <= prefix_max) {
                rgs[i]++;
                std::fill(rgs.begin() + i + 1, rgs.end(), 0);
                advanced = true;
                break;
            }
        }
        if (!advanced) {
            break;
        }
    }
    return out;
}

bool leq(const Partition& kappa, const Partition& pi) {
    require_same(kappa, pi);
    for (auto b : kappa.blocks()) {
        auto target = pi.blocks()[pi.block_of(std::countr_zero(b))];
        if ((b & ~target) != 0) {
            return false;
        }
    }
    return true;
}

Partition meet(const Partition& a, const Partition& b) {
    require_same(a, b);
    std::vector<std::uint32_t> blocks;
    for (auto x : a.blocks()) {
        for (auto y : b.blocks()) {
            if (x & y) {
                blocks.push_back(x & y);
            }
        }
    }
    return Partition::from_blocks(a.parties(), blocks);
}

Partition join(const Partition& a, const Partition& b) {
    require_same(a, b);
    std::vector<std::uint32_t> blocks = a.blocks();
    // Merge blocks of a that are bridged by a block of b until stable.
    for (auto y : b.blocks()) {
        std::uint32_t merged = 0;
        std::vector<std::uint32_t> rest;
        for (auto x : blocks) {
            if (x & y) {
                merged |= x;
            } else {
                rest.push_back(x);
            }
        }
        rest.push_back(merged);
        blocks = std::move(rest);
    }
    return Partition::from_blocks(a.parties(), blocks);
}

std::int64_t mobius(const Partition& kappa, const Partition& pi) {
    if (!leq(kappa, pi)) {
        throw OrderError("mobius(" + kappa.to_string() + ", " + pi.to_string() + ") needs kappa <= pi");
    }
    std::vector<std::size_t> counts(pi.num_blocks(), 0);
    for (auto b : kappa.blocks()) {
        counts[pi.block_of(std::countr_zero(b))]++;
    }
    std::uint64_t magnitude = 1;
    int sign = 1;
    for (auto k : counts) {
        for (std::uint64_t f = 2; f < k; f++) {
            magnitude = checked_mul(magnitude, f);
        }
        if ((k - 1) % 2 == 1) {
            sign = -sign;
        }
    }
    if (magnitude > static_cast<std::uint64_t>(INT64_MAX)) {
        throw SizeLimitError("Möbius value exceeds 64 bits");
    }
    return sign * static_cast<std::int64_t>(magnitude);
}

std::vector<Partition> interval(const Partition& kappa, const Partition& pi) {
    if (!leq(kappa, pi)) {
        throw OrderError("interval(" + kappa.to_string() + ", " + pi.to_string() + ") needs kappa <= pi");
    }
    std::vector<Partition> out;
    for (auto& tau : enumerate_partitions(kappa.parties(), kHardMaxParties)) {
        if (leq(kappa, tau) && leq(tau, pi)) {
            out.push_back(std::move(tau));
        }
    }
    return out;
}

std::vector<Partition> downset(const std::vector<Partition>& generators) {
    if (generators.empty()) {
        return {};
    }
    for (const auto& g : generators) {
        require_same(generators.front(), g);
    }
    std::vector<Partition> out;
    for (auto& rho : enumerate_partitions(generators.front().parties(), kHardMaxParties)) {
        for (const auto& g : generators) {
            if (leq(rho, g)) {
                out.push_back(std::move(rho));
                break;
            }
        }
    }
    return out;
}

std::vector<std::vector<Partition>> enumerate_downsets(const PartitionLattice& lattice, std::size_t limit) {
    // Finer partitions first is a linear extension of the order, so x may join a downset
    // exactly when every y strictly below it already has.
    std::vector<std::size_t> order(lattice.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return lattice.at(a).num_blocks() > lattice.at(b).num_blocks();
    });
    std::vector<std::vector<Partition>> out;
    std::vector<std::uint8_t> in(lattice.size(), 0);
    auto emit = [&] {
        std::vector<Partition> d;
        for (std::size_t i = 0; i < lattice.size(); i++) {
            if (in[i]) {
                d.push_back(lattice.at(i));
            }
        }
        if (!d.empty()) {
            if (out.size() >= limit) {
                throw SizeLimitError("more than " + std::to_string(limit) + " downsets");
            }
            out.push_back(std::move(d));
        }
    };
    auto rec = [&](auto& self, std::size_t k) -> void {
        if (k == order.size()) {
            emit();
            return;
        }
        std::size_t x = order[k];
        self(self, k + 1);
        bool below_all_in = true;
        for (std::size_t y = 0; y < lattice.size() && below_all_in; y++) {
            if (y != x && lattice.leq(y, x) && !in[y]) {
                below_all_in = false;
            }
        }
        if (below_all_in) {
            in[x] = 1;
            self(self, k + 1);
            in[x] = 0;
        }
    };
    rec(rec, 0);
    return out;
}

std::vector<std::size_t> partition_type(const Partition& pi) {
    std::vector<std::size_t> sizes;
    for (auto b : pi.blocks()) {
        sizes.push_back(static_cast<std::size_t>(std::popcount(b)));
    }
    std::sort(sizes.begin(), sizes.end());
    return sizes;
}

std::uint64_t bell_number(std::size_t q) {
    // Bell triangle.
    std::vector<std::uint64_t> row{1};
    for (std::size_t i = 0; i < q; i++) {
        std::vector<std::uint64_t> next{row.back()};
        for (auto x : row) {
            next.push_back(next.back() + x);
        }
        row = std::move(next);
    }
    return row.front();
}

PartitionLattice::PartitionLattice(PartySetRef parties, std::size_t max_parties)
    : parties_(std::move(parties)), elements_(enumerate_partitions(parties_, max_parties)) {
    std::size_t n = elements_.size();
    for (std::size_t i = 0; i < n; i++) {
        index_.emplace(elements_[i].key(), i);
    }
    order_.assign(n * n, 0);
    for (std::size_t i = 0; i < n; i++) {
        for (std::size_t j = 0; j < n; j++) {
            order_[i * n + j] = gme::leq(elements_[i], elements_[j]) ? 1 : 0;
        }
    }
}

std::size_t PartitionLattice::index_of(const Partition& p) const {
    if (!p.same_parties(elements_.front())) {
        throw DomainError("partition " + p.to_string() + " is not in this lattice");
    }
    return index_.at(p.key());
}

std::size_t PartitionLattice::meet(std::size_t a, std::size_t b) const {
    return index_of(gme::meet(elements_[a], elements_[b]));
}

}  // namespace gme
