#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace gme {

/// Default ceiling on the number of parties a lattice may be built over (B_8 = 4140).
constexpr std::size_t kDefaultMaxParties = 8;
/// Block masks are 32-bit and restricted growth strings pack 4 bits per party.
constexpr std::size_t kHardMaxParties = 16;

/// Ordered list of distinct party labels, e.g. {"A", "B", "C"}.
class PartySet {
   public:
    explicit PartySet(std::vector<std::string> labels, std::size_t max_parties = kDefaultMaxParties);

    /// "A", "B", ... for q parties.
    static PartySet letters(std::size_t q, std::size_t max_parties = kDefaultMaxParties);

    std::size_t size() const { return labels_.size(); }
    const std::string& label(std::size_t index) const { return labels_.at(index); }
    const std::vector<std::string>& labels() const { return labels_; }
    std::optional<std::size_t> index_of(std::string_view label) const;
    /// True when every label is one character, so blocks print by juxtaposition.
    bool single_char_labels() const;

    /// Bitmask over party indices -> "AB" (or "A,B1" for long labels).
    std::string format_subset(std::uint32_t mask) const;
    /// Parses "AB", "A,B1" into a mask. Throws DomainError on unknown labels.
    std::uint32_t parse_subset(std::string_view text) const;

    std::uint32_t full_mask() const { return labels_.size() == 32 ? ~0u : (1u << labels_.size()) - 1; }

    bool operator==(const PartySet& other) const { return labels_ == other.labels_; }

   private:
    std::vector<std::string> labels_;
};

using PartySetRef = std::shared_ptr<const PartySet>;

PartySetRef make_party_set(std::vector<std::string> labels, std::size_t max_parties = kDefaultMaxParties);
PartySetRef letter_parties(std::size_t q, std::size_t max_parties = kDefaultMaxParties);

/// Set partition of a PartySet in canonical form: blocks ordered by least party index.
///
/// The restricted growth string (rgs) assigns each party the index of its block, so
/// rgs[0] == 0 and rgs[i] <= 1 + max(rgs[0..i)). Two partitions are equal iff their
/// party sets and rgs agree; ordering is lexicographic in the rgs, which is also the
/// enumeration order of enumerate_partitions.
class Partition {
   public:
    Partition(PartySetRef parties, std::vector<std::uint8_t> rgs);
    /// Builds from arbitrary block masks (any order). Throws DomainError unless they
    /// are nonempty, disjoint and cover the party set.
    static Partition from_blocks(PartySetRef parties, const std::vector<std::uint32_t>& blocks);
    /// Parses "AB|C", "A,B|C", "B1,C|A". Block and element order are free.
    static Partition parse(PartySetRef parties, std::string_view text);

    static Partition finest(PartySetRef parties);
    static Partition coarsest(PartySetRef parties);

    const PartySetRef& parties() const { return parties_; }
    const PartySet& party_set() const { return *parties_; }
    std::size_t q() const { return rgs_.size(); }
    std::size_t num_blocks() const { return blocks_.size(); }
    const std::vector<std::uint32_t>& blocks() const { return blocks_; }
    const std::vector<std::uint8_t>& rgs() const { return rgs_; }
    std::size_t block_of(std::size_t party) const { return rgs_.at(party); }
    /// Packed rgs, unique among partitions of the same party set.
    std::uint64_t key() const;

    bool is_finest() const { return blocks_.size() == rgs_.size(); }
    bool is_coarsest() const { return blocks_.size() == 1; }
    bool has_singleton_block() const;

    std::string to_string() const;

    bool same_parties(const Partition& other) const;

    friend bool operator==(const Partition& a, const Partition& b) {
        return a.rgs_ == b.rgs_ && a.same_parties(b);
    }
    friend bool operator<(const Partition& a, const Partition& b) { return a.rgs_ < b.rgs_; }

   private:
    PartySetRef parties_;
    std::vector<std::uint8_t> rgs_;
    std::vector<std::uint32_t> blocks_;
};

struct PartitionHash {
    std::size_t operator()(const Partition& p) const { return std::hash<std::uint64_t>{}(p.key()); }
};

/// All partitions in lexicographic restricted-growth-string order; size is the Bell number.
std::vector<Partition> enumerate_partitions(const PartySetRef& parties, std::size_t max_parties = kDefaultMaxParties);

class PartitionLattice;

bool leq(const Partition& kappa, const Partition& pi);
Partition meet(const Partition& a, const Partition& b);
Partition join(const Partition& a, const Partition& b);

/// Möbius function of the refinement order. Throws OrderError unless kappa <= pi.
std::int64_t mobius(const Partition& kappa, const Partition& pi);

/// All tau with kappa <= tau <= pi, in enumeration order.
std::vector<Partition> interval(const Partition& kappa, const Partition& pi);

/// Closure under refinement, in enumeration order. Empty input gives an empty result.
std::vector<Partition> downset(const std::vector<Partition>& generators);

/// Every nonempty downset of the lattice, each in enumeration order. Throws SizeLimitError
/// once more than `limit` downsets have been produced.
std::vector<std::vector<Partition>> enumerate_downsets(const PartitionLattice& lattice, std::size_t limit = 1'000'000);

/// Block sizes in non-decreasing order.
std::vector<std::size_t> partition_type(const Partition& pi);

std::uint64_t bell_number(std::size_t q);

/// Precomputed lattice Π_X with index lookup and an order table.
class PartitionLattice {
   public:
    explicit PartitionLattice(PartySetRef parties, std::size_t max_parties = kDefaultMaxParties);

    const PartySetRef& parties() const { return parties_; }
    std::size_t size() const { return elements_.size(); }
    const std::vector<Partition>& elements() const { return elements_; }
    const Partition& at(std::size_t index) const { return elements_.at(index); }
    std::size_t index_of(const Partition& p) const;
    bool leq(std::size_t kappa, std::size_t pi) const { return order_[kappa * elements_.size() + pi] != 0; }
    std::size_t meet(std::size_t a, std::size_t b) const;
    std::size_t finest() const { return elements_.size() - 1; }
    std::size_t coarsest() const { return 0; }

   private:
    PartySetRef parties_;
    std::vector<Partition> elements_;
    std::unordered_map<std::uint64_t, std::size_t> index_;
    std::vector<std::uint8_t> order_;
};

}  // namespace gme
