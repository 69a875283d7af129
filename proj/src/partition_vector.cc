#include "gme/partition_vector.h"

#include <bit>

#include "gme/errors.h"

namespace gme {

PartitionVector::PartitionVector(PartySetRef parties) : parties_(std::move(parties)) {
    if (!parties_) {
        throw DomainError("partition vector without a party set");
    }
}

PartitionVector PartitionVector::basis(const Partition& pi, const Rational& coeff) {
    PartitionVector v(pi.parties());
    v.add(pi, coeff);
    return v;
}

void PartitionVector::require_compatible(const Partition& pi) const {
    if (!(pi.parties() == parties_ || pi.party_set() == *parties_)) {
        throw DomainError("partition " + pi.to_string() + " is over a different party set");
    }
}

Rational PartitionVector::coefficient(const Partition& pi) const {
    auto it = terms_.find(pi);
    return it == terms_.end() ? Rational(0) : it->second;
}

void PartitionVector::add(const Partition& pi, const Rational& coeff) {
    require_compatible(pi);
    if (coeff == 0) {
        return;
    }
    auto [it, inserted] = terms_.try_emplace(pi, coeff);
    if (!inserted) {
        it->second += coeff;
        if (it->second == 0) {
            terms_.erase(it);
        }
    }
}

PartitionVector& PartitionVector::operator+=(const PartitionVector& other) {
    for (const auto& [pi, c] : other.terms_) {
        add(pi, c);
    }
    return *this;
}

PartitionVector& PartitionVector::operator-=(const PartitionVector& other) {
    for (const auto& [pi, c] : other.terms_) {
        add(pi, -c);
    }
    return *this;
}

PartitionVector& PartitionVector::operator*=(const Rational& scale) {
    if (scale == 0) {
        terms_.clear();
        return *this;
    }
    for (auto& [pi, c] : terms_) {
        c *= scale;
    }
    return *this;
}

std::string PartitionVector::to_string() const {
    if (terms_.empty()) {
        return "0";
    }
    std::string out;
    bool first = true;
    for (const auto& [pi, c] : terms_) {
        Rational magnitude = c < 0 ? Rational(-c) : c;
        if (first) {
            out += c < 0 ? "-" : "";
        } else {
            out += c < 0 ? " - " : " + ";
        }
        out += gme::to_string(magnitude) + "*" + pi.to_string();
        first = false;
    }
    return out;
}

PartitionVector PartitionVector::parse(PartySetRef parties, std::string_view text) {
    PartitionVector v(parties);
    std::size_t pos = 0;
    auto skip_space = [&] {
        while (pos < text.size() && (text[pos] == ' ' || text[pos] == '\t')) {
            pos++;
        }
    };
    skip_space();
    if (text.substr(pos) == "0") {
        return v;
    }
    bool expect_term = true;
    while (pos < text.size()) {
        int sign = 1;
        skip_space();
        if (pos < text.size() && (text[pos] == '+' || text[pos] == '-')) {
            sign = text[pos] == '-' ? -1 : 1;
            pos++;
            skip_space();
        } else if (!expect_term) {
            throw DomainError("expected '+' or '-' in partition vector at '" + std::string(text.substr(pos)) + "'");
        }
        std::size_t end = text.find_first_of("+-", pos);
        std::string_view term = text.substr(pos, end == std::string_view::npos ? text.size() - pos : end - pos);
        pos = end == std::string_view::npos ? text.size() : end;
        Rational coeff = 1;
        std::string_view body = term;
        if (auto star = term.find('*'); star != std::string_view::npos) {
            coeff = parse_rational(term.substr(0, star));
            body = term.substr(star + 1);
        }
        while (!body.empty() && body.back() == ' ') {
            body.remove_suffix(1);
        }
        while (!body.empty() && body.front() == ' ') {
            body.remove_prefix(1);
        }
        if (body.empty()) {
            throw DomainError("missing partition in term '" + std::string(term) + "'");
        }
        v.add(Partition::parse(parties, body), coeff * sign);
        expect_term = false;
    }
    return v;
}

PartitionVector meet_extend(const PartitionVector& v, const Partition& kappa) {
    PartitionVector out(v.parties());
    for (const auto& [pi, c] : v.terms()) {
        out.add(meet(pi, kappa), c);
    }
    return out;
}

MobiusVector mobius_vector(const Partition& rho) {
    PartitionVector v(rho.parties());
    for (const auto& pi : enumerate_partitions(rho.parties(), kHardMaxParties)) {
        if (leq(pi, rho)) {
            v.add(pi, Rational(mobius(pi, rho)));
        }
    }
    return MobiusVector{rho, std::move(v)};
}

std::vector<MobiusVector> solve_meet_vanishing(const PartySetRef& parties, const std::vector<Partition>& constraints) {
    for (const auto& k : constraints) {
        if (!(k.parties() == parties || k.party_set() == *parties)) {
            throw DomainError("constraint " + k.to_string() + " is over a different party set");
        }
    }
    auto closed = downset(constraints);
    std::vector<MobiusVector> out;
    for (const auto& rho : enumerate_partitions(parties, kHardMaxParties)) {
        bool excluded = false;
        for (const auto& k : closed) {
            if (k == rho) {
                excluded = true;
                break;
            }
        }
        if (!excluded) {
            out.push_back(mobius_vector(rho));
        }
    }
    return out;
}

std::vector<Partition> singleton_cut_constraints(const PartySetRef& parties) {
    std::vector<Partition> out;
    if (parties->size() < 2) {
        return out;
    }
    for (std::size_t a = 0; a < parties->size(); a++) {
        std::uint32_t single = 1u << a;
        out.push_back(Partition::from_blocks(parties, {single, parties->full_mask() & ~single}));
    }
    return out;
}

std::vector<Partition> proper_constraints(const PartySetRef& parties) {
    std::vector<Partition> out;
    for (auto& pi : enumerate_partitions(parties, kHardMaxParties)) {
        if (!pi.is_coarsest()) {
            out.push_back(std::move(pi));
        }
    }
    return out;
}

}  // namespace gme
