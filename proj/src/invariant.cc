#include "gme/invariant.h"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <numeric>

#include "gme/errors.h"

namespace gme {

double renyi_from_spectrum(const std::vector<double>& spectrum, unsigned n) {
    if (n == 0) {
        throw DomainError("Rényi order must be at least 1");
    }
    if (n == 1) {
        double s = 0;
        for (double p : spectrum) {
            if (p > 0) {
                s -= p * std::log(p);
            }
        }
        return s;
    }
    double tr = 0;
    for (double p : spectrum) {
        tr += std::pow(p, static_cast<double>(n));
    }
    return std::log(tr) / (1.0 - static_cast<double>(n));
}

double renyi_entropy(const PureState& psi, std::uint32_t mask, unsigned n) {
    if (n == 0) {
        throw DomainError("Rényi order must be at least 1");
    }
    if (mask == psi.full_mask()) {
        return 0.0;
    }
    return renyi_from_spectrum(subset_spectrum(psi, mask), n);
}

double renyi_entropy(const PureState& psi, std::string_view subset, unsigned n) {
    return renyi_entropy(psi, psi.parse_subset(subset), n);
}

Permutation identity_permutation(std::size_t n) {
    Permutation p(n);
    std::iota(p.begin(), p.end(), 0);
    return p;
}

Permutation compose(const Permutation& a, const Permutation& b) {
    if (a.size() != b.size()) {
        throw DomainError("composing permutations of different degree");
    }
    Permutation out(a.size());
    for (std::size_t k = 0; k < a.size(); k++) {
        out[k] = a[b[k]];
    }
    return out;
}

Permutation inverse(const Permutation& p) {
    Permutation out(p.size());
    for (std::size_t k = 0; k < p.size(); k++) {
        out[p[k]] = k;
    }
    return out;
}

bool is_permutation(const Permutation& p) {
    std::vector<bool> seen(p.size(), false);
    for (auto x : p) {
        if (x >= p.size() || seen[x]) {
            return false;
        }
        seen[x] = true;
    }
    return true;
}

std::vector<Permutation> all_permutations(std::size_t n) {
    std::vector<Permutation> out;
    Permutation p = identity_permutation(n);
    do {
        out.push_back(p);
    } while (std::next_permutation(p.begin(), p.end()));
    return out;
}

Permutation random_permutation(std::size_t n, CounterRng& rng) {
    Permutation p = identity_permutation(n);
    for (std::size_t i = n; i > 1; i--) {
        std::swap(p[i - 1], p[rng.below(i)]);
    }
    return p;
}

PermutationTuple::PermutationTuple(std::size_t n, std::vector<Permutation> sigmas)
    : n_(n), sigmas_(std::move(sigmas)) {
    if (n_ == 0) {
        throw DomainError("a permutation tuple needs n >= 1 copies");
    }
    if (sigmas_.empty()) {
        throw DomainError("a permutation tuple needs at least one permutation");
    }
    for (const auto& s : sigmas_) {
        if (s.size() != n_ || !is_permutation(s)) {
            throw DomainError("tuple entry is not a permutation of " + std::to_string(n_) + " copies");
        }
    }
}

PermutationTuple PermutationTuple::from_one_based(const std::vector<std::vector<std::size_t>>& sigmas) {
    if (sigmas.empty()) {
        throw DomainError("a permutation tuple needs at least one permutation");
    }
    std::vector<Permutation> zero_based;
    for (const auto& s : sigmas) {
        Permutation p;
        for (auto x : s) {
            if (x == 0) {
                throw DomainError("one-line permutations are 1-based");
            }
            p.push_back(x - 1);
        }
        zero_based.push_back(std::move(p));
    }
    return PermutationTuple(sigmas.front().size(), std::move(zero_based));
}

PermutationTuple PermutationTuple::restrict(std::size_t m) const {
    if (m == 0 || m > sigmas_.size()) {
        throw DomainError("cannot restrict a " + std::to_string(q()) + "-tuple to " + std::to_string(m));
    }
    return PermutationTuple(n_, std::vector<Permutation>(sigmas_.begin(), sigmas_.begin() + static_cast<long>(m)));
}

std::string PermutationTuple::to_string() const {
    std::string out;
    for (const auto& s : sigmas_) {
        out += "(";
        for (std::size_t k = 0; k < s.size(); k++) {
            out += (k ? " " : "") + std::to_string(s[k] + 1);
        }
        out += ")";
    }
    return out;
}

nlohmann::json tuple_to_json(const PermutationTuple& t) {
    nlohmann::json sigmas = nlohmann::json::array();
    for (const auto& s : t.sigmas()) {
        nlohmann::json row = nlohmann::json::array();
        for (auto x : s) {
            row.push_back(x + 1);
        }
        sigmas.push_back(row);
    }
    return {{"n", t.n()}, {"sigmas", sigmas}};
}

PermutationTuple tuple_from_json(const nlohmann::json& j) {
    try {
        std::vector<std::vector<std::size_t>> sigmas;
        for (const auto& row : j.at("sigmas")) {
            std::vector<std::size_t> s;
            for (const auto& x : row) {
                auto v = x.get<long long>();
                if (v <= 0) {
                    throw DomainError("one-line permutations are 1-based");
                }
                s.push_back(static_cast<std::size_t>(v));
            }
            sigmas.push_back(std::move(s));
        }
        auto t = PermutationTuple::from_one_based(sigmas);
        if (j.contains("n") && j.at("n").get<std::size_t>() != t.n()) {
            throw DomainError("tuple 'n' does not match the permutation length");
        }
        return t;
    } catch (const nlohmann::json::exception& e) {
        throw DomainError(std::string("malformed tuple: ") + e.what());
    }
}

PermutationTuple relabel_tuple(const PermutationTuple& t, const Permutation& g, const Permutation& h) {
    if (g.size() != t.n() || h.size() != t.n() || !is_permutation(g) || !is_permutation(h)) {
        throw DomainError("relabeling needs two permutations of the tuple's copies");
    }
    std::vector<Permutation> out;
    for (const auto& s : t.sigmas()) {
        out.push_back(compose(compose(g, s), h));
    }
    return PermutationTuple(t.n(), std::move(out));
}

std::uint64_t max_tensor_terms() {
    if (const char* env = std::getenv("GME_MAX_TENSOR_TERMS")) {
        char* end = nullptr;
        unsigned long long v = std::strtoull(env, &end, 10);
        if (end != env && *end == '\0' && v > 0) {
            return v;
        }
    }
    return kDefaultMaxTensorTerms;
}

Complex multi_invariant_Z(const PermutationTuple& t, const PureState& psi, std::uint64_t max_terms) {
    if (t.q() != psi.q()) {
        throw DomainError("tuple has " + std::to_string(t.q()) + " permutations for a " +
                          std::to_string(psi.q()) + "-party state");
    }
    const std::size_t n = t.n();
    const std::size_t q = psi.q();
    const auto& amps = psi.amplitudes();

    std::vector<std::size_t> support;
    for (Eigen::Index i = 0; i < amps.size(); i++) {
        if (amps[i] != Complex(0)) {
            support.push_back(static_cast<std::size_t>(i));
        }
    }
    const std::size_t s = support.size();
    double terms = std::pow(static_cast<double>(s), static_cast<double>(n));
    if (terms > static_cast<double>(max_terms)) {
        throw SizeLimitError("multi-invariant needs " + std::to_string(static_cast<std::uint64_t>(terms)) +
                             " terms, budget is " + std::to_string(max_terms) + " (GME_MAX_TENSOR_TERMS)");
    }

    // digits[j * q + a] = stride-weighted index of party a in support[j].
    auto dims = psi.dims();
    std::vector<std::size_t> strides(q, 1);
    for (std::size_t a = q; a-- > 1;) {
        strides[a - 1] = strides[a] * dims[a];
    }
    std::vector<std::size_t> digits(s * q);
    for (std::size_t j = 0; j < s; j++) {
        for (std::size_t a = 0; a < q; a++) {
            digits[j * q + a] = (support[j] / strides[a] % dims[a]) * strides[a];
        }
    }
    // source[k * q + a] = ket copy whose index sits in bra copy k at party a.
    std::vector<std::size_t> source(n * q);
    for (std::size_t a = 0; a < q; a++) {
        auto inv = inverse(t.sigma(a));
        for (std::size_t k = 0; k < n; k++) {
            source[k * q + a] = inv[k];
        }
    }

    std::vector<Complex> conj_amps(static_cast<std::size_t>(amps.size()));
    for (Eigen::Index i = 0; i < amps.size(); i++) {
        conj_amps[static_cast<std::size_t>(i)] = std::conj(amps[i]);
    }
    std::vector<Complex> ket(s);
    for (std::size_t j = 0; j < s; j++) {
        ket[j] = amps[static_cast<Eigen::Index>(support[j])];
    }

    // Odometer over ket copies with running partial products.
    std::vector<std::size_t> choice(n, 0);
    std::vector<Complex> partial(n + 1, Complex(1));
    for (std::size_t c = 0; c < n; c++) {
        partial[c + 1] = partial[c] * ket[0];
    }
    Complex total = 0;
    while (true) {
        Complex bra = 1;
        for (std::size_t k = 0; k < n && bra != Complex(0); k++) {
            std::size_t flat = 0;
            for (std::size_t a = 0; a < q; a++) {
                flat += digits[choice[source[k * q + a]] * q + a];
            }
            bra *= conj_amps[flat];
        }
        total += partial[n] * bra;
        std::size_t c = n;
        while (c > 0) {
            c--;
            if (++choice[c] < s) {
                break;
            }
            choice[c] = 0;
            if (c == 0) {
                return total;
            }
        }
        for (std::size_t r = c; r < n; r++) {
            partial[r + 1] = partial[r] * ket[choice[r]];
        }
    }
}

double log_of_Z(Complex z, std::size_t n) {
    if (std::abs(z.imag()) > kPositivityTolerance || !(z.real() > 0)) {
        throw PositivityError("multi-invariant Z = (" + std::to_string(z.real()) + ", " + std::to_string(z.imag()) +
                              ") is not positive real");
    }
    return -std::log(z.real()) / static_cast<double>(n);
}

double log_multi_invariant_E(const PermutationTuple& t, const PureState& psi, std::uint64_t max_terms) {
    return log_of_Z(multi_invariant_Z(t, psi, max_terms), t.n());
}

}  // namespace gme
