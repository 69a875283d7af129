#include "gme/state.h"

#include <algorithm>
#include <bit>
#include <cmath>

#include "gme/errors.h"

namespace gme {

namespace {

using RowMajorMatrix = Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

std::size_t product(const std::vector<std::size_t>& dims) {
    std::size_t p = 1;
    for (auto d : dims) {
        p *= d;
    }
    return p;
}

void validate_parties(const std::vector<Party>& parties) {
    if (parties.empty()) {
        throw DomainError("a state needs at least one party");
    }
    std::size_t total = 1;
    for (std::size_t i = 0; i < parties.size(); i++) {
        const auto& p = parties[i];
        if (p.label.empty()) {
            throw DomainError("party labels must be nonempty");
        }
        if (p.dim == 0) {
            throw DomainError("party '" + p.label + "' has dimension 0");
        }
        for (std::size_t j = 0; j < i; j++) {
            if (parties[j].label == p.label) {
                throw DomainError("duplicate party label '" + p.label + "'");
            }
        }
        total *= p.dim;
        if (total > kMaxTotalDim) {
            throw SizeLimitError("total dimension exceeds " + std::to_string(kMaxTotalDim));
        }
    }
    if (parties.size() > 32) {
        throw SizeLimitError("at most 32 parties");
    }
}

}  // namespace

void check_input_dims(const std::vector<Party>& parties) {
    for (const auto& p : parties) {
        if (p.dim == 0 || p.dim > kMaxPartyDim) {
            throw DomainError("party '" + p.label + "' has dimension " + std::to_string(p.dim) + " outside 1.." +
                              std::to_string(kMaxPartyDim));
        }
    }
}

namespace {

std::vector<std::size_t> dims_of(const std::vector<Party>& parties) {
    std::vector<std::size_t> d;
    for (const auto& p : parties) {
        d.push_back(p.dim);
    }
    return d;
}

/// New axis i is old axis order[i].
Eigen::VectorXcd permute_tensor(const Eigen::VectorXcd& data, const std::vector<std::size_t>& dims,
                                std::span<const std::size_t> order) {
    std::size_t q = dims.size();
    std::vector<std::size_t> old_strides(q, 1);
    for (std::size_t a = q; a-- > 1;) {
        old_strides[a - 1] = old_strides[a] * dims[a];
    }
    // Stride in the old layout of each new axis.
    std::vector<std::size_t> new_dims(q), step(q);
    for (std::size_t i = 0; i < q; i++) {
        new_dims[i] = dims[order[i]];
        step[i] = old_strides[order[i]];
    }
    Eigen::VectorXcd out(data.size());
    std::vector<std::size_t> idx(q, 0);
    std::size_t src = 0;
    for (Eigen::Index dst = 0; dst < out.size(); dst++) {
        out[dst] = data[static_cast<Eigen::Index>(src)];
        for (std::size_t i = q; i-- > 0;) {
            idx[i]++;
            src += step[i];
            if (idx[i] < new_dims[i]) {
                break;
            }
            src -= step[i] * new_dims[i];
            idx[i] = 0;
        }
    }
    return out;
}

std::vector<std::size_t> split_order(std::size_t q, std::uint32_t mask) {
    std::vector<std::size_t> order;
    for (std::size_t a = 0; a < q; a++) {
        if (mask >> a & 1) {
            order.push_back(a);
        }
    }
    for (std::size_t a = 0; a < q; a++) {
        if (!(mask >> a & 1)) {
            order.push_back(a);
        }
    }
    return order;
}

/// Matrix M with rows indexed by the parties in mask and columns by the rest.
RowMajorMatrix cut_matrix(const PureState& psi, std::uint32_t mask) {
    auto dims = psi.dims();
    auto order = split_order(psi.q(), mask);
    std::size_t rows = 1;
    for (std::size_t a = 0; a < psi.q(); a++) {
        if (mask >> a & 1) {
            rows *= dims[a];
        }
    }
    Eigen::VectorXcd permuted = permute_tensor(psi.amplitudes(), dims, order);
    std::size_t cols = psi.total_dim() / rows;
    return Eigen::Map<const RowMajorMatrix>(permuted.data(), static_cast<Eigen::Index>(rows),
                                            static_cast<Eigen::Index>(cols));
}

std::vector<double> clamped_eigenvalues(const Eigen::MatrixXcd& hermitian) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(hermitian, Eigen::EigenvaluesOnly);
    std::vector<double> out;
    for (Eigen::Index i = 0; i < solver.eigenvalues().size(); i++) {
        double v = solver.eigenvalues()[i];
        if (v < -kEigenFloor) {
            throw PositivityError("negative eigenvalue " + std::to_string(v));
        }
        out.push_back(std::max(v, 0.0));
    }
    return out;
}

void check_mask(const PureState& psi, std::uint32_t mask) {
    if (mask == 0) {
        throw DomainError("empty party subset");
    }
    if ((mask & ~psi.full_mask()) != 0) {
        throw DomainError("party subset outside the state");
    }
}

}  // namespace

PureState::PureState(std::vector<Party> parties, Eigen::VectorXcd amplitudes)
    : parties_(std::move(parties)), amplitudes_(std::move(amplitudes)) {
    validate_parties(parties_);
    if (static_cast<std::size_t>(amplitudes_.size()) != product(dims_of(parties_))) {
        throw DomainError("amplitude count " + std::to_string(amplitudes_.size()) +
                          " does not match the party dimensions");
    }
    double n = amplitudes_.norm();
    if (!std::isfinite(n) || std::abs(n - 1.0) > kNormTolerance) {
        throw DomainError("state is not normalized (norm " + std::to_string(n) + ")");
    }
}

PureState PureState::renormalized(std::vector<Party> parties, Eigen::VectorXcd amplitudes) {
    double n = amplitudes.norm();
    if (!(n > 0) || !std::isfinite(n)) {
        throw DomainError("cannot renormalize a zero or non-finite vector");
    }
    amplitudes /= n;
    return PureState(std::move(parties), std::move(amplitudes));
}

std::vector<std::size_t> PureState::dims() const {
    return dims_of(parties_);
}

std::vector<std::string> PureState::labels() const {
    std::vector<std::string> out;
    for (const auto& p : parties_) {
        out.push_back(p.label);
    }
    return out;
}

std::size_t PureState::party_index(std::string_view label) const {
    for (std::size_t i = 0; i < parties_.size(); i++) {
        if (parties_[i].label == label) {
            return i;
        }
    }
    throw DomainError("unknown party label '" + std::string(label) + "'");
}

std::uint32_t PureState::mask_of(std::span<const std::string> labels) const {
    std::uint32_t mask = 0;
    for (const auto& l : labels) {
        auto bit = std::uint32_t{1} << party_index(l);
        if (mask & bit) {
            throw DomainError("party '" + l + "' repeated");
        }
        mask |= bit;
    }
    return mask;
}

std::uint32_t PureState::parse_subset(std::string_view text) const {
    std::vector<std::string> labels;
    if (text.find(',') != std::string_view::npos) {
        std::size_t start = 0;
        while (start <= text.size()) {
            auto end = text.find(',', start);
            if (end == std::string_view::npos) {
                end = text.size();
            }
            labels.emplace_back(text.substr(start, end - start));
            start = end + 1;
        }
        return mask_of(labels);
    }
    std::size_t pos = 0;
    while (pos < text.size()) {
        std::size_t best = 0;
        for (const auto& p : parties_) {
            if (p.label.size() > best && text.substr(pos, p.label.size()) == p.label) {
                best = p.label.size();
            }
        }
        if (best == 0) {
            throw DomainError("cannot match a party label at '" + std::string(text.substr(pos)) + "'");
        }
        labels.emplace_back(text.substr(pos, best));
        pos += best;
    }
    return mask_of(labels);
}

PartySetRef PureState::party_set() const {
    return make_party_set(labels(), kHardMaxParties);
}

DensityMatrix::DensityMatrix(std::vector<Party> parties, Eigen::MatrixXcd matrix)
    : parties_(std::move(parties)), matrix_(std::move(matrix)) {
    validate_parties(parties_);
    auto n = static_cast<Eigen::Index>(product(dims_of(parties_)));
    if (matrix_.rows() != n || matrix_.cols() != n) {
        throw DomainError("density matrix shape does not match the party dimensions");
    }
    if ((matrix_ - matrix_.adjoint()).cwiseAbs().maxCoeff() > kDensityTolerance) {
        throw DomainError("density matrix is not Hermitian");
    }
    if (std::abs(matrix_.trace() - Complex(1.0)) > kDensityTolerance) {
        throw DomainError("density matrix trace is not 1");
    }
    clamped_eigenvalues(matrix_);
}

std::vector<double> DensityMatrix::spectrum() const {
    return clamped_eigenvalues(matrix_);
}

PureState tensor_product(const PureState& a, const PureState& b, ProductMode mode) {
    Eigen::VectorXcd kron(a.total_dim() * b.total_dim());
    for (std::size_t i = 0; i < a.total_dim(); i++) {
        kron.segment(static_cast<Eigen::Index>(i * b.total_dim()), static_cast<Eigen::Index>(b.total_dim())) =
            a.amplitudes()[static_cast<Eigen::Index>(i)] * b.amplitudes();
    }
    if (mode == ProductMode::Disjoint) {
        std::vector<Party> parties = a.parties();
        for (const auto& p : b.parties()) {
            for (const auto& existing : a.parties()) {
                if (existing.label == p.label) {
                    throw DomainError("label '" + p.label + "' appears in both factors");
                }
            }
            parties.push_back(p);
        }
        return PureState::renormalized(std::move(parties), std::move(kron));
    }
    if (a.labels() != b.labels()) {
        throw DomainError("layer composition needs identical party labels in the same order");
    }
    std::size_t q = a.q();
    std::vector<std::size_t> dims = a.dims();
    for (auto d : b.dims()) {
        dims.push_back(d);
    }
    std::vector<std::size_t> order;
    for (std::size_t i = 0; i < q; i++) {
        order.push_back(i);
        order.push_back(q + i);
    }
    std::vector<Party> parties;
    for (std::size_t i = 0; i < q; i++) {
        parties.push_back({a.parties()[i].label, a.dim(i) * b.dim(i)});
    }
    return PureState::renormalized(std::move(parties), permute_tensor(kron, dims, order));
}

PureState permute_parties(const PureState& psi, std::span<const std::size_t> order) {
    if (order.size() != psi.q()) {
        throw DomainError("permutation length does not match the party count");
    }
    std::vector<bool> used(psi.q(), false);
    std::vector<Party> parties;
    for (auto o : order) {
        if (o >= psi.q() || used[o]) {
            throw DomainError("not a permutation of the parties");
        }
        used[o] = true;
        parties.push_back(psi.parties()[o]);
    }
    return PureState(std::move(parties), permute_tensor(psi.amplitudes(), psi.dims(), order));
}

PureState coarse_grain(const PureState& psi, const Partition& pi) {
    if (pi.q() != psi.q() || pi.party_set().labels() != psi.labels()) {
        throw DomainError("partition " + pi.to_string() + " is not over this state's parties");
    }
    std::vector<std::size_t> order;
    std::vector<Party> parties;
    for (auto block : pi.blocks()) {
        Party grouped{"", 1};
        for (std::size_t a = 0; a < psi.q(); a++) {
            if (block >> a & 1) {
                order.push_back(a);
                grouped.label += psi.parties()[a].label;
                grouped.dim *= psi.dim(a);
            }
        }
        parties.push_back(std::move(grouped));
    }
    // Concatenated labels can collide (e.g. "A"+"BC" vs "AB"+"C" never share a partition,
    // but "A1" and "A"+"1" could); disambiguate with a separator when that happens.
    for (std::size_t i = 0; i < parties.size(); i++) {
        for (std::size_t j = 0; j < i; j++) {
            if (parties[i].label == parties[j].label) {
                std::size_t k = 0;
                for (auto block : pi.blocks()) {
                    std::string label;
                    for (std::size_t a = 0; a < psi.q(); a++) {
                        if (block >> a & 1) {
                            label += (label.empty() ? "" : ",") + psi.parties()[a].label;
                        }
                    }
                    parties[k++].label = label;
                }
                i = parties.size();
                break;
            }
        }
    }
    Eigen::VectorXcd amps = permute_tensor(psi.amplitudes(), psi.dims(), order);
    return PureState(std::move(parties), std::move(amps));
}

PureState embed(const PureState& psi, std::size_t d) {
    auto dims = psi.dims();
    for (std::size_t a = 0; a < dims.size(); a++) {
        if (dims[a] > d) {
            throw DomainError("cannot embed party '" + psi.parties()[a].label + "' of dimension " +
                              std::to_string(dims[a]) + " into dimension " + std::to_string(d));
        }
    }
    std::vector<Party> parties;
    std::size_t total = 1;
    for (const auto& p : psi.parties()) {
        parties.push_back({p.label, d});
        total *= d;
        if (total > kMaxTotalDim) {
            throw SizeLimitError("embedded dimension exceeds " + std::to_string(kMaxTotalDim));
        }
    }
    Eigen::VectorXcd out = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(total));
    std::vector<std::size_t> idx(dims.size(), 0);
    for (Eigen::Index src = 0; src < psi.amplitudes().size(); src++) {
        std::size_t dst = 0;
        for (auto i : idx) {
            dst = dst * d + i;
        }
        out[static_cast<Eigen::Index>(dst)] = psi.amplitudes()[src];
        for (std::size_t a = dims.size(); a-- > 0;) {
            if (++idx[a] < dims[a]) {
                break;
            }
            idx[a] = 0;
        }
    }
    return PureState(std::move(parties), std::move(out));
}

DensityMatrix reduced_density(const PureState& psi, std::span<const std::string> subset) {
    return reduced_density(psi, psi.mask_of(subset));
}

DensityMatrix reduced_density(const PureState& psi, std::uint32_t mask) {
    check_mask(psi, mask);
    RowMajorMatrix m = cut_matrix(psi, mask);
    std::vector<Party> parties;
    for (std::size_t a = 0; a < psi.q(); a++) {
        if (mask >> a & 1) {
            parties.push_back(psi.parties()[a]);
        }
    }
    Eigen::MatrixXcd rho = m * m.adjoint();
    // Exact Hermitian symmetrization removes rounding asymmetry.
    rho = (0.5 * (rho + rho.adjoint())).eval();
    return DensityMatrix(std::move(parties), std::move(rho));
}

std::vector<double> subset_spectrum(const PureState& psi, std::uint32_t mask) {
    check_mask(psi, mask);
    if (mask == psi.full_mask()) {
        return {1.0};
    }
    RowMajorMatrix m = cut_matrix(psi, mask);
    Eigen::MatrixXcd gram = m.rows() <= m.cols() ? Eigen::MatrixXcd(m * m.adjoint()) : Eigen::MatrixXcd(m.adjoint() * m);
    return clamped_eigenvalues(gram);
}

PureState canonical_purification(const DensityMatrix& rho) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(rho.matrix());
    const auto& values = solver.eigenvalues();
    Eigen::VectorXd roots(values.size());
    for (Eigen::Index i = 0; i < values.size(); i++) {
        if (values[i] < -kEigenFloor) {
            throw PositivityError("density matrix has eigenvalue " + std::to_string(values[i]));
        }
        // Roundoff eigenvalues near 1e-17 would otherwise become 1e-9 amplitudes whose cross
        // terms dominate the error of entropies taken on the purification.
        roots[i] = values[i] < 1e-14 ? 0.0 : std::sqrt(values[i]);
    }
    const auto& v = solver.eigenvectors();
    // sqrt(rho)[x, y] = Σ_i sqrt(λ_i) v_i[x] conj(v_i[y]).
    Eigen::MatrixXcd root = v * roots.asDiagonal() * v.adjoint();
    auto n = root.rows();
    Eigen::VectorXcd flat(n * n);
    for (Eigen::Index x = 0; x < n; x++) {
        for (Eigen::Index y = 0; y < n; y++) {
            flat[x * n + y] = root(x, y);
        }
    }
    std::size_t m = rho.parties().size();
    std::vector<std::size_t> dims;
    for (int copy = 0; copy < 2; copy++) {
        for (const auto& p : rho.parties()) {
            dims.push_back(p.dim);
        }
    }
    std::vector<std::size_t> order;
    std::vector<Party> parties;
    for (std::size_t a = 0; a < m; a++) {
        order.push_back(a);
        order.push_back(m + a);
        parties.push_back(rho.parties()[a]);
        parties.push_back({rho.parties()[a].label + "*", rho.parties()[a].dim});
    }
    return PureState::renormalized(std::move(parties), permute_tensor(flat, dims, order));
}

Eigen::VectorXcd apply_local_operator(const PureState& psi, std::span<const std::size_t> targets,
                                      const Eigen::MatrixXcd& op) {
    std::uint32_t mask = 0;
    std::size_t target_dim = 1;
    for (auto t : targets) {
        if (t >= psi.q() || (mask >> t & 1)) {
            throw DomainError("invalid or repeated target party");
        }
        mask |= std::uint32_t{1} << t;
        target_dim *= psi.dim(t);
    }
    if (op.rows() != static_cast<Eigen::Index>(target_dim) || op.cols() != static_cast<Eigen::Index>(target_dim)) {
        throw DomainError("operator shape does not match the targeted parties");
    }
    std::vector<std::size_t> order(targets.begin(), targets.end());
    for (std::size_t a = 0; a < psi.q(); a++) {
        if (!(mask >> a & 1)) {
            order.push_back(a);
        }
    }
    auto dims = psi.dims();
    Eigen::VectorXcd permuted = permute_tensor(psi.amplitudes(), dims, order);
    std::size_t rest = psi.total_dim() / target_dim;
    RowMajorMatrix m = Eigen::Map<const RowMajorMatrix>(permuted.data(), static_cast<Eigen::Index>(target_dim),
                                                        static_cast<Eigen::Index>(rest));
    RowMajorMatrix applied = op * m;
    Eigen::VectorXcd flat = Eigen::Map<const Eigen::VectorXcd>(applied.data(), applied.size());
    // Undo the permutation.
    std::vector<std::size_t> permuted_dims;
    for (auto o : order) {
        permuted_dims.push_back(dims[o]);
    }
    std::vector<std::size_t> inverse(order.size());
    for (std::size_t i = 0; i < order.size(); i++) {
        inverse[order[i]] = i;
    }
    return permute_tensor(flat, permuted_dims, inverse);
}

PureState apply_local_unitaries(const PureState& psi, const std::vector<Eigen::MatrixXcd>& unitaries) {
    if (unitaries.size() != psi.q()) {
        throw DomainError("need one unitary per party");
    }
    Eigen::VectorXcd amps = psi.amplitudes();
    for (std::size_t a = 0; a < psi.q(); a++) {
        PureState current(psi.parties(), amps);
        std::size_t target = a;
        amps = apply_local_operator(current, std::span<const std::size_t>(&target, 1), unitaries[a]);
    }
    return PureState::renormalized(psi.parties(), std::move(amps));
}

std::vector<KrausOutcome> apply_kraus(const PureState& psi, const std::vector<KrausOperator>& ops) {
    if (ops.empty()) {
        throw ContractError("empty Kraus set");
    }
    const auto& targets = ops.front().targets;
    std::vector<std::size_t> indices;
    for (const auto& t : targets) {
        indices.push_back(psi.party_index(t));
    }
    std::size_t dim = 1;
    for (auto i : indices) {
        dim *= psi.dim(i);
    }
    Eigen::MatrixXcd completeness = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
    for (const auto& op : ops) {
        if (op.targets != targets) {
            throw ContractError("all Kraus operators must act on the same parties");
        }
        if (op.matrix.rows() != static_cast<Eigen::Index>(dim) || op.matrix.cols() != static_cast<Eigen::Index>(dim)) {
            throw ContractError("Kraus operator shape does not match the targeted factor");
        }
        completeness += op.matrix.adjoint() * op.matrix;
    }
    double defect = (completeness - Eigen::MatrixXcd::Identity(completeness.rows(), completeness.cols())).cwiseAbs().maxCoeff();
    if (defect > 1e-10) {
        throw ContractError("Kraus set is not trace preserving (defect " + std::to_string(defect) + ")");
    }
    std::vector<KrausOutcome> out;
    for (const auto& op : ops) {
        Eigen::VectorXcd v = apply_local_operator(psi, indices, op.matrix);
        double p = v.squaredNorm();
        if (p > 1e-15) {
            out.push_back({p, PureState::renormalized(psi.parties(), std::move(v))});
        } else {
            out.push_back({p, std::nullopt});
        }
    }
    return out;
}

PureState restrict_local_support(const PureState& psi, const std::vector<std::vector<std::size_t>>& kept) {
    if (kept.size() != psi.q()) {
        throw DomainError("need one kept-index list per party");
    }
    std::vector<Party> parties;
    std::size_t total = 1;
    for (std::size_t a = 0; a < psi.q(); a++) {
        if (kept[a].empty()) {
            throw DomainError("party '" + psi.parties()[a].label + "' keeps no basis vectors");
        }
        for (auto k : kept[a]) {
            if (k >= psi.dim(a)) {
                throw DomainError("kept index out of range");
            }
        }
        parties.push_back({psi.parties()[a].label, kept[a].size()});
        total *= kept[a].size();
    }
    auto dims = psi.dims();
    Eigen::VectorXcd out(static_cast<Eigen::Index>(total));
    std::vector<std::size_t> idx(psi.q(), 0);
    for (Eigen::Index dst = 0; dst < out.size(); dst++) {
        std::size_t src = 0;
        for (std::size_t a = 0; a < psi.q(); a++) {
            src = src * dims[a] + kept[a][idx[a]];
        }
        out[dst] = psi.amplitudes()[static_cast<Eigen::Index>(src)];
        for (std::size_t a = psi.q(); a-- > 0;) {
            if (++idx[a] < kept[a].size()) {
                break;
            }
            idx[a] = 0;
        }
    }
    return PureState(std::move(parties), std::move(out));
}

double amplitude_distance(const PureState& a, const PureState& b) {
    if (a.dims() != b.dims()) {
        throw DomainError("states have different shapes");
    }
    return (a.amplitudes() - b.amplitudes()).norm();
}

}  // namespace gme
