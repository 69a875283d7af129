#include "gme/random.h"

#include <cmath>
#include <numbers>

namespace gme {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

}  // namespace

CounterRng::CounterRng(std::uint64_t seed, std::uint64_t stream)
    : key_(splitmix64(seed ^ splitmix64(stream + 0x632be59bd9b4e019ULL))) {}

std::uint64_t CounterRng::next_u64() {
    return splitmix64(key_ + splitmix64(counter_++));
}

double CounterRng::uniform() {
    // 53 random bits, shifted off zero.
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
}

double CounterRng::normal() {
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    double u1 = uniform();
    double u2 = uniform();
    double r = std::sqrt(-2.0 * std::log(u1));
    double t = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(t);
    has_spare_ = true;
    return r * std::cos(t);
}

std::complex<double> CounterRng::complex_normal() {
    double re = normal();
    double im = normal();
    return {re, im};
}

std::uint64_t CounterRng::below(std::uint64_t bound) {
    return bound == 0 ? 0 : next_u64() % bound;
}

CounterRng CounterRng::split(std::uint64_t stream) const {
    return CounterRng(key_ ^ counter_, stream);
}

Eigen::MatrixXcd random_unitary(std::size_t dim, CounterRng& rng) {
    Eigen::MatrixXcd m(dim, dim);
    for (std::size_t i = 0; i < dim; i++) {
        for (std::size_t j = 0; j < dim; j++) {
            m(i, j) = rng.complex_normal();
        }
    }
    Eigen::HouseholderQR<Eigen::MatrixXcd> qr(m);
    Eigen::MatrixXcd q = qr.householderQ();
    Eigen::MatrixXcd r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (std::size_t i = 0; i < dim; i++) {
        double mag = std::abs(r(i, i));
        if (mag > 0) {
            q.col(i) *= r(i, i) / mag;
        }
    }
    return q;
}

}  // namespace gme
