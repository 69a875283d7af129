#pragma once

#include <complex>
#include <cstdint>

#include <Eigen/Dense>

namespace gme {

/// Counter-based generator: the k-th draw is splitmix64(seed, k). Deterministic per seed and
/// independent of draw order between streams created with different stream ids.
class CounterRng {
   public:
    explicit CounterRng(std::uint64_t seed, std::uint64_t stream = 0);

    std::uint64_t next_u64();
    /// Uniform in (0, 1).
    double uniform();
    /// Standard normal via Box–Muller; the second variate of each pair is cached.
    double normal();
    std::complex<double> complex_normal();
    std::uint64_t below(std::uint64_t bound);

    /// Independent child stream.
    CounterRng split(std::uint64_t stream) const;

   private:
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
    bool has_spare_ = false;
    double spare_ = 0;
};

/// Haar-random unitary: complex Gaussian matrix, QR, phases of R's diagonal removed.
Eigen::MatrixXcd random_unitary(std::size_t dim, CounterRng& rng);

}  // namespace gme
