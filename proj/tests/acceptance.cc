// Acceptance runner: one PASS/FAIL line per criterion, exit 0 iff all pass.

#include <bit>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <sys/wait.h>

#include <Eigen/Dense>

#include "gme/harness.h"
#include "gme/partition.h"
#include "gme/seed_family.h"
#include "gme/signal.h"
#include "gme/state_factory.h"

namespace {

using namespace gme;
using Clock = std::chrono::steady_clock;

struct Outcome {
    bool pass = true;
    std::vector<std::string> notes;

    void require(bool ok, const std::string& what) {
        if (!ok) {
            pass = false;
            notes.push_back("failed: " + what);
        }
    }
};

/// Folds failing check names of a report into the outcome.
void absorb(Outcome& out, const Report& r) {
    for (const auto& s : r.suites) {
        if (s.error) {
            out.require(false, s.name + " threw: " + *s.error);
        }
        for (const auto& c : s.checks) {
            std::ostringstream os;
            os << s.name << " / " << c.name << " (value " << c.value << ")";
            out.require(c.pass, os.str());
        }
    }
}

Outcome criterion1() {
    Outcome out;
    std::size_t pairs = 0;
    for (std::size_t q = 1; q <= 5; q++) {
        PartitionLattice lat(letter_parties(q));
        std::size_t n = lat.size();
        for (std::size_t k = 0; k < n; k++) {
            for (std::size_t p = 0; p < n; p++) {
                if (!lat.leq(k, p)) {
                    continue;
                }
                pairs++;
                std::int64_t sum = 0;
                for (std::size_t t = 0; t < n; t++) {
                    if (lat.leq(k, t) && lat.leq(t, p)) {
                        sum += mobius(lat.at(k), lat.at(t));
                    }
                }
                if (sum != (k == p ? 1 : 0)) {
                    out.require(false, "relation at q=" + std::to_string(q) + " " + lat.at(k).to_string() + " <= " +
                                           lat.at(p).to_string());
                }
            }
        }
    }
    out.notes.push_back(std::to_string(pairs) + " comparable pairs");
    return out;
}

Outcome criterion2() {
    Outcome out;
    ScenarioOptions q4;
    q4.q = 4;
    absorb(out, run_scenario("kernel-oracle-sweep", q4));
    ScenarioOptions q5;
    q5.q = 5;
    q5.samples = 50;
    absorb(out, run_scenario("kernel-oracle-sweep", q5));
    return out;
}

/// A purity-reduced q-information as printed: "c(S_X+...)" puts c on every subset of that
/// size; a lone "c S_A" is the single subset A (the by_size entry then carries only_first).
SubsetExpansion printed_q_information(std::size_t q, const std::vector<std::pair<std::size_t, int>>& by_size,
                                      bool only_first = false) {
    auto ps = letter_parties(q);
    SubsetExpansion e(ps, 2);
    if (only_first) {
        e.add(1, Rational(by_size.at(0).second));
        return e.reduce_pure(SubsetExpansion::Fold::Canonical);
    }
    for (std::uint32_t m = 1; m + 1 < (std::uint32_t{1} << q); m++) {
        for (const auto& [size, c] : by_size) {
            if (static_cast<std::size_t>(std::popcount(m)) == size) {
                e.add(m, Rational(c));
            }
        }
    }
    return e.reduce_pure(SubsetExpansion::Fold::Canonical);
}

Outcome criterion3() {
    Outcome out;
    auto table = TupleTable(std::vector<PermutationTuple>{
        PermutationTuple::from_one_based({{1, 2}, {2, 1}}),
        PermutationTuple::from_one_based({{1, 2, 3, 4}, {2, 1, 4, 3}, {3, 4, 1, 2}}),
        PermutationTuple::from_one_based(
            {{1, 2, 3, 4, 5, 6, 7, 8}, {2, 1, 4, 3, 6, 5, 8, 7}, {3, 4, 1, 2, 7, 8, 5, 6}, {5, 6, 7, 8, 1, 2, 3, 4}})});
    auto multi = SeedFamily::log_multi_invariant(table);
    auto grouped = [&](std::size_t q, SignalMode mode, std::size_t index) {
        return render_grouped(expand_grouped(build_signal_basis(multi, q, mode).at(index), true));
    };
    auto compare = [&](const std::string& label, const std::string& got, const std::string& printed) {
        out.require(got == printed, label + ": got \"" + got + "\", printed \"" + printed + "\"");
    };
    compare("q=2 pre-signal", grouped(2, SignalMode::PreSignal, 0), "-S_2(A,B)");
    compare("q=3 pre-signal", grouped(3, SignalMode::PreSignal, 0), "-(S_2(AB,C)+...) +2 S_3(A,B,C)");
    compare("q=4 M_1", grouped(4, SignalMode::Signal, 0),
            "-(S_2(ABC,D)+...) -(S_2(AB,CD)+...) +2(S_3(AB,C,D)+...) -6 S_4(A,B,C,D)");
    compare("q=4 M_AB|CD", grouped(4, SignalMode::Signal, 1), "-S_3(A,B,CD) -S_3(AB,C,D) +S_4(A,B,C,D)");

    auto ours = [](std::size_t q) {
        return subset_expansion(q_information(q, 2)).reduce_pure(SubsetExpansion::Fold::Canonical);
    };
    auto coeffs = [](const SubsetExpansion& e) {
        std::ostringstream os;
        for (const auto& [m, c] : e.coefficients()) {
            os << m << ":" << to_string(c) << " ";
        }
        return os.str();
    };
    struct Printed {
        std::size_t q;
        std::vector<std::pair<std::size_t, int>> by_size;
        bool single = false;
    };
    // -2 S_A; (S_AB+...) -2(S_A+...); (S_ABC+...) -2(S_AB+...) +2(S_A+...).
    for (const auto& p : {Printed{2, {{1, -2}}, true}, Printed{4, {{2, 1}, {1, -2}}},
                          Printed{6, {{3, 1}, {2, -2}, {1, 2}}}}) {
        auto got = ours(p.q), printed = printed_q_information(p.q, p.by_size, p.single);
        out.require(got == printed, "q=" + std::to_string(p.q) + " q-information coefficients: got " + coeffs(got) +
                                        "printed " + coeffs(printed));
    }
    return out;
}

Outcome criterion4() {
    Outcome out;
    VerifyOptions o;
    o.q_max = 4;
    absorb(out, run_verify({"presignal-vanishing", "signal-vanishing"}, o));
    return out;
}

Outcome criterion5() {
    Outcome out;
    absorb(out, run_verify({"pure-state-vanishing", "q-information"}, {}));
    return out;
}

Outcome criterion6() {
    Outcome out;
    absorb(out, run_scenario("appendix-a-locc"));
    return out;
}

Outcome criterion7() {
    Outcome out;
    VerifyOptions o;
    o.q_max = 4;
    absorb(out, run_verify({"z-bound", "z-relabeling", "layer-additivity", "minimal-signal-vanishing"}, o));
    double ghz = evaluate_nonsymmetric(shipped_minimal_signal_q3(), catalog_state("ghz", 3, 2));
    out.require(std::abs(ghz) > 1e-3, "shipped minimal signal on GHZ_3 is " + std::to_string(ghz));
    return out;
}

/// S_2 of every proper subset by explicit reshaping and an Eigen eigen-solve, independent of
/// the library's reduced-density code.
double oracle_q_information_ghz4() {
    const std::size_t q = 4;
    Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(16);
    psi(0) = psi(15) = 1 / std::sqrt(2.0);
    double total = 0;
    for (std::uint32_t m = 1; m + 1 < (1u << q); m++) {
        int k = std::popcount(m);
        Eigen::MatrixXcd mat = Eigen::MatrixXcd::Zero(1 << k, 1 << (q - k));
        for (std::uint32_t idx = 0; idx < 16; idx++) {
            std::uint32_t row = 0, col = 0;
            for (std::size_t a = 0; a < q; a++) {
                std::uint32_t bit = idx >> (q - 1 - a) & 1;
                if (m >> a & 1) {
                    row = row << 1 | bit;
                } else {
                    col = col << 1 | bit;
                }
            }
            mat(row, col) = psi(idx);
        }
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(mat * mat.adjoint());
        double purity = es.eigenvalues().array().square().sum();
        double sign = (q - k) % 2 == 0 ? 1.0 : -1.0;
        total += sign * -std::log(purity);
    }
    return total;
}

Outcome criterion8() {
    Outcome out;
    double value = evaluate(q_information(4, 2), catalog_state("ghz", 4, 2));
    double oracle = oracle_q_information_ghz4();
    out.require(std::abs(value + 2 * std::log(2.0)) < 1e-9, "value " + std::to_string(value) + " vs -2 ln 2");
    out.require(std::abs(value - oracle) < 1e-9, "value " + std::to_string(value) + " vs oracle " + std::to_string(oracle));
    return out;
}

Outcome criterion9() {
    Outcome out;
    std::string cmd = std::string(GME_CLI_PATH) + " verify all --q-max 4 --seed 1 --json > /dev/null";
    int status = std::system(cmd.c_str());
    int code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    out.require(code == 0, "gme verify all exited " + std::to_string(code));
    return out;
}

}  // namespace

int main() {
    struct Criterion {
        int id;
        const char* what;
        double limit_seconds;
        std::function<Outcome()> run;
    };
    const std::vector<Criterion> criteria = {
        {1, "Möbius defining relation, all pairs q <= 5", 5, criterion1},
        {2, "downset kernels: all at q=4, 50 random at q=5", 60, criterion2},
        {3, "printed coefficient tables", 0, criterion3},
        {4, "pre-signal and signal vanishing suites", 60, criterion4},
        {5, "pure-state vanishing and q-information equivalence", 0, criterion5},
        {6, "Kraus scenario", 0, criterion6},
        {7, "multi-invariant contracts and minimal signals", 0, criterion7},
        {8, "GHZ_4 n=2 q-information = -2 ln 2", 0, criterion8},
        {9, "gme verify all --q-max 4", 180, criterion9},
    };
    bool all = true;
    for (const auto& c : criteria) {
        auto start = Clock::now();
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o.require(false, std::string("threw: ") + e.what());
        }
        double secs = std::chrono::duration<double>(Clock::now() - start).count();
        if (c.limit_seconds > 0) {
            std::ostringstream os;
            os << "runtime " << secs << " s exceeds " << c.limit_seconds << " s";
            o.require(secs < c.limit_seconds, os.str());
        }
        all = all && o.pass;
        std::printf("criterion %d: %s  %s (%.3f s)\n", c.id, o.pass ? "PASS" : "FAIL", c.what, secs);
        for (const auto& n : o.notes) {
            std::printf("    %s\n", n.c_str());
        }
    }
    std::fflush(stdout);
    return all ? 0 : 1;
}
