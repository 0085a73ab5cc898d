#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <complex>
#include <sstream>

#include "spikedet/qubo.hpp"

using namespace spikedet;

namespace {

BitVec random_bits(int count, Rng& rng) {
    BitVec bits(count);
    for (auto& b : bits) b = static_cast<std::uint8_t>(rng.next_u64() & 1u);
    return bits;
}

RealSystem random_system(int bs, int streams, double snr_db, std::uint64_t seed) {
    Rng ch_rng(derive_seed(seed, 11));
    const ChannelMatrix ch = generate_rayleigh_channel(bs, streams, ch_rng);
    Rng bit_rng(derive_seed(seed, 12));
    const TxSymbolVector x = bits_to_qpsk(random_bits(2 * streams, bit_rng));
    Rng noise_rng(derive_seed(seed, 13));
    const Eigen::VectorXcd y = transmit(ch, x, SnrSpec::from_db(snr_db), noise_rng);
    return complex_to_real(ch, y);
}

Eigen::VectorXd lattice_point(const BitVec& b, double alpha) {
    Eigen::VectorXd x(static_cast<Eigen::Index>(b.size()));
    for (std::size_t j = 0; j < b.size(); ++j)
        x(static_cast<Eigen::Index>(j)) = b[j] ? 1.0 / alpha : -1.0 / alpha;
    return x;
}

BitVec bits_from_code(unsigned code, int n) {
    // b[0] is the most significant bit, matching the ml tie-break order.
    BitVec bits(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j)
        bits[static_cast<std::size_t>(j)] =
            static_cast<std::uint8_t>((code >> (n - 1 - j)) & 1u);
    return bits;
}

}  // namespace

TEST_CASE("single-user worked example") {
    // H = [1], y = (1+1j)/sqrt(2): the transmitted symbol is exactly
    // (1+1j)/sqrt(2), so b = [1, 1] must be optimal with zero residual.
    ChannelMatrix ch;
    ch.entries.resize(1, 1);
    ch.entries(0, 0) = std::complex<double>(1.0, 0.0);
    Eigen::VectorXcd y(1);
    y(0) = std::complex<double>(1.0 / kQpskAlpha, 1.0 / kQpskAlpha);
    const RealSystem sys = complex_to_real(ch, y);
    const QuboInstance inst = build_qubo(sys, kQpskAlpha);

    CHECK(inst.Q(0, 0) == doctest::Approx(-2.0).epsilon(1e-12));
    CHECK(inst.Q(1, 1) == doctest::Approx(-2.0).epsilon(1e-12));
    CHECK(inst.Q(0, 1) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(inst.Q(1, 0) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(inst.constant == doctest::Approx(4.0).epsilon(1e-12));

    CHECK(objective(inst, {1, 1}) == doctest::Approx(-4.0).epsilon(1e-12));
    CHECK(objective_with_constant(inst, {1, 1}) ==
          doctest::Approx(0.0).scale(1.0).epsilon(1e-12));

    const MlResult ml = ml_brute_force(sys, kQpskAlpha);
    CHECK(ml.bits == BitVec{1, 1});
    CHECK(ml.value == doctest::Approx(0.0).scale(1.0).epsilon(1e-12));
}

TEST_CASE("objective matches the quadratic form on a hand example") {
    QuboInstance inst;
    inst.Q.resize(2, 2);
    inst.Q << 1.0, 2.0, 2.0, 3.0;
    inst.constant = 5.0;
    inst.alpha = kQpskAlpha;
    CHECK(objective(inst, {0, 0}) == 0.0);
    CHECK(objective(inst, {1, 0}) == 1.0);
    CHECK(objective(inst, {0, 1}) == 3.0);
    CHECK(objective(inst, {1, 1}) == 8.0);  // 1 + 3 + 2*2
    CHECK(objective_with_constant(inst, {1, 1}) == 13.0);
    CHECK_THROWS_AS(objective(inst, {1}), std::invalid_argument);
}

TEST_CASE("QUBO objective equals the lattice residual for every bit vector") {
    for (int streams = 1; streams <= 3; ++streams) {
        for (std::uint64_t seed = 0; seed < 15; ++seed) {
            const int n = 2 * streams;
            const RealSystem sys =
                random_system(2 * streams + 1, streams, 8.0, 100 * streams + seed);
            const QuboInstance inst = build_qubo(sys, kQpskAlpha);
            for (unsigned code = 0; code < (1u << n); ++code) {
                const BitVec b = bits_from_code(code, n);
                const double qv = objective_with_constant(inst, b);
                const double rv =
                    (sys.y - sys.H * lattice_point(b, kQpskAlpha)).squaredNorm();
                CHECK(std::abs(qv - rv) <= 1e-9 * std::max(1.0, std::abs(rv)));
            }
        }
    }
}

TEST_CASE("exhaustive QUBO argmin matches ml_brute_force") {
    for (std::uint64_t seed = 0; seed < 25; ++seed) {
        const int streams = 1 + static_cast<int>(seed % 4);
        const int n = 2 * streams;
        const RealSystem sys = random_system(3 * streams, streams, 6.0, 500 + seed);
        const QuboInstance inst = build_qubo(sys, kQpskAlpha);

        BitVec best;
        double best_value = 0.0;
        for (unsigned code = 0; code < (1u << n); ++code) {
            const BitVec b = bits_from_code(code, n);
            const double value = objective(inst, b);
            if (best.empty() || value < best_value) {
                best = b;
                best_value = value;
            }
        }
        CHECK(ml_brute_force(sys, kQpskAlpha).bits == best);
    }
}

TEST_CASE("build_qubo output is exactly symmetric") {
    const RealSystem sys = random_system(8, 3, 10.0, 9);
    const QuboInstance inst = build_qubo(sys, kQpskAlpha);
    CHECK((inst.Q - inst.Q.transpose()).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("build_qubo validates inputs") {
    RealSystem sys;
    sys.H = Eigen::MatrixXd::Identity(3, 3);  // odd column count
    sys.y = Eigen::VectorXd::Zero(3);
    CHECK_THROWS_AS(build_qubo(sys, kQpskAlpha), std::invalid_argument);

    RealSystem mismatched;
    mismatched.H = Eigen::MatrixXd::Identity(4, 2);
    mismatched.y = Eigen::VectorXd::Zero(3);
    CHECK_THROWS_AS(build_qubo(mismatched, kQpskAlpha), std::invalid_argument);

    const RealSystem ok = random_system(4, 2, 5.0, 1);
    CHECK_THROWS_AS(build_qubo(ok, 0.0), std::invalid_argument);
}

TEST_CASE("observation update reproduces a fresh build bit for bit") {
    Rng ch_rng(derive_seed(321, 11));
    const ChannelMatrix ch = generate_rayleigh_channel(8, 3, ch_rng);
    Rng bit_rng(derive_seed(321, 12));
    Rng noise_rng(derive_seed(321, 13));
    const SnrSpec snr = SnrSpec::from_db(10.0);

    const TxSymbolVector x1 = bits_to_qpsk(random_bits(6, bit_rng));
    const RealSystem sys1 = complex_to_real(ch, transmit(ch, x1, snr, noise_rng));
    const TxSymbolVector x2 = bits_to_qpsk(random_bits(6, bit_rng));
    const RealSystem sys2 = complex_to_real(ch, transmit(ch, x2, snr, noise_rng));

    const QuboInstance first = build_qubo(sys1, kQpskAlpha);
    const QuboInstance fresh = build_qubo(sys2, kQpskAlpha);
    const QuboInstance updated = update_observation(first, sys2);

    CHECK((updated.Q.array() == fresh.Q.array()).all());
    CHECK(updated.constant == fresh.constant);
    CHECK(updated.alpha == fresh.alpha);

    // Off-diagonal couplings are carried over untouched.
    for (Eigen::Index i = 0; i < first.size(); ++i)
        for (Eigen::Index j = 0; j < first.size(); ++j)
            if (i != j) CHECK(updated.Q(i, j) == first.Q(i, j));

    CHECK_THROWS_AS(update_observation(first, random_system(8, 2, 10.0, 4)),
                    std::invalid_argument);
}

TEST_CASE("a centered observation leaves a pure Gram matrix") {
    // y = -(1/alpha) H 1 zeroes the linear term: Q becomes PSD and the
    // all-zero vector is optimal with zero residual.
    const RealSystem base = random_system(6, 2, 10.0, 17);
    RealSystem sys = base;
    sys.y = -(1.0 / kQpskAlpha) * sys.H.rowwise().sum();
    const QuboInstance inst = build_qubo(sys, kQpskAlpha);

    CHECK(inst.constant == doctest::Approx(0.0).scale(1.0).epsilon(1e-9));
    for (Eigen::Index j = 0; j < inst.size(); ++j) CHECK(inst.Q(j, j) > 0.0);

    const MlResult ml = ml_brute_force(sys, kQpskAlpha);
    CHECK(ml.bits == BitVec{0, 0, 0, 0});
    CHECK(objective(inst, ml.bits) == 0.0);
}

TEST_CASE("ml_brute_force recovers the transmitted bits without noise") {
    Rng ch_rng(derive_seed(7, 11));
    const ChannelMatrix ch = generate_rayleigh_channel(6, 2, ch_rng);
    const BitVec bits = {1, 0, 0, 1};
    Rng unused(0);
    const Eigen::VectorXcd y =
        transmit(ch, bits_to_qpsk(bits), SnrSpec::noiseless(), unused);
    const MlResult ml = ml_brute_force(complex_to_real(ch, y), kQpskAlpha);
    CHECK(ml.bits == bits);
    CHECK(ml.value == doctest::Approx(0.0).scale(1.0).epsilon(1e-18));
}

TEST_CASE("ml_brute_force breaks ties toward the lowest MSB-first pattern") {
    // Zero observation over an identity-like channel: all four candidates
    // have identical residual ||x||^2, so [0, 0] must win.
    ChannelMatrix ch;
    ch.entries.resize(1, 1);
    ch.entries(0, 0) = std::complex<double>(1.0, 0.0);
    Eigen::VectorXcd y(1);
    y(0) = std::complex<double>(0.0, 0.0);
    const MlResult ml = ml_brute_force(complex_to_real(ch, y), kQpskAlpha);
    CHECK(ml.bits == BitVec{0, 0});
}

TEST_CASE("ml_brute_force rejects oversized problems") {
    RealSystem sys;
    sys.H = Eigen::MatrixXd::Identity(26, 26);
    sys.y = Eigen::VectorXd::Zero(26);
    CHECK_THROWS_AS(ml_brute_force(sys, kQpskAlpha), std::invalid_argument);
}

TEST_CASE("count_local_minima on frozen hand instances") {
    QuboInstance inst;
    inst.alpha = kQpskAlpha;

    // -2 I: unique minimum at all-ones.
    inst.Q = -2.0 * Eigen::MatrixXd::Identity(2, 2);
    CHECK(count_local_minima(inst) == 1);
    CHECK(count_local_minima(inst, MinimaRule::Strict) == 1);

    // All-zero landscape: every state is a plateau minimum, none strict.
    inst.Q = Eigen::MatrixXd::Zero(3, 3);
    CHECK(count_local_minima(inst) == 8);
    CHECK(count_local_minima(inst, MinimaRule::Strict) == 0);

    // +I: unique minimum at all-zeros.
    inst.Q = Eigen::MatrixXd::Identity(2, 2);
    CHECK(count_local_minima(inst) == 1);
    CHECK(count_local_minima(inst, MinimaRule::Strict) == 1);
}

TEST_CASE("count_local_minima agrees with a naive flip scan") {
    const RealSystem sys = random_system(6, 4, 5.0, 33);
    const QuboInstance inst = build_qubo(sys, kQpskAlpha);
    const int n = static_cast<int>(inst.size());

    long naive = 0;
    for (unsigned code = 0; code < (1u << n); ++code) {
        const BitVec b = bits_from_code(code, n);
        const double here = objective(inst, b);
        bool is_min = true;
        for (int j = 0; j < n && is_min; ++j) {
            BitVec flipped = b;
            flipped[static_cast<std::size_t>(j)] ^= 1u;
            if (objective(inst, flipped) - here < 0.0) is_min = false;
        }
        if (is_min) ++naive;
    }
    CHECK(count_local_minima(inst) == naive);
}

TEST_CASE("count_local_minima rejects degenerate instances") {
    QuboInstance inst;
    inst.Q.resize(0, 0);
    CHECK_THROWS_AS(count_local_minima(inst), std::invalid_argument);
    inst.Q = Eigen::MatrixXd::Zero(25, 25);
    CHECK_THROWS_AS(count_local_minima(inst), std::invalid_argument);
}

TEST_CASE("normalization rescales to unit peak and keeps the argmin") {
    const RealSystem sys = random_system(6, 2, 8.0, 41);
    const QuboInstance inst = build_qubo(sys, kQpskAlpha);
    const QuboInstance scaled = inst.normalized();
    CHECK(scaled.Q.cwiseAbs().maxCoeff() == doctest::Approx(1.0).epsilon(1e-12));

    const int n = static_cast<int>(inst.size());
    BitVec best_raw, best_scaled;
    double raw_value = 0.0, scaled_value = 0.0;
    for (unsigned code = 0; code < (1u << n); ++code) {
        const BitVec b = bits_from_code(code, n);
        const double rv = objective(inst, b);
        const double sv = objective(scaled, b);
        if (best_raw.empty() || rv < raw_value) {
            best_raw = b;
            raw_value = rv;
        }
        if (best_scaled.empty() || sv < scaled_value) {
            best_scaled = b;
            scaled_value = sv;
        }
    }
    CHECK(best_raw == best_scaled);

    QuboInstance zero;
    zero.Q = Eigen::MatrixXd::Zero(2, 2);
    CHECK(zero.normalized().Q.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("write_matrix round-trips through text") {
    const RealSystem sys = random_system(5, 2, 12.0, 55);
    const QuboInstance inst = build_qubo(sys, kQpskAlpha);
    std::ostringstream out;
    write_matrix(inst, out);

    std::istringstream in(out.str());
    Eigen::Index n = 0;
    double constant = 0.0, alpha = 0.0;
    in >> n >> constant >> alpha;
    CHECK(n == inst.size());
    CHECK(constant == inst.constant);  // 17 significant digits round-trip
    CHECK(alpha == inst.alpha);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) {
            double v = 0.0;
            in >> v;
            CHECK(v == inst.Q(i, j));
        }
    }
}
