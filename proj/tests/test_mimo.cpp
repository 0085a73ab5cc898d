#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <complex>

#include "spikedet/mimo.hpp"

using namespace spikedet;

namespace {

BitVec random_bits(int count, Rng& rng) {
    BitVec bits(count);
    for (auto& b : bits) b = static_cast<std::uint8_t>(rng.next_u64() & 1u);
    return bits;
}

}  // namespace

TEST_CASE("channel generation is seed-deterministic") {
    Rng a(11), b(11);
    const ChannelMatrix ca = generate_rayleigh_channel(8, 4, a);
    const ChannelMatrix cb = generate_rayleigh_channel(8, 4, b);
    CHECK((ca.entries - cb.entries).cwiseAbs().maxCoeff() == 0.0);

    Rng c(12);
    const ChannelMatrix cc = generate_rayleigh_channel(8, 4, c);
    CHECK((ca.entries - cc.entries).cwiseAbs().maxCoeff() > 0.0);
}

TEST_CASE("channel generation rejects bad dimensions") {
    Rng rng(1);
    CHECK_THROWS_AS(generate_rayleigh_channel(4, 0, rng), std::invalid_argument);
    CHECK_THROWS_AS(generate_rayleigh_channel(3, 4, rng), std::invalid_argument);
}

TEST_CASE("channel entries have unit average power") {
    Rng rng(77);
    const ChannelMatrix ch = generate_rayleigh_channel(64, 16, rng);
    const double mean_power = ch.entries.cwiseAbs2().mean();
    CHECK(mean_power > 0.8);
    CHECK(mean_power < 1.2);
}

TEST_CASE("bits map to QPSK with the real-stacked index order") {
    // Bit k drives Re(symbol k), bit K+k drives Im(symbol k).
    const TxSymbolVector x = bits_to_qpsk({1, 0, 0, 1});
    const double a = 1.0 / kQpskAlpha;
    CHECK(x.symbols(0).real() == doctest::Approx(a).epsilon(1e-15));
    CHECK(x.symbols(0).imag() == doctest::Approx(-a).epsilon(1e-15));
    CHECK(x.symbols(1).real() == doctest::Approx(-a).epsilon(1e-15));
    CHECK(x.symbols(1).imag() == doctest::Approx(a).epsilon(1e-15));
}

TEST_CASE("QPSK symbols have unit energy") {
    const TxSymbolVector x = bits_to_qpsk({0, 1, 1, 0, 1, 1});
    for (Eigen::Index i = 0; i < x.symbols.size(); ++i)
        CHECK(std::norm(x.symbols(i)) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("bits_to_qpsk rejects odd or empty inputs") {
    CHECK_THROWS_AS(bits_to_qpsk({}), std::invalid_argument);
    CHECK_THROWS_AS(bits_to_qpsk({1, 0, 1}), std::invalid_argument);
}

TEST_CASE("noiseless transmit equals the channel product") {
    Rng rng(5);
    const ChannelMatrix ch = generate_rayleigh_channel(6, 2, rng);
    const TxSymbolVector x = bits_to_qpsk({1, 0, 1, 1});
    Rng unused(0);
    const Eigen::VectorXcd y = transmit(ch, x, SnrSpec::noiseless(), unused);
    const Eigen::VectorXcd expected = ch.entries * x.symbols;
    CHECK((y - expected).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("transmit noise has the configured variance") {
    Rng ch_rng(6);
    const ChannelMatrix ch = generate_rayleigh_channel(500, 1, ch_rng);
    const TxSymbolVector x = bits_to_qpsk({1, 0});
    Rng unused(0);
    const Eigen::VectorXcd clean = transmit(ch, x, SnrSpec::noiseless(), unused);

    const SnrSpec snr{0.0, 2.0};  // sigma_z_sq = 2 -> per-component variance 1
    Rng noise_rng(31);
    const Eigen::VectorXcd noisy = transmit(ch, x, snr, noise_rng);
    const Eigen::VectorXcd diff = noisy - clean;
    double acc = 0.0;
    for (Eigen::Index m = 0; m < diff.size(); ++m)
        acc += diff(m).real() * diff(m).real() + diff(m).imag() * diff(m).imag();
    const double component_var = acc / (2.0 * diff.size());
    CHECK(component_var > 0.85);
    CHECK(component_var < 1.15);
}

TEST_CASE("transmit validates sizes and noise variance") {
    Rng rng(2);
    const ChannelMatrix ch = generate_rayleigh_channel(4, 2, rng);
    Rng unused(0);
    CHECK_THROWS_AS(transmit(ch, bits_to_qpsk({1, 0}), SnrSpec::noiseless(), unused),
                    std::invalid_argument);
    CHECK_THROWS_AS(transmit(ch, bits_to_qpsk({1, 0, 1, 1}), SnrSpec{0.0, -1.0}, unused),
                    std::invalid_argument);
}

TEST_CASE("SNR conversion follows the transmit-SNR convention") {
    CHECK(SnrSpec::from_db(0.0).sigma_z_sq == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(SnrSpec::from_db(10.0).sigma_z_sq == doctest::Approx(0.1).epsilon(1e-12));
    CHECK(SnrSpec::from_db(-10.0).sigma_z_sq == doctest::Approx(10.0).epsilon(1e-12));
    CHECK(SnrSpec::noiseless().sigma_z_sq == 0.0);
}

TEST_CASE("real expansion of a real-valued channel is block diagonal") {
    ChannelMatrix ch;
    ch.entries.resize(1, 1);
    ch.entries(0, 0) = std::complex<double>(1.0, 0.0);
    Eigen::VectorXcd y(1);
    y(0) = std::complex<double>(2.0, 3.0);
    const RealSystem sys = complex_to_real(ch, y);
    CHECK(sys.H(0, 0) == 1.0);
    CHECK(sys.H(0, 1) == 0.0);
    CHECK(sys.H(1, 0) == 0.0);
    CHECK(sys.H(1, 1) == 1.0);
    CHECK(sys.y(0) == 2.0);
    CHECK(sys.y(1) == 3.0);
}

TEST_CASE("real expansion of a purely imaginary channel is a rotation") {
    ChannelMatrix ch;
    ch.entries.resize(1, 1);
    ch.entries(0, 0) = std::complex<double>(0.0, 1.0);
    Eigen::VectorXcd y(1);
    y(0) = std::complex<double>(0.0, 0.0);
    const RealSystem sys = complex_to_real(ch, y);
    CHECK(sys.H(0, 0) == 0.0);
    CHECK(sys.H(0, 1) == -1.0);
    CHECK(sys.H(1, 0) == 1.0);
    CHECK(sys.H(1, 1) == 0.0);
}

TEST_CASE("real expansion preserves the complex product") {
    Rng rng(21);
    const ChannelMatrix ch = generate_rayleigh_channel(8, 3, rng);
    Rng bit_rng(22);
    const BitVec bits = random_bits(6, bit_rng);
    const TxSymbolVector x = bits_to_qpsk(bits);
    Rng unused(0);
    const Eigen::VectorXcd y = transmit(ch, x, SnrSpec::noiseless(), unused);
    const RealSystem sys = complex_to_real(ch, y);

    Eigen::VectorXd x_real(6);
    x_real.head(3) = x.symbols.real();
    x_real.tail(3) = x.symbols.imag();
    CHECK((sys.H * x_real - sys.y).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("complex_to_real validates the observation length") {
    Rng rng(3);
    const ChannelMatrix ch = generate_rayleigh_channel(4, 2, rng);
    Eigen::VectorXcd y(3);
    y.setZero();
    CHECK_THROWS_AS(complex_to_real(ch, y), std::invalid_argument);
}

TEST_CASE("hard_demap slices on sign with ties to zero") {
    Eigen::VectorXd x(3);
    x << 0.5, -0.5, 0.0;
    const BitVec b = hard_demap(x);
    CHECK(b == BitVec{1, 0, 0});
}

TEST_CASE("modulation round-trips through the real representation") {
    for (unsigned code = 0; code < 64; ++code) {
        BitVec bits(6);
        for (int j = 0; j < 6; ++j) bits[j] = (code >> j) & 1u;
        const TxSymbolVector x = bits_to_qpsk(bits);
        Eigen::VectorXd x_real(6);
        x_real.head(3) = x.symbols.real();
        x_real.tail(3) = x.symbols.imag();
        CHECK(hard_demap(x_real) == bits);
    }
}
