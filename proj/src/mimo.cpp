#include "spikedet/mimo.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace spikedet {

SnrSpec SnrSpec::from_db(double snr_db) {
    return SnrSpec{snr_db, std::pow(10.0, -snr_db / 10.0)};
}

SnrSpec SnrSpec::noiseless() {
    return SnrSpec{std::numeric_limits<double>::infinity(), 0.0};
}

ChannelMatrix generate_rayleigh_channel(int bs_antennas, int streams, Rng& rng) {
    if (streams < 1 || bs_antennas < streams) {
        throw std::invalid_argument("generate_rayleigh_channel: need bs_antennas >= streams >= 1");
    }
    ChannelMatrix ch;
    ch.entries.resize(bs_antennas, streams);
    const double scale = 1.0 / kQpskAlpha;  // per-component variance 1/2
    for (int m = 0; m < bs_antennas; ++m) {
        for (int k = 0; k < streams; ++k) {
            ch.entries(m, k) = std::complex<double>(scale * rng.gaussian(),
                                                    scale * rng.gaussian());
        }
    }
    return ch;
}

TxSymbolVector bits_to_qpsk(const BitVec& bits) {
    if (bits.empty() || bits.size() % 2 != 0) {
        throw std::invalid_argument("bits_to_qpsk: bit vector length must be 2K");
    }
    const std::size_t k = bits.size() / 2;
    const double amp = 1.0 / kQpskAlpha;
    TxSymbolVector x;
    x.symbols.resize(static_cast<Eigen::Index>(k));
    for (std::size_t i = 0; i < k; ++i) {
        const double re = bits[i] ? amp : -amp;
        const double im = bits[k + i] ? amp : -amp;
        x.symbols(static_cast<Eigen::Index>(i)) = std::complex<double>(re, im);
    }
    return x;
}

Eigen::VectorXcd transmit(const ChannelMatrix& channel, const TxSymbolVector& x,
                          const SnrSpec& snr, Rng& rng) {
    if (x.symbols.size() != channel.streams()) {
        throw std::invalid_argument("transmit: symbol count does not match channel streams");
    }
    if (snr.sigma_z_sq < 0.0) {
        throw std::invalid_argument("transmit: negative noise variance");
    }
    Eigen::VectorXcd y = channel.entries * x.symbols;
    if (snr.sigma_z_sq > 0.0) {
        const double s = std::sqrt(snr.sigma_z_sq / 2.0);
        for (Eigen::Index m = 0; m < y.size(); ++m) {
            y(m) += std::complex<double>(s * rng.gaussian(), s * rng.gaussian());
        }
    }
    return y;
}

RealSystem complex_to_real(const ChannelMatrix& channel,
                           const Eigen::VectorXcd& y) {
    if (y.size() != channel.bs_antennas()) {
        throw std::invalid_argument("complex_to_real: observation length does not match antennas");
    }
    const Eigen::Index m = channel.bs_antennas();
    const Eigen::Index k = channel.streams();
    RealSystem sys;
    sys.H.resize(2 * m, 2 * k);
    sys.H.topLeftCorner(m, k) = channel.entries.real();
    sys.H.topRightCorner(m, k) = -channel.entries.imag();
    sys.H.bottomLeftCorner(m, k) = channel.entries.imag();
    sys.H.bottomRightCorner(m, k) = channel.entries.real();
    sys.y.resize(2 * m);
    sys.y.head(m) = y.real();
    sys.y.tail(m) = y.imag();
    return sys;
}

BitVec hard_demap(const Eigen::VectorXd& x_hat) {
    BitVec b(static_cast<std::size_t>(x_hat.size()));
    for (Eigen::Index j = 0; j < x_hat.size(); ++j) {
        b[static_cast<std::size_t>(j)] = x_hat(j) > 0.0 ? 1 : 0;
    }
    return b;
}

}  // namespace spikedet
