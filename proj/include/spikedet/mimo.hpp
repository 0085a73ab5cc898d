#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <vector>

#include "spikedet/rng.hpp"

namespace spikedet {

using BitVec = std::vector<std::uint8_t>;

// Symbol normalization for unit-energy QPSK: components are +-1/alpha.
inline constexpr double kQpskAlpha = 1.4142135623730951;  // sqrt(2)

// Complex M x K propagation matrix, one column per transmitting stream.
struct ChannelMatrix {
    Eigen::MatrixXcd entries;

    Eigen::Index bs_antennas() const { return entries.rows(); }
    Eigen::Index streams() const { return entries.cols(); }
};

// K QPSK symbols with unit per-symbol energy.
struct TxSymbolVector {
    Eigen::VectorXcd symbols;
};

// Real-valued expansion of the complex system. H is 2M x 2K with the
// [[Re, -Im], [Im, Re]] block layout; y stacks real parts above imaginary
// parts. Index j of the real symbol vector matches bit j everywhere else.
struct RealSystem {
    Eigen::MatrixXd H;
    Eigen::VectorXd y;
};

// Noise level under the per-user transmit-SNR convention:
// sigma_z_sq = 10^(-snr_db/10) with unit symbol energy and unit-variance
// channel entries.
struct SnrSpec {
    double snr_db = 0.0;
    double sigma_z_sq = 1.0;

    static SnrSpec from_db(double snr_db);
    static SnrSpec noiseless();
};

// I.i.d. circularly-symmetric complex Gaussian entries, CN(0, 1).
// Requires bs_antennas >= streams >= 1.
ChannelMatrix generate_rayleigh_channel(int bs_antennas, int streams, Rng& rng);

// Maps 2K bits to K QPSK symbols: bit k drives the real part of symbol k,
// bit K+k the imaginary part, matching the real-stacked index order.
TxSymbolVector bits_to_qpsk(const BitVec& bits);

// y = H x + z with z ~ CN(0, sigma_z_sq I). sigma_z_sq == 0 is noiseless.
Eigen::VectorXcd transmit(const ChannelMatrix& channel, const TxSymbolVector& x,
                          const SnrSpec& snr, Rng& rng);

RealSystem complex_to_real(const ChannelMatrix& channel,
                           const Eigen::VectorXcd& y);

// Sign slicer for detector outputs; exact zeros map to bit 0.
BitVec hard_demap(const Eigen::VectorXd& x_hat);

}  // namespace spikedet
