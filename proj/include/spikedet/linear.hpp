#pragma once

#include <Eigen/Dense>

#include "spikedet/mimo.hpp"

namespace spikedet {

// ZF solves H^T H x = H^T y by Cholesky factorization; throws
// std::runtime_error when the Gram matrix is not positive definite.
Eigen::VectorXd zf_detect(const RealSystem& system);

// MMSE solves (H^T H + sigma_z_sq/2 I) x = H^T y; with sigma_z_sq == 0
// this is exactly ZF.
Eigen::VectorXd mmse_detect(const RealSystem& system, double sigma_z_sq);

// Closed-form operation tallies for one channel's worth of receiver
// preprocessing, in real dimensions m = 2M, k = 2K. The models are
// algebraic, so fractional counts are expected.
struct OperationCounts {
    double multiplications = 0.0;
    double additions = 0.0;
    double square_roots = 0.0;
    double divisions = 0.0;

    // All operation kinds weighted equally.
    double total() const {
        return multiplications + additions + square_roots + divisions;
    }
};

// MMSE preprocessing via Cholesky decomposition.
OperationCounts op_count_mmse(int m, int k);

// QUBO matrix construction (no inversions, no square roots).
OperationCounts op_count_qubo(int m, int k);

// 1 - total_qubo / total_mmse.
double reduction_ratio(int m, int k);

}  // namespace spikedet
