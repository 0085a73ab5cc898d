#pragma once

#include <Eigen/Dense>
#include <iosfwd>

#include "spikedet/mimo.hpp"

namespace spikedet {

// Largest problem size any exhaustive enumeration routine will accept.
inline constexpr int kMaxEnumerationBits = 24;

// Binary quadratic program min_b b^T Q b over b in {0,1}^N, N = 2K.
// The lattice search min ||y - H(2b-1)/alpha||^2 equals b^T Q b + constant,
// so the observation-independent constant is kept alongside Q to allow
// exact cross-checks against the residual.
struct QuboInstance {
    Eigen::MatrixXd Q;      // symmetric N x N
    double constant = 0.0;  // ||y + (1/alpha) H 1||^2
    double alpha = 0.0;     // symbol normalization, sqrt(2) for QPSK

    Eigen::Index size() const { return Q.rows(); }

    // Positively rescaled copy with max |Q_ij| == 1 (argmin preserved).
    // No-op for an all-zero matrix.
    QuboInstance normalized() const;
};

// Q = (4/alpha^2) H^T H - diag((4/alpha) (y + (1/alpha) H 1)^T H).
QuboInstance build_qubo(const RealSystem& system, double alpha);

// Refreshes the observation-dependent parts for a new y over the same H:
// only diag(Q) and the constant change, off-diagonal entries are carried
// over untouched. Result is identical to build_qubo from scratch.
QuboInstance update_observation(const QuboInstance& inst, const RealSystem& system);

// b^T Q b, without / with the dropped constant term.
double objective(const QuboInstance& inst, const BitVec& b);
double objective_with_constant(const QuboInstance& inst, const BitVec& b);

struct MlResult {
    BitVec bits;
    Eigen::VectorXd x;
    double value = 0.0;  // squared residual at the optimum
};

// Exhaustive lattice search of ||y - Hx||^2 over x in {-1/alpha, 1/alpha}^N.
// Ties resolve to the lowest bit pattern read MSB-first from b[0].
MlResult ml_brute_force(const RealSystem& system, double alpha);

// 1-flip neighborhood rule. Plateau: a state whose flips never strictly
// improve counts as a minimum. Strict: every flip must strictly worsen.
enum class MinimaRule { Plateau, Strict };

long count_local_minima(const QuboInstance& inst,
                        MinimaRule rule = MinimaRule::Plateau);

// Plain-text dump: header "N constant alpha", then N rows of Q row-major.
void write_matrix(const QuboInstance& inst, std::ostream& out);

}  // namespace spikedet
