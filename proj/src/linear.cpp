#include "spikedet/linear.hpp"

#include <stdexcept>

namespace spikedet {

namespace {

Eigen::VectorXd solve_normal_equations(const RealSystem& sys, double ridge) {
    if (sys.H.rows() != sys.y.size()) {
        throw std::invalid_argument("linear detector: observation length does not match H rows");
    }
    Eigen::MatrixXd gram = sys.H.transpose() * sys.H;
    if (ridge != 0.0) {
        gram.diagonal().array() += ridge;
    }
    const Eigen::LLT<Eigen::MatrixXd> llt(gram);
    if (llt.info() != Eigen::Success) {
        throw std::runtime_error("linear detector: Gram matrix is not positive definite");
    }
    return llt.solve(sys.H.transpose() * sys.y);
}

}  // namespace

Eigen::VectorXd zf_detect(const RealSystem& sys) {
    return solve_normal_equations(sys, 0.0);
}

Eigen::VectorXd mmse_detect(const RealSystem& sys, double sigma_z_sq) {
    if (sigma_z_sq < 0.0) {
        throw std::invalid_argument("mmse_detect: negative noise variance");
    }
    return solve_normal_equations(sys, sigma_z_sq / 2.0);
}

namespace {

void check_dims(int m, int k) {
    if (m < 1 || k < 1) {
        throw std::invalid_argument("operation counts: dimensions must be >= 1");
    }
}

}  // namespace

OperationCounts op_count_mmse(int m, int k) {
    check_dims(m, k);
    const double md = m, kd = k;
    OperationCounts c;
    c.multiplications = 2.0 * md * kd * kd + (5.0 / 3.0) * kd * kd * kd;
    c.additions = (4.0 / 3.0) * kd * kd * kd + (2.0 * md - 3.0) * kd * kd;
    c.square_roots = kd;
    c.divisions = kd * (kd - 1.0) / 2.0;
    return c;
}

OperationCounts op_count_qubo(int m, int k) {
    check_dims(m, k);
    const double md = m, kd = k;
    OperationCounts c;
    c.multiplications = md * kd * kd + md * kd;
    c.additions = (md - 1.0) * kd * kd + 2.0 * md * kd - md;
    c.square_roots = 0.0;
    c.divisions = 0.0;
    return c;
}

double reduction_ratio(int m, int k) {
    return 1.0 - op_count_qubo(m, k).total() / op_count_mmse(m, k).total();
}

}  // namespace spikedet
