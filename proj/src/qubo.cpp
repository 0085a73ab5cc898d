#include "spikedet/qubo.hpp"

#include <bit>
#include <cmath>
#include <limits>
#include <ostream>
#include <stdexcept>
#include <utility>

namespace spikedet {

namespace {

void check_system(const RealSystem& sys) {
    if (sys.H.rows() != sys.y.size()) {
        throw std::invalid_argument("qubo: observation length does not match H rows");
    }
    if (sys.H.cols() < 2 || sys.H.cols() % 2 != 0) {
        throw std::invalid_argument("qubo: H must have an even, positive column count (N = 2K)");
    }
}

// Observation-dependent pieces of the instance. Both build_qubo and
// update_observation go through here so a rebuilt diagonal is bit-identical
// to a freshly constructed one.
std::pair<Eigen::VectorXd, double> observation_terms(const RealSystem& sys, double alpha) {
    const Eigen::VectorXd t = sys.y + (1.0 / alpha) * sys.H.rowwise().sum();
    const Eigen::VectorXd d = (4.0 / alpha) * (sys.H.transpose() * t);
    const double inv_a2 = 4.0 / (alpha * alpha);
    Eigen::VectorXd diag(sys.H.cols());
    for (Eigen::Index j = 0; j < sys.H.cols(); ++j) {
        diag(j) = inv_a2 * sys.H.col(j).squaredNorm() - d(j);
    }
    return {std::move(diag), t.squaredNorm()};
}

}  // namespace

QuboInstance QuboInstance::normalized() const {
    const double scale = Q.size() > 0 ? Q.cwiseAbs().maxCoeff() : 0.0;
    if (scale <= 0.0) return *this;
    return QuboInstance{Q / scale, constant / scale, alpha};
}

QuboInstance build_qubo(const RealSystem& sys, double alpha) {
    check_system(sys);
    if (!(alpha > 0.0)) {
        throw std::invalid_argument("build_qubo: alpha must be positive");
    }
    QuboInstance inst;
    inst.alpha = alpha;
    const Eigen::MatrixXd gram = sys.H.transpose() * sys.H;
    // Symmetrize exactly; gemm output is not guaranteed bitwise symmetric.
    inst.Q = (4.0 / (alpha * alpha)) * (0.5 * (gram + gram.transpose()));
    auto [diag, constant] = observation_terms(sys, alpha);
    inst.Q.diagonal() = diag;
    inst.constant = constant;
    return inst;
}

QuboInstance update_observation(const QuboInstance& inst, const RealSystem& sys) {
    check_system(sys);
    if (sys.H.cols() != inst.size()) {
        throw std::invalid_argument("update_observation: system size does not match instance");
    }
    QuboInstance out = inst;
    auto [diag, constant] = observation_terms(sys, inst.alpha);
    out.Q.diagonal() = diag;
    out.constant = constant;
    return out;
}

double objective(const QuboInstance& inst, const BitVec& b) {
    const Eigen::Index n = inst.size();
    if (static_cast<Eigen::Index>(b.size()) != n) {
        throw std::invalid_argument("objective: bit vector length does not match instance");
    }
    double acc = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
        if (!b[static_cast<std::size_t>(i)]) continue;
        acc += inst.Q(i, i);
        for (Eigen::Index j = i + 1; j < n; ++j) {
            if (b[static_cast<std::size_t>(j)]) acc += 2.0 * inst.Q(i, j);
        }
    }
    return acc;
}

double objective_with_constant(const QuboInstance& inst, const BitVec& b) {
    return objective(inst, b) + inst.constant;
}

MlResult ml_brute_force(const RealSystem& sys, double alpha) {
    check_system(sys);
    if (!(alpha > 0.0)) {
        throw std::invalid_argument("ml_brute_force: alpha must be positive");
    }
    const int n = static_cast<int>(sys.H.cols());
    if (n > kMaxEnumerationBits) {
        throw std::invalid_argument("ml_brute_force: problem too large for exhaustive search");
    }
    MlResult best;
    best.value = std::numeric_limits<double>::infinity();
    Eigen::VectorXd x(n);
    Eigen::VectorXd r(sys.y.size());
    const std::uint64_t total = std::uint64_t{1} << n;
    for (std::uint64_t code = 0; code < total; ++code) {
        // b[0] is the most significant bit of `code`, so scanning in
        // increasing order with strict improvement keeps the lowest
        // pattern on ties.
        for (int j = 0; j < n; ++j) {
            x(j) = ((code >> (n - 1 - j)) & 1u) ? 1.0 / alpha : -1.0 / alpha;
        }
        r = sys.y;
        r.noalias() -= sys.H * x;
        const double value = r.squaredNorm();
        if (value < best.value) {
            best.value = value;
            best.x = x;
            best.bits.assign(static_cast<std::size_t>(n), 0);
            for (int j = 0; j < n; ++j) {
                best.bits[static_cast<std::size_t>(j)] =
                    static_cast<std::uint8_t>((code >> (n - 1 - j)) & 1u);
            }
        }
    }
    return best;
}

long count_local_minima(const QuboInstance& inst, MinimaRule rule) {
    const int n = static_cast<int>(inst.size());
    if (n < 1) {
        throw std::invalid_argument("count_local_minima: empty instance");
    }
    if (n > kMaxEnumerationBits) {
        throw std::invalid_argument("count_local_minima: problem too large for exhaustive search");
    }
    // Gray-code walk keeps s = Q b current in O(N) per visited state.
    const Eigen::VectorXd diag = inst.Q.diagonal();
    Eigen::VectorXd s = Eigen::VectorXd::Zero(n);
    BitVec b(static_cast<std::size_t>(n), 0);
    long count = 0;
    const std::uint64_t total = std::uint64_t{1} << n;
    for (std::uint64_t it = 0;; ++it) {
        bool is_min = true;
        for (int j = 0; j < n; ++j) {
            const double on = b[static_cast<std::size_t>(j)] ? 1.0 : 0.0;
            const double sign = 1.0 - 2.0 * on;
            // Energy change of flipping bit j.
            const double delta = sign * (diag(j) + 2.0 * (s(j) - diag(j) * on));
            const bool worse = rule == MinimaRule::Plateau ? delta >= 0.0 : delta > 0.0;
            if (!worse) {
                is_min = false;
                break;
            }
        }
        if (is_min) ++count;
        if (it + 1 == total) break;
        const int j = std::countr_zero(it + 1);
        const double step = b[static_cast<std::size_t>(j)] ? -1.0 : 1.0;
        b[static_cast<std::size_t>(j)] ^= 1u;
        s += step * inst.Q.col(j);
    }
    return count;
}

void write_matrix(const QuboInstance& inst, std::ostream& out) {
    const Eigen::Index n = inst.size();
    out.precision(17);
    out << n << ' ' << inst.constant << ' ' << inst.alpha << '\n';
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) {
            if (j) out << ' ';
            out << inst.Q(i, j);
        }
        out << '\n';
    }
}

}  // namespace spikedet
