#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <iosfwd>

#include "spikedet/qubo.hpp"
#include "spikedet/rng.hpp"

namespace spikedet {

// Discrete-time leaky integrate-and-fire parameters. The forward-Euler
// membrane update
//
//   u <- u + (dt/tau) (R * i_syn - u)
//
// is stable for 0 < dt < tau. Synaptic current is persistent: spikes add
// their weights to i_syn and the sum is carried across steps (current_decay
// = 1). A neuron whose updated potential reaches `threshold` fires and
// resets to `reset_potential`.
struct LifParams {
    double dt = 1.0;
    double tau = 10.0;
    double resistance = 1.0;        // R
    double threshold = 1.0;         // firing threshold
    double reset_potential = 0.0;   // post-spike potential
    int steps = 200;                // simulation length T
    double initial_current = 2.0;   // injected at t=0 to trigger early spiking
    double noise_variance = 0.0;    // sigma_v^2 of the stochastic synaptic term
    double decode_window = 1.0;     // fraction of final steps used for decoding
    double current_decay = 1.0;     // per-step retention of i_syn; 1 = persistent
    bool noise_per_neuron = false;  // one draw per neuron per step instead of per spike

    void validate() const;  // throws std::invalid_argument on bad ranges

    // Frozen configuration for single-attempt detection.
    static LifParams tuned();
    // Frozen configuration for stochastic multi-attempt detection.
    static LifParams tuned_stochastic();
};

// Fully connected network whose synaptic weights are the negated QUBO
// matrix; diagonal entries act as self-synapses.
struct SpikingNetwork {
    Eigen::MatrixXd weights;

    Eigen::Index neurons() const { return weights.rows(); }
};

struct NetworkState {
    Eigen::VectorXd u;      // membrane potentials
    Eigen::VectorXd i_syn;  // persistent synaptic currents
    BitVec last_spikes;     // spikes emitted at the previous step
};

// T x N spike history, row t = spikes emitted at step t.
struct SpikeRaster {
    int steps = 0;
    int neurons = 0;
    std::vector<std::uint8_t> spikes;  // row-major

    std::uint8_t at(int t, int i) const {
        return spikes[static_cast<std::size_t>(t) * neurons + i];
    }
    // Spike rate of one neuron over steps [from, steps).
    double rate(int neuron, int from) const;
};

// Optional per-step capture for inspecting threshold and reset behavior.
struct StateTrace {
    Eigen::MatrixXd u_pre;    // potential after integration, before reset
    Eigen::MatrixXd u_post;   // potential after reset
    Eigen::MatrixXd current;  // synaptic current driving the update
};

SpikingNetwork init_network(const QuboInstance& inst);

NetworkState initial_state(const SpikingNetwork& net, const LifParams& params);

// One two-phase update: (1) currents accumulate the weights of spikes
// emitted last step (plus a fresh N(0, sigma_v^2) term per delivery when
// `rng` is supplied), (2) membranes integrate the new current, then any
// neuron at or above threshold fires and resets. Returns the emitted
// spikes; `state` is advanced in place.
BitVec step(const SpikingNetwork& net, NetworkState& state, const LifParams& params,
            Rng* rng, StateTrace* trace = nullptr, int trace_row = 0);

// Runs `params.steps` updates from the canonical start (u = reset
// potential, i_syn = initial_current, no prior spikes).
SpikeRaster run(const SpikingNetwork& net, const LifParams& params, Rng* rng,
                StateTrace* trace = nullptr);

// Rate decode over the final ceil(decode_window * T) steps: bit i is 1 iff
// neuron i spiked in strictly more than half of them.
BitVec decode(const SpikeRaster& raster, const LifParams& params);

struct DetectResult {
    BitVec bits;
    double objective = 0.0;  // b^T Q b on the instance passed to detect
};

// Per-attempt results, in attempt order. Attempt a runs on seed ^ a; every
// attempt uses the configured noise variance.
std::vector<DetectResult> run_attempts(const QuboInstance& inst, const LifParams& params,
                                       int attempts, std::uint64_t seed);

// Best-of-N detection: simulates `attempts` networks on a max-normalized
// copy of the instance and keeps the decoded vector with the lowest
// objective (first attempt wins ties).
DetectResult detect(const QuboInstance& inst, const LifParams& params,
                    int attempts, std::uint64_t seed);

// Raster dump: one line per step, N characters of 0/1.
void write_raster(const SpikeRaster& raster, std::ostream& out);

}  // namespace spikedet
