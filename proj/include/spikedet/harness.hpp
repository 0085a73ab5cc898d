#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "spikedet/linear.hpp"
#include "spikedet/mimo.hpp"
#include "spikedet/snn.hpp"

namespace spikedet {

enum class DetectorKind { Zf, Mmse, Snn, Ml };

std::string to_string(DetectorKind kind);
DetectorKind detector_from_string(const std::string& name);

// Comma-separated list, e.g. "zf,mmse,snn".
std::vector<DetectorKind> parse_detector_list(const std::string& list);

// "start:stop:step", a comma list, or a single value, all in dB.
std::vector<double> parse_snr_range(const std::string& spec);

// One Monte-Carlo sweep description. Channels are redrawn per frame
// (block fading) and held fixed for `tx_per_frame` transmissions; every
// enabled detector sees identical (H, y, bits) tuples. All randomness is
// derived from `seed` by counter-based stream splitting.
struct ExperimentConfig {
    int bs_antennas = 16;
    int streams = 4;
    std::string snr_range = "0:15:1";
    int frames = 80;
    int tx_per_frame = 100;
    std::vector<DetectorKind> detectors = {DetectorKind::Zf, DetectorKind::Mmse,
                                           DetectorKind::Snn};
    LifParams lif = LifParams::tuned();
    int attempts = 1;
    std::uint64_t seed = 1;
    std::string output_path;

    std::vector<double> snr_db_list() const { return parse_snr_range(snr_range); }
    long long bits_per_point() const {
        return 2LL * streams * frames * tx_per_frame;
    }
    void validate() const;  // throws std::invalid_argument on inconsistent settings
};

struct BerRecord {
    double snr_db = 0.0;
    std::string detector;
    int attempts = 1;
    long long bit_errors = 0;
    long long bits_total = 0;
    double wall_time_s = 0.0;

    double ber() const {
        return bits_total > 0 ? static_cast<double>(bit_errors) / bits_total : 0.0;
    }
};

// Uncoded BER sweep over the configured SNR grid. Records are ordered by
// (snr point, detector) and reproducible bit-for-bit from the seed.
std::vector<BerRecord> run_ber_sweep(const ExperimentConfig& config);

struct LandscapePoint {
    double spatial_ratio = 0.0;
    int bs_antennas = 0;
    int streams = 0;
    int instances = 0;
    double mean_local_minima = 0.0;
};

// Average 1-flip local-minima count over random noisy instances, one point
// per antenna count in `antenna_list`.
std::vector<LandscapePoint> run_local_minima_study(const std::vector<int>& antenna_list,
                                                   int streams, int instances_per_point,
                                                   double snr_db, std::uint64_t seed);

// Same transmissions evaluated under each attempt budget; SNN attempt a
// always runs on seed ^ a, so smaller budgets are exact prefixes of larger
// ones. Non-SNN detectors in the config are reported once.
std::vector<BerRecord> run_attempts_study(const ExperimentConfig& config,
                                          const std::vector<int>& attempts_list);

struct OpCountRow {
    int bs_antennas = 0;
    int streams = 0;
    OperationCounts mmse;
    OperationCounts qubo;
    double reduction = 0.0;
};

struct OpCountReport {
    std::vector<OpCountRow> rows;
    double average_reduction = 0.0;
};

// Evaluates the operation-count models per (M, K) configuration.
OpCountReport report_op_counts(const std::vector<std::pair<int, int>>& dims);

// The nine default configurations: M in {16,32,64} x K in {4,8,16}.
std::vector<std::pair<int, int>> default_dim_grid();

// "MxK" pairs, e.g. "16x4,32x8".
std::vector<std::pair<int, int>> parse_dim_list(const std::string& spec);

// --- result files ------------------------------------------------------

// FNV-1a over the canonical JSON form of the config; 16 hex digits.
std::string config_hash(const ExperimentConfig& config);

std::string to_json_string(const ExperimentConfig& config);
ExperimentConfig config_from_json_file(const std::string& path);

// CSV with a "# config_hash=..." first line, then one row per record.
// A ".config.json" sidecar holding the full config is written next to it.
void write_ber_csv(const std::string& path, const ExperimentConfig& config,
                   const std::vector<BerRecord>& records);
void write_landscape_csv(const std::string& path, const std::string& params_json,
                         const std::vector<LandscapePoint>& points);
void write_opcount_csv(const std::string& path, const OpCountReport& report);

}  // namespace spikedet
