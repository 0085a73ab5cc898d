#include "spikedet/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

#include "spikedet/qubo.hpp"

namespace spikedet {
namespace {

using nlohmann::json;

// Stream tags for counter-based seed derivation. Every random quantity is
// addressed by (tag, frame, transmission), so detectors share the exact
// same channels, payloads and noise, and SNR points reuse the same
// underlying standard-normal draws (common random numbers).
constexpr std::uint64_t kChannelStream = 1;
constexpr std::uint64_t kBitStream = 2;
constexpr std::uint64_t kNoiseStream = 3;
constexpr std::uint64_t kSnnStream = 4;

double seconds_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
        .count();
}

BitVec random_bits(int count, Rng& rng) {
    BitVec bits(count);
    for (int j = 0; j < count; ++j)
        bits[j] = static_cast<std::uint8_t>(rng.next_u64() & 1u);
    return bits;
}

long long hamming(const BitVec& a, const BitVec& b) {
    long long errors = 0;
    for (std::size_t j = 0; j < a.size(); ++j) errors += a[j] != b[j];
    return errors;
}

std::string trimmed(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t");
    if (begin == std::string::npos) return "";
    const auto end = s.find_last_not_of(" \t");
    return s.substr(begin, end - begin + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> parts;
    std::stringstream stream(s);
    std::string item;
    while (std::getline(stream, item, sep)) parts.push_back(item);
    return parts;
}

double parse_double(const std::string& raw) {
    const std::string text = trimmed(raw);
    std::size_t pos = 0;
    double value = 0.0;
    try {
        value = std::stod(text, &pos);
    } catch (const std::exception&) {
        throw std::invalid_argument("expected a number, got '" + raw + "'");
    }
    if (pos != text.size())
        throw std::invalid_argument("expected a number, got '" + raw + "'");
    return value;
}

int parse_int(const std::string& raw) {
    const std::string text = trimmed(raw);
    std::size_t pos = 0;
    int value = 0;
    try {
        value = std::stoi(text, &pos);
    } catch (const std::exception&) {
        throw std::invalid_argument("expected an integer, got '" + raw + "'");
    }
    if (pos != text.size())
        throw std::invalid_argument("expected an integer, got '" + raw + "'");
    return value;
}

// "<name>.csv" -> "<name>.config.json"; other extensions keep their stem.
std::string sidecar_path(const std::string& csv_path) {
    std::string stem = csv_path;
    if (stem.size() > 4 && stem.substr(stem.size() - 4) == ".csv")
        stem.resize(stem.size() - 4);
    return stem + ".config.json";
}

json lif_to_json(const LifParams& p) {
    return json{{"dt", p.dt},
                {"tau", p.tau},
                {"resistance", p.resistance},
                {"threshold", p.threshold},
                {"reset_potential", p.reset_potential},
                {"steps", p.steps},
                {"initial_current", p.initial_current},
                {"noise_variance", p.noise_variance},
                {"decode_window", p.decode_window},
                {"current_decay", p.current_decay},
                {"noise_per_neuron", p.noise_per_neuron}};
}

void lif_from_json(const json& j, LifParams& p) {
    p.dt = j.value("dt", p.dt);
    p.tau = j.value("tau", p.tau);
    p.resistance = j.value("resistance", p.resistance);
    p.threshold = j.value("threshold", p.threshold);
    p.reset_potential = j.value("reset_potential", p.reset_potential);
    p.steps = j.value("steps", p.steps);
    p.initial_current = j.value("initial_current", p.initial_current);
    p.noise_variance = j.value("noise_variance", p.noise_variance);
    p.decode_window = j.value("decode_window", p.decode_window);
    p.current_decay = j.value("current_decay", p.current_decay);
    p.noise_per_neuron = j.value("noise_per_neuron", p.noise_per_neuron);
}

}  // namespace

std::string to_string(DetectorKind kind) {
    switch (kind) {
        case DetectorKind::Zf: return "zf";
        case DetectorKind::Mmse: return "mmse";
        case DetectorKind::Snn: return "snn";
        case DetectorKind::Ml: return "ml";
    }
    throw std::invalid_argument("detector: unknown kind");
}

DetectorKind detector_from_string(const std::string& name) {
    const std::string text = trimmed(name);
    if (text == "zf") return DetectorKind::Zf;
    if (text == "mmse") return DetectorKind::Mmse;
    if (text == "snn") return DetectorKind::Snn;
    if (text == "ml") return DetectorKind::Ml;
    throw std::invalid_argument("detector: unknown name '" + name + "'");
}

std::vector<DetectorKind> parse_detector_list(const std::string& list) {
    std::vector<DetectorKind> detectors;
    for (const auto& part : split(list, ','))
        detectors.push_back(detector_from_string(part));
    if (detectors.empty())
        throw std::invalid_argument("detector list: empty specification");
    return detectors;
}

std::vector<double> parse_snr_range(const std::string& spec) {
    const std::string text = trimmed(spec);
    if (text.empty()) throw std::invalid_argument("snr range: empty specification");
    if (text.find(':') != std::string::npos) {
        const auto parts = split(text, ':');
        if (parts.size() != 3)
            throw std::invalid_argument("snr range: expected start:stop:step, got '" +
                                        spec + "'");
        const double start = parse_double(parts[0]);
        const double stop = parse_double(parts[1]);
        const double step = parse_double(parts[2]);
        if (step <= 0.0)
            throw std::invalid_argument("snr range: step must be positive");
        if (stop < start)
            throw std::invalid_argument("snr range: stop is below start");
        std::vector<double> values;
        for (int i = 0;; ++i) {
            const double v = start + i * step;
            if (v > stop + 1e-9) break;
            values.push_back(v);
        }
        return values;
    }
    std::vector<double> values;
    for (const auto& part : split(text, ',')) values.push_back(parse_double(part));
    if (values.empty()) throw std::invalid_argument("snr range: empty specification");
    return values;
}

void ExperimentConfig::validate() const {
    if (streams < 1)
        throw std::invalid_argument("config: streams must be at least 1");
    if (bs_antennas < streams)
        throw std::invalid_argument("config: bs_antennas must be at least streams");
    if (frames < 1)
        throw std::invalid_argument("config: frames must be at least 1");
    if (tx_per_frame < 1)
        throw std::invalid_argument("config: tx_per_frame must be at least 1");
    if (attempts < 1)
        throw std::invalid_argument("config: attempts must be at least 1");
    if (detectors.empty())
        throw std::invalid_argument("config: no detectors enabled");
    lif.validate();
    if (snr_db_list().empty())
        throw std::invalid_argument("config: empty SNR grid");
    for (DetectorKind kind : detectors) {
        if (kind == DetectorKind::Ml && 2 * streams > kMaxEnumerationBits)
            throw std::invalid_argument(
                "config: ml detector enumerates 2*streams bits, limited to " +
                std::to_string(kMaxEnumerationBits));
    }
}

std::vector<BerRecord> run_ber_sweep(const ExperimentConfig& config) {
    config.validate();
    const auto snrs = config.snr_db_list();
    const int bits_per_tx = 2 * config.streams;

    std::vector<BerRecord> records;
    records.reserve(snrs.size() * config.detectors.size());
    for (double snr_db : snrs) {
        const SnrSpec snr = SnrSpec::from_db(snr_db);
        std::vector<long long> errors(config.detectors.size(), 0);
        std::vector<long long> bits_seen(config.detectors.size(), 0);
        std::vector<double> elapsed(config.detectors.size(), 0.0);

        for (int f = 0; f < config.frames; ++f) {
            Rng channel_rng(derive_seed(config.seed, kChannelStream, f));
            const ChannelMatrix channel = generate_rayleigh_channel(
                config.bs_antennas, config.streams, channel_rng);
            QuboInstance frame_qubo;
            bool frame_qubo_ready = false;

            for (int t = 0; t < config.tx_per_frame; ++t) {
                Rng bit_rng(derive_seed(config.seed, kBitStream, f, t));
                const BitVec bits = random_bits(bits_per_tx, bit_rng);
                const TxSymbolVector x = bits_to_qpsk(bits);
                Rng noise_rng(derive_seed(config.seed, kNoiseStream, f, t));
                const Eigen::VectorXcd y = transmit(channel, x, snr, noise_rng);
                const RealSystem sys = complex_to_real(channel, y);

                for (std::size_t d = 0; d < config.detectors.size(); ++d) {
                    const auto start = std::chrono::steady_clock::now();
                    BitVec decoded;
                    switch (config.detectors[d]) {
                        case DetectorKind::Zf:
                            decoded = hard_demap(zf_detect(sys));
                            break;
                        case DetectorKind::Mmse:
                            decoded = hard_demap(mmse_detect(sys, snr.sigma_z_sq));
                            break;
                        case DetectorKind::Ml:
                            decoded = ml_brute_force(sys, kQpskAlpha).bits;
                            break;
                        case DetectorKind::Snn: {
                            // Within a frame only the observation changes, so
                            // the Gram part of Q is reused across transmissions.
                            frame_qubo = frame_qubo_ready
                                             ? update_observation(frame_qubo, sys)
                                             : build_qubo(sys, kQpskAlpha);
                            frame_qubo_ready = true;
                            decoded = detect(frame_qubo, config.lif, config.attempts,
                                             derive_seed(config.seed, kSnnStream, f, t))
                                          .bits;
                            break;
                        }
                    }
                    elapsed[d] += seconds_since(start);
                    errors[d] += hamming(bits, decoded);
                    bits_seen[d] += bits_per_tx;
                }
            }
        }

        for (std::size_t d = 0; d < config.detectors.size(); ++d) {
            BerRecord rec;
            rec.snr_db = snr_db;
            rec.detector = to_string(config.detectors[d]);
            rec.attempts =
                config.detectors[d] == DetectorKind::Snn ? config.attempts : 1;
            rec.bit_errors = errors[d];
            rec.bits_total = bits_seen[d];
            rec.wall_time_s = elapsed[d];
            records.push_back(rec);
        }
    }
    return records;
}

std::vector<LandscapePoint> run_local_minima_study(const std::vector<int>& antenna_list,
                                                   int streams, int instances_per_point,
                                                   double snr_db, std::uint64_t seed) {
    if (antenna_list.empty())
        throw std::invalid_argument("landscape: antenna list is empty");
    if (streams < 1)
        throw std::invalid_argument("landscape: streams must be at least 1");
    if (2 * streams > kMaxEnumerationBits)
        throw std::invalid_argument(
            "landscape: minima enumeration over 2*streams bits, limited to " +
            std::to_string(kMaxEnumerationBits));
    if (instances_per_point < 1)
        throw std::invalid_argument("landscape: instances must be at least 1");

    const SnrSpec snr = SnrSpec::from_db(snr_db);
    std::vector<LandscapePoint> points;
    points.reserve(antenna_list.size());
    for (int bs : antenna_list) {
        if (bs < streams)
            throw std::invalid_argument("landscape: bs_antennas must be at least streams");
        double total = 0.0;
        for (int i = 0; i < instances_per_point; ++i) {
            Rng channel_rng(derive_seed(seed, kChannelStream, bs, i));
            const ChannelMatrix channel =
                generate_rayleigh_channel(bs, streams, channel_rng);
            Rng bit_rng(derive_seed(seed, kBitStream, bs, i));
            const TxSymbolVector x = bits_to_qpsk(random_bits(2 * streams, bit_rng));
            Rng noise_rng(derive_seed(seed, kNoiseStream, bs, i));
            const Eigen::VectorXcd y = transmit(channel, x, snr, noise_rng);
            const QuboInstance inst =
                build_qubo(complex_to_real(channel, y), kQpskAlpha);
            total += static_cast<double>(count_local_minima(inst));
        }
        LandscapePoint point;
        point.spatial_ratio = static_cast<double>(bs) / streams;
        point.bs_antennas = bs;
        point.streams = streams;
        point.instances = instances_per_point;
        point.mean_local_minima = total / instances_per_point;
        points.push_back(point);
    }
    return points;
}

std::vector<BerRecord> run_attempts_study(const ExperimentConfig& config,
                                          const std::vector<int>& attempts_list) {
    config.validate();
    if (attempts_list.empty())
        throw std::invalid_argument("attempts study: no budgets given");
    for (int a : attempts_list)
        if (a < 1)
            throw std::invalid_argument("attempts study: budgets must be at least 1");
    const int max_attempts =
        *std::max_element(attempts_list.begin(), attempts_list.end());
    const auto snrs = config.snr_db_list();
    const int bits_per_tx = 2 * config.streams;
    const bool wants_snn = std::find(config.detectors.begin(), config.detectors.end(),
                                     DetectorKind::Snn) != config.detectors.end();

    std::vector<BerRecord> records;
    for (double snr_db : snrs) {
        const SnrSpec snr = SnrSpec::from_db(snr_db);
        std::vector<long long> linear_errors(config.detectors.size(), 0);
        std::vector<double> linear_elapsed(config.detectors.size(), 0.0);
        std::vector<long long> budget_errors(attempts_list.size(), 0);
        double snn_elapsed = 0.0;
        long long bits_seen = 0;

        for (int f = 0; f < config.frames; ++f) {
            Rng channel_rng(derive_seed(config.seed, kChannelStream, f));
            const ChannelMatrix channel = generate_rayleigh_channel(
                config.bs_antennas, config.streams, channel_rng);
            QuboInstance frame_qubo;
            bool frame_qubo_ready = false;

            for (int t = 0; t < config.tx_per_frame; ++t) {
                Rng bit_rng(derive_seed(config.seed, kBitStream, f, t));
                const BitVec bits = random_bits(bits_per_tx, bit_rng);
                const TxSymbolVector x = bits_to_qpsk(bits);
                Rng noise_rng(derive_seed(config.seed, kNoiseStream, f, t));
                const Eigen::VectorXcd y = transmit(channel, x, snr, noise_rng);
                const RealSystem sys = complex_to_real(channel, y);
                bits_seen += bits_per_tx;

                for (std::size_t d = 0; d < config.detectors.size(); ++d) {
                    if (config.detectors[d] == DetectorKind::Snn) continue;
                    const auto start = std::chrono::steady_clock::now();
                    BitVec decoded;
                    switch (config.detectors[d]) {
                        case DetectorKind::Zf:
                            decoded = hard_demap(zf_detect(sys));
                            break;
                        case DetectorKind::Mmse:
                            decoded = hard_demap(mmse_detect(sys, snr.sigma_z_sq));
                            break;
                        case DetectorKind::Ml:
                            decoded = ml_brute_force(sys, kQpskAlpha).bits;
                            break;
                        default: break;
                    }
                    linear_elapsed[d] += seconds_since(start);
                    linear_errors[d] += hamming(bits, decoded);
                }

                if (!wants_snn) continue;
                // One simulation at the largest budget serves every budget:
                // attempt a always runs on seed ^ a, so the first `n` results
                // are exactly what an n-attempt detection would have produced.
                const auto start = std::chrono::steady_clock::now();
                frame_qubo = frame_qubo_ready ? update_observation(frame_qubo, sys)
                                              : build_qubo(sys, kQpskAlpha);
                frame_qubo_ready = true;
                const auto results =
                    run_attempts(frame_qubo, config.lif, max_attempts,
                                 derive_seed(config.seed, kSnnStream, f, t));
                snn_elapsed += seconds_since(start);

                for (std::size_t b = 0; b < attempts_list.size(); ++b) {
                    const auto budget = static_cast<std::size_t>(attempts_list[b]);
                    std::size_t best = 0;
                    for (std::size_t a = 1; a < budget && a < results.size(); ++a)
                        if (results[a].objective < results[best].objective) best = a;
                    budget_errors[b] += hamming(bits, results[best].bits);
                }
            }
        }

        for (std::size_t d = 0; d < config.detectors.size(); ++d) {
            if (config.detectors[d] == DetectorKind::Snn) {
                for (std::size_t b = 0; b < attempts_list.size(); ++b) {
                    BerRecord rec;
                    rec.snr_db = snr_db;
                    rec.detector = to_string(DetectorKind::Snn);
                    rec.attempts = attempts_list[b];
                    rec.bit_errors = budget_errors[b];
                    rec.bits_total = bits_seen;
                    rec.wall_time_s = snn_elapsed;  // shared across budgets
                    records.push_back(rec);
                }
            } else {
                BerRecord rec;
                rec.snr_db = snr_db;
                rec.detector = to_string(config.detectors[d]);
                rec.attempts = 1;
                rec.bit_errors = linear_errors[d];
                rec.bits_total = bits_seen;
                rec.wall_time_s = linear_elapsed[d];
                records.push_back(rec);
            }
        }
    }
    return records;
}

OpCountReport report_op_counts(const std::vector<std::pair<int, int>>& dims) {
    OpCountReport report;
    report.rows.reserve(dims.size());
    double sum = 0.0;
    for (const auto& [bs, streams] : dims) {
        OpCountRow row;
        row.bs_antennas = bs;
        row.streams = streams;
        row.mmse = op_count_mmse(2 * bs, 2 * streams);
        row.qubo = op_count_qubo(2 * bs, 2 * streams);
        row.reduction = reduction_ratio(2 * bs, 2 * streams);
        sum += row.reduction;
        report.rows.push_back(row);
    }
    if (!report.rows.empty())
        report.average_reduction = sum / static_cast<double>(report.rows.size());
    return report;
}

std::vector<std::pair<int, int>> default_dim_grid() {
    std::vector<std::pair<int, int>> dims;
    for (int bs : {16, 32, 64})
        for (int streams : {4, 8, 16}) dims.emplace_back(bs, streams);
    return dims;
}

std::vector<std::pair<int, int>> parse_dim_list(const std::string& spec) {
    std::vector<std::pair<int, int>> dims;
    for (const auto& part : split(spec, ',')) {
        const std::string text = trimmed(part);
        const auto sep = text.find('x');
        if (sep == std::string::npos)
            throw std::invalid_argument("dims: expected MxK, got '" + part + "'");
        const int bs = parse_int(text.substr(0, sep));
        const int streams = parse_int(text.substr(sep + 1));
        if (bs < 1 || streams < 1)
            throw std::invalid_argument("dims: values must be at least 1 in '" + part +
                                        "'");
        dims.emplace_back(bs, streams);
    }
    if (dims.empty()) throw std::invalid_argument("dims: empty specification");
    return dims;
}

std::string to_json_string(const ExperimentConfig& config) {
    json j;
    j["bs_antennas"] = config.bs_antennas;
    j["streams"] = config.streams;
    j["snr_range"] = config.snr_range;
    j["frames"] = config.frames;
    j["tx_per_frame"] = config.tx_per_frame;
    json detector_names = json::array();
    for (DetectorKind kind : config.detectors)
        detector_names.push_back(to_string(kind));
    j["detectors"] = detector_names;
    j["attempts"] = config.attempts;
    j["seed"] = config.seed;
    j["output_path"] = config.output_path;
    j["lif"] = lif_to_json(config.lif);
    return j.dump(2);
}

ExperimentConfig config_from_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("config: cannot open " + path);
    json j;
    try {
        j = json::parse(in);
    } catch (const json::parse_error& err) {
        throw std::runtime_error("config: " + path + ": " + err.what());
    }
    ExperimentConfig cfg;
    cfg.bs_antennas = j.value("bs_antennas", cfg.bs_antennas);
    cfg.streams = j.value("streams", cfg.streams);
    cfg.snr_range = j.value("snr_range", cfg.snr_range);
    cfg.frames = j.value("frames", cfg.frames);
    cfg.tx_per_frame = j.value("tx_per_frame", cfg.tx_per_frame);
    if (j.contains("detectors")) {
        cfg.detectors.clear();
        for (const auto& name : j.at("detectors"))
            cfg.detectors.push_back(detector_from_string(name.get<std::string>()));
    }
    cfg.attempts = j.value("attempts", cfg.attempts);
    cfg.seed = j.value("seed", cfg.seed);
    cfg.output_path = j.value("output_path", cfg.output_path);
    if (j.contains("lif")) lif_from_json(j.at("lif"), cfg.lif);
    return cfg;
}

std::string config_hash(const ExperimentConfig& config) {
    const std::string text = to_json_string(config);
    std::uint64_t h = 1469598103934665603ULL;  // FNV-1a offset basis
    for (unsigned char c : text) {
        h ^= c;
        h *= 1099511628211ULL;  // FNV prime
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return std::string(buf);
}

void write_ber_csv(const std::string& path, const ExperimentConfig& config,
                   const std::vector<BerRecord>& records) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("csv: cannot open " + path + " for writing");
    out << "# config_hash=" << config_hash(config) << "\n";
    out << "snr_db,detector,attempts,bit_errors,bits_total,ber,wall_time_s\n";
    char line[256];
    for (const auto& rec : records) {
        std::snprintf(line, sizeof line, "%g,%s,%d,%lld,%lld,%.6e,%.6f\n", rec.snr_db,
                      rec.detector.c_str(), rec.attempts, rec.bit_errors,
                      rec.bits_total, rec.ber(), rec.wall_time_s);
        out << line;
    }
    const std::string sidecar = sidecar_path(path);
    std::ofstream side(sidecar);
    if (!side)
        throw std::runtime_error("csv: cannot open " + sidecar + " for writing");
    side << to_json_string(config) << "\n";
}

void write_landscape_csv(const std::string& path, const std::string& params_json,
                         const std::vector<LandscapePoint>& points) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("csv: cannot open " + path + " for writing");
    out << "# params=" << params_json << "\n";
    out << "spatial_ratio,bs_antennas,streams,instances,mean_local_minima\n";
    char line[160];
    for (const auto& point : points) {
        std::snprintf(line, sizeof line, "%g,%d,%d,%d,%.8g\n", point.spatial_ratio,
                      point.bs_antennas, point.streams, point.instances,
                      point.mean_local_minima);
        out << line;
    }
}

void write_opcount_csv(const std::string& path, const OpCountReport& report) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("csv: cannot open " + path + " for writing");
    char line[320];
    std::snprintf(line, sizeof line, "# average_reduction=%.6f\n",
                  report.average_reduction);
    out << line;
    out << "bs_antennas,streams,mmse_mult,mmse_add,mmse_sqrt,mmse_div,mmse_total,"
           "qubo_mult,qubo_add,qubo_sqrt,qubo_div,qubo_total,reduction\n";
    for (const auto& row : report.rows) {
        std::snprintf(line, sizeof line,
                      "%d,%d,%.4f,%.4f,%.4f,%.4f,%.4f,%.4f,%.4f,%.4f,%.4f,%.4f,%.6f\n",
                      row.bs_antennas, row.streams, row.mmse.multiplications,
                      row.mmse.additions, row.mmse.square_roots, row.mmse.divisions,
                      row.mmse.total(), row.qubo.multiplications, row.qubo.additions,
                      row.qubo.square_roots, row.qubo.divisions, row.qubo.total(),
                      row.reduction);
        out << line;
    }
}

}  // namespace spikedet
