// Experiment driver for MU-MIMO uplink detection: Monte-Carlo BER sweeps,
// QUBO landscape statistics, multi-attempt studies, operation-count reports
// and single-instance spike rasters.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "spikedet/harness.hpp"
#include "spikedet/qubo.hpp"
#include "spikedet/snn.hpp"

namespace {

using namespace spikedet;

std::string bits_to_text(const BitVec& bits) {
    std::string text(bits.size(), '0');
    for (std::size_t j = 0; j < bits.size(); ++j)
        if (bits[j]) text[j] = '1';
    return text;
}

std::vector<int> parse_int_list(const std::string& spec) {
    std::vector<int> values;
    std::stringstream stream(spec);
    std::string item;
    while (std::getline(stream, item, ',')) values.push_back(std::stoi(item));
    if (values.empty())
        throw std::invalid_argument("expected a comma-separated integer list, got '" +
                                    spec + "'");
    return values;
}

void warn_if_low_budget(const ExperimentConfig& cfg) {
    if (cfg.bits_per_point() < 100000)
        std::cerr << "warning: only " << cfg.bits_per_point()
                  << " bits per SNR point; BER estimates below "
                  << 100.0 / cfg.bits_per_point() << " are unreliable\n";
}

void print_ber_table(const std::vector<BerRecord>& records) {
    std::printf("%8s %9s %9s %10s %12s %12s %11s\n", "snr_db", "detector",
                "attempts", "errors", "bits", "ber", "time_s");
    for (const auto& rec : records)
        std::printf("%8g %9s %9d %10lld %12lld %12.4e %11.3f\n", rec.snr_db,
                    rec.detector.c_str(), rec.attempts, rec.bit_errors,
                    rec.bits_total, rec.ber(), rec.wall_time_s);
}

void finish_ber_output(const ExperimentConfig& cfg,
                       const std::vector<BerRecord>& records) {
    print_ber_table(records);
    if (!cfg.output_path.empty()) {
        write_ber_csv(cfg.output_path, cfg, records);
        std::cerr << "wrote " << cfg.output_path << "\n";
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "MU-MIMO uplink detection experiments: ZF / MMSE / ML baselines and a "
        "spiking-network QUBO solver"};
    app.require_subcommand(1);

    // --- ber -----------------------------------------------------------
    auto* ber = app.add_subcommand("ber", "Monte-Carlo BER sweep over an SNR grid");
    int antennas = 16;
    int streams = 4;
    std::string snr = "0:15:1";
    int frames = 80;
    int tx_per_frame = 100;
    std::string detectors_text = "zf,mmse,snn";
    int attempts = 1;
    std::string config_path;
    std::uint64_t seed = 1;
    std::string out_path;
    auto* opt_antennas =
        ber->add_option("--antennas", antennas, "base-station antennas M");
    auto* opt_streams = ber->add_option("--streams", streams, "user streams K");
    auto* opt_snr =
        ber->add_option("--snr", snr, "SNR grid in dB: start:stop:step or a,b,c");
    auto* opt_frames =
        ber->add_option("--frames", frames, "channel realizations per SNR point");
    auto* opt_tx =
        ber->add_option("--tx-per-frame", tx_per_frame, "transmissions per channel");
    auto* opt_detectors = ber->add_option("--detectors", detectors_text,
                                          "comma list from zf,mmse,snn,ml");
    auto* opt_attempts =
        ber->add_option("--attempts", attempts, "spiking solver attempts per symbol");
    ber->add_option("--config", config_path,
                    "JSON config; missing keys take library defaults, flags "
                    "override the file");
    auto* opt_seed = ber->add_option("--seed", seed, "master seed");
    auto* opt_out = ber->add_option("--out", out_path, "CSV output path");
    ber->callback([&] {
        ExperimentConfig cfg;
        if (!config_path.empty()) cfg = config_from_json_file(config_path);
        if (opt_antennas->count() > 0) cfg.bs_antennas = antennas;
        if (opt_streams->count() > 0) cfg.streams = streams;
        if (opt_snr->count() > 0) cfg.snr_range = snr;
        if (opt_frames->count() > 0) cfg.frames = frames;
        if (opt_tx->count() > 0) cfg.tx_per_frame = tx_per_frame;
        if (opt_detectors->count() > 0)
            cfg.detectors = parse_detector_list(detectors_text);
        if (opt_attempts->count() > 0) cfg.attempts = attempts;
        if (opt_seed->count() > 0) cfg.seed = seed;
        if (opt_out->count() > 0) cfg.output_path = out_path;
        cfg.validate();
        warn_if_low_budget(cfg);
        finish_ber_output(cfg, run_ber_sweep(cfg));
    });

    // --- landscape -----------------------------------------------------
    auto* landscape = app.add_subcommand(
        "landscape", "Mean 1-flip local-minima count vs. spatial ratio M/K");
    std::string land_antennas = "8,16,32,64";
    int land_streams = 8;
    int land_instances = 100;
    double land_snr = 10.0;
    std::uint64_t land_seed = 1;
    std::string land_out;
    landscape->add_option("--antennas", land_antennas,
                          "comma list of antenna counts M");
    landscape->add_option("--streams", land_streams, "user streams K");
    landscape->add_option("--instances", land_instances,
                          "random instances per antenna count");
    landscape->add_option("--snr", land_snr, "SNR in dB for the noisy instances");
    landscape->add_option("--seed", land_seed, "master seed");
    landscape->add_option("--out", land_out, "CSV output path");
    landscape->callback([&] {
        const auto points = run_local_minima_study(
            parse_int_list(land_antennas), land_streams, land_instances, land_snr,
            land_seed);
        std::printf("%8s %9s %8s %10s %18s\n", "ratio", "antennas", "streams",
                    "instances", "mean_local_minima");
        for (const auto& p : points)
            std::printf("%8g %9d %8d %10d %18.4f\n", p.spatial_ratio, p.bs_antennas,
                        p.streams, p.instances, p.mean_local_minima);
        if (!land_out.empty()) {
            std::ostringstream params;
            params << "{\"antennas\":\"" << land_antennas
                   << "\",\"streams\":" << land_streams
                   << ",\"instances\":" << land_instances << ",\"snr_db\":" << land_snr
                   << ",\"seed\":" << land_seed << "}";
            write_landscape_csv(land_out, params.str(), points);
            std::cerr << "wrote " << land_out << "\n";
        }
    });

    // --- attempts ------------------------------------------------------
    auto* att = app.add_subcommand(
        "attempts", "BER vs. attempt budget for the stochastic spiking solver");
    int att_antennas = 16;
    int att_streams = 8;
    std::string att_snr = "0:15:3";
    int att_frames = 15;
    int att_tx = 100;
    std::string att_detectors = "mmse,snn";
    std::string att_budgets = "1,20,40";
    std::string att_config;
    std::uint64_t att_seed = 1;
    std::string att_out;
    auto* att_opt_antennas =
        att->add_option("--antennas", att_antennas, "base-station antennas M");
    auto* att_opt_streams = att->add_option("--streams", att_streams, "user streams K");
    auto* att_opt_snr =
        att->add_option("--snr", att_snr, "SNR grid in dB: start:stop:step or a,b,c");
    auto* att_opt_frames =
        att->add_option("--frames", att_frames, "channel realizations per SNR point");
    auto* att_opt_tx =
        att->add_option("--tx-per-frame", att_tx, "transmissions per channel");
    auto* att_opt_detectors = att->add_option("--detectors", att_detectors,
                                              "comma list from zf,mmse,snn,ml");
    att->add_option("--attempts", att_budgets, "comma list of attempt budgets");
    att->add_option("--config", att_config,
                    "JSON config; missing keys take library defaults, flags "
                    "override the file");
    auto* att_opt_seed = att->add_option("--seed", att_seed, "master seed");
    auto* att_opt_out = att->add_option("--out", att_out, "CSV output path");
    att->callback([&] {
        ExperimentConfig cfg;
        cfg.streams = 8;
        cfg.snr_range = att_snr;
        cfg.frames = att_frames;
        cfg.detectors = parse_detector_list(att_detectors);
        cfg.lif = LifParams::tuned_stochastic();
        if (!att_config.empty()) cfg = config_from_json_file(att_config);
        if (att_opt_antennas->count() > 0) cfg.bs_antennas = att_antennas;
        if (att_opt_streams->count() > 0) cfg.streams = att_streams;
        if (att_opt_snr->count() > 0) cfg.snr_range = att_snr;
        if (att_opt_frames->count() > 0) cfg.frames = att_frames;
        if (att_opt_tx->count() > 0) cfg.tx_per_frame = att_tx;
        if (att_opt_detectors->count() > 0)
            cfg.detectors = parse_detector_list(att_detectors);
        if (att_opt_seed->count() > 0) cfg.seed = att_seed;
        if (att_opt_out->count() > 0) cfg.output_path = att_out;
        cfg.validate();
        warn_if_low_budget(cfg);
        finish_ber_output(cfg, run_attempts_study(cfg, parse_int_list(att_budgets)));
    });

    // --- opcount -------------------------------------------------------
    auto* opcount = app.add_subcommand(
        "opcount", "Receiver preprocessing operation counts: MMSE vs. QUBO build");
    std::string dims_text;
    std::string opcount_out;
    opcount->add_option("--dims", dims_text,
                        "comma list of MxK pairs (default: 16,32,64 x 4,8,16)");
    opcount->add_option("--out", opcount_out, "CSV output path");
    opcount->callback([&] {
        const auto dims =
            dims_text.empty() ? default_dim_grid() : parse_dim_list(dims_text);
        const OpCountReport report = report_op_counts(dims);
        std::printf("%6s %4s %14s %14s %10s\n", "M", "K", "mmse_total", "qubo_total",
                    "reduction");
        for (const auto& row : report.rows)
            std::printf("%6d %4d %14.1f %14.1f %9.1f%%\n", row.bs_antennas,
                        row.streams, row.mmse.total(), row.qubo.total(),
                        100.0 * row.reduction);
        std::printf("average reduction: %.1f%%\n", 100.0 * report.average_reduction);
        if (!opcount_out.empty()) {
            write_opcount_csv(opcount_out, report);
            std::cerr << "wrote " << opcount_out << "\n";
        }
    });

    // --- spike-dump ----------------------------------------------------
    auto* dump = app.add_subcommand(
        "spike-dump",
        "Simulate one random instance and dump its spike raster (the instance "
        "matches frame 0 / transmission 0 of a ber sweep with the same seed)");
    int dump_antennas = 16;
    int dump_streams = 4;
    double dump_snr = 10.0;
    std::uint64_t dump_seed = 1;
    double dump_noise = 0.0;
    std::string dump_out;
    std::string dump_qubo_out;
    dump->add_option("--antennas", dump_antennas, "base-station antennas M");
    dump->add_option("--streams", dump_streams, "user streams K");
    dump->add_option("--snr", dump_snr, "SNR in dB");
    dump->add_option("--seed", dump_seed, "master seed");
    auto* dump_opt_noise = dump->add_option("--noise-variance", dump_noise,
                                            "override synaptic noise variance");
    dump->add_option("--out", dump_out, "raster output path (one 0/1 line per step)")
        ->required();
    dump->add_option("--qubo-out", dump_qubo_out, "also dump the QUBO matrix here");
    dump->callback([&] {
        Rng channel_rng(derive_seed(dump_seed, 1));
        const ChannelMatrix channel =
            generate_rayleigh_channel(dump_antennas, dump_streams, channel_rng);
        Rng bit_rng(derive_seed(dump_seed, 2));
        BitVec bits(2 * dump_streams);
        for (auto& b : bits) b = static_cast<std::uint8_t>(bit_rng.next_u64() & 1u);
        Rng noise_rng(derive_seed(dump_seed, 3));
        const Eigen::VectorXcd y = transmit(channel, bits_to_qpsk(bits),
                                            SnrSpec::from_db(dump_snr), noise_rng);
        const RealSystem sys = complex_to_real(channel, y);
        const QuboInstance inst = build_qubo(sys, kQpskAlpha);

        LifParams lif = LifParams::tuned();
        if (dump_opt_noise->count() > 0) lif.noise_variance = dump_noise;
        const QuboInstance scaled = inst.normalized();
        const SpikingNetwork net = init_network(scaled);
        Rng snn_rng(derive_seed(dump_seed, 4));
        const SpikeRaster raster =
            run(net, lif, lif.noise_variance > 0.0 ? &snn_rng : nullptr);
        const BitVec decoded = decode(raster, lif);

        std::ofstream out(dump_out);
        if (!out)
            throw std::runtime_error("spike-dump: cannot open " + dump_out +
                                     " for writing");
        write_raster(raster, out);
        std::cerr << "wrote " << dump_out << "\n";
        if (!dump_qubo_out.empty()) {
            std::ofstream qout(dump_qubo_out);
            if (!qout)
                throw std::runtime_error("spike-dump: cannot open " + dump_qubo_out +
                                         " for writing");
            write_matrix(inst, qout);
            std::cerr << "wrote " << dump_qubo_out << "\n";
        }

        std::printf("instance: %dx%d, %g dB, seed %llu, %d steps\n", dump_antennas,
                    dump_streams, dump_snr,
                    static_cast<unsigned long long>(dump_seed), lif.steps);
        std::printf("tx bits:      %s\n", bits_to_text(bits).c_str());
        std::printf("decoded bits: %s   objective %.6f\n",
                    bits_to_text(decoded).c_str(), objective(inst, decoded));
        if (2 * dump_streams <= kMaxEnumerationBits) {
            const MlResult ml = ml_brute_force(sys, kQpskAlpha);
            std::printf("ml bits:      %s   objective %.6f\n",
                        bits_to_text(ml.bits).c_str(), objective(inst, ml.bits));
            std::printf("decode matches ml: %s\n",
                        decoded == ml.bits ? "yes" : "no");
        } else {
            std::printf("ml bits:      skipped (2K above enumeration limit)\n");
        }
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
