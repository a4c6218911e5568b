// Command-line front end: link sweeps, PA back-off, PAPR and phase-noise
// spectrum analyses. Every subcommand writes the resolved configuration to
// the output directory next to its CSV files.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "subthz/backoff.hpp"
#include "subthz/config.hpp"
#include "subthz/csv.hpp"
#include "subthz/phase_noise.hpp"
#include "subthz/rng.hpp"
#include "subthz/spectrum.hpp"
#include "subthz/sweep.hpp"
#include "subthz/waveform.hpp"

namespace fs = std::filesystem;
using namespace subthz;

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;
constexpr const char* kSnapshotName = "resolved_config.ini";

struct Options {
    std::string config_path;
    std::string out_dir = "out";
    std::vector<std::string> overrides;
    long long seed = -1;
    int threads = 1;
    // backoff
    std::string pa = "rapp";
    double smoothness = 2.0;
    // pn-psd
    int realizations = 100;
    // run
    double snr_db = std::numeric_limits<double>::quiet_NaN();
};

LinkConfig resolve(const Options& o) {
    LinkConfig cfg = o.config_path.empty() ? LinkConfig{} : load_config(o.config_path);
    for (const auto& ov : o.overrides) apply_override(cfg, ov);
    if (o.seed >= 0) cfg.sweep.master_seed = static_cast<std::uint64_t>(o.seed);
    validate_config(cfg);
    return cfg;
}

fs::path prepare_out(const Options& o, const LinkConfig& cfg) {
    const fs::path dir(o.out_dir);
    fs::create_directories(dir);
    std::ofstream(dir / kSnapshotName) << serialize_config(cfg);
    return dir;
}

void print_point(const SweepPoint& p) {
    std::cerr << "snr " << format_number(p.snr_db) << " dB: " << p.errors << "/" << p.blocks
              << " bler " << format_number(p.bler()) << "\n";
}

int cmd_sweep(const Options& o, bool single_point) {
    LinkConfig cfg = resolve(o);
    if (single_point) {
        const double snr = std::isnan(o.snr_db) ? cfg.sweep.snr_start_db : o.snr_db;
        cfg.sweep.snr_start_db = snr;
        cfg.sweep.snr_stop_db = snr;
    }
    const auto dir = prepare_out(o, cfg);
    SweepOptions opts;
    opts.threads = o.threads;
    opts.on_point = print_point;
    const auto result = run_sweep(cfg, opts);
    std::ofstream(dir / "sweep.csv") << [&] {
        std::ostringstream s;
        write_sweep_csv(s, {result});
        return s.str();
    }();
    std::ofstream summary(dir / "summary.csv");
    write_summary_csv(summary, {result});
    std::cout << cfg.sweep.config_id << ": required SNR "
              << (result.required_snr_db ? format_number(*result.required_snr_db) + " dB" : std::string("NA"))
              << " (" << result.wall_time_s << " s)\n";
    return 0;
}

int cmd_backoff(const Options& o) {
    const LinkConfig cfg = resolve(o);
    const auto dir = prepare_out(o, cfg);
    PaModel pa;
    if (o.pa == "ideal") pa = PaModel::ideal();
    else if (o.pa == "rapp") pa = PaModel::rapp(o.smoothness);
    else if (o.pa == "clip") pa = PaModel::hard_clip();
    else throw ConfigError("--pa must be ideal, rapp or clip");
    BackoffSettings settings;
    settings.numerology = cfg.numerology();
    settings.seed = stream_seed(cfg.sweep.master_seed, "backoff");
    std::ofstream csv(dir / "backoff.csv");
    csv << "waveform,modulation,backoff_db\n";
    for (auto wf : {WaveformKind::Ofdm, WaveformKind::ScFdma}) {
        for (auto mod : {Modulation::Qpsk, Modulation::Qam16, Modulation::Qam64, Modulation::Qam256}) {
            const double bo = required_backoff(wf, mod, pa, settings);
            csv << to_string(wf) << ',' << to_string(mod) << ',' << format_number(bo) << '\n';
            std::cout << to_string(wf) << ' ' << to_string(mod) << ": " << format_number(bo) << " dB\n";
        }
    }
    return 0;
}

int cmd_papr(const Options& o) {
    const LinkConfig cfg = resolve(o);
    const auto dir = prepare_out(o, cfg);
    BackoffSettings settings;
    settings.numerology = cfg.numerology();
    settings.symbols = 280;
    settings.seed = stream_seed(cfg.sweep.master_seed, "papr");
    std::vector<double> levels;
    for (int i = 0; i <= 56; ++i) levels.push_back(0.25 * i);
    std::ofstream csv(dir / "papr.csv");
    csv << "waveform,modulation,papr_db,ccdf\n";
    for (auto wf : {WaveformKind::Ofdm, WaveformKind::ScFdma}) {
        const BackoffProbe probe(wf, cfg.modulation, settings);
        const auto ccdf = power_ccdf(probe.signal(), levels);
        for (std::size_t i = 0; i < levels.size(); ++i) {
            csv << to_string(wf) << ',' << to_string(cfg.modulation) << ',' << format_number(levels[i]) << ','
                << format_number(ccdf[i]) << '\n';
        }
        std::cout << to_string(wf) << ": PAPR at 1e-3 = " << format_number(papr_ccdf(probe.signal(), 1e-3))
                  << " dB\n";
    }
    return 0;
}

int cmd_pn_psd(const Options& o) {
    const LinkConfig cfg = resolve(o);
    const auto dir = prepare_out(o, cfg);
    if (o.realizations < 1) throw ConfigError("--realizations must be positive");
    const Numerology num = cfg.numerology();
    const double fs = num.sample_rate_hz;
    const std::size_t n = 1 << 16;
    const std::size_t seg = 1 << 12;
    std::ofstream csv(dir / "pn_psd.csv");
    csv << "profile,offset_hz,model_dbc_hz,measured_dbc_hz\n";
    for (const auto& name : {cfg.pn.bs_profile, cfg.pn.ue_profile}) {
        const PnModel& model = cfg.pn_profiles.at(name);
        if (model.is_ideal()) continue;
        const PnSynthesizer gen(model, cfg.carrier_hz(), fs, n);
        std::vector<double> acc;
        std::vector<double> freq;
        for (int r = 0; r < o.realizations; ++r) {
            const auto phase = gen(derive_seed({cfg.sweep.master_seed, label_hash(name), static_cast<std::uint64_t>(r)}));
            const auto est = welch_psd_real(phase, fs, seg);
            if (acc.empty()) {
                acc.assign(est.psd.size(), 0.0);
                freq = est.frequency_hz;
            }
            for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += est.psd[i];
        }
        for (std::size_t i = 0; i < acc.size(); ++i) {
            csv << name << ',' << format_number(freq[i]) << ','
                << format_number(pn_psd(model, freq[i], cfg.carrier_hz())) << ','
                << format_number(10.0 * std::log10(acc[i] / o.realizations)) << '\n';
        }
    }
    return 0;
}

int cmd_validate(const Options& o, bool out_given) {
    const LinkConfig cfg = resolve(o);
    if (out_given) prepare_out(o, cfg);
    std::cout << serialize_config(cfg);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Sub-THz OFDM / SC-FDMA link-level simulator"};
    app.require_subcommand(1);
    Options o;
    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", o.config_path, "INI configuration file");
        sub->add_option("--out", o.out_dir, "Output directory");
        sub->add_option("--set", o.overrides, "Override, section.key=value (repeatable)");
        sub->add_option("--seed", o.seed, "Master seed")->check(CLI::NonNegativeNumber);
        sub->add_option("--threads", o.threads, "Worker threads")->check(CLI::PositiveNumber);
    };
    auto* run = app.add_subcommand("run", "Monte-Carlo BLER at a single SNR");
    add_common(run);
    run->add_option("--snr", o.snr_db, "SNR in dB (default: sweep.snr_start_db)");
    auto* sweep = app.add_subcommand("sweep", "BLER sweep over the configured SNR grid");
    add_common(sweep);
    auto* backoff = app.add_subcommand("backoff", "Required PA back-off per waveform and modulation");
    add_common(backoff);
    backoff->add_option("--pa", o.pa, "PA model: rapp, clip or ideal");
    backoff->add_option("--smoothness", o.smoothness, "Rapp smoothness factor");
    auto* papr = app.add_subcommand("papr", "PAPR CCDF of both waveforms");
    add_common(papr);
    auto* pn = app.add_subcommand("pn-psd", "Phase-noise model versus averaged periodogram");
    add_common(pn);
    pn->add_option("--realizations", o.realizations, "Number of averaged realizations");
    auto* validate = app.add_subcommand("validate-config", "Parse, resolve and print the configuration");
    add_common(validate);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitConfig;
    }

    try {
        if (run->parsed()) return cmd_sweep(o, true);
        if (sweep->parsed()) return cmd_sweep(o, false);
        if (backoff->parsed()) return cmd_backoff(o);
        if (papr->parsed()) return cmd_papr(o);
        if (pn->parsed()) return cmd_pn_psd(o);
        if (validate->parsed()) return cmd_validate(o, validate->count("--out") > 0);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNumerical;
    }
    return kExitConfig;
}
