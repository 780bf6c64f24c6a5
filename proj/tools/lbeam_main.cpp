#include <cstdint>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"

#include "lbeam/experiment.hpp"
#include "lbeam/property_checks.hpp"

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw lbeam::IoError("cannot open config file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    if (in.bad()) throw lbeam::IoError("error reading config file '" + path + "'");
    return ss.str();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Leakage-based MU-MIMO linear precoding: BER / sum-rate sweeps"};

    std::string config_path;
    std::string out_path;
    std::string format;
    std::string schemes;
    int tx = 0, rx = 0, users = 0, streams = 0;
    double snr_start = 0.0, snr_stop = 0.0, snr_step = 0.0;
    std::uint64_t seed = 0, min_errors = 0, max_trials = 0;
    bool check_properties = false;
    bool report_margins = false;

    app.add_option("--config", config_path,
                   "Config file: key = value lines or a JSON object");
    app.add_option("--out", out_path, "Result file path (default results.csv)");
    app.add_option("--format", format, "Result format: csv or json (default csv)");
    app.add_option("--seed", seed, "Master RNG seed (default 1)");
    app.add_option("--snr-start", snr_start, "First SNR grid point in dB (default 0)");
    app.add_option("--snr-stop", snr_stop, "Last SNR grid point in dB (default 24)");
    app.add_option("--snr-step", snr_step, "SNR grid spacing in dB (default 2)");
    app.add_option("--streams", streams, "Streams per user (L, default 2)");
    app.add_option("--users", users, "Number of users (K, default 2)");
    app.add_option("--tx-antennas", tx, "Transmit antennas (N, default 8)");
    app.add_option("--rx-antennas", rx, "Receive antennas per user (M, default 3)");
    app.add_option("--schemes", schemes,
                   "Schemes to simulate: original, proposed, or both (default both)");
    app.add_option("--min-errors", min_errors,
                   "Bit errors to collect per point and scheme (default 200)");
    app.add_option("--max-trials", max_trials,
                   "Channel-realization cap per grid point (default 1000000)");
    app.add_flag("--check-properties", check_properties,
                 "Run the analytic property suite instead of a sweep");
    app.add_flag("--report-margins", report_margins,
                 "Also write mean inter-stream margins to a sibling file");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        const std::string base_text = config_path.empty() ? std::string{} : read_file(config_path);
        const lbeam::ExperimentSpec base = lbeam::parse_config(base_text);

        // Command-line flags append to the rendered base config; later keys win.
        std::ostringstream doc;
        doc << std::setprecision(17) << lbeam::emit_config(base);
        if (app.count("--tx-antennas")) doc << "tx_antennas = " << tx << '\n';
        if (app.count("--rx-antennas")) doc << "rx_antennas = " << rx << '\n';
        if (app.count("--users")) doc << "users = " << users << '\n';
        if (app.count("--streams")) doc << "streams = " << streams << '\n';
        if (app.count("--snr-start") || app.count("--snr-stop") || app.count("--snr-step")) {
            // A partial override keeps the other endpoints of the base grid.
            const auto& g = base.sim.snr_grid_db;
            const double a = app.count("--snr-start") ? snr_start : g.front();
            const double b = app.count("--snr-stop") ? snr_stop : g.back();
            const double st =
                app.count("--snr-step") ? snr_step : (g.size() >= 2 ? g[1] - g[0] : 2.0);
            doc << "snr_start_db = " << a << '\n';
            doc << "snr_stop_db = " << b << '\n';
            doc << "snr_step_db = " << st << '\n';
        }
        if (app.count("--schemes")) doc << "schemes = " << schemes << '\n';
        if (app.count("--max-trials")) doc << "max_trials = " << max_trials << '\n';
        if (app.count("--min-errors")) doc << "min_bit_errors = " << min_errors << '\n';
        if (app.count("--seed")) doc << "seed = " << seed << '\n';
        if (app.count("--out")) doc << "out = \"" << out_path << "\"\n";
        if (app.count("--format")) doc << "format = " << format << '\n';
        if (report_margins) doc << "report_margins = true\n";

        const lbeam::ExperimentSpec spec = lbeam::parse_config(doc.str());

        if (check_properties) {
            const lbeam::PropertySuiteReport report =
                lbeam::run_property_checks(200, spec.sim.master_seed);
            lbeam::print_property_report(report, std::cout);
            return report.all_passed() ? 0 : 1;
        }
        return lbeam::run_experiment(spec, std::cout);
    } catch (const lbeam::ParseError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    } catch (const lbeam::ValidationError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    } catch (const lbeam::IoError& e) {
        std::cerr << "io error: " << e.what() << '\n';
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
