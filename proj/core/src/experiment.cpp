#include "lbeam/experiment.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "lbeam/link_metrics.hpp"

namespace lbeam {

namespace {

using json = nlohmann::json;

constexpr std::uint64_t kMarginTag = 0x9A46;
constexpr int kMarginRealizations = 500;

std::string trim(const std::string& s) {
    std::size_t a = 0;
    std::size_t b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return s.substr(a, b - a);
}

int as_int(const json& v, const std::string& where) {
    if (!v.is_number_integer() && !v.is_number_unsigned())
        throw ParseError(where + ": expected an integer, got " + v.dump());
    return v.get<int>();
}

std::uint64_t as_u64(const json& v, const std::string& where) {
    if (v.is_number_unsigned()) return v.get<std::uint64_t>();
    if (v.is_number_integer() && v.get<std::int64_t>() >= 0)
        return static_cast<std::uint64_t>(v.get<std::int64_t>());
    throw ParseError(where + ": expected a nonnegative integer, got " + v.dump());
}

double as_double(const json& v, const std::string& where) {
    if (!v.is_number()) throw ParseError(where + ": expected a number, got " + v.dump());
    return v.get<double>();
}

bool as_bool(const json& v, const std::string& where) {
    if (!v.is_boolean()) throw ParseError(where + ": expected true or false, got " + v.dump());
    return v.get<bool>();
}

std::string as_string(const json& v, const std::string& where) {
    if (!v.is_string()) throw ParseError(where + ": expected a string, got " + v.dump());
    return v.get<std::string>();
}

// SNR-grid keys are gathered and resolved after the whole document is read:
// explicit start/stop/step take precedence over a literal grid.
struct GridKeys {
    std::optional<std::vector<double>> grid;
    std::optional<double> start;
    std::optional<double> stop;
    std::optional<double> step;
};

void apply_schemes(SimConfig& sim, const json& v, const std::string& where) {
    std::vector<std::string> names;
    if (v.is_string()) {
        names.push_back(v.get<std::string>());
    } else if (v.is_array()) {
        for (const auto& e : v) names.push_back(as_string(e, where));
    } else {
        throw ParseError(where + ": schemes must be a string or an array of strings");
    }
    std::vector<Scheme> schemes;
    auto add = [&](Scheme s) {
        if (std::find(schemes.begin(), schemes.end(), s) == schemes.end()) schemes.push_back(s);
    };
    for (const std::string& name : names) {
        if (name == "both") {
            add(Scheme::Original);
            add(Scheme::Proposed);
        } else if (auto s = parse_scheme(name)) {
            add(*s);
        } else {
            throw ValidationError(where + ": schemes must be original, proposed, or both (got '" +
                                  name + "')");
        }
    }
    sim.schemes = std::move(schemes);
}

void apply_entry(ExperimentSpec& spec, GridKeys& grid, const std::string& key, const json& v,
                 const std::string& where) {
    SimConfig& sim = spec.sim;
    if (key == "tx_antennas") {
        sim.dims.tx_antennas = as_int(v, where);
    } else if (key == "rx_antennas") {
        sim.dims.rx_antennas = as_int(v, where);
    } else if (key == "users") {
        sim.dims.users = as_int(v, where);
    } else if (key == "streams") {
        sim.dims.streams = as_int(v, where);
    } else if (key == "snr_grid_db") {
        if (!v.is_array()) throw ParseError(where + ": snr_grid_db must be an array of numbers");
        std::vector<double> g;
        for (const auto& e : v) g.push_back(as_double(e, where));
        grid.grid = std::move(g);
    } else if (key == "snr_start_db") {
        grid.start = as_double(v, where);
    } else if (key == "snr_stop_db") {
        grid.stop = as_double(v, where);
    } else if (key == "snr_step_db") {
        grid.step = as_double(v, where);
    } else if (key == "schemes") {
        apply_schemes(sim, v, where);
    } else if (key == "max_trials") {
        sim.max_trials = as_u64(v, where);
    } else if (key == "min_bit_errors") {
        sim.min_bit_errors = as_u64(v, where);
    } else if (key == "seed") {
        sim.master_seed = as_u64(v, where);
    } else if (key == "out") {
        spec.output_path = as_string(v, where);
    } else if (key == "format") {
        const std::string f = as_string(v, where);
        if (f == "csv")
            spec.output_format = OutputFormat::Csv;
        else if (f == "json")
            spec.output_format = OutputFormat::Json;
        else
            throw ValidationError(where + ": format must be csv or json (got '" + f + "')");
    } else if (key == "report_margins") {
        spec.report_margins = as_bool(v, where);
    } else {
        throw ParseError(where + ": unknown key '" + key + "'");
    }
}

void finalize(ExperimentSpec& spec, const GridKeys& grid) {
    if (grid.start || grid.stop || grid.step) {
        const double a = grid.start.value_or(0.0);
        const double b = grid.stop.value_or(24.0);
        const double st = grid.step.value_or(2.0);
        if (!(st > 0.0)) throw ValidationError("snr_step_db > 0 violated (got " + std::to_string(st) + ")");
        if (b < a)
            throw ValidationError("snr_stop_db >= snr_start_db violated (" + std::to_string(b) +
                                  " < " + std::to_string(a) + ")");
        std::vector<double> pts;
        for (int i = 0;; ++i) {
            const double x = a + st * i;
            if (x > b + 1e-9) break;
            pts.push_back(x);
        }
        spec.sim.snr_grid_db = std::move(pts);
    } else if (grid.grid) {
        spec.sim.snr_grid_db = *grid.grid;
    }
    try {
        spec.sim.validate();
    } catch (const std::invalid_argument& e) {
        throw ValidationError(e.what());
    }
}

ExperimentSpec parse_kv(const std::string& text) {
    ExperimentSpec spec;
    GridKeys grid;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string where = "line " + std::to_string(lineno);
        if (const std::size_t hash = line.find('#'); hash != std::string::npos)
            line.erase(hash);
        const std::string stripped = trim(line);
        if (stripped.empty()) continue;
        const std::size_t eq = stripped.find('=');
        if (eq == std::string::npos)
            throw ParseError(where + ": expected 'key = value', got '" + stripped + "'");
        const std::string key = trim(stripped.substr(0, eq));
        std::string raw = trim(stripped.substr(eq + 1));
        if (key.empty()) throw ParseError(where + ": empty key");
        json v;
        if (raw.size() >= 2 &&
            ((raw.front() == '"' && raw.back() == '"') || (raw.front() == '\'' && raw.back() == '\''))) {
            v = json(raw.substr(1, raw.size() - 2));
        } else {
            v = json::parse(raw, nullptr, false);
            if (v.is_discarded()) v = json(raw);  // bare word: a string value
        }
        apply_entry(spec, grid, key, v, where);
    }
    finalize(spec, grid);
    return spec;
}

ExperimentSpec parse_json_doc(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::exception& e) {
        throw ParseError(std::string("JSON config: ") + e.what());
    }
    if (!doc.is_object()) throw ParseError("JSON config: top-level value must be an object");
    ExperimentSpec spec;
    GridKeys grid;
    for (const auto& [key, v] : doc.items())
        apply_entry(spec, grid, key, v, "field '" + key + "'");
    finalize(spec, grid);
    return spec;
}

void write_file_atomic(const std::string& path, const std::string& content) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary);
        if (!out) throw IoError("cannot open '" + tmp + "' for writing");
        out << content;
        out.flush();
        if (!out.good()) {
            std::remove(tmp.c_str());
            throw IoError("write to '" + tmp + "' failed");
        }
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0) {
        std::remove(tmp.c_str());
        throw IoError("cannot move '" + tmp + "' to '" + path + "'");
    }
}

std::string render_points_csv(const std::vector<BerPoint>& points) {
    std::string out = "snr_db,scheme,bits,bit_errors,ber,sum_rate_mean,sum_rate_stderr\n";
    char buf[256];
    for (const BerPoint& p : points) {
        std::snprintf(buf, sizeof(buf), "%.10g,%s,%llu,%llu,%.6e,%.6f,%.6f\n", p.snr_db,
                      scheme_name(p.scheme), static_cast<unsigned long long>(p.bits_simulated),
                      static_cast<unsigned long long>(p.bit_errors), p.ber, p.sum_rate_mean,
                      p.sum_rate_stderr);
        out += buf;
    }
    return out;
}

std::string render_points_json(const std::vector<BerPoint>& points) {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const BerPoint& p : points) {
        nlohmann::ordered_json row;
        row["snr_db"] = p.snr_db;
        row["scheme"] = scheme_name(p.scheme);
        row["bits"] = p.bits_simulated;
        row["bit_errors"] = p.bit_errors;
        row["ber"] = p.ber;
        row["sum_rate_mean"] = p.sum_rate_mean;
        row["sum_rate_stderr"] = p.sum_rate_stderr;
        arr.push_back(std::move(row));
    }
    return arr.dump(2) + "\n";
}

struct MarginRow {
    double snr_db;
    Scheme scheme;
    int weaker_stream;    // l, 1-based
    int stronger_stream;  // m, 1-based
    double margin_db_mean;
    int realizations;
};

// Mean positive (stronger-over-weaker) inter-stream margins from the exact
// SINRs, averaged over realizations and users.
std::vector<MarginRow> compute_margin_rows(const SimConfig& cfg) {
    std::vector<MarginRow> rows;
    const int streams = cfg.dims.streams;
    if (streams < 2) return rows;
    const RngStream root = RngStream(cfg.master_seed).split(kMarginTag);
    for (std::size_t pi = 0; pi < cfg.snr_grid_db.size(); ++pi) {
        const double sigma2 = noise_variance_for_snr_db(streams, cfg.snr_grid_db[pi]);
        const RngStream point = root.split(pi);
        std::vector<std::vector<double>> sums(
            cfg.schemes.size(), std::vector<double>(static_cast<std::size_t>(streams * streams), 0.0));
        long samples = 0;
        for (int r = 0; r < kMarginRealizations; ++r) {
            const ChannelSet cs =
                draw_channel_set(cfg.dims, sigma2, point.split(static_cast<std::uint64_t>(r)));
            for (std::size_t s = 0; s < cfg.schemes.size(); ++s) {
                std::vector<Precoder> precoders;
                for (int u = 0; u < cfg.dims.users; ++u)
                    precoders.push_back(make_precoder(cs, u, cfg.schemes[s]));
                for (int u = 0; u < cfg.dims.users; ++u) {
                    const auto table = stream_margins_db(exact_stream_sinr(cs, precoders, u));
                    for (int m = 0; m < streams; ++m)
                        for (int l = 0; l < streams; ++l)
                            sums[s][static_cast<std::size_t>(m * streams + l)] +=
                                table[static_cast<std::size_t>(m)][static_cast<std::size_t>(l)];
                }
            }
            ++samples;
        }
        const double denom = static_cast<double>(samples) * cfg.dims.users;
        for (std::size_t s = 0; s < cfg.schemes.size(); ++s)
            for (int l = 1; l < streams; ++l)
                for (int m = 0; m < l; ++m)
                    rows.push_back({cfg.snr_grid_db[pi], cfg.schemes[s], l + 1, m + 1,
                                    sums[s][static_cast<std::size_t>(m * streams + l)] / denom,
                                    kMarginRealizations});
    }
    return rows;
}

std::string render_margins_csv(const std::vector<MarginRow>& rows) {
    std::string out = "snr_db,scheme,weaker_stream,stronger_stream,margin_db_mean,realizations\n";
    char buf[192];
    for (const MarginRow& r : rows) {
        std::snprintf(buf, sizeof(buf), "%.10g,%s,%d,%d,%.6f,%d\n", r.snr_db, scheme_name(r.scheme),
                      r.weaker_stream, r.stronger_stream, r.margin_db_mean, r.realizations);
        out += buf;
    }
    return out;
}

std::string render_margins_json(const std::vector<MarginRow>& rows) {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const MarginRow& r : rows) {
        nlohmann::ordered_json row;
        row["snr_db"] = r.snr_db;
        row["scheme"] = scheme_name(r.scheme);
        row["weaker_stream"] = r.weaker_stream;
        row["stronger_stream"] = r.stronger_stream;
        row["margin_db_mean"] = r.margin_db_mean;
        row["realizations"] = r.realizations;
        arr.push_back(std::move(row));
    }
    return arr.dump(2) + "\n";
}

std::string margins_path(const std::string& path) {
    const std::size_t slash = path.find_last_of("/\\");
    const std::size_t dot = path.find_last_of('.');
    if (dot == std::string::npos || (slash != std::string::npos && dot < slash))
        return path + "_margins";
    return path.substr(0, dot) + "_margins" + path.substr(dot);
}

}  // namespace

ExperimentSpec parse_config(const std::string& text) {
    const std::string stripped = trim(text);
    if (stripped.empty()) {
        ExperimentSpec spec;
        GridKeys none;
        finalize(spec, none);
        return spec;
    }
    return stripped.front() == '{' ? parse_json_doc(text) : parse_kv(text);
}

std::string emit_config(const ExperimentSpec& spec) {
    std::ostringstream out;
    const SimConfig& sim = spec.sim;
    out << "tx_antennas = " << sim.dims.tx_antennas << '\n';
    out << "rx_antennas = " << sim.dims.rx_antennas << '\n';
    out << "users = " << sim.dims.users << '\n';
    out << "streams = " << sim.dims.streams << '\n';
    out << "snr_grid_db = " << json(sim.snr_grid_db).dump() << '\n';
    if (sim.schemes.size() == 2)
        out << "schemes = both\n";
    else
        out << "schemes = " << scheme_name(sim.schemes.front()) << '\n';
    out << "max_trials = " << sim.max_trials << '\n';
    out << "min_bit_errors = " << sim.min_bit_errors << '\n';
    out << "seed = " << sim.master_seed << '\n';
    out << "out = \"" << spec.output_path << "\"\n";
    out << "format = " << (spec.output_format == OutputFormat::Csv ? "csv" : "json") << '\n';
    out << "report_margins = " << (spec.report_margins ? "true" : "false") << '\n';
    return out.str();
}

int run_experiment(const ExperimentSpec& spec, std::ostream& log) {
    try {
        spec.sim.validate();
    } catch (const std::invalid_argument& e) {
        log << "config error: " << e.what() << '\n';
        return 2;
    }
    try {
        const std::vector<BerPoint> points = run_sweep(spec.sim);

        const std::string body = spec.output_format == OutputFormat::Csv
                                     ? render_points_csv(points)
                                     : render_points_json(points);
        write_file_atomic(spec.output_path, body);

        if (spec.report_margins) {
            const std::vector<MarginRow> rows = compute_margin_rows(spec.sim);
            const std::string mbody = spec.output_format == OutputFormat::Csv
                                          ? render_margins_csv(rows)
                                          : render_margins_json(rows);
            const std::string mpath = margins_path(spec.output_path);
            write_file_atomic(mpath, mbody);
            log << "margins written to " << mpath << '\n';
        }

        for (const BerPoint& p : points) {
            char buf[224];
            std::snprintf(buf, sizeof(buf),
                          "snr %5.1f dB  %-8s  trials=%-8llu ber=%.3e  rate=%8.4f +/- %.4f%s\n",
                          p.snr_db, scheme_name(p.scheme),
                          static_cast<unsigned long long>(p.trials), p.ber, p.sum_rate_mean,
                          p.sum_rate_stderr, p.resolved ? "" : "  [under-resolved]");
            log << buf;
        }

        if (spec.sim.schemes.size() == 2) {
            std::vector<BerPoint> original;
            std::vector<BerPoint> proposed;
            for (const BerPoint& p : points)
                (p.scheme == Scheme::Original ? original : proposed).push_back(p);
            try {
                const double so = interpolate_snr_at_ber(original, 1e-4);
                const double sp = interpolate_snr_at_ber(proposed, 1e-4);
                char buf[160];
                std::snprintf(buf, sizeof(buf),
                              "SNR at BER 1e-4: original %.2f dB, proposed %.2f dB, gain %.2f dB\n",
                              so, sp, so - sp);
                log << buf;
            } catch (const TargetNotBracketed& e) {
                log << "BER 1e-4 not bracketed on both curves; no gain summary (" << e.what()
                    << ")\n";
            }
        }
        log << "results written to " << spec.output_path << '\n';
        return 0;
    } catch (const IoError& e) {
        log << "io error: " << e.what() << '\n';
        return 3;
    } catch (const std::exception& e) {
        log << "numerical failure: " << e.what() << '\n';
        return 1;
    }
}

}  // namespace lbeam
