#include "kacz/experiment.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>

#include "json.hpp"

#include "kacz/error.hpp"
#include "kacz/format.hpp"
#include "kacz/kaczmarz.hpp"
#include "kacz/spectral.hpp"

namespace kacz {

namespace {

constexpr double nan = std::numeric_limits<double>::quiet_NaN();

// Aux vectors and noise are drawn from separate streams of the same seed.
constexpr std::uint64_t noise_stream = 0x9e3779b97f4a7c15ULL;

std::string trim(std::string_view s)
{
    const auto space = [](char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; };
    while (!s.empty() && space(s.front())) s.remove_prefix(1);
    while (!s.empty() && space(s.back())) s.remove_suffix(1);
    return std::string(s);
}

std::string lower(std::string_view s)
{
    std::string out(s);
    for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return out;
}

[[noreturn]] void bad_value(std::string_view key, std::string_view value, std::string_view expected)
{
    throw ConfigError("config key '" + std::string(key) + "': cannot read '" + std::string(value) + "' as " +
                      std::string(expected));
}

template <class Int>
Int parse_int(std::string_view key, std::string_view value)
{
    Int out{};
    const auto* end = value.data() + value.size();
    const auto [ptr, ec] = std::from_chars(value.data(), end, out);
    if (ec != std::errc() || ptr != end) bad_value(key, value, "an integer");
    return out;
}

double parse_real(std::string_view key, std::string_view value)
{
    const std::string v = lower(value);
    if (v == "nan") return nan;
    if (v == "inf") return std::numeric_limits<double>::infinity();
    if (v == "-inf") return -std::numeric_limits<double>::infinity();
    double out = 0.0;
    const auto* end = value.data() + value.size();
    const auto [ptr, ec] = std::from_chars(value.data(), end, out);
    if (ec != std::errc() || ptr != end) bad_value(key, value, "a number");
    return out;
}

bool parse_bool(std::string_view key, std::string_view value)
{
    const std::string v = lower(value);
    if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
    if (v == "false" || v == "0" || v == "no" || v == "off") return false;
    bad_value(key, value, "a boolean");
}

std::string show(bool v) { return v ? "true" : "false"; }

}  // namespace

std::string_view to_string(RunMode mode) noexcept
{
    switch (mode) {
    case RunMode::plain: return "plain";
    case RunMode::ak: return "ak";
    case RunMode::rk: return "rk";
    }
    return "?";
}

RunMode parse_run_mode(std::string_view name)
{
    const std::string s = lower(name);
    for (auto m : {RunMode::plain, RunMode::ak, RunMode::rk})
        if (s == to_string(m)) return m;
    throw ConfigError("unknown mode '" + std::string(name) + "' (expected plain, ak, or rk)");
}

std::string_view to_string(OutputFormat format) noexcept { return format == OutputFormat::csv ? "csv" : "json"; }

OutputFormat parse_output_format(std::string_view name)
{
    const std::string s = lower(name);
    if (s == "csv") return OutputFormat::csv;
    if (s == "json") return OutputFormat::json;
    throw ConfigError("unknown output format '" + std::string(name) + "' (expected csv or json)");
}

const std::vector<std::string>& experiment_keys()
{
    static const std::vector<std::string> keys = {
        "matrix",    "size",         "precondition", "mode",        "transform",      "k",
        "aux",       "seed",         "noise",        "max_iter",    "lanczos",        "stop",
        "stop_window", "stop_growth", "stop_smallness", "tolerance", "breakdown",      "max_condition",
        "spectral",  "out",          "format",
    };
    return keys;
}

void ExperimentConfig::set(std::string_view key_in, std::string_view value_in)
{
    const std::string key = trim(key_in);
    const std::string value = trim(value_in);
    if (key == "matrix") matrix = parse_gallery_kind(value);
    else if (key == "size") size = parse_int<Index>(key, value);
    else if (key == "precondition") precondition = parse_bool(key, value);
    else if (key == "mode") mode = parse_run_mode(value);
    else if (key == "transform") transform = parse_transform_kind(value);
    else if (key == "k") k = parse_int<int>(key, value);
    else if (key == "aux") aux = parse_aux_policy(value);
    else if (key == "seed") seed = parse_int<std::uint64_t>(key, value);
    else if (key == "noise") noise = parse_real(key, value);
    else if (key == "max_iter") max_iter = parse_int<Index>(key, value);
    else if (key == "lanczos") lanczos = parse_bool(key, value);
    else if (key == "stop") stop = parse_bool(key, value);
    else if (key == "stop_window") stop_window = parse_int<int>(key, value);
    else if (key == "stop_growth") stop_growth = parse_real(key, value);
    else if (key == "stop_smallness") stop_smallness = parse_real(key, value);
    else if (key == "tolerance") tolerance = parse_real(key, value);
    else if (key == "breakdown") breakdown = parse_breakdown_policy(value);
    else if (key == "max_condition") max_condition = parse_real(key, value);
    else if (key == "spectral") spectral = parse_bool(key, value);
    else if (key == "out") out = value;
    else if (key == "format") format = parse_output_format(value);
    else throw ConfigError("unknown config key '" + key + "'");
}

std::string ExperimentConfig::get(std::string_view key) const
{
    if (key == "matrix") return std::string(to_string(matrix));
    if (key == "size") return std::to_string(size);
    if (key == "precondition") return show(precondition);
    if (key == "mode") return std::string(to_string(mode));
    if (key == "transform") return std::string(to_string(transform));
    if (key == "k") return std::to_string(k);
    if (key == "aux") return std::string(to_string(aux));
    if (key == "seed") return std::to_string(seed);
    if (key == "noise") return format_double(noise);
    if (key == "max_iter") return std::to_string(max_iter);
    if (key == "lanczos") return show(lanczos);
    if (key == "stop") return show(stop);
    if (key == "stop_window") return std::to_string(stop_window);
    if (key == "stop_growth") return format_double(stop_growth);
    if (key == "stop_smallness") return format_double(stop_smallness);
    if (key == "tolerance") return format_double(tolerance);
    if (key == "breakdown") return std::string(to_string(breakdown));
    if (key == "max_condition") return format_double(max_condition);
    if (key == "spectral") return show(spectral);
    if (key == "out") return out;
    if (key == "format") return std::string(to_string(format));
    throw ConfigError("unknown config key '" + std::string(key) + "'");
}

void ExperimentConfig::merge(std::string_view text)
{
    std::istringstream in{std::string(text)};
    std::string line;
    int number = 0;
    while (std::getline(in, line)) {
        ++number;
        const std::string t = trim(line);
        if (t.empty() || t.front() == '#') continue;
        const auto eq = t.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config line " + std::to_string(number) + ": expected key = value");
        set(std::string_view(t).substr(0, eq), std::string_view(t).substr(eq + 1));
    }
}

ExperimentConfig ExperimentConfig::parse(std::string_view text)
{
    ExperimentConfig c;
    c.merge(text);
    return c;
}

ExperimentConfig ExperimentConfig::load(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse(buf.str());
}

std::string ExperimentConfig::serialize() const
{
    std::string s;
    for (const auto& key : experiment_keys()) s += key + " = " + get(key) + "\n";
    return s;
}

void ExperimentConfig::validate() const
{
    if (size < 2) throw ConfigError("size must be at least 2");
    if (max_iter < 0) throw ConfigError("max_iter must be non-negative");
    if (!(noise >= 0.0) || !std::isfinite(noise)) throw ConfigError("noise must be a finite non-negative number");
    if (mode == RunMode::plain) return;
    if (k < 1) throw ConfigError("k must be at least 1");
    if (size < k)
        throw ConfigError("size " + std::to_string(size) + " is too small for k = " + std::to_string(k) +
                          ": the k differences of a window need room in R^N");
    if (lanczos && transform != TransformKind::topological)
        throw ConfigError("lanczos mode applies to the topological transform only");
    accel_config().validate();
}

AccelConfig ExperimentConfig::accel_config() const
{
    AccelConfig a;
    a.kind = transform;
    a.order = k;
    a.mode = mode == RunMode::rk ? AccelMode::rk : AccelMode::ak;
    a.max_outer = max_iter;
    a.aux_policy = aux;
    a.seed = seed;
    a.lanczos = lanczos;
    a.stop = {stop, stop_window, stop_growth, stop_smallness};
    a.tolerance = tolerance;
    a.max_condition = max_condition;
    a.on_breakdown = breakdown;
    return a;
}

NoiseSpec ExperimentConfig::noise_spec() const { return {noise, seed ^ noise_stream}; }

LinearSystem build_system(const ExperimentConfig& config)
{
    LinearSystem system = build_gallery(config.matrix, config.size);
    if (config.precondition) system = precondition_rows(system);
    return add_noise(system, config.noise_spec());
}

namespace {

void run_plain(const LinearSystem& system, const ExperimentConfig& config, ExperimentResult& result)
{
    Vector x = Vector::Zero(system.order());
    Vector previous;
    const double rhs = system.rhs().norm();
    for (Index n = 0;; ++n) {
        const double err = system.relative_error(x);
        const double dx = n == 0 ? nan : (x - previous).norm();
        result.records.push_back({n, err, err, 1.0, dx, n == 0 ? nan : 1.0, false});
        if (n == config.max_iter) break;
        if (config.tolerance > 0.0 && system.residual(x).norm() <= config.tolerance * rhs) {
            result.summary.stop_reason = StopReason::converged;
            break;
        }
        previous = x;
        sweep_in_place(system, x);
        ++result.summary.sweeps;
    }
}

}  // namespace

ExperimentResult run_experiment(const ExperimentConfig& config)
{
    config.validate();
    const auto start = std::chrono::steady_clock::now();
    const LinearSystem system = build_system(config);

    ExperimentResult result;
    result.config = config;
    if (config.mode == RunMode::plain) {
        run_plain(system, config, result);
    } else {
        const AccelRun run = accel_run(system, Vector::Zero(system.order()), config.accel_config());
        result.records = run_records(run);
        result.events = run.events;
        result.summary.sweeps = run.sweeps;
        result.summary.stop_reason = run.stop_reason;
        result.summary.signal_index = run.signal_index;
    }

    auto& s = result.summary;
    s.final_error = result.records.empty() ? nan : result.records.back().err_z;
    for (const auto& r : result.records) {
        if (r.breakdown) ++s.breakdowns;
        if (!s.iterations_to_target && r.err_z <= target_error) s.iterations_to_target = r.n;
    }

    if (config.spectral) {
        const SpectralDiagnostics d = spectral_diagnostics(system);
        SpectralSummary sp;
        sp.spectral_radius = d.spectral_radius;
        sp.second_modulus = d.eigenvalues.size() > 1 ? std::abs(d.eigenvalues[1]) : 0.0;
        sp.meany_constant = d.meany_constant;
        sp.condition_number = d.condition_number;
        sp.minimal_polynomial_degree = d.minimal_polynomial_degree;
        result.spectral = sp;
    }
    s.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return result;
}

void write_csv(const ExperimentResult& result, std::ostream& out) { write_run_csv(result.records, out); }

std::string to_json(const ExperimentResult& result)
{
    using nlohmann::ordered_json;
    const auto number = [](double v) { return std::isfinite(v) ? ordered_json(v) : ordered_json(nullptr); };

    ordered_json config = ordered_json::object();
    for (const auto& key : experiment_keys()) config[key] = result.config.get(key);

    ordered_json records = ordered_json::array();
    for (const auto& r : result.records)
        records.push_back({{"n", r.n},
                           {"err_z", number(r.err_z)},
                           {"err_kacz_ref", number(r.err_kacz_ref)},
                           {"err_ratio", number(r.err_ratio)},
                           {"dz_norm", number(r.dz_norm)},
                           {"stop_ratio", number(r.stop_ratio)},
                           {"breakdown_flag", r.breakdown ? 1 : 0}});

    ordered_json breakdowns = ordered_json::array();
    for (const auto& e : result.events) breakdowns.push_back({{"n", e.n}, {"message", e.message}, {"cell", e.cell}});

    const auto& s = result.summary;
    ordered_json summary = {
        {"final_error", number(s.final_error)},
        {"iterations_to_1e-11", s.iterations_to_target ? ordered_json(*s.iterations_to_target) : ordered_json(nullptr)},
        {"breakdowns", s.breakdowns},
        {"sweeps", s.sweeps},
        {"stop_reason", std::string(to_string(s.stop_reason))},
        {"signal_index", s.signal_index ? ordered_json(*s.signal_index) : ordered_json(nullptr)},
        {"wall_seconds", s.wall_seconds},
    };

    ordered_json doc = {{"config", config}, {"records", records}, {"summary", summary}, {"breakdowns", breakdowns}};
    if (result.spectral) {
        const auto& sp = *result.spectral;
        doc["spectral"] = {{"spectral_radius", sp.spectral_radius},
                           {"second_modulus", sp.second_modulus},
                           {"meany_constant", sp.meany_constant},
                           {"condition_number", sp.condition_number},
                           {"minimal_polynomial_degree", sp.minimal_polynomial_degree}};
    }
    return doc.dump(2) + "\n";
}

std::string render(const ExperimentResult& result)
{
    if (result.config.format == OutputFormat::json) return to_json(result);
    std::ostringstream out;
    write_csv(result, out);
    return out.str();
}

namespace {

std::vector<std::string> group_labels(const std::vector<ExperimentResult>& results)
{
    std::vector<std::string> labels;
    std::map<std::string, int> by_kind;
    std::map<std::string, int> by_kind_k;
    auto base = [](const ExperimentConfig& c) {
        return c.mode == RunMode::plain ? std::string("plain") : std::string(to_string(c.transform));
    };
    for (const auto& r : results) {
        ++by_kind[base(r.config)];
        ++by_kind_k[base(r.config) + "-k" + std::to_string(r.config.k)];
    }
    for (std::size_t i = 0; i < results.size(); ++i) {
        const auto& c = results[i].config;
        std::string label = base(c);
        if (by_kind[label] > 1) label += "-k" + std::to_string(c.k);
        if (by_kind_k[base(c) + "-k" + std::to_string(c.k)] > 1) label += "-" + std::to_string(i);
        labels.push_back(label);
    }
    return labels;
}

}  // namespace

std::string compare_results(const std::vector<ExperimentResult>& results)
{
    for (std::size_t i = 1; i < results.size(); ++i) {
        const auto& a = results.front().config;
        const auto& b = results[i].config;
        if (a.matrix != b.matrix || a.size != b.size || a.mode != b.mode)
            throw ConfigError("compare: config " + std::to_string(i) + " uses " + std::string(to_string(b.matrix)) +
                              " N=" + std::to_string(b.size) + " mode " + std::string(to_string(b.mode)) +
                              ", the first uses " + std::string(to_string(a.matrix)) + " N=" +
                              std::to_string(a.size) + " mode " + std::string(to_string(a.mode)));
    }
    const auto labels = group_labels(results);
    static const char* columns[] = {"err_z", "err_kacz_ref", "err_ratio", "dz_norm", "stop_ratio", "breakdown_flag"};

    std::string out = "n";
    for (const auto& label : labels)
        for (const char* c : columns) out += "," + label + ":" + c;
    out += "\n";

    std::size_t rows = 0;
    for (const auto& r : results) rows = std::max(rows, r.records.size());
    for (std::size_t n = 0; n < rows; ++n) {
        out += std::to_string(n);
        for (const auto& r : results) {
            if (n >= r.records.size()) {
                out += ",,,,,,";
                continue;
            }
            const RunRecord& rec = r.records[n];
            for (double v : {rec.err_z, rec.err_kacz_ref, rec.err_ratio, rec.dz_norm, rec.stop_ratio})
                out += "," + format_field(v);
            out += rec.breakdown ? ",1" : ",0";
        }
        out += "\n";
    }
    return out;
}

std::string compare_suite(const std::vector<ExperimentConfig>& configs)
{
    for (std::size_t i = 1; i < configs.size(); ++i) {
        const auto& a = configs.front();
        const auto& b = configs[i];
        if (a.matrix != b.matrix || a.size != b.size || a.mode != b.mode)
            throw ConfigError("compare: config " + std::to_string(i) + " does not share matrix, size, and mode with the first");
    }
    std::vector<ExperimentResult> results;
    results.reserve(configs.size());
    for (const auto& c : configs) results.push_back(run_experiment(c));
    return compare_results(results);
}

}  // namespace kacz
