#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "kacz/accel.hpp"
#include "kacz/linalg.hpp"
#include "kacz/transforms.hpp"

namespace kacz {

enum class RunMode { plain, ak, rk };

std::string_view to_string(RunMode mode) noexcept;
RunMode parse_run_mode(std::string_view name);

enum class OutputFormat { csv, json };

std::string_view to_string(OutputFormat format) noexcept;
OutputFormat parse_output_format(std::string_view name);

/// Everything needed to reproduce one run. Stored as a flat `key = value`
/// file; serialize() writes every key, so parse(serialize(c)) == c.
struct ExperimentConfig {
    GalleryKind matrix = GalleryKind::parter;
    Index size = 1000;
    bool precondition = true;
    RunMode mode = RunMode::ak;
    TransformKind transform = TransformKind::vector_epsilon;
    int k = 5;
    AuxPolicy aux = AuxPolicy::random;
    std::uint64_t seed = 0;  ///< auxiliary vectors and noise
    double noise = 0.0;      ///< delta, relative to ||b||
    Index max_iter = 30;
    bool lanczos = false;
    bool stop = false;
    int stop_window = 5;
    double stop_growth = 10.0;
    double stop_smallness = 1e-13;
    double tolerance = 0.0;
    BreakdownPolicy breakdown = BreakdownPolicy::fallback;
    double max_condition = default_max_condition;
    bool spectral = false;
    std::string out;  ///< empty for standard output
    OutputFormat format = OutputFormat::csv;

    /// Sets one key from its text form. Throws ConfigError on unknown keys or bad values.
    void set(std::string_view key, std::string_view value);
    /// Text form of one key, as serialize() writes it.
    std::string get(std::string_view key) const;

    /// Reads `key = value` lines; blank lines and lines starting with '#' are skipped.
    /// Keys not present keep their current value.
    void merge(std::string_view text);
    static ExperimentConfig parse(std::string_view text);
    static ExperimentConfig load(const std::string& path);
    std::string serialize() const;

    /// Throws ConfigError for inconsistent settings.
    void validate() const;

    AccelConfig accel_config() const;
    NoiseSpec noise_spec() const;

    bool operator==(const ExperimentConfig&) const = default;
};

/// All configuration keys in serialization order.
const std::vector<std::string>& experiment_keys();

/// Gallery matrix, row scaling, and noise as configured.
LinearSystem build_system(const ExperimentConfig& config);

struct ExperimentSummary {
    double final_error = 0.0;
    /// First n with err_z <= 1e-11.
    std::optional<Index> iterations_to_target;
    Index breakdowns = 0;
    Index sweeps = 0;
    double wall_seconds = 0.0;
    StopReason stop_reason = StopReason::max_outer;
    std::optional<Index> signal_index;
};

struct SpectralSummary {
    double spectral_radius = 0.0;
    double second_modulus = 0.0;
    double meany_constant = 0.0;
    double condition_number = 0.0;
    Index minimal_polynomial_degree = -1;
};

struct ExperimentResult {
    ExperimentConfig config;
    /// Plain runs report x_n as z_n with ratio 1.
    std::vector<RunRecord> records;
    std::vector<BreakdownEvent> events;
    ExperimentSummary summary;
    std::optional<SpectralSummary> spectral;
};

inline constexpr double target_error = 1e-11;

ExperimentResult run_experiment(const ExperimentConfig& config);

void write_csv(const ExperimentResult& result, std::ostream& out);
/// {"config": {...}, "records": [...], "summary": {...}, "breakdowns": [...], "spectral": {...}}
std::string to_json(const ExperimentResult& result);
/// CSV or JSON according to result.config.format.
std::string render(const ExperimentResult& result);

/// Runs every config and joins the records into one wide CSV keyed by n.
/// Column groups are named after the transform (plus k, then position, when
/// that is ambiguous). All configs must share matrix, size, and mode.
std::string compare_suite(const std::vector<ExperimentConfig>& configs);

/// Same, for results that were already computed.
std::string compare_results(const std::vector<ExperimentResult>& results);

}  // namespace kacz
