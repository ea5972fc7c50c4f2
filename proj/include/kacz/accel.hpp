#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "kacz/linalg.hpp"
#include "kacz/transforms.hpp"

namespace kacz {

enum class AccelMode { ak, rk };

std::string_view to_string(AccelMode mode) noexcept;
AccelMode parse_accel_mode(std::string_view name);

enum class BreakdownPolicy {
    fallback,  ///< AK reuses the previous z, RK restarts from x_ell
    fail,      ///< rethrow the BreakdownError
};

std::string_view to_string(BreakdownPolicy policy) noexcept;
BreakdownPolicy parse_breakdown_policy(std::string_view name);

struct StopCriteria {
    bool enabled = false;  ///< when false the signal is still computed but the run continues
    int window = 5;
    double growth = 10.0;
    double smallness = 1e-13;  ///< RK threshold on ||dz||, relative to ||b||
};

struct AccelConfig {
    TransformKind kind = TransformKind::vector_epsilon;
    int order = 5;
    AccelMode mode = AccelMode::ak;
    /// AK produces z_0..z_max_outer, RK performs max_outer + 1 outer iterations.
    Index max_outer = 30;
    AuxPolicy aux_policy = AuxPolicy::random;
    std::uint64_t seed = 0;
    /// Topological kind only: y = b - A x_0 instead of `aux_policy`, reset to the
    /// residual of the restart point at every RK restart.
    bool lanczos = false;
    StopCriteria stop;
    /// Stop once ||b - A z_n|| <= tolerance * ||b||; 0 disables the check.
    double tolerance = 0.0;
    double max_condition = default_max_condition;
    BreakdownPolicy on_breakdown = BreakdownPolicy::fallback;
    /// Keep the Kaczmarz iterates in AccelRun::base_iterates.
    bool keep_iterates = false;

    int window_length() const { return kacz::window_length(kind, order); }
    /// Throws ConfigError for k < 1, negative max_outer, or bad stopping parameters.
    void validate() const;
};

struct BreakdownEvent {
    Index n = 0;  ///< index of the z that fell back
    std::string message;
    std::string cell;  ///< epsilon cell, empty for linear-system breakdowns
};

enum class StopReason { max_outer, signal, converged };

std::string_view to_string(StopReason reason) noexcept;

struct AccelRun {
    AccelMode mode = AccelMode::ak;
    TransformKind kind = TransformKind::vector_epsilon;
    int order = 0;
    int ell = 0;
    double rhs_norm = 0.0;

    std::vector<Vector> z;
    /// Relative errors ||z_n - x|| / ||x|| (NaN without a reference solution).
    std::vector<double> err_z;
    /// AK: error of x_{n+ell}; RK: error of x_{(n+1)(ell+1)} of a plain run without restarts.
    std::vector<double> err_ref;
    std::vector<double> err_ratio;
    /// ||z_n - z_{n-1}||, NaN for n = 0.
    std::vector<double> dz_norm;
    /// AK: ||z_n - z_{n-1}|| / ||x_{n+ell} - x_{n+ell-1}||;
    /// RK: ||z_n - z_{n-1}|| / ||x_ell - x_{ell-1}|| of the current restart window.
    std::vector<double> stop_ratio;
    std::vector<bool> breakdown;
    std::vector<BreakdownEvent> events;

    /// AK: x_0, x_1, ...; RK: the windows x_0..x_ell of every outer iteration, concatenated.
    /// Filled only when AccelConfig::keep_iterates is set.
    std::vector<Vector> base_iterates;
    Index sweeps = 0;  ///< Kaczmarz sweeps of the run itself (not the RK reference)

    StopReason stop_reason = StopReason::max_outer;
    std::optional<Index> signal_index;  ///< first n where the stopping signal fired

    Index outputs() const noexcept { return static_cast<Index>(z.size()); }
};

/// Accelerates a Kaczmarz sequence alongside, without touching it: z_n = y_k^(n).
AccelRun ak_run(const LinearSystem& system, const Vector& x0, const AccelConfig& config);

/// Restarted Kaczmarz: ell sweeps from the restart point, z_n = y_k^(0), restart from z_n.
AccelRun rk_run(const LinearSystem& system, const Vector& x0, const AccelConfig& config);

/// Dispatches on config.mode.
AccelRun accel_run(const LinearSystem& system, const Vector& x0, const AccelConfig& config);

/// AK rule: the first n whose ratio exceeds growth times the minimum of the
/// previous `window` ratios (fewer at the start, at least one). NaN entries are skipped.
std::optional<Index> ratio_growth_signal(const std::vector<double>& ratios, int window, double growth);

/// RK rule: the first n whose ||dz_n|| does not improve on the minimum of the
/// previous `window` values while that minimum is already below `threshold`.
std::optional<Index> stagnation_signal(const std::vector<double>& dz, int window, double threshold);

/// Applies the rule matching run.mode; the RK threshold is criteria.smallness * run.rhs_norm.
std::optional<Index> stopping_signal(const AccelRun& run, const StopCriteria& criteria);

/// One exported row.
struct RunRecord {
    Index n = 0;
    double err_z = 0.0;
    double err_kacz_ref = 0.0;
    double err_ratio = 0.0;
    double dz_norm = 0.0;
    double stop_ratio = 0.0;
    bool breakdown = false;
};

std::vector<RunRecord> run_records(const AccelRun& run);

inline constexpr const char* run_csv_header = "n,err_z,err_kacz_ref,err_ratio,dz_norm,stop_ratio,breakdown_flag";

/// Header plus one line per record; NaN becomes an empty field.
void write_run_csv(const std::vector<RunRecord>& records, std::ostream& out);

}  // namespace kacz
