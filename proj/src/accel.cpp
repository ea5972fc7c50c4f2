#include "kacz/accel.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <deque>
#include <limits>
#include <ostream>

#include "kacz/error.hpp"
#include "kacz/format.hpp"
#include "kacz/kaczmarz.hpp"

namespace kacz {

namespace {

constexpr double nan = std::numeric_limits<double>::quiet_NaN();

std::string lower_dashed(std::string_view name)
{
    std::string s(name);
    for (char& c : s) {
        if (c == '_') c = '-';
        c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    }
    return s;
}

TransformSpec make_spec(const LinearSystem& system, const Vector& x0, const AccelConfig& config)
{
    TransformSpec spec;
    spec.kind = config.kind;
    spec.order = config.order;
    if (config.lanczos && config.kind == TransformKind::topological)
        spec.auxiliary = {system.residual(x0)};
    else
        spec.auxiliary = make_auxiliary(config.kind, config.order, system.order(), config.aux_policy, config.seed);
    if (!(config.lanczos && config.kind == TransformKind::topological)) spec.validate(system.order());
    return spec;
}

AccelRun start_run(const LinearSystem& system, const Vector& x0, const AccelConfig& config)
{
    config.validate();
    if (x0.size() != system.order()) throw ConfigError("initial vector has wrong length");
    AccelRun run;
    run.mode = config.mode;
    run.kind = config.kind;
    run.order = config.order;
    run.ell = config.window_length();
    run.rhs_norm = system.rhs().norm();
    return run;
}

// Appends z_n and the per-n diagnostics that do not depend on the mode.
void record(AccelRun& run, const LinearSystem& system, Vector z, double err_ref, double base_step, bool broke)
{
    const double err = system.relative_error(z);
    const double dz = run.z.empty() ? nan : (z - run.z.back()).norm();
    run.err_z.push_back(err);
    run.err_ref.push_back(err_ref);
    run.err_ratio.push_back(err / err_ref);
    run.dz_norm.push_back(dz);
    run.stop_ratio.push_back(dz / base_step);
    run.breakdown.push_back(broke);
    run.z.push_back(std::move(z));
}

bool should_stop(AccelRun& run, const LinearSystem& system, const AccelConfig& config)
{
    if (config.tolerance > 0.0 && system.residual(run.z.back()).norm() <= config.tolerance * run.rhs_norm) {
        run.stop_reason = StopReason::converged;
        return true;
    }
    if (!config.stop.enabled) return false;
    const auto signal = stopping_signal(run, config.stop);
    if (signal && *signal == run.outputs() - 1) {
        run.stop_reason = StopReason::signal;
        return true;
    }
    return false;
}

void finish(AccelRun& run, const AccelConfig& config)
{
    run.signal_index = stopping_signal(run, config.stop);
}

}  // namespace

std::string_view to_string(AccelMode mode) noexcept { return mode == AccelMode::ak ? "ak" : "rk"; }

AccelMode parse_accel_mode(std::string_view name)
{
    const std::string s = lower_dashed(name);
    if (s == "ak") return AccelMode::ak;
    if (s == "rk") return AccelMode::rk;
    throw ConfigError("unknown acceleration mode '" + std::string(name) + "'");
}

std::string_view to_string(BreakdownPolicy policy) noexcept
{
    return policy == BreakdownPolicy::fallback ? "fallback" : "fail";
}

BreakdownPolicy parse_breakdown_policy(std::string_view name)
{
    const std::string s = lower_dashed(name);
    if (s == "fallback") return BreakdownPolicy::fallback;
    if (s == "fail") return BreakdownPolicy::fail;
    throw ConfigError("unknown breakdown policy '" + std::string(name) + "'");
}

std::string_view to_string(StopReason reason) noexcept
{
    switch (reason) {
    case StopReason::max_outer: return "max-outer";
    case StopReason::signal: return "signal";
    case StopReason::converged: return "converged";
    }
    return "?";
}

void AccelConfig::validate() const
{
    if (order < 1) throw ConfigError("transform order k must be at least 1");
    if (max_outer < 0) throw ConfigError("max outer iterations must be non-negative");
    if (stop.window < 1) throw ConfigError("stopping window must be at least 1");
    if (!(stop.growth > 1.0)) throw ConfigError("stopping growth factor must exceed 1");
    if (!(stop.smallness >= 0.0)) throw ConfigError("stopping smallness must be non-negative");
    if (!(tolerance >= 0.0)) throw ConfigError("tolerance must be non-negative");
    if (!(max_condition > 0.0)) throw ConfigError("max condition must be positive");
}

AccelRun ak_run(const LinearSystem& system, const Vector& x0, const AccelConfig& config)
{
    if (config.mode != AccelMode::ak) throw ConfigError("ak_run called with a non-AK configuration");
    AccelRun run = start_run(system, x0, config);
    const TransformSpec spec = make_spec(system, x0, config);
    const Index ell = run.ell;

    // The vector epsilon-algorithm advances one ascending diagonal per iterate;
    // the other kinds solve their system on the sliding window.
    std::optional<EpsilonTable> table;
    if (config.kind == TransformKind::vector_epsilon) table.emplace(EpsilonKind::vector, 2 * config.order);

    std::deque<Vector> window;
    Vector x = x0;
    window.push_back(x);
    if (table) table->push(x);
    if (config.keep_iterates) run.base_iterates.push_back(x);

    for (Index m = 1; m <= config.max_outer + ell; ++m) {
        sweep_in_place(system, x);
        ++run.sweeps;
        window.push_back(x);
        if (static_cast<Index>(window.size()) > ell + 1) window.pop_front();
        if (table) table->push(x);
        if (config.keep_iterates) run.base_iterates.push_back(x);
        if (m < ell) continue;

        const Index n = m - ell;
        Vector z;
        bool broke = false;
        try {
            if (window[1] == window[0]) {
                z = window[0];
            } else if (table) {
                z = table->newest(2 * config.order);
            } else {
                const std::vector<Vector> w(window.begin(), window.end());
                z = transform_apply(spec, w, config.max_condition).value;
            }
        } catch (const BreakdownError& e) {
            if (config.on_breakdown == BreakdownPolicy::fail) throw;
            broke = true;
            run.events.push_back({n, e.what(), e.cell()});
            z = run.z.empty() ? window.back() : run.z.back();
        }
        const double step = (window[ell] - window[ell - 1]).norm();
        record(run, system, std::move(z), system.relative_error(window[ell]), step, broke);
        if (should_stop(run, system, config)) break;
    }
    finish(run, config);
    return run;
}

AccelRun rk_run(const LinearSystem& system, const Vector& x0, const AccelConfig& config)
{
    if (config.mode != AccelMode::rk) throw ConfigError("rk_run called with a non-RK configuration");
    AccelRun run = start_run(system, x0, config);
    TransformSpec spec = make_spec(system, x0, config);
    const Index ell = run.ell;
    const bool reset_y = config.lanczos && config.kind == TransformKind::topological;

    std::vector<Vector> window(static_cast<std::size_t>(ell + 1));
    Vector restart = x0;
    for (Index n = 0; n <= config.max_outer; ++n) {
        if (reset_y && n > 0) spec.auxiliary = {system.residual(restart)};
        window[0] = restart;
        for (Index j = 1; j <= ell; ++j) {
            window[j] = window[j - 1];
            sweep_in_place(system, window[j]);
        }
        run.sweeps += ell;
        if (config.keep_iterates) run.base_iterates.insert(run.base_iterates.end(), window.begin(), window.end());

        Vector z;
        bool broke = false;
        try {
            z = transform_apply(spec, window, config.max_condition).value;
        } catch (const BreakdownError& e) {
            if (config.on_breakdown == BreakdownPolicy::fail) throw;
            broke = true;
            run.events.push_back({n, e.what(), e.cell()});
            z = window[ell];
        }
        // err_ref is filled in from the reference run below.
        record(run, system, z, nan, (window[ell] - window[ell - 1]).norm(), broke);
        restart = std::move(z);
        if (should_stop(run, system, config)) break;
    }

    if (system.solution()) {
        // Plain Kaczmarz without restarts, read at x_{(n+1)(ell+1)}.
        Vector x = x0;
        Index done = 0;
        for (Index n = 0; n < run.outputs(); ++n) {
            for (; done < (n + 1) * (ell + 1); ++done) sweep_in_place(system, x);
            run.err_ref[n] = system.relative_error(x);
            run.err_ratio[n] = run.err_z[n] / run.err_ref[n];
        }
    }
    finish(run, config);
    return run;
}

AccelRun accel_run(const LinearSystem& system, const Vector& x0, const AccelConfig& config)
{
    return config.mode == AccelMode::ak ? ak_run(system, x0, config) : rk_run(system, x0, config);
}

std::optional<Index> ratio_growth_signal(const std::vector<double>& ratios, int window, double growth)
{
    for (std::size_t n = 1; n < ratios.size(); ++n) {
        if (std::isnan(ratios[n])) continue;
        double lowest = std::numeric_limits<double>::infinity();
        const std::size_t from = n > static_cast<std::size_t>(window) ? n - window : 0;
        for (std::size_t i = from; i < n; ++i)
            if (!std::isnan(ratios[i])) lowest = std::min(lowest, ratios[i]);
        if (std::isfinite(lowest) && ratios[n] > growth * lowest) return static_cast<Index>(n);
    }
    return std::nullopt;
}

std::optional<Index> stagnation_signal(const std::vector<double>& dz, int window, double threshold)
{
    for (std::size_t n = 1; n < dz.size(); ++n) {
        if (std::isnan(dz[n])) continue;
        double lowest = std::numeric_limits<double>::infinity();
        const std::size_t from = n > static_cast<std::size_t>(window) ? n - window : 0;
        for (std::size_t i = from; i < n; ++i)
            if (!std::isnan(dz[i])) lowest = std::min(lowest, dz[i]);
        if (lowest <= threshold && dz[n] >= lowest) return static_cast<Index>(n);
    }
    return std::nullopt;
}

std::optional<Index> stopping_signal(const AccelRun& run, const StopCriteria& criteria)
{
    if (run.mode == AccelMode::ak) return ratio_growth_signal(run.stop_ratio, criteria.window, criteria.growth);
    return stagnation_signal(run.dz_norm, criteria.window, criteria.smallness * run.rhs_norm);
}

std::vector<RunRecord> run_records(const AccelRun& run)
{
    std::vector<RunRecord> out;
    out.reserve(run.z.size());
    for (std::size_t n = 0; n < run.z.size(); ++n)
        out.push_back({static_cast<Index>(n), run.err_z[n], run.err_ref[n], run.err_ratio[n], run.dz_norm[n],
                       run.stop_ratio[n], run.breakdown[n]});
    return out;
}

void write_run_csv(const std::vector<RunRecord>& records, std::ostream& out)
{
    out << run_csv_header << '\n';
    for (const auto& r : records)
        out << r.n << ',' << format_field(r.err_z) << ',' << format_field(r.err_kacz_ref) << ','
            << format_field(r.err_ratio) << ',' << format_field(r.dz_norm) << ',' << format_field(r.stop_ratio)
            << ',' << (r.breakdown ? 1 : 0) << '\n';
}

}  // namespace kacz
