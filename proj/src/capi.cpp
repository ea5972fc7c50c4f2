#include "kacz/kacz.h"

#include <cmath>
#include <cstring>
#include <exception>
#include <fstream>
#include <new>
#include <sstream>
#include <string>
#include <vector>

#include "kacz/error.hpp"
#include "kacz/experiment.hpp"
#include "kacz/spectral.hpp"

struct kacz_config {
    kacz::ExperimentConfig value;
};

struct kacz_result {
    kacz::ExperimentResult value;
};

struct kacz_text {
    std::string value;
};

namespace {

thread_local std::string last_error;

kacz_status fail(kacz_status status, std::string message)
{
    last_error = std::move(message);
    return status;
}

// Runs `body`, translating exceptions into status codes.
template <class F>
kacz_status guarded(F&& body) noexcept
{
    try {
        last_error.clear();
        body();
        return KACZ_OK;
    } catch (const kacz::ConfigError& e) {
        return fail(KACZ_CONFIG_ERROR, e.what());
    } catch (const kacz::BreakdownError& e) {
        return fail(KACZ_BREAKDOWN, e.what());
    } catch (const kacz::SingularityError& e) {
        return fail(KACZ_SINGULAR, e.what());
    } catch (const kacz::CapabilityError& e) {
        return fail(KACZ_CAPABILITY, e.what());
    } catch (const kacz::IndexError& e) {
        return fail(KACZ_INVALID_ARGUMENT, e.what());
    } catch (const std::bad_alloc&) {
        return fail(KACZ_ERROR, "out of memory");
    } catch (const std::exception& e) {
        return fail(KACZ_ERROR, e.what());
    } catch (...) {
        return fail(KACZ_ERROR, "unknown error");
    }
}

kacz_status null_argument(const char* what) { return fail(KACZ_INVALID_ARGUMENT, std::string(what) + " is null"); }

kacz_text* make_text(std::string s) { return new kacz_text{std::move(s)}; }

}  // namespace

extern "C" {

const char* kacz_version(void) { return "0.1.0"; }

const char* kacz_last_error(void) { return last_error.c_str(); }

const char* kacz_status_name(kacz_status status)
{
    switch (status) {
    case KACZ_OK: return "ok";
    case KACZ_ERROR: return "error";
    case KACZ_CONFIG_ERROR: return "config error";
    case KACZ_BREAKDOWN: return "breakdown";
    case KACZ_SINGULAR: return "singular";
    case KACZ_CAPABILITY: return "capability";
    case KACZ_INVALID_ARGUMENT: return "invalid argument";
    }
    return "unknown";
}

const char* kacz_text_data(const kacz_text* text) { return text ? text->value.c_str() : ""; }

size_t kacz_text_size(const kacz_text* text) { return text ? text->value.size() : 0; }

void kacz_text_destroy(kacz_text* text) { delete text; }

kacz_status kacz_config_create(kacz_config** out)
{
    if (!out) return null_argument("output handle");
    return guarded([&] { *out = new kacz_config{}; });
}

kacz_status kacz_config_clone(const kacz_config* config, kacz_config** out)
{
    if (!config || !out) return null_argument("config or output handle");
    return guarded([&] { *out = new kacz_config{config->value}; });
}

void kacz_config_destroy(kacz_config* config) { delete config; }

kacz_status kacz_config_set(kacz_config* config, const char* key, const char* value)
{
    if (!config || !key || !value) return null_argument("config, key, or value");
    return guarded([&] { config->value.set(key, value); });
}

kacz_status kacz_config_get(const kacz_config* config, const char* key, kacz_text** out)
{
    if (!config || !key || !out) return null_argument("config, key, or output handle");
    return guarded([&] { *out = make_text(config->value.get(key)); });
}

kacz_status kacz_config_merge(kacz_config* config, const char* text)
{
    if (!config || !text) return null_argument("config or text");
    // Parse into a copy so a bad line leaves the config untouched.
    return guarded([&] {
        kacz::ExperimentConfig copy = config->value;
        copy.merge(text);
        config->value = std::move(copy);
    });
}

kacz_status kacz_config_load(kacz_config* config, const char* path)
{
    if (!config || !path) return null_argument("config or path");
    return guarded([&] {
        std::ifstream in(path);
        if (!in) throw kacz::ConfigError(std::string("cannot open config file '") + path + "'");
        std::ostringstream buf;
        buf << in.rdbuf();
        kacz::ExperimentConfig copy = config->value;
        copy.merge(buf.str());
        config->value = std::move(copy);
    });
}

kacz_status kacz_config_serialize(const kacz_config* config, kacz_text** out)
{
    if (!config || !out) return null_argument("config or output handle");
    return guarded([&] { *out = make_text(config->value.serialize()); });
}

kacz_status kacz_config_validate(const kacz_config* config)
{
    if (!config) return null_argument("config");
    return guarded([&] { config->value.validate(); });
}

kacz_status kacz_run(const kacz_config* config, kacz_result** out)
{
    if (!config || !out) return null_argument("config or output handle");
    *out = nullptr;
    return guarded([&] { *out = new kacz_result{kacz::run_experiment(config->value)}; });
}

void kacz_result_destroy(kacz_result* result) { delete result; }

kacz_status kacz_result_render(const kacz_result* result, const char* format, kacz_text** out)
{
    if (!result || !out) return null_argument("result or output handle");
    return guarded([&] {
        kacz::ExperimentResult copy;
        const kacz::ExperimentResult* r = &result->value;
        if (format) {
            const auto f = kacz::parse_output_format(format);
            if (f != r->config.format) {
                copy = *r;
                copy.config.format = f;
                r = &copy;
            }
        }
        *out = make_text(kacz::render(*r));
    });
}

kacz_status kacz_result_summary(const kacz_result* result, kacz_summary* out)
{
    if (!result || !out) return null_argument("result or summary");
    const auto& s = result->value.summary;
    out->final_error = s.final_error;
    out->iterations_to_target = s.iterations_to_target ? *s.iterations_to_target : -1;
    out->breakdowns = s.breakdowns;
    out->sweeps = s.sweeps;
    out->rows = static_cast<long long>(result->value.records.size());
    out->wall_seconds = s.wall_seconds;
    last_error.clear();
    return KACZ_OK;
}

kacz_status kacz_result_column(const kacz_result* result, const char* column, double* values, size_t capacity)
{
    if (!result || !column || !values) return null_argument("result, column, or values");
    const auto& records = result->value.records;
    if (capacity < records.size())
        return fail(KACZ_INVALID_ARGUMENT, "column buffer holds " + std::to_string(capacity) + " values, " +
                                               std::to_string(records.size()) + " needed");
    const std::string name = column;
    double kacz::RunRecord::*field = nullptr;
    if (name == "err_z") field = &kacz::RunRecord::err_z;
    else if (name == "err_kacz_ref") field = &kacz::RunRecord::err_kacz_ref;
    else if (name == "err_ratio") field = &kacz::RunRecord::err_ratio;
    else if (name == "dz_norm") field = &kacz::RunRecord::dz_norm;
    else if (name == "stop_ratio") field = &kacz::RunRecord::stop_ratio;
    else if (name != "n" && name != "breakdown_flag")
        return fail(KACZ_INVALID_ARGUMENT, "unknown column '" + name + "'");
    for (std::size_t i = 0; i < records.size(); ++i) {
        if (field) values[i] = records[i].*field;
        else if (name == "n") values[i] = static_cast<double>(records[i].n);
        else values[i] = records[i].breakdown ? 1.0 : 0.0;
    }
    last_error.clear();
    return KACZ_OK;
}

size_t kacz_result_breakdown_count(const kacz_result* result) { return result ? result->value.events.size() : 0; }

kacz_status kacz_result_breakdown(const kacz_result* result, size_t index, long long* n, kacz_text** message)
{
    if (!result || !n || !message) return null_argument("result, index, or message");
    if (index >= result->value.events.size()) return fail(KACZ_INVALID_ARGUMENT, "breakdown index out of range");
    return guarded([&] {
        const auto& e = result->value.events[index];
        *n = e.n;
        *message = make_text(e.message);
    });
}

kacz_status kacz_compare(const kacz_config* const* configs, size_t count, kacz_text** out)
{
    if (!out || (count > 0 && !configs)) return null_argument("configs or output handle");
    return guarded([&] {
        std::vector<kacz::ExperimentConfig> list;
        for (size_t i = 0; i < count; ++i) {
            if (!configs[i]) throw kacz::IndexError("config " + std::to_string(i) + " is null");
            list.push_back(configs[i]->value);
        }
        *out = make_text(kacz::compare_suite(list));
    });
}

kacz_status kacz_dump_matrix(const kacz_config* config, kacz_text** out)
{
    if (!config || !out) return null_argument("config or output handle");
    return guarded([&] {
        const auto system = kacz::build_system(config->value);
        std::ostringstream s;
        kacz::dump_matrix(system.matrix(), s);
        *out = make_text(s.str());
    });
}

kacz_status kacz_spectral(const kacz_config* config, kacz_spectral_summary* out)
{
    if (!config || !out) return null_argument("config or summary");
    return guarded([&] {
        const auto d = kacz::spectral_diagnostics(kacz::build_system(config->value));
        out->spectral_radius = d.spectral_radius;
        out->second_modulus = d.eigenvalues.size() > 1 ? std::abs(d.eigenvalues[1]) : 0.0;
        out->meany_constant = d.meany_constant;
        out->condition_number = d.condition_number;
        out->minimal_polynomial_degree = d.minimal_polynomial_degree;
    });
}

}  // extern "C"
