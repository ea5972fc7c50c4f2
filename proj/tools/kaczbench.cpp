// Command-line harness over the kacz C API.
//
//   kaczbench run --matrix parter --size 1000 --mode ak --transform vector-epsilon --k 5
//   kaczbench compare --matrix clement --transforms mpe,rre,mmpe,topological,vector-epsilon
//   kaczbench dump-matrix --matrix lesp --size 6 --no-precondition
//   kaczbench spectral --matrix parter --size 200
//   kaczbench print-config --config base.cfg --set k=3
//
// Exit codes: 0 success, 2 configuration error, 3 breakdown without fallback, 1 otherwise.
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "kacz/kacz.h"

namespace {

struct ConfigDeleter {
    void operator()(kacz_config* c) const { kacz_config_destroy(c); }
};
struct ResultDeleter {
    void operator()(kacz_result* r) const { kacz_result_destroy(r); }
};
struct TextDeleter {
    void operator()(kacz_text* t) const { kacz_text_destroy(t); }
};
using ConfigPtr = std::unique_ptr<kacz_config, ConfigDeleter>;
using ResultPtr = std::unique_ptr<kacz_result, ResultDeleter>;
using TextPtr = std::unique_ptr<kacz_text, TextDeleter>;

struct Failure {
    kacz_status status;
    std::string message;
};

int exit_code(kacz_status status)
{
    switch (status) {
    case KACZ_OK: return 0;
    case KACZ_CONFIG_ERROR: return 2;
    case KACZ_BREAKDOWN: return 3;
    default: return 1;
    }
}

void check(kacz_status status, const std::string& context)
{
    if (status != KACZ_OK) throw Failure{status, context + ": " + kacz_last_error()};
}

// Flags shared by every subcommand; unset optionals leave the config value alone.
struct Overrides {
    std::vector<std::string> config_files;
    std::vector<std::string> sets;
    std::optional<std::string> matrix, mode, transform, out, format, noise, aux;
    std::optional<long long> size, k, max_iter;
    std::optional<unsigned long long> seed;
    bool no_precondition = false;
    bool quiet = false;

    void attach(CLI::App* app)
    {
        app->add_option("--config", config_files, "key = value config file (repeatable, applied in order)");
        app->add_option("--set", sets, "KEY=VALUE override, applied after the config files");
        app->add_option("--matrix", matrix, "parter, clement, toeppen, or lesp");
        app->add_option("--size", size, "matrix order N");
        app->add_option("--mode", mode, "plain, ak, or rk");
        app->add_option("--transform", transform, "mpe, rre, mmpe, topological, vector-epsilon, scalar-epsilon");
        app->add_option("--k", k, "transform order");
        app->add_option("--max-iter", max_iter, "outer iterations");
        app->add_option("--noise", noise, "relative noise level delta on b");
        app->add_option("--seed", seed, "seed for auxiliary vectors and noise");
        app->add_option("--aux", aux, "auxiliary vectors: random, ones, or canonical");
        app->add_flag("--no-precondition", no_precondition, "keep the rows unscaled");
        app->add_option("--out", out, "output path (default: standard output)");
        app->add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
        app->add_flag("-q,--quiet", quiet, "no summary on standard error");
    }

    ConfigPtr build() const
    {
        kacz_config* raw = nullptr;
        check(kacz_config_create(&raw), "config");
        ConfigPtr config(raw);
        for (const auto& f : config_files) check(kacz_config_load(config.get(), f.c_str()), f);
        for (const auto& s : sets) {
            const auto eq = s.find('=');
            if (eq == std::string::npos) throw Failure{KACZ_CONFIG_ERROR, "--set expects KEY=VALUE, got '" + s + "'"};
            set(config.get(), s.substr(0, eq), s.substr(eq + 1));
        }
        if (matrix) set(config.get(), "matrix", *matrix);
        if (size) set(config.get(), "size", std::to_string(*size));
        if (mode) set(config.get(), "mode", *mode);
        if (transform) set(config.get(), "transform", *transform);
        if (k) set(config.get(), "k", std::to_string(*k));
        if (max_iter) set(config.get(), "max_iter", std::to_string(*max_iter));
        if (noise) set(config.get(), "noise", *noise);
        if (seed) set(config.get(), "seed", std::to_string(*seed));
        if (aux) set(config.get(), "aux", *aux);
        if (no_precondition) set(config.get(), "precondition", "false");
        if (out) set(config.get(), "out", *out);
        if (format) set(config.get(), "format", *format);
        return config;
    }

    static void set(kacz_config* config, const std::string& key, const std::string& value)
    {
        check(kacz_config_set(config, key.c_str(), value.c_str()), "--" + key);
    }
};

std::string get(const kacz_config* config, const char* key)
{
    kacz_text* raw = nullptr;
    check(kacz_config_get(config, key, &raw), key);
    TextPtr text(raw);
    return kacz_text_data(text.get());
}

void emit(const std::string& path, const char* data, std::size_t size)
{
    if (path.empty() || path == "-") {
        std::cout.write(data, static_cast<std::streamsize>(size));
        std::cout.flush();
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Failure{KACZ_ERROR, "cannot write '" + path + "'"};
    out.write(data, static_cast<std::streamsize>(size));
}

void emit_text(const std::string& path, TextPtr text) { emit(path, kacz_text_data(text.get()), kacz_text_size(text.get())); }

void run_command(const Overrides& o)
{
    ConfigPtr config = o.build();
    kacz_result* raw = nullptr;
    check(kacz_run(config.get(), &raw), "run");
    ResultPtr result(raw);

    kacz_text* rendered = nullptr;
    check(kacz_result_render(result.get(), nullptr, &rendered), "render");
    emit_text(get(config.get(), "out"), TextPtr(rendered));

    if (o.quiet) return;
    kacz_summary s{};
    check(kacz_result_summary(result.get(), &s), "summary");
    std::fprintf(stderr, "%s %s %s k=%s N=%s: %lld rows, final error %.3e, ", get(config.get(), "matrix").c_str(),
                 get(config.get(), "mode").c_str(), get(config.get(), "transform").c_str(),
                 get(config.get(), "k").c_str(), get(config.get(), "size").c_str(), s.rows, s.final_error);
    if (s.iterations_to_target >= 0) std::fprintf(stderr, "1e-11 at n=%lld, ", s.iterations_to_target);
    std::fprintf(stderr, "%lld breakdowns, %.2fs\n", s.breakdowns, s.wall_seconds);
    for (std::size_t i = 0; i < kacz_result_breakdown_count(result.get()); ++i) {
        long long n = 0;
        kacz_text* message = nullptr;
        check(kacz_result_breakdown(result.get(), i, &n, &message), "breakdown");
        TextPtr owned(message);
        std::fprintf(stderr, "  breakdown at n=%lld: %s\n", n, kacz_text_data(owned.get()));
    }
}

void compare_command(const Overrides& o, const std::vector<std::string>& transforms,
                     const std::vector<std::string>& variants)
{
    ConfigPtr base = o.build();
    std::vector<ConfigPtr> configs;
    for (const auto& t : transforms) {
        kacz_config* raw = nullptr;
        check(kacz_config_clone(base.get(), &raw), "config");
        configs.emplace_back(raw);
        Overrides::set(raw, "transform", t);
    }
    for (const auto& path : variants) {
        kacz_config* raw = nullptr;
        check(kacz_config_clone(base.get(), &raw), "config");
        configs.emplace_back(raw);
        check(kacz_config_load(raw, path.c_str()), path);
    }
    if (transforms.empty() && variants.empty()) {
        kacz_config* raw = nullptr;
        check(kacz_config_clone(base.get(), &raw), "config");
        configs.emplace_back(raw);
    }
    std::vector<const kacz_config*> handles;
    for (const auto& c : configs) handles.push_back(c.get());
    kacz_text* raw = nullptr;
    check(kacz_compare(handles.data(), handles.size(), &raw), "compare");
    emit_text(get(base.get(), "out"), TextPtr(raw));
}

void dump_command(const Overrides& o)
{
    ConfigPtr config = o.build();
    kacz_text* raw = nullptr;
    check(kacz_dump_matrix(config.get(), &raw), "dump-matrix");
    emit_text(get(config.get(), "out"), TextPtr(raw));
}

void spectral_command(const Overrides& o)
{
    ConfigPtr config = o.build();
    kacz_spectral_summary s{};
    check(kacz_spectral(config.get(), &s), "spectral");
    char buf[512];
    const int len = std::snprintf(buf, sizeof buf,
                                  "spectral_radius = %.17g\nsecond_modulus = %.17g\nmeany_constant = %.17g\n"
                                  "condition_number = %.17g\nminimal_polynomial_degree = %lld\n",
                                  s.spectral_radius, s.second_modulus, s.meany_constant, s.condition_number,
                                  s.minimal_polynomial_degree);
    emit(get(config.get(), "out"), buf, static_cast<std::size_t>(len));
}

void print_config_command(const Overrides& o)
{
    ConfigPtr config = o.build();
    kacz_text* raw = nullptr;
    check(kacz_config_serialize(config.get(), &raw), "print-config");
    TextPtr text(raw);
    std::cout << kacz_text_data(text.get());
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Kaczmarz sweeps with vector extrapolation and epsilon-algorithm acceleration"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(kacz_version()));

    Overrides run_o, compare_o, dump_o, spectral_o, print_o;
    std::vector<std::string> transforms, variants;

    auto* run = app.add_subcommand("run", "run one experiment and write its records");
    run_o.attach(run);
    auto* compare = app.add_subcommand("compare", "run several transforms on one system, wide CSV");
    compare_o.attach(compare);
    compare->add_option("--transforms", transforms, "transforms to compare")->delimiter(',');
    compare->add_option("--variant", variants, "config file applied on top of the base for one column group");
    auto* dump = app.add_subcommand("dump-matrix", "print the configured matrix, one row per line");
    dump_o.attach(dump);
    auto* spectral = app.add_subcommand("spectral", "eigenvalues of the sweep operator and related constants");
    spectral_o.attach(spectral);
    auto* print = app.add_subcommand("print-config", "print the effective configuration");
    print_o.attach(print);

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (*run) run_command(run_o);
        else if (*compare) compare_command(compare_o, transforms, variants);
        else if (*dump) dump_command(dump_o);
        else if (*spectral) spectral_command(spectral_o);
        else if (*print) print_config_command(print_o);
    } catch (const Failure& f) {
        std::fprintf(stderr, "kaczbench: %s (%s)\n", f.message.c_str(), kacz_status_name(f.status));
        return exit_code(f.status);
    }
    return 0;
}
