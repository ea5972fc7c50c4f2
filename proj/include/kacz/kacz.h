/* C interface of the kacz library: Kaczmarz sweeps accelerated by vector
 * extrapolation and epsilon-algorithms, driven by experiment configs.
 *
 * Objects are opaque handles owned by the caller and released with the
 * matching *_destroy function. Every function returning kacz_status leaves a
 * thread-local message readable through kacz_last_error() on failure. */
#ifndef KACZ_KACZ_H
#define KACZ_KACZ_H

#include <stddef.h>

#if defined(KACZ_BUILDING_LIBRARY)
#define KACZ_API __attribute__((visibility("default")))
#else
#define KACZ_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum kacz_status {
    KACZ_OK = 0,
    KACZ_ERROR = 1,           /* unexpected failure */
    KACZ_CONFIG_ERROR = 2,    /* unknown key, bad value, inconsistent settings */
    KACZ_BREAKDOWN = 3,       /* transform breakdown with breakdown = fail */
    KACZ_SINGULAR = 4,        /* zero row or rank-deficient block */
    KACZ_CAPABILITY = 5,      /* size guard exceeded */
    KACZ_INVALID_ARGUMENT = 6 /* null handle, unknown column, short buffer */
} kacz_status;

typedef struct kacz_config kacz_config;
typedef struct kacz_result kacz_result;
typedef struct kacz_text kacz_text;

typedef struct kacz_summary {
    double final_error;
    long long iterations_to_target; /* first n with err_z <= 1e-11, -1 if never */
    long long breakdowns;
    long long sweeps;
    long long rows;
    double wall_seconds;
} kacz_summary;

typedef struct kacz_spectral_summary {
    double spectral_radius;
    double second_modulus;
    double meany_constant;
    double condition_number;
    long long minimal_polynomial_degree;
} kacz_spectral_summary;

KACZ_API const char* kacz_version(void);
/* Message of the last failed call on this thread; empty when none. */
KACZ_API const char* kacz_last_error(void);
KACZ_API const char* kacz_status_name(kacz_status status);

/* Text buffers returned by the library. */
KACZ_API const char* kacz_text_data(const kacz_text* text);
KACZ_API size_t kacz_text_size(const kacz_text* text);
KACZ_API void kacz_text_destroy(kacz_text* text);

/* Configs start at the defaults; keys are those of the key = value file format. */
KACZ_API kacz_status kacz_config_create(kacz_config** out);
KACZ_API kacz_status kacz_config_clone(const kacz_config* config, kacz_config** out);
KACZ_API void kacz_config_destroy(kacz_config* config);
KACZ_API kacz_status kacz_config_set(kacz_config* config, const char* key, const char* value);
KACZ_API kacz_status kacz_config_get(const kacz_config* config, const char* key, kacz_text** out);
/* Applies the key = value lines of `text` (or of the file at `path`) on top of the current values. */
KACZ_API kacz_status kacz_config_merge(kacz_config* config, const char* text);
KACZ_API kacz_status kacz_config_load(kacz_config* config, const char* path);
KACZ_API kacz_status kacz_config_serialize(const kacz_config* config, kacz_text** out);
KACZ_API kacz_status kacz_config_validate(const kacz_config* config);

KACZ_API kacz_status kacz_run(const kacz_config* config, kacz_result** out);
KACZ_API void kacz_result_destroy(kacz_result* result);
/* format is "csv", "json", or NULL for the configured format. */
KACZ_API kacz_status kacz_result_render(const kacz_result* result, const char* format, kacz_text** out);
KACZ_API kacz_status kacz_result_summary(const kacz_result* result, kacz_summary* out);
/* Copies one record column (n, err_z, err_kacz_ref, err_ratio, dz_norm, stop_ratio,
 * breakdown_flag) into `values`, which must hold at least `rows` entries. */
KACZ_API kacz_status kacz_result_column(const kacz_result* result, const char* column, double* values,
                                        size_t capacity);
KACZ_API size_t kacz_result_breakdown_count(const kacz_result* result);
/* Description of breakdown event `index` (0-based). */
KACZ_API kacz_status kacz_result_breakdown(const kacz_result* result, size_t index, long long* n,
                                           kacz_text** message);

/* Runs every config and joins the records into one wide CSV. */
KACZ_API kacz_status kacz_compare(const kacz_config* const* configs, size_t count, kacz_text** out);

/* Matrix of the configured system (after optional row scaling), one row per line. */
KACZ_API kacz_status kacz_dump_matrix(const kacz_config* config, kacz_text** out);
KACZ_API kacz_status kacz_spectral(const kacz_config* config, kacz_spectral_summary* out);

#ifdef __cplusplus
}
#endif

#endif
