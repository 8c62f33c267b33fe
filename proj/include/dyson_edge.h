#ifndef DYSON_EDGE_H
#define DYSON_EDGE_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

#if defined(__GNUC__)
#define DE_API __attribute__((visibility("default")))
#else
#define DE_API
#endif

typedef enum de_status {
    DE_OK = 0,
    DE_ERR_NULL_ARGUMENT = 1,
    DE_ERR_STRUCTURAL = 2,
    DE_ERR_DOMAIN = 3,
    DE_ERR_RANGE = 4,
    DE_ERR_VALIDATION = 5,
    DE_ERR_CONFIG = 6,
    DE_ERR_IO = 7,
    DE_ERR_NUMERICAL = 8,
    DE_ERR_STEP_SIZE = 9,
    DE_ERR_INTERNAL = 10,
    DE_ERR_BUFFER_TOO_SMALL = 11,
    DE_ERR_UNKNOWN = 12
} de_status;

typedef struct de_rng de_rng;
typedef struct de_array de_array;
typedef struct de_mdbm de_mdbm;
typedef struct de_limit de_limit;

/* Message of the last failing call on this thread ("" if none). */
DE_API const char* de_last_error(void);
DE_API const char* de_status_name(de_status status);
DE_API const char* de_version(void);

/* Random streams keyed by (seed, stream index). */
DE_API de_status de_rng_create(uint64_t seed, uint64_t stream_index, de_rng** out);
DE_API void de_rng_destroy(de_rng* rng);
DE_API de_status de_rng_normal(de_rng* rng, double* out);

/* Interlacing arrays. `flat` holds level 1, then level 2, ..., N(N+1)/2 values. */
DE_API de_status de_array_from_flat(int n_levels, const double* flat, size_t len, de_array** out);
DE_API void de_array_destroy(de_array* a);
DE_API de_status de_array_n_levels(const de_array* a, int* out);
/* Copies level k (k values) into out, which has room for cap values. */
DE_API de_status de_array_level(const de_array* a, int k, double* out, size_t cap);
/* *ok = 1 if the closed (strict = 0) or open (strict = 1) interlacing holds. */
DE_API de_status de_array_validate(const de_array* a, int strict, int* ok);
/* r_1..r_k into out (room for k values). */
DE_API de_status de_array_edge_spacings(const de_array* a, int k, double* out);
DE_API de_status de_array_rescale_time(const de_array* a, double from_time, double to_time, de_array** out);
DE_API de_status de_array_read_csv(const char* path, de_array** out);
DE_API de_status de_array_write_csv(const de_array* a, const char* path);

/* Samplers. Spectra are ascending; out has room for n values. */
DE_API de_status de_sample_beta_hermite(int n, double beta, double variance_t, de_rng* rng, double* out);
DE_API de_status de_sample_corners(int n, double beta, double variance_t, de_rng* rng, de_array** out);
/* beta in {1, 2, 4}; variance_t <= 0 selects 2n/beta. */
DE_API de_status de_sample_dense_corners(int n, int beta, double variance_t, de_rng* rng, de_array** out);

/* Gamma law CDF, semicircle quantiles gamma_1..gamma_n. */
DE_API de_status de_gamma_cdf(double shape, double rate, double x, double* out);
DE_API de_status de_semicircle_quantiles(int n, double* out);

/* Multilevel dynamics started from the exact law at time n * t0 (beta >= 4). */
DE_API de_status de_mdbm_warm_start(int n, double beta, double t0, de_rng* rng, de_mdbm** out);
DE_API void de_mdbm_destroy(de_mdbm* m);
DE_API de_status de_mdbm_step(de_mdbm* m, double dt, de_rng* rng);
DE_API de_status de_mdbm_time(const de_mdbm* m, double* out);
/* Copy of the current array. */
DE_API de_status de_mdbm_array(const de_mdbm* m, de_array** out);

/* Edge limit spacings started from their product Gamma law. */
DE_API de_status de_limit_create(int k, double beta, double t0, de_rng* rng, de_limit** out);
DE_API void de_limit_destroy(de_limit* l);
DE_API de_status de_limit_step(de_limit* l, double dt, de_rng* rng);
DE_API de_status de_limit_spacings(const de_limit* l, double* out, size_t cap);

/* Batch commands: "sample-ensemble", "sample-corners", "simulate-mdbm",
 * "simulate-limit", "verify", "report". Writes outputs and manifest.json into
 * out_dir. seed_override may be NULL. *tests_passed is 0 if a verify/report
 * suite had failures; *failed_units counts units that raised errors. */
DE_API de_status de_batch_run(const char* command, const char* config_path, const char* out_dir, int parallelism,
                              const uint64_t* seed_override, int progress, int* tests_passed, size_t* failed_units);

/* Same as the "verify" batch command with an inline config: suite_path may be
 * NULL for the built-in acceptance suite. */
DE_API de_status de_run_suite(const char* suite_path, const char* out_dir, int parallelism,
                              const uint64_t* seed_override, int progress, int* tests_passed);

/* Built-in acceptance suite as JSON. Writes at most cap bytes including the
 * terminating NUL; *needed receives the full size including the NUL. */
DE_API de_status de_default_suite_json(char* out, size_t cap, size_t* needed);

/* *ok = 1 if every output listed in dir/manifest.json has its recorded hash. */
DE_API de_status de_verify_manifest(const char* dir, int* ok);

#ifdef __cplusplus
}
#endif

#endif
