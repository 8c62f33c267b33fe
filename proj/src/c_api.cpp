#include "dyson_edge.h"

#include <cstring>
#include <exception>
#include <new>
#include <string>

#include "dyson_edge/batch.hpp"
#include "dyson_edge/core_model.hpp"
#include "dyson_edge/ensemble.hpp"
#include "dyson_edge/errors.hpp"
#include "dyson_edge/io.hpp"
#include "dyson_edge/limit.hpp"
#include "dyson_edge/mdbm.hpp"
#include "dyson_edge/rng.hpp"
#include "dyson_edge/suite.hpp"

struct de_rng {
    dyson_edge::RngStream stream;
};

struct de_array {
    dyson_edge::GtArray array;
};

struct de_mdbm {
    dyson_edge::MdbmState state;
    dyson_edge::MdbmStepper stepper;
};

struct de_limit {
    dyson_edge::LimitStateR state;
};

namespace {

thread_local std::string last_error;

struct NullArgument {};

de_status status_of(const std::exception& e) {
    using namespace dyson_edge;
    if (dynamic_cast<const StepSizeError*>(&e)) return DE_ERR_STEP_SIZE;
    if (dynamic_cast<const NumericalError*>(&e)) return DE_ERR_NUMERICAL;
    if (dynamic_cast<const StructuralError*>(&e)) return DE_ERR_STRUCTURAL;
    if (dynamic_cast<const DomainError*>(&e)) return DE_ERR_DOMAIN;
    if (dynamic_cast<const RangeError*>(&e)) return DE_ERR_RANGE;
    if (dynamic_cast<const ValidationError*>(&e)) return DE_ERR_VALIDATION;
    if (dynamic_cast<const ConfigError*>(&e)) return DE_ERR_CONFIG;
    if (dynamic_cast<const IoError*>(&e)) return DE_ERR_IO;
    if (dynamic_cast<const InternalError*>(&e)) return DE_ERR_INTERNAL;
    return DE_ERR_UNKNOWN;
}

template <class F>
de_status guard(F&& f) {
    try {
        f();
        last_error.clear();
        return DE_OK;
    } catch (const NullArgument&) {
        last_error = "null argument";
        return DE_ERR_NULL_ARGUMENT;
    } catch (const std::bad_alloc&) {
        last_error = "out of memory";
        return DE_ERR_UNKNOWN;
    } catch (const std::exception& e) {
        last_error = e.what();
        return status_of(e);
    } catch (...) {
        last_error = "unknown exception";
        return DE_ERR_UNKNOWN;
    }
}

template <class... T>
void require(const T*... p) {
    if (((p == nullptr) || ...)) throw NullArgument{};
}

}  // namespace

extern "C" {

const char* de_last_error(void) { return last_error.c_str(); }

const char* de_status_name(de_status status) {
    switch (status) {
        case DE_OK:
            return "ok";
        case DE_ERR_NULL_ARGUMENT:
            return "null argument";
        case DE_ERR_STRUCTURAL:
            return "structural error";
        case DE_ERR_DOMAIN:
            return "domain error";
        case DE_ERR_RANGE:
            return "range error";
        case DE_ERR_VALIDATION:
            return "validation error";
        case DE_ERR_CONFIG:
            return "configuration error";
        case DE_ERR_IO:
            return "i/o error";
        case DE_ERR_NUMERICAL:
            return "numerical error";
        case DE_ERR_STEP_SIZE:
            return "step size error";
        case DE_ERR_INTERNAL:
            return "internal error";
        case DE_ERR_BUFFER_TOO_SMALL:
            return "buffer too small";
        case DE_ERR_UNKNOWN:
            return "unknown error";
    }
    return "invalid status";
}

const char* de_version(void) {
    static const std::string v = dyson_edge::tool_version();
    return v.c_str();
}

de_status de_rng_create(uint64_t seed, uint64_t stream_index, de_rng** out) {
    return guard([&] {
        require(out);
        *out = new de_rng{dyson_edge::RngStream(seed, stream_index)};
    });
}

void de_rng_destroy(de_rng* rng) { delete rng; }

de_status de_rng_normal(de_rng* rng, double* out) {
    return guard([&] {
        require(rng, out);
        *out = rng->stream.normal();
    });
}

de_status de_array_from_flat(int n_levels, const double* flat, size_t len, de_array** out) {
    return guard([&] {
        require(flat, out);
        if (n_levels < 1) throw dyson_edge::StructuralError("n_levels must be >= 1");
        const auto size = static_cast<size_t>(n_levels) * static_cast<size_t>(n_levels + 1) / 2;
        if (len != size) throw dyson_edge::StructuralError("flat length must be N(N+1)/2");
        dyson_edge::GtArray a(n_levels);
        std::copy(flat, flat + len, a.flat().begin());
        *out = new de_array{std::move(a)};
    });
}

void de_array_destroy(de_array* a) { delete a; }

de_status de_array_n_levels(const de_array* a, int* out) {
    return guard([&] {
        require(a, out);
        *out = a->array.n_levels();
    });
}

de_status de_array_level(const de_array* a, int k, double* out, size_t cap) {
    const de_status s = guard([&] {
        require(a, out);
        if (k < 1 || k > a->array.n_levels()) throw dyson_edge::RangeError("level out of range");
    });
    if (s != DE_OK) return s;
    if (cap < static_cast<size_t>(k)) {
        last_error = "output buffer holds fewer than k values";
        return DE_ERR_BUFFER_TOO_SMALL;
    }
    const auto row = a->array.level(k);
    std::copy(row.begin(), row.end(), out);
    return DE_OK;
}

de_status de_array_validate(const de_array* a, int strict, int* ok) {
    return guard([&] {
        require(a, ok);
        *ok = strict ? dyson_edge::validate_strict_interlacing(a->array) : dyson_edge::validate_interlacing(a->array);
    });
}

de_status de_array_edge_spacings(const de_array* a, int k, double* out) {
    return guard([&] {
        require(a, out);
        const auto r = dyson_edge::edge_spacings(a->array, k);
        std::copy(r.r.begin(), r.r.end(), out);
    });
}

de_status de_array_rescale_time(const de_array* a, double from_time, double to_time, de_array** out) {
    return guard([&] {
        require(a, out);
        *out = new de_array{dyson_edge::rescale_time(a->array, from_time, to_time)};
    });
}

de_status de_array_read_csv(const char* path, de_array** out) {
    return guard([&] {
        require(path, out);
        *out = new de_array{dyson_edge::read_array_csv(path)};
    });
}

de_status de_array_write_csv(const de_array* a, const char* path) {
    return guard([&] {
        require(a, path);
        dyson_edge::write_array_csv(a->array, path);
    });
}

de_status de_sample_beta_hermite(int n, double beta, double variance_t, de_rng* rng, double* out) {
    return guard([&] {
        require(rng, out);
        const auto s = dyson_edge::sample_beta_hermite(n, beta, variance_t, rng->stream);
        std::copy(s.values.begin(), s.values.end(), out);
    });
}

de_status de_sample_corners(int n, double beta, double variance_t, de_rng* rng, de_array** out) {
    return guard([&] {
        require(rng, out);
        *out = new de_array{dyson_edge::sample_corners_process(n, beta, variance_t, rng->stream)};
    });
}

de_status de_sample_dense_corners(int n, int beta, double variance_t, de_rng* rng, de_array** out) {
    return guard([&] {
        require(rng, out);
        *out = new de_array{dyson_edge::sample_dense_corners(n, beta, rng->stream, variance_t > 0.0 ? variance_t : 0.0)};
    });
}

de_status de_gamma_cdf(double shape, double rate, double x, double* out) {
    return guard([&] {
        require(out);
        if (!(shape > 0.0 && rate > 0.0)) throw dyson_edge::DomainError("shape and rate must be positive");
        *out = dyson_edge::gamma_cdf(dyson_edge::GammaLaw{shape, rate}, x);
    });
}

de_status de_semicircle_quantiles(int n, double* out) {
    return guard([&] {
        require(out);
        const auto q = dyson_edge::semicircle_quantiles(n);
        std::copy(q.begin(), q.end(), out);
    });
}

de_status de_mdbm_warm_start(int n, double beta, double t0, de_rng* rng, de_mdbm** out) {
    return guard([&] {
        require(rng, out);
        dyson_edge::SimConfig c;
        c.n = n;
        c.beta = beta;
        c.t0 = t0;
        c.k = 1;
        c.validate();
        *out = new de_mdbm{dyson_edge::warm_start(c, rng->stream), dyson_edge::MdbmStepper(n)};
    });
}

void de_mdbm_destroy(de_mdbm* m) { delete m; }

de_status de_mdbm_step(de_mdbm* m, double dt, de_rng* rng) {
    return guard([&] {
        require(m, rng);
        m->stepper.step(m->state, dt, rng->stream);
    });
}

de_status de_mdbm_time(const de_mdbm* m, double* out) {
    return guard([&] {
        require(m, out);
        *out = m->state.time;
    });
}

de_status de_mdbm_array(const de_mdbm* m, de_array** out) {
    return guard([&] {
        require(m, out);
        *out = new de_array{m->state.array};
    });
}

de_status de_limit_create(int k, double beta, double t0, de_rng* rng, de_limit** out) {
    return guard([&] {
        require(rng, out);
        if (!(beta >= 4.0)) throw dyson_edge::DomainError("limit dynamics needs beta >= 4");
        if (!(t0 > 0.0)) throw dyson_edge::DomainError("t0 must be positive");
        if (k < 1) throw dyson_edge::DomainError("k must be >= 1");
        *out = new de_limit{dyson_edge::gamma_product_init(k, beta, t0, rng->stream)};
    });
}

void de_limit_destroy(de_limit* l) { delete l; }

de_status de_limit_step(de_limit* l, double dt, de_rng* rng) {
    return guard([&] {
        require(l, rng);
        dyson_edge::step_limit_r(l->state, dt, rng->stream);
    });
}

de_status de_limit_spacings(const de_limit* l, double* out, size_t cap) {
    if (!l || !out) {
        last_error = "null argument";
        return DE_ERR_NULL_ARGUMENT;
    }
    const auto& r = l->state.r.r;
    if (cap < r.size()) {
        last_error = "output buffer holds fewer than k values";
        return DE_ERR_BUFFER_TOO_SMALL;
    }
    std::copy(r.begin(), r.end(), out);
    last_error.clear();
    return DE_OK;
}

de_status de_batch_run(const char* command, const char* config_path, const char* out_dir, int parallelism,
                       const uint64_t* seed_override, int progress, int* tests_passed, size_t* failed_units) {
    return guard([&] {
        require(command, out_dir);
        const auto cmd = dyson_edge::command_from_name(command);
        if (!cmd) throw dyson_edge::ConfigError(std::string("unknown command '") + command + "'");
        const auto config = config_path ? dyson_edge::parse_config(std::filesystem::path(config_path), cmd)
                                        : dyson_edge::parse_config(nlohmann::json::object(), cmd);
        std::optional<std::uint64_t> seed;
        if (seed_override) seed = *seed_override;
        const auto m = dyson_edge::batch_run(*cmd, config, parallelism, out_dir, seed, progress != 0);
        if (tests_passed) *tests_passed = m.tests_passed ? 1 : 0;
        if (failed_units) *failed_units = m.failures.size();
    });
}

de_status de_run_suite(const char* suite_path, const char* out_dir, int parallelism, const uint64_t* seed_override,
                       int progress, int* tests_passed) {
    return guard([&] {
        require(out_dir);
        dyson_edge::RunConfig config;
        if (suite_path) config.suite = suite_path;
        std::optional<std::uint64_t> seed;
        if (seed_override) seed = *seed_override;
        const auto m =
            dyson_edge::batch_run(dyson_edge::Command::verify, config, parallelism, out_dir, seed, progress != 0);
        if (tests_passed) *tests_passed = m.tests_passed ? 1 : 0;
    });
}

de_status de_default_suite_json(char* out, size_t cap, size_t* needed) {
    std::string text;
    const de_status s = guard([&] {
        require(needed);
        text = dyson_edge::default_suite().dump(2) + "\n";
        *needed = text.size() + 1;
    });
    if (s != DE_OK) return s;
    if (!out || cap < text.size() + 1) {
        last_error = "output buffer too small";
        return DE_ERR_BUFFER_TOO_SMALL;
    }
    std::memcpy(out, text.c_str(), text.size() + 1);
    return DE_OK;
}

de_status de_verify_manifest(const char* dir, int* ok) {
    return guard([&] {
        require(dir, ok);
        *ok = dyson_edge::verify_manifest(dir).empty() ? 1 : 0;
    });
}

}  // extern "C"
