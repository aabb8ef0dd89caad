#ifndef CHIRALCAV_H
#define CHIRALCAV_H

/* C interface of the chiralcav simulator. Every function returns a status
 * code; on failure cc_last_error() describes the error of the calling thread.
 * Strings returned through char** are owned by the caller and released with
 * cc_string_free(). Rates are in rad/s, frequencies in Hz, lengths in m. */

#include <stddef.h>
#include <stdint.h>

#if defined(CHIRALCAV_BUILDING_LIBRARY)
#define CHIRALCAV_API __attribute__((visibility("default")))
#else
#define CHIRALCAV_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum cc_status {
  CC_OK = 0,
  CC_ERR_INVALID_ARGUMENT = 1,
  CC_ERR_PARSE = 2,
  CC_ERR_VALIDATION = 3,
  CC_ERR_NO_ROOT = 4,
  CC_ERR_INTEGRATION = 5,
  CC_ERR_WINDOW_OUT_OF_RANGE = 6,
  CC_ERR_BRACKET_NOT_FOUND = 7,
  CC_ERR_IO = 8,
  CC_ERR_INTERNAL = 100
} cc_status;

typedef enum cc_model { CC_MODEL_FIRST = 0, CC_MODEL_DISSIPATIVE = 1, CC_MODEL_SECOND = 2 } cc_model;

typedef enum cc_chirality { CC_LEFT = 0, CC_RIGHT = 1 } cc_chirality;

typedef struct cc_config cc_config;
typedef struct cc_trajectory cc_trajectory;

CHIRALCAV_API const char* cc_version(void);

/* Message of the last failed call on this thread ("" after success). */
CHIRALCAV_API const char* cc_last_error(void);

/* The same error as a JSON object {"error", "code", "message"[, "line",
 * "column"][, "time"]}. */
CHIRALCAV_API const char* cc_last_error_json(void);

CHIRALCAV_API const char* cc_status_name(cc_status status);

CHIRALCAV_API void cc_string_free(char* text);

typedef enum cc_dimension {
  CC_DIM_NONE = 0,
  CC_DIM_FREQUENCY, /* Hz */
  CC_DIM_RATE,      /* rad/s; bare numbers and Hz suffixes mean 2 pi x Hz */
  CC_DIM_LENGTH,    /* m */
  CC_DIM_SPEED,     /* m/s */
  CC_DIM_TIME,      /* s */
  CC_DIM_DIPOLE,    /* C m */
  CC_DIM_ANGLE,     /* rad */
  CC_DIM_PER_SECOND /* 1/s */
} cc_dimension;

/* Number with an optional unit suffix ("5.78109GHz", "1.9 D", "-pi/2"). */
CHIRALCAV_API cc_status cc_parse_quantity(const char* text, cc_dimension dimension, double* out);

/* ---- configuration ---- */

/* Propanediol in the q = 0 cavity, lambda = 0.01, N_m = 1000, v = 1 m/s. */
CHIRALCAV_API cc_status cc_config_default(cc_config** out);
CHIRALCAV_API cc_status cc_config_load_file(const char* path, cc_config** out);
CHIRALCAV_API cc_status cc_config_load_string(const char* text, cc_config** out);
CHIRALCAV_API cc_status cc_config_clone(const cc_config* config, cc_config** out);
CHIRALCAV_API void cc_config_free(cc_config* config);

/* Notices raised while loading, as a JSON array of strings. */
CHIRALCAV_API cc_status cc_config_notices(const cc_config* config, char** json);

/* Canonical key-value text of the full scenario and its 64-bit hash. */
CHIRALCAV_API cc_status cc_config_canonical(const cc_config* config, char** text);
CHIRALCAV_API cc_status cc_config_hash(const cc_config* config, uint64_t* hash);

CHIRALCAV_API cc_status cc_config_set_seed(cc_config* config, uint64_t seed);
CHIRALCAV_API cc_status cc_config_get_seed(const cc_config* config, uint64_t* seed);
CHIRALCAV_API cc_status cc_config_set_model(cc_config* config, cc_model model);
CHIRALCAV_API cc_status cc_config_get_model(const cc_config* config, cc_model* model);

/* Integrator relative tolerance; the absolute tolerance is set to rtol / 100. */
CHIRALCAV_API cc_status cc_config_set_tolerance(cc_config* config, double rtol);

/* ---- dynamics ---- */

typedef struct cc_sample {
  double t;
  double re_c, im_c;
  double re_sigma, im_sigma;
  double sigma_z;
  double gbar;
  double signal; /* sqrt(2 kappa) Re(exp(-i phi_lo) c) */
} cc_sample;

/* Integrates the configured model. sigma_z0 of +1 or -1 overrides the
 * configured initial inversion; 0 keeps it. */
CHIRALCAV_API cc_status cc_simulate(const cc_config* config, int sigma_z0, cc_trajectory** out);
CHIRALCAV_API void cc_trajectory_free(cc_trajectory* trajectory);
CHIRALCAV_API size_t cc_trajectory_size(const cc_trajectory* trajectory);
CHIRALCAV_API cc_status cc_trajectory_sample(const cc_trajectory* trajectory, size_t index,
                                             cc_sample* out);

/* Max |sigma_z^2 + 4 |sigma|^2 - 1| along a first-order trajectory. */
CHIRALCAV_API cc_status cc_trajectory_bloch_deviation(const cc_trajectory* trajectory, double* out);

/* Integrated unit-amplitude counts over the detection window. */
CHIRALCAV_API cc_status cc_trajectory_counts(const cc_trajectory* trajectory, double* out);

CHIRALCAV_API cc_status cc_trajectory_csv(const cc_trajectory* trajectory, const char* config_hash,
                                          char** csv);
CHIRALCAV_API cc_status cc_trajectory_write_csv(const cc_trajectory* trajectory,
                                                const char* config_hash, const char* path);

/* ---- detection ---- */

typedef struct cc_detection {
  double n_bar_L, n_bar_R; /* unit local-oscillator counts */
  double delta;            /* sqrt(N_lo (tf - t0)) */
  double snr;
  double p_err;
  double t0, tf;
  double sigma_z_excursion;
} cc_detection;

/* Both hypotheses of the configured scenario on `jobs` threads. */
CHIRALCAV_API cc_status cc_detect(const cc_config* config, unsigned jobs, cc_detection* out);

typedef struct cc_montecarlo {
  double snr;
  double p_err_analytic;
  double p_err_empirical;
  double standard_error;
  uint64_t shots; /* per hypothesis */
  uint64_t seed;
} cc_montecarlo;

CHIRALCAV_API cc_status cc_montecarlo_run(const cc_config* config, uint64_t shots, uint64_t seed,
                                          cc_montecarlo* out);

/* ---- cavity and molecule ---- */

typedef struct cc_mirror {
  double f_ref, d_ref, Q_ref;
  double stroke, step; /* mirror displacements for tuning range and precision */
} cc_mirror;

CHIRALCAV_API void cc_mirror_default(cc_mirror* out);

typedef struct cc_cavity_design {
  double R_m;
  int q;
  double d;
  double f_q;
  double w0;
  double V;
  double field;
  double g0;
  double Q;
  double kappa;
  double tuning_range;
  double tuning_precision;
  double figure_of_merit;
} cc_cavity_design;

/* mirror may be NULL for the reference pair. */
CHIRALCAV_API cc_status cc_design_cavity(double R_m, int q, double f_target, double mu_b,
                                         const cc_mirror* mirror, cc_cavity_design* out);

typedef struct cc_esst_result {
  double re[3], im[3];     /* final amplitudes of |1>, |2>, |3> */
  double populations[3][3]; /* after each pulse */
  int sigma_z0;            /* +1 for |3>, -1 for |2>, 0 otherwise */
  double unitarity_error;
} cc_esst_result;

/* Applies the three-pulse transfer to |initial_level> (1..3). */
CHIRALCAV_API cc_status cc_esst(double phi, cc_chirality chirality, int initial_level,
                                cc_esst_result* out);

/* ---- analytics and experiments ---- */

/* Closed-form report of the scenario as JSON. */
CHIRALCAV_API cc_status cc_analytics_json(const cc_config* config, char** json);

/* Runs a sweep described by a JSON spec:
 *   {"axes": [{"name": "N_m", "values": [...]} |
 *             {"name": "lambda", "log": [first, last, count]} |
 *             {"name": "v", "linear": [first, last, count]}],
 *    "kind": "snr" | "critical", "target_snr": 3, "timestamp": false}
 * Returns the CSV and the JSON summary; either output may be NULL. */
CHIRALCAV_API cc_status cc_sweep(const cc_config* config, const char* spec_json, unsigned jobs,
                                 char** csv, char** summary_json);

/* Smallest N_m with SNR >= target_snr. */
CHIRALCAV_API cc_status cc_critical_nm(const cc_config* config, double target_snr, unsigned jobs,
                                       int* out);

/* Model comparison report as JSON: "order" (first vs second order) or
 * "dissipation" (first order vs dissipative with the molecule bounds). */
CHIRALCAV_API cc_status cc_compare_json(const cc_config* config, const char* kind, char** json);

typedef void (*cc_check_callback)(int id, const char* name, int passed, const char* detail,
                                  double seconds, void* user);

CHIRALCAV_API int cc_check_count(void);

/* Runs the acceptance criteria `ids` (all when count is 0). `passed` receives
 * the number of passing criteria. */
CHIRALCAV_API cc_status cc_check(const int* ids, size_t count, unsigned jobs,
                                 cc_check_callback callback, void* user, int* passed);

#ifdef __cplusplus
}
#endif

#endif
