/*
 * qbrain — simulation and analysis of bosonic neural networks with weak
 * excitatory couplings: critically excited states, pattern capacity within an
 * energy budget, and recall dynamics (exact Fock-space and mean-field).
 *
 * C API of the shared library. All handles are opaque; every fallible call
 * returns a qbn_status. Strings returned through char** are heap-allocated
 * and must be released with qbn_string_free().
 *
 * Mode indices passed to this API are 0-based. Mode labels inside emitted
 * reports and CSV headers are 1-based (Y_1..Y_n).
 */

#ifndef QBRAIN_H
#define QBRAIN_H

#ifdef __cplusplus
extern "C" {
#endif

typedef enum qbn_status {
    QBN_OK = 0,
    QBN_INTERNAL = 1,   /* unexpected failure */
    QBN_VALIDATION = 2, /* bad input, schema violation, precondition failure */
    QBN_NUMERICAL = 3,  /* infeasible split, norm drift, stiff integration */
    QBN_CAPACITY = 4    /* dimension / enumeration / lattice limit exceeded */
} qbn_status;

typedef struct qbn_model qbn_model;

const char* qbn_version(void);

/* Message of the most recent failure on this thread ("" when none). */
const char* qbn_last_error(void);

void qbn_string_free(char* s);

/* ------------------------------------------------------------------ models */

/* Uniform network: thresholds 1, couplings g/2 off the diagonal. */
qbn_status qbn_model_uniform(int neuron_count, double g, qbn_model** out_model);

/* Parse the documented JSON model schema (see README). */
qbn_status qbn_model_from_json(const char* json_text, qbn_model** out_model);

qbn_status qbn_model_to_json(const qbn_model* model, char** out_json);

qbn_status qbn_model_set_input_layer(qbn_model* model, double q, double eps_x);

/* Replace modes by fixed expectation values; returns the reduced model with
 * shifted thresholds and an accumulated energy offset. */
qbn_status qbn_model_freeze(const qbn_model* model, const int* modes, const double* values,
                            int count, qbn_model** out_reduced);

/* Neuron count, or -1 for a null handle. */
int qbn_model_size(const qbn_model* model);

void qbn_model_free(qbn_model* model);

/* ------------------------------------------------------------------- tasks */
/*
 * Task options are JSON text (NULL or "" for defaults); limits may be set per
 * call through the optional fields "dimension_limit" and "enumeration_limit".
 * Artifacts come back as JSON reports and/or CSV series.
 */

/* Critical-split search, effective gaps, capacity table. */
qbn_status qbn_analyze(const qbn_model* model, const char* options_json,
                       char** out_report_json);

/* Time evolution under a coherent input stimulus.
 * Options: engine ("exact"|"meanfield"), initial ("critical"|"ground"), q,
 * eps_x, stimulus (array), freeze {mode, value}, caps, t_max, samples, times. */
qbn_status qbn_evolve(const qbn_model* model, const char* options_json,
                      char** out_series_csv, char** out_summary_json);

/* Critical vs ground response to the same stimulus, plus peak-ratio summary. */
qbn_status qbn_compare(const qbn_model* model, const char* options_json,
                       char** out_series_csv, char** out_summary_json);

/* Classical coherent-pattern packing within a gap budget.
 * Options: g, modes, budget, threshold, kappa, sweep_decades. */
qbn_status qbn_pack(const char* options_json, char** out_report_json, char** out_sweep_csv);

/* The bundled six-neuron worked example. */
qbn_status qbn_paper_example(char** out_report_json);

/* -------------------------------------------------------------- primitives */

/* Solve one critical split: gapless_modes lists the modes to render gapless
 * (0-based); the complement carries the excitation levels xi. Pass
 * tolerance <= 0 for the default (1e-9 relative to the largest threshold). */
qbn_status qbn_solve_critical_split(const qbn_model* model, const int* gapless_modes,
                                    int gapless_count, double tolerance,
                                    char** out_solution_json);

/* (d+1)^m as a decimal string. */
qbn_status qbn_pattern_count(int gapless_mode_count, long long d, char** out_decimal);

/* Squared-modulus coherent overlap exp(-sum |alpha - alpha'|^2). */
qbn_status qbn_coherent_overlap_sq(const double* a_re, const double* a_im,
                                   const double* b_re, const double* b_im, int mode_count,
                                   double* out_overlap);

/* Scaling estimators (NaN on invalid input, with qbn_last_error set). */
double qbn_entropy_estimate(double g);                        /* 1/sqrt(g)   */
double qbn_decoherence_bound(double g, int neuron_count);     /* 1/(g n^2)   */
double qbn_thermalization_time(double g, double temperature); /* 1/(g^2 T)   */

#ifdef __cplusplus
}
#endif

#endif /* QBRAIN_H */
