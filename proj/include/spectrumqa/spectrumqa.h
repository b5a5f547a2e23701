/*
 * spectrumqa: C interface to the interference-map simulator, benchmark
 * generator and evaluation harness.
 *
 * Every function returns an sqa_status. On failure the thread-local message
 * from sqa_last_error() describes the problem. Strings returned through
 * char** out-parameters are owned by the caller and released with
 * sqa_string_free().
 */
#ifndef SPECTRUMQA_H
#define SPECTRUMQA_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(SQA_BUILDING_LIBRARY)
#    define SQA_API __declspec(dllexport)
#  else
#    define SQA_API __declspec(dllimport)
#  endif
#else
#  define SQA_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum sqa_status {
    SQA_OK = 0,
    SQA_ERR_INVALID_ARGUMENT = 1,
    SQA_ERR_DATA = 2,
    SQA_ERR_QC = 3,
    SQA_ERR_IO = 4,
    SQA_ERR_INTERNAL = 5
} sqa_status;

typedef enum sqa_level { SQA_L1 = 0, SQA_L2 = 1, SQA_L3 = 2, SQA_L4 = 3 } sqa_level;

/* Severity: 0 low, 1 moderate, 2 high. Quadrant: 0 NW, 1 NE, 2 SW, 3 SE. */

SQA_API const char* sqa_version(void);
SQA_API const char* sqa_last_error(void);
SQA_API void sqa_string_free(char* s);

/* ---- configuration ---------------------------------------------------- */

typedef struct sqa_config sqa_config;

/* Built-in scenarios A/B/C, default powers, bands and desk-scale counts. */
SQA_API sqa_status sqa_config_create(sqa_config** out);
SQA_API void sqa_config_destroy(sqa_config* cfg);
/* Overlay keys from a JSON file or string; unknown keys are rejected. */
SQA_API sqa_status sqa_config_load_file(sqa_config* cfg, const char* path);
SQA_API sqa_status sqa_config_apply_json(sqa_config* cfg, const char* json);
SQA_API sqa_status sqa_config_set_seed(sqa_config* cfg, uint64_t seed);
SQA_API sqa_status sqa_config_set_images(sqa_config* cfg, int images);
SQA_API sqa_status sqa_config_set_qa_per_image(sqa_config* cfg, int count);
SQA_API sqa_status sqa_config_set_workers(sqa_config* cfg, int workers);
/* Comma-separated scenario ids, e.g. "A,B,C". */
SQA_API sqa_status sqa_config_set_scenario_mix(sqa_config* cfg, const char* mix);
/* Switch L1 severity to an absolute threshold (dBm); NaN restores quantile mode. */
SQA_API sqa_status sqa_config_set_absolute_severity(sqa_config* cfg, double threshold_dbm);
SQA_API sqa_status sqa_config_to_json(const sqa_config* cfg, char** out_json);

/* ---- single samples --------------------------------------------------- */

typedef struct sqa_sample sqa_sample;

typedef struct sqa_labels {
    double positive_fraction;
    int severity;
    int hottest_quadrant;
    double quadrant_means[4];
    size_t hotspot_count;
} sqa_labels;

/* cfg may be NULL for built-in parameters. */
SQA_API sqa_status sqa_sample_simulate(const sqa_config* cfg, const char* scenario, uint64_t master_seed,
                                       uint64_t sample_index, sqa_sample** out);
SQA_API void sqa_sample_destroy(sqa_sample* sample);
SQA_API sqa_status sqa_sample_labels(const sqa_sample* sample, sqa_labels* out);
/* Copies the 64x64 interference grid (mW, row-major, row 0 north). n >= 4096. */
SQA_API sqa_status sqa_sample_grid(const sqa_sample* sample, double* out, size_t n);
/* resolution 64 or 16; copies resolution^2 bytes of 0/1. */
SQA_API sqa_status sqa_sample_mask(const sqa_sample* sample, int resolution, uint8_t* out, size_t n);
SQA_API sqa_status sqa_sample_write_png(const sqa_sample* sample, const char* path);
/* Metadata record including the transmitter list. */
SQA_API sqa_status sqa_sample_metadata_json(const sqa_sample* sample, char** out_json);
/* count QA pairs as JSONL, drawn from the sample's own QA substream. */
SQA_API sqa_status sqa_sample_qa_jsonl(const sqa_sample* sample, int count, char** out_jsonl);

/* ---- dataset generation ----------------------------------------------- */

typedef struct sqa_build_summary {
    size_t images;
    size_t qa_pairs;
    size_t tallies[4]; /* descriptive, localization, reasoning, prescriptive */
    size_t split[3];   /* train, val, test */
    size_t factual_failures;
    size_t min_unique_reasoning_window;
    int substitutions;
} sqa_build_summary;

/* Writes the dataset under out_dir; the manifest is renamed into place last.
 * Returns SQA_ERR_QC (manifest not written) when verification fails. */
SQA_API sqa_status sqa_generate(const sqa_config* cfg, const char* out_dir, sqa_build_summary* summary);

/* ---- evaluation ------------------------------------------------------- */

/* Scores a JSONL prediction file against a manifest. Either out may be NULL. */
SQA_API sqa_status sqa_score_file(const char* predictions_path, const char* manifest_path, char** out_report_json,
                                  char** out_table);

SQA_API sqa_status sqa_synth_predict(const char* manifest_path, sqa_level level, double error_rate,
                                     double flip_rate, uint64_t seed, const char* model_id, const char* out_path);

/* ---- composite scoring ------------------------------------------------ */

typedef struct sqa_score_set sqa_score_set;

SQA_API sqa_status sqa_score_set_create(sqa_score_set** out);
SQA_API void sqa_score_set_destroy(sqa_score_set* set);
/* present[i] == 0 marks level i as absent. present may be NULL (all present). */
SQA_API sqa_status sqa_score_set_add(sqa_score_set* set, const char* model_id, const double scores[4],
                                     const int present[4]);
/* Adds the model from a score report written by sqa_score_file. */
SQA_API sqa_status sqa_score_set_add_report(sqa_score_set* set, const char* report_path);

/* routing[i] is the model id scored at level i. */
SQA_API sqa_status sqa_composite(const sqa_score_set* set, const double weights[4], const char* const routing[4],
                                 double* out_score);

typedef struct sqa_report_options {
    const char* scheme;          /* named scheme, or NULL when weights is set */
    const double* weights;       /* 4 weights, or NULL */
    const char* first_model;     /* e.g. "CNN" */
    const char* second_model;    /* e.g. "VLM" */
    const char* const* extra_routing; /* 4 model ids per extra row, or NULL */
    size_t extra_count;
    int include_best;            /* append exhaustive best routing */
} sqa_report_options;

SQA_API sqa_status sqa_composite_report(const sqa_score_set* set, const sqa_report_options* options,
                                        char** out_table, char** out_json);

#ifdef __cplusplus
}
#endif

#endif /* SPECTRUMQA_H */
