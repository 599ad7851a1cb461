#ifndef CARLESON_LAB_H
#define CARLESON_LAB_H

#include <stdint.h>

#if defined(CARLESON_LAB_BUILDING)
#define CL_API __attribute__((visibility("default")))
#else
#define CL_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum cl_status {
  CL_OK = 0,
  CL_DOMAIN = 1,
  CL_PARAMETER = 2,
  CL_OUT_OF_DEPTH = 3,
  CL_QUADRATURE = 4,
  CL_IO = 5,
  CL_USAGE = 6,
  CL_EMPTY_REGION = 7,
  CL_DIVERGENT = 8,
  CL_NULL_ARGUMENT = 9,
  CL_INTERNAL = 10
} cl_status;

typedef struct cl_weight cl_weight;
typedef struct cl_measure cl_measure;
typedef struct cl_tree cl_tree;

CL_API const char* cl_version(void);
/* Message of the last failing call on this thread; "" after a success. */
CL_API const char* cl_last_error(void);
/* Caps worker threads; 0 restores the default (CARLESON_LAB_THREADS, else all cores). */
CL_API cl_status cl_set_threads(int n);
/* Frees strings returned through char** out-parameters. */
CL_API void cl_string_free(char* s);

/* Runs a command described by a JSON config (keys as in the report's "config" object).
   *report receives the report JSON; *exit_code gets 0, 1 or 2 as the CLI would.
   A failing run still returns CL_OK with the error inside the report. */
CL_API cl_status cl_run(const char* config_json, char** report, int* exit_code);

/* "alpha:<a>", "logI", "expbad" or "table:<path.csv>". */
CL_API cl_status cl_weight_parse(const char* spec, cl_weight** out);
CL_API void cl_weight_free(cl_weight* w);
CL_API cl_status cl_weight_eval(const cl_weight* w, double r, double* omega, double* hat);
CL_API cl_status cl_weight_classify(const cl_weight* w, char** report_json);

/* Radial tree family on the disc; theta <= 0 picks the canonical value. */
CL_API cl_status cl_tree_build(double delta, double theta, int depth, cl_tree** out);
CL_API void cl_tree_free(cl_tree* t);
CL_API cl_status cl_tree_cells_at(const cl_tree* t, int level, int64_t* count);
CL_API cl_status cl_tree_locate(const cl_tree* t, int grid, double re, double im, int* level, int64_t* index);
CL_API cl_status cl_tree_export(const cl_tree* t, int grid, char** tree_json);

/* Measure spec strings; `tree` may be NULL unless the spec names cells. */
CL_API cl_status cl_measure_parse(const char* spec, const cl_tree* tree, cl_measure** out);
CL_API void cl_measure_free(cl_measure* m);
CL_API cl_status cl_measure_total_mass(const cl_measure* m, double* mass);

/* Ball testing constant against the associated weight of w, with t = q/p and ks = kq.
   report_json may be NULL. */
CL_API cl_status cl_forward_testing(const cl_tree* t, const cl_measure* mu, const cl_weight* w, double p, double q,
                                    int k, double* constant, char** report_json);

#ifdef __cplusplus
}
#endif

#endif
