/* tds — stability-equivalence analysis of linear time-delay systems.
 *
 * C API over the core library: opaque handles, integer status codes, and
 * JSON documents for structured inputs/outputs. All functions are
 * thread-safe; handles are immutable after creation and may be shared
 * across threads. Strings returned through char** out-parameters are
 * heap-allocated and must be released with tds_free_string().
 */

#ifndef TDS_H
#define TDS_H

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum tds_status {
    TDS_OK = 0,
    TDS_EPARSE = 1,   /* malformed expression / JSON / descriptor */
    TDS_EINVALID = 2, /* bad argument, dimension mismatch, schema violation */
    TDS_EPRECOND = 3, /* f(jw, tau) = 0 on the axis, inadmissible point */
    TDS_ESWEEP = 4,   /* frequency sweep could not be certified */
    TDS_ECONTOUR = 5, /* zero on contour / non-integer winding */
    TDS_EINTERNAL = 6
} tds_status;

/* Opaque handle: a characteristic function plus its parameter list. */
typedef struct tds_system tds_system;

const char* tds_version(void);

/* Human-readable message for the most recent failure on this thread. */
const char* tds_last_error(void);

void tds_free_string(char* s);

/* Build a system from a JSON descriptor:
 * { "m": int, "params": [names],
 *   "terms": [{"power": int, "coeff": exprString, "delay": exprString}] }   */
tds_status tds_system_parse(const char* descriptor_json, tds_system** out);

/* Convert a distributed-delay state model (JSON descriptor) into a system.
 * clearing_report_json (optional) receives the conversion report. */
tds_status tds_system_from_model(const char* model_json, tds_system** out,
                                 char** clearing_report_json);

void tds_system_free(tds_system* sys);

/* Canonical JSON descriptor of the system. */
tds_status tds_system_descriptor(const tds_system* sys, char** descriptor_json);

size_t tds_system_num_params(const tds_system* sys);

/* Structural hypothesis check. pass_out (optional) receives 1 for PASS,
 * 0 for WARN; the JSON report lists the offending terms. */
tds_status tds_check(const tds_system* sys, char** report_json, int* pass_out);

/* Unstable-pole count at a parameter point via the argument principle. */
tds_status tds_count(const tds_system* sys, const double* point, size_t n, char** report_json);

/* Stability-equivalence interval along a ray.
 * task_json: { "point": [..], "direction": [..], "eta"?, "delta"?,
 *              "theta_max"?, "theta0"? }
 * trace_json receives the verdict document; trace_csv (optional) the
 * per-step table "k,theta,delta,omega_min,min_abs_f". */
tds_status tds_ray(const tds_system* sys, const char* task_json, char** trace_json,
                   char** trace_csv);

/* Stability-equivalence region growth.
 * task_json: { "point": [..], "p"?: num|"inf", "q"?: num|"inf", "eta"?,
 *              "grid_h"?, "extent"?, "max_generations"?, "max_balls"? }     */
tds_status tds_region(const tds_system* sys, const char* task_json, char** region_json);

#ifdef __cplusplus
}
#endif

#endif /* TDS_H */
