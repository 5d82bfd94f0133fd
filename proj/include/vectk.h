/* vectk — finite-scale vectorial bundles, spectral truncation and Cech twist
 * machinery behind a C interface.
 *
 * All functions return VECTK_OK on success.  On failure the out-parameters
 * are untouched and vectk_last_error() describes the problem for the calling
 * thread.  Handles are created by the library and released with the matching
 * *_free function; strings returned through char** are released with
 * vectk_string_free.
 */
#ifndef VECTK_H
#define VECTK_H

#ifdef __cplusplus
extern "C" {
#endif

typedef enum vectk_status {
  VECTK_OK = 0,
  VECTK_FAIL = 1,   /* domain verdict: verification failed, obstructed, no gap */
  VECTK_EINVAL = 2, /* malformed input or violated precondition */
  VECTK_EINTERNAL = 3
} vectk_status;

typedef struct vectk_complex vectk_complex;
typedef struct vectk_cochain vectk_cochain;
typedef struct vectk_family vectk_family;
typedef struct vectk_bundle vectk_bundle;
typedef struct vectk_report vectk_report;

const char* vectk_version(void);
const char* vectk_last_error(void);
void vectk_string_free(char* s);

/* ---- simplicial complexes -------------------------------------------- */
vectk_status vectk_complex_from_json(const char* text, vectk_complex** out);
vectk_status vectk_complex_from_file(const char* path, vectk_complex** out);
void vectk_complex_free(vectk_complex* c);

/* ---- U(1) cochains (exact rational turns) ----------------------------- */
vectk_status vectk_cochain_from_json(const vectk_complex* cx, const char* text,
                                     vectk_cochain** out);
vectk_status vectk_cochain_from_file(const vectk_complex* cx, const char* path,
                                     vectk_cochain** out);
void vectk_cochain_free(vectk_cochain* c);

/* ---- families (plain or twisted, detected from the document) ---------- */
vectk_status vectk_family_from_json(const char* text, const char* base_dir, vectk_family** out);
vectk_status vectk_family_from_file(const char* path, vectk_family** out);
void vectk_family_free(vectk_family* f);

/* ---- vectorial bundles ------------------------------------------------ */
vectk_status vectk_bundle_from_json(const char* text, const char* base_dir, vectk_bundle** out);
vectk_status vectk_bundle_from_file(const char* path, vectk_bundle** out);
vectk_status vectk_bundle_to_json(const vectk_bundle* b, char** out);
vectk_status vectk_bundle_complex(const vectk_bundle* b, vectk_complex** out);
void vectk_bundle_free(vectk_bundle* b);

/* ---- computations ------------------------------------------------------
 * options_json configures tolerances and parallelism, e.g.
 *   {"lambda_max": 1.0, "eps_doteq": 1e-8, "gap_tol": 1e-6, "jobs": 4}
 * Unknown keys are ignored; pass NULL or "" for defaults.
 */
vectk_status vectk_cohomology(const vectk_complex* cx, int degree, vectk_report** out);
vectk_status vectk_dd_class(const vectk_complex* cx, const vectk_cochain* c, vectk_report** out);
vectk_status vectk_rank_obstruction(const vectk_complex* cx, const vectk_cochain* c, long rank,
                                    vectk_report** out);
vectk_status vectk_chern_number(const vectk_complex* cx, const vectk_cochain* transitions,
                                long long* out);
vectk_status vectk_approximate(const vectk_family* f, const char* options_json,
                               vectk_bundle** bundle_out, vectk_report** report_out);
vectk_status vectk_verify(const vectk_bundle* b, const vectk_cochain* twist_or_null,
                          const char* options_json, vectk_report** out);
vectk_status vectk_bundle_index(const vectk_bundle* b, vectk_report** out);
vectk_status vectk_scenario(const char* name, vectk_report** out);

/* ---- reports ----------------------------------------------------------- */
const char* vectk_report_json(const vectk_report* r);    /* owned by the report */
const char* vectk_report_summary(const vectk_report* r); /* one line, no newline */
int vectk_report_exit_code(const vectk_report* r);       /* 0 pass, 1 verdict, 2 input */
void vectk_report_free(vectk_report* r);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* VECTK_H */
