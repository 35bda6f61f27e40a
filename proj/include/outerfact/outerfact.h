#ifndef OUTERFACT_H
#define OUTERFACT_H

/* C interface to the outer factorization library. Objects are opaque
 * handles owned by the caller and released with the matching *_free.
 * Functions return an of_status; on error a message is available from
 * of_last_error() on the calling thread. */

#include <stddef.h>

#if defined(_WIN32)
#define OF_API __declspec(dllexport)
#else
#define OF_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum of_status {
  OF_OK = 0,
  OF_CONDITION_FAILED = 2, /* the computation ran; the tested condition does not hold */
  OF_NO_CONVERGENCE = 3,   /* truncations did not converge or certificates fell short */
  OF_ERR_VALIDATION = 10,
  OF_ERR_IO = 11,
  OF_ERR_NOT_PSD = 12,
  OF_ERR_NUMERICAL = 13,
  OF_ERR_INTERNAL = 14
} of_status;

typedef enum of_poly_kind { OF_LAURENT = 0, OF_ANALYTIC = 1 } of_poly_kind;

/* Zero in max_trunc or grid_points_per_dim selects the per-dimension default. */
typedef struct of_tolerances {
  double herm_tol;
  double psd_tol;
  double rank_tol;
  double conv_tol;
  double residual_tol;
  size_t max_trunc;
  size_t grid_points_per_dim;
} of_tolerances;

typedef struct of_poly_info {
  of_poly_kind kind;
  size_t dims;
  size_t rows; /* coefficient rows; equals cols for Laurent polynomials */
  size_t cols;
  size_t num_coeffs;
} of_poly_info;

typedef struct of_poly of_poly;
typedef struct of_matrix of_matrix;
typedef struct of_report of_report;

OF_API void of_tolerances_default(of_tolerances* out);
OF_API const char* of_last_error(void);
OF_API const char* of_status_name(of_status s);
OF_API void of_string_free(char* s);

/* Coefficient files. path "-" means stdin/stdout. */
OF_API of_status of_poly_parse(const char* json_text, double herm_tol, of_poly** out);
OF_API of_status of_poly_read(const char* path, double herm_tol, of_poly** out);
OF_API of_status of_poly_write(const of_poly* p, const char* path);
OF_API of_status of_poly_dump(const of_poly* p, char** out);
OF_API of_status of_poly_info_get(const of_poly* p, of_poly_info* out);
/* Copies at most cap entries of the degree vector. */
OF_API of_status of_poly_degree(const of_poly* p, int* degree, size_t cap);
/* Row-major rows x cols coefficient at exponent `index` (dims entries);
 * exponents outside the support give zeros. */
OF_API of_status of_poly_coeff(const of_poly* p, const int* index, double* re, double* im);
OF_API void of_poly_free(of_poly* p);

OF_API of_status of_matrix_parse(const char* json_text, of_matrix** out);
OF_API of_status of_matrix_read(const char* path, of_matrix** out);
OF_API void of_matrix_free(of_matrix* m);

/* Operations. When the computation runs (status OF_OK, OF_CONDITION_FAILED or
 * OF_NO_CONVERGENCE) *report is set; a factor is produced only with OF_OK.
 * factor may be NULL when the caller does not want it. */
OF_API of_status of_factor_1d(const of_poly* q, const of_tolerances* tol, of_poly** factor,
                              of_report** report);
OF_API of_status of_factor_2d(const of_poly* q, const of_tolerances* tol, of_poly** factor,
                              of_report** report);
OF_API of_status of_check_multi(const of_poly* q, const of_tolerances* tol, of_report** report);
OF_API of_status of_check_2var(const of_poly* q, const of_tolerances* tol, of_report** report);
OF_API of_status of_check_gw(const of_poly* q, const of_tolerances* tol, of_report** report);
OF_API of_status of_verify(const of_poly* q, const of_poly* p, const of_tolerances* tol,
                           of_report** report);
OF_API of_status of_schur(const of_matrix* m, const size_t* lambda, size_t lambda_len,
                          const of_tolerances* tol, of_report** report);

/* Reports are JSON objects with the keys command, outcome, tolerances and
 * metrics, plus command-specific detail. */
OF_API of_status of_report_json(const of_report* r, char** out);
/* Numeric or boolean entry of "metrics"; OF_ERR_VALIDATION if absent. */
OF_API of_status of_report_metric(const of_report* r, const char* key, double* value);
OF_API void of_report_free(of_report* r);

#ifdef __cplusplus
}
#endif

#endif /* OUTERFACT_H */
