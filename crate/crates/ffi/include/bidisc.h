#ifndef BIDISC_H
#define BIDISC_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum BidiscCertificateStatus {
  BIDISC_CERTIFICATE_STATUS_VALID = 0,
  BIDISC_CERTIFICATE_STATUS_FALLBACK = 1,
  BIDISC_CERTIFICATE_STATUS_INVALID = 2,
} BidiscCertificateStatus;

typedef enum BidiscRegion {
  BIDISC_REGION_DIAGONAL = 0,
  BIDISC_REGION_POLE_AT_BASE = 1,
  BIDISC_REGION_THIN_A = 2,
  BIDISC_REGION_U = 3,
  BIDISC_REGION_SIGMA_U = 4,
  BIDISC_REGION_E1 = 5,
  BIDISC_REGION_E2 = 6,
  BIDISC_REGION_E3 = 7,
  BIDISC_REGION_E4 = 8,
  BIDISC_REGION_BOUNDARY_BAND = 9,
} BidiscRegion;

typedef enum BidiscStatus {
  BIDISC_STATUS_OK = 0,
  BIDISC_STATUS_NULL_POINTER = 1,
  BIDISC_STATUS_INVALID_POINT = 2,
  BIDISC_STATUS_INVALID_ARGUMENT = 3,
  BIDISC_STATUS_DIAGONAL_POLES = 4,
  BIDISC_STATUS_POLE_AT_BASE = 5,
  BIDISC_STATUS_NO_CONVERGENCE = 6,
  BIDISC_STATUS_INTERNAL = 7,
} BidiscStatus;

/**
 * Opaque certificate.
 */
typedef struct bidisc_certificate bidisc_certificate;

/**
 * Opaque solver configuration.
 */
typedef struct bidisc_config bidisc_config;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread. The pointer stays valid
 * until the next failing call on the same thread.
 */
const char *bidisc_last_error(void);

/**
 * Static NUL-terminated tag such as `"E1"`.
 */
const char *bidisc_region_name(enum BidiscRegion region);

/**
 * Default configuration. Release with [`bidisc_config_free`].
 */
struct bidisc_config *bidisc_config_new(void);

/**
 * # Safety
 * `config` must come from [`bidisc_config_new`] and not be used afterwards.
 */
void bidisc_config_free(struct bidisc_config *config);

/**
 * # Safety
 * `config` must be a live handle or null.
 */
enum BidiscStatus bidisc_config_set_seed(struct bidisc_config *config, uint64_t seed);

/**
 * # Safety
 * `config` must be a live handle or null.
 */
enum BidiscStatus bidisc_config_set_starts(struct bidisc_config *config, size_t starts);

/**
 * # Safety
 * `config` must be a live handle or null.
 */
enum BidiscStatus bidisc_config_set_eps(struct bidisc_config *config, double eps);

/**
 * Solves for base point `z` (null means the origin) and poles `p`, `q`.
 * On success `*out` receives a certificate to release with
 * [`bidisc_certificate_free`]. A null `config` uses the defaults.
 *
 * # Safety
 * `z`, `p`, `q` must point to four doubles (or `z` be null); `out` must be
 * writable.
 */
enum BidiscStatus bidisc_solve(const struct bidisc_config *config,
                               const double *z,
                               const double *p,
                               const double *q,
                               struct bidisc_certificate **out);

/**
 * # Safety
 * `cert` must come from [`bidisc_solve`] and not be used afterwards.
 */
void bidisc_certificate_free(struct bidisc_certificate *cert);

/**
 * Natural logarithm of the certified value; NaN for a null handle.
 *
 * # Safety
 * `cert` must be a live handle or null.
 */
double bidisc_certificate_value(const struct bidisc_certificate *cert);

/**
 * Worst residual of the certificate; NaN for a null handle.
 *
 * # Safety
 * `cert` must be a live handle or null.
 */
double bidisc_certificate_residual(const struct bidisc_certificate *cert);

/**
 * # Safety
 * `cert` must be a live handle; `out` must be writable.
 */
enum BidiscStatus bidisc_certificate_region(const struct bidisc_certificate *cert,
                                            enum BidiscRegion *out);

/**
 * # Safety
 * `cert` must be a live handle; `out` must be writable.
 */
enum BidiscStatus bidisc_certificate_status(const struct bidisc_certificate *cert,
                                            enum BidiscCertificateStatus *out);

/**
 * Full certificate as JSON. The string is owned by the caller and released
 * with [`bidisc_string_free`]; null on failure.
 *
 * # Safety
 * `cert` must be a live handle or null.
 */
char *bidisc_certificate_json(const struct bidisc_certificate *cert);

/**
 * # Safety
 * `s` must come from this library and not be used afterwards.
 */
void bidisc_string_free(char *s);

/**
 * Region of the pole pair `(p, q)` with the base point at the origin, and
 * the margin of the classification.
 *
 * # Safety
 * `p`, `q` must point to four doubles; `region_out` must be writable and
 * `margin_out` writable or null.
 */
enum BidiscStatus bidisc_classify(const double *p,
                                  const double *q,
                                  double eps,
                                  enum BidiscRegion *region_out,
                                  double *margin_out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* BIDISC_H */
