/* C interface to the compensated convex transform toolkit.
 *
 * All objects are opaque handles created and destroyed through this API.
 * Functions return ccx_status; CCX_OK is 0. On failure the out-parameters
 * are untouched and ccx_last_error() carries a thread-local message.
 * Handles are immutable after creation and safe to share across threads.
 */
#ifndef CCX_CAPI_H
#define CCX_CAPI_H

#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef struct ccx_grid ccx_grid;       /* finite values on a regular grid */
typedef struct ccx_mask ccx_mask;       /* node membership (the sample set) */
typedef struct ccx_samples ccx_samples; /* scattered (point, value) list */
typedef struct ccx_modulus ccx_modulus; /* modulus-of-continuity model */

typedef enum ccx_status {
  CCX_OK = 0,
  CCX_ERR_INVALID_ARGUMENT = 1,
  CCX_ERR_DOMAIN_MISMATCH = 2,
  CCX_ERR_EMPTY_MASK = 3,
  CCX_ERR_BAD_PARAMS = 4,
  CCX_ERR_M_TOO_SMALL = 5,
  CCX_ERR_NOT_IN_HULL = 6,
  CCX_ERR_SIZE_GUARD = 7,
  CCX_ERR_IO = 8,
  CCX_ERR_FORMAT = 9,
  CCX_ERR_UNKNOWN_FIXTURE = 10,
  CCX_ERR_INTERNAL = 11
} ccx_status;

const char* ccx_status_name(ccx_status status);
/* Message of the most recent failure on this thread; empty when none. */
const char* ccx_last_error(void);
const char* ccx_version(void);

/* ---- grids ---------------------------------------------------------- */

ccx_status ccx_grid_create(int dim, const int64_t* shape,
                           const double* spacing, const double* origin,
                           const double* values, ccx_grid** out);
void ccx_grid_destroy(ccx_grid* g);
ccx_status ccx_grid_clone(const ccx_grid* g, ccx_grid** out);
int ccx_grid_dim(const ccx_grid* g);
int64_t ccx_grid_node_count(const ccx_grid* g);
ccx_status ccx_grid_shape(const ccx_grid* g, int64_t* shape);
ccx_status ccx_grid_spacing(const ccx_grid* g, double* spacing);
ccx_status ccx_grid_origin(const ccx_grid* g, double* origin);
/* Borrowed pointer, valid while the grid lives. Row-major, last axis
 * fastest. */
const double* ccx_grid_values(const ccx_grid* g);
ccx_status ccx_grid_node_coords(const ccx_grid* g, int64_t flat, double* x);
ccx_status ccx_grid_read(const char* path, ccx_grid** out);
ccx_status ccx_grid_write(const ccx_grid* g, const char* path);

/* ---- masks ----------------------------------------------------------- */

ccx_status ccx_mask_create(int dim, const int64_t* shape,
                           const double* spacing, const double* origin,
                           const uint8_t* member, ccx_mask** out);
void ccx_mask_destroy(ccx_mask* m);
int ccx_mask_dim(const ccx_mask* m);
int64_t ccx_mask_member_count(const ccx_mask* m);
int64_t ccx_mask_node_count(const ccx_mask* m);
ccx_status ccx_mask_shape(const ccx_mask* m, int64_t* shape);
ccx_status ccx_mask_spacing(const ccx_mask* m, double* spacing);
ccx_status ccx_mask_origin(const ccx_mask* m, double* origin);
const uint8_t* ccx_mask_members(const ccx_mask* m);
ccx_status ccx_mask_invert(const ccx_mask* m, ccx_mask** out);
ccx_status ccx_mask_diameter(const ccx_mask* m, double* out);
ccx_status ccx_mask_read(const char* path, ccx_mask** out);
ccx_status ccx_mask_write(const ccx_mask* m, const char* path);

/* ---- scattered samples ---------------------------------------------- */

ccx_status ccx_samples_create(int dim, int64_t count, const double* points,
                              const double* values, ccx_samples** out);
void ccx_samples_destroy(ccx_samples* s);
int ccx_samples_dim(const ccx_samples* s);
int64_t ccx_samples_count(const ccx_samples* s);
const double* ccx_samples_points(const ccx_samples* s);
const double* ccx_samples_values(const ccx_samples* s);
ccx_status ccx_samples_read_csv(const char* path, ccx_samples** out);
ccx_status ccx_samples_write_csv(const ccx_samples* s, const char* path);
/* Multivalued reduction: per distinct point, min values (lower) and max
 * values (upper). */
ccx_status ccx_samples_bounds(const ccx_samples* s, ccx_samples** lower,
                              ccx_samples** upper);
/* Snap samples to the nearest nodes of the given window; coincident points
 * collapse to min/max value grids. */
ccx_status ccx_samples_rasterize(const ccx_samples* s, int dim,
                                 const int64_t* shape, const double* spacing,
                                 const double* origin, ccx_grid** lower,
                                 ccx_grid** upper, ccx_mask** mask);

/* ---- sample extension and parameter thresholds ----------------------- */

/* sign > 0: extend by +M off K; sign < 0: extend by -M. */
ccx_status ccx_extend_with_constant(const ccx_grid* f, const ccx_mask* k,
                                    double m, int sign, ccx_grid** out);
ccx_status ccx_min_safe_m(double a0, double lambda, double d, double* out);
ccx_status ccx_bound_a0(const ccx_grid* f, const ccx_mask* k, double* out);
ccx_status ccx_median_shift(const ccx_grid* f, const ccx_mask* k,
                            ccx_grid** shifted, double* shift);

/* ---- Moreau envelopes and transforms --------------------------------- */

ccx_status ccx_locality_radius(double m, double lambda, double* out);
/* window_radius < 0 runs the full sweep; otherwise sweeps search only nodes
 * within that physical radius per axis. */
ccx_status ccx_lower_moreau(const ccx_grid* f, double lambda,
                            double window_radius, ccx_grid** out);
ccx_status ccx_upper_moreau(const ccx_grid* f, double lambda,
                            double window_radius, ccx_grid** out);
ccx_status ccx_lower_transform(const ccx_grid* f, double lambda,
                               double window_radius, ccx_grid** out);
ccx_status ccx_upper_transform(const ccx_grid* f, double lambda,
                               double window_radius, ccx_grid** out);
/* kind 0: upper-of-lower, 1: lower-of-upper. */
ccx_status ccx_mixed_transform(const ccx_grid* f, double lambda, double tau,
                               int kind, double window_radius, ccx_grid** out);

/* ---- approximations --------------------------------------------------- */

ccx_status ccx_upper_approx(const ccx_grid* f, const ccx_mask* k,
                            double lambda, double m, ccx_grid** out);
ccx_status ccx_lower_approx(const ccx_grid* f, const ccx_mask* k,
                            double lambda, double m, ccx_grid** out);
ccx_status ccx_average_approx(const ccx_grid* f, const ccx_mask* k,
                              double lambda, double m, ccx_grid** out);
ccx_status ccx_weighted_average_approx(const ccx_grid* f, const ccx_mask* k,
                                       double lambda, double m, double s,
                                       ccx_grid** out);
ccx_status ccx_mixed_average_approx(const ccx_grid* f, const ccx_mask* k,
                                    double lambda, double tau, double m,
                                    ccx_grid** out);
ccx_status ccx_ring_extension(const ccx_grid* f, const ccx_mask* k,
                              double r_ball, double c0, double lambda,
                              double m, double tau, ccx_grid** f_out,
                              ccx_mask** mask_out);
ccx_status ccx_interpolation_check(const ccx_grid* approx, const ccx_grid* f,
                                   const ccx_mask* k, double tol,
                                   double* max_abs_dev, int64_t* worst_node,
                                   int* pass);
/* Pads grid and mask by `nodes` per axis side, replicating the nearest edge
 * node's value and membership (complement-type windows). */
ccx_status ccx_pad_clamp(const ccx_grid* f, const ccx_mask* k, int64_t nodes,
                         ccx_grid** f_out, ccx_mask** mask_out);

/* ---- geometry --------------------------------------------------------- */

ccx_status ccx_hausdorff_distance(const ccx_mask* k, const ccx_mask* e,
                                  double* out);
ccx_status ccx_density_radius_field(const ccx_mask* k, ccx_grid** out);
ccx_status ccx_co_membership(const ccx_mask* k, const double* x, int* out);
ccx_status ccx_co_member_field(const ccx_mask* k, ccx_mask** out);
ccx_status ccx_convex_density_radius(const ccx_mask* k, const double* x,
                                     double* out);
/* Convex density radius of x within a scattered point set. */
ccx_status ccx_convex_density_radius_points(int dim, int64_t count,
                                            const double* points,
                                            const double* x, double* out);
/* x in the convex hull of a scattered point set? */
ccx_status ccx_co_membership_points(int dim, int64_t count,
                                    const double* points, const double* x,
                                    int* out);
ccx_status ccx_dist_like(const ccx_mask* k, const ccx_grid* f, double lambda,
                         const double* x, double* out);
ccx_status ccx_big_d(const ccx_mask* k, const ccx_grid* f, double lambda,
                     const double* x, double* out);
ccx_status ccx_big_d_squared_field(const ccx_mask* k, const ccx_grid* f,
                                   double lambda, ccx_grid** out);
ccx_status ccx_stability_bound(double lambda, double m,
                               const ccx_modulus* omega, double d_h,
                               double* out);
ccx_status ccx_stability_bound_lipschitz(double lambda, double m, double l,
                                         double alpha, double d_h,
                                         double* out);

/* ---- moduli ------------------------------------------------------------ */

ccx_status ccx_empirical_modulus(const ccx_grid* f, int64_t max_pairs,
                                 ccx_modulus** out);
ccx_status ccx_modulus_linear(double slope, ccx_modulus** out);
void ccx_modulus_destroy(ccx_modulus* m);
/* Fills the least concave majorant and the affine bound in place. */
ccx_status ccx_modulus_complete(ccx_modulus* m);
ccx_status ccx_modulus_affine(const ccx_modulus* m, double* a, double* b);
ccx_status ccx_modulus_eval(const ccx_modulus* m, double t, double* out);
ccx_status ccx_modulus_set_lipschitz(ccx_modulus* m, double lip);
ccx_status ccx_modulus_set_grad_lipschitz(ccx_modulus* m, double grad_lip);
ccx_status ccx_modulus_read_csv(const char* path, ccx_modulus** out);
ccx_status ccx_modulus_write_csv(const ccx_modulus* m, const char* path);
ccx_status ccx_error_bound_uc(double r_c, double lambda,
                              const ccx_modulus* m, double* out);
ccx_status ccx_error_bound_lip(double r_c, double lambda, double l,
                               double* out);
ccx_status ccx_error_bound_c11(double r_c, double lambda, double l,
                               double* out);

/* ---- oracle ------------------------------------------------------------ */

/* Convex envelope of (points, values) at x0. support/weights receive up to
 * dim+1 entries; *support_count reports how many were written. */
ccx_status ccx_convex_envelope_value(int dim, int64_t count,
                                     const double* points,
                                     const double* values, const double* x0,
                                     double* value, int32_t* support,
                                     double* weights, int32_t* support_count);
ccx_status ccx_lower_transform_exact(const ccx_samples* s, const double* x0,
                                     double lambda, double* out);
ccx_status ccx_upper_transform_exact(const ccx_samples* s, const double* x0,
                                     double lambda, double* out);
ccx_status ccx_average_approx_exact(const ccx_samples* s, const double* x0,
                                    double lambda, double* out);
/* kind 0: lower, 1: upper. */
ccx_status ccx_moreau_bruteforce(const ccx_grid* f, double lambda, int kind,
                                 ccx_grid** out);
ccx_status ccx_spike_upper_value(double alpha, double lambda, double distance,
                                 double* out);

/* ---- fixtures ----------------------------------------------------------- */

ccx_status ccx_fixture_eval(const char* name, int dim, const double* x,
                            double* out);
/* has_* flags are 0/1; unavailable constants are left untouched. */
ccx_status ccx_fixture_info(const char* name, int* has_lip, double* lip,
                            int* has_grad_lip, double* grad_lip,
                            int* has_modulus, double* mod_a, double* mod_b,
                            int* has_far_const, double* far_const,
                            double* far_radius);
ccx_status ccx_fixture_omega(const char* name, double t, double* out);
ccx_status ccx_fixture_sqrt_omega_slope(const char* name, int dim,
                                        double* out);
ccx_status ccx_fixture_grid(const char* name, int dim, const int64_t* shape,
                            const double* spacing, const double* origin,
                            ccx_grid** out);
ccx_status ccx_spike_grid(int dim, const int64_t* shape, const double* spacing,
                          const double* origin, double alpha, ccx_grid** out);

#ifdef __cplusplus
}
#endif

#endif /* CCX_CAPI_H */
