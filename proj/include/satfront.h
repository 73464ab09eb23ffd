#ifndef SATFRONT_H
#define SATFRONT_H

/* C interface to the saturating-diffusion traveling front solver.
 *
 * Conventions:
 *  - Every function returns sf_status; SF_OK means the out-parameters are
 *    valid. On failure sf_last_error() describes the problem (thread-local).
 *  - Handles are created into an out-parameter and released with the
 *    matching _destroy; destroy accepts NULL.
 *  - Functions returning strings allocate with malloc; release the result
 *    with sf_string_free. Output is deterministic: same inputs, same bytes.
 */

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum sf_status {
  SF_OK = 0,
  SF_ERR_DOMAIN = 1,        /* argument outside the operation's domain */
  SF_ERR_VALIDATION = 2,    /* reaction/flux data fails a shape hypothesis */
  SF_ERR_QUADRATURE = 3,    /* quadrature failed to converge */
  SF_ERR_SEED = 4,          /* no admissible departure rate at an equilibrium */
  SF_ERR_STEP = 5,          /* integrator step underflow */
  SF_ERR_BRACKET = 6,       /* no sign-changing bracket found */
  SF_ERR_LINEAR_BOUND = 7,  /* linear bound needed for the exact speed fails */
  SF_ERR_REGIME = 8,        /* requested object does not exist here */
  SF_ERR_WINDOW = 9,        /* request exceeds the resolved window */
  SF_ERR_CONFIG = 10,       /* malformed configuration input */
  SF_ERR_INVALID_ARG = 100, /* NULL handle or out-parameter */
  SF_ERR_INTERNAL = 101
} sf_status;

/* Thread-local message for the most recent failure; never NULL. */
const char* sf_last_error(void);
/* Stable lowercase identifier for a status ("ok", "regime", ...). */
const char* sf_status_name(sf_status code);
void sf_string_free(char* s);

/* ------------------------------------------------------------- model ---- */

typedef struct sf_reaction sf_reaction;
typedef struct sf_flux sf_flux;

sf_status sf_reaction_cubic(double a, sf_reaction** out);
sf_status sf_reaction_from_json(const char* json, sf_reaction** out);
void sf_reaction_destroy(sf_reaction* r);

/* Any out-pointer may be NULL. f_prime/potential as for the stored f. */
sf_status sf_reaction_eval(const sf_reaction* r, double s, double* f,
                           double* f_prime, double* potential);
sf_status sf_reaction_info(const sf_reaction* r, double* alpha,
                           double* eps_bar, double* v_zero,
                           double* total_integral);

sf_status sf_flux_mean_curvature(sf_flux** out);
sf_status sf_flux_power(double m, double delta, sf_flux** out);
sf_status sf_flux_from_json(const char* json, sf_flux** out);
void sf_flux_destroy(sf_flux* fl);

sf_status sf_flux_eval(const sf_flux* fl, double s, double* p, double* q);
sf_status sf_flux_inverse(const sf_flux* fl, double y, double* r);
sf_status sf_flux_info(const sf_flux* fl, double* m0, double* kappa);

/* Parse {"reaction":{...},"flux":{...}}; NULL or empty json gives the
 * defaults (cubic a = 0.4, mean curvature). Both outputs must be freed. */
sf_status sf_model_from_json(const char* json, sf_reaction** r, sf_flux** fl);

/* ------------------------------------------- reduced-plane trajectory ---- */

typedef struct sf_trajectory sf_trajectory;

enum { SF_FORWARD = 0, SF_BACKWARD = 1 };
enum { SF_EVENT_HIT_ZERO = 0, SF_EVENT_BLOW_UP = 1, SF_EVENT_ENDPOINT = 2 };

/* Integrate y'(v) = c_dir(v) - f(v)/R(y/eps) ... in its regularized form from
 * the equilibrium `anchor` toward `stop_at`. Pass non-positive tolerances to
 * use the defaults (1e-10 absolute and relative). */
sf_status sf_shoot(const sf_reaction* r, const sf_flux* fl, double eps,
                   double c, double anchor, int direction, double stop_at,
                   double abs_tol, double rel_tol, sf_trajectory** out);
void sf_trajectory_destroy(sf_trajectory* t);

sf_status sf_trajectory_size(const sf_trajectory* t, size_t* n);
sf_status sf_trajectory_sample(const sf_trajectory* t, size_t i, double* v,
                               double* y, double* yp);
sf_status sf_trajectory_event(const sf_trajectory* t, int* kind, double* v,
                              double* y);
sf_status sf_trajectory_eval(const sf_trajectory* t, double v, double* y);
sf_status sf_trajectory_csv(const sf_trajectory* t, char** out);
sf_status sf_trajectory_sidecar_json(const sf_trajectory* t, char** out);

/* ---------------------------------------------------- critical speeds ---- */

enum { SF_SPEED_BISTABLE = 0, SF_SPEED_MONOSTABLE = 1 };
enum {
  SF_REGIME_REGULAR = 0,
  SF_REGIME_BORDER = 1,
  SF_REGIME_DISCONTINUOUS = 2
};

typedef struct sf_speed_result {
  int kind;    /* SF_SPEED_* */
  int regime;  /* SF_REGIME_* */
  double eps;
  double value;
  double bracket_low;
  double bracket_high;
  long iterations;
  double tol;
} sf_speed_result;

/* Bisection on the 0 -> 1 connection; below the existence threshold the
 * regime fields report the steady state and value is 0. tol <= 0 -> 1e-7. */
sf_status sf_speed_bistable(const sf_reaction* r, const sf_flux* fl,
                            double eps, double tol, sf_speed_result* out);

/* Closed form 2 sqrt(f'(alpha) eps P'(0)) for the alpha -> 1 threshold.
 * require_exact != 0 additionally demands the linear bound that makes the
 * formula exact rather than a lower estimate. */
sf_status sf_speed_monostable(const sf_reaction* r, const sf_flux* fl,
                              double eps, int require_exact,
                              sf_speed_result* out);

/* Empirical monostable threshold by bisection on the connection behavior. */
sf_status sf_speed_monostable_shooting(const sf_reaction* r,
                                       const sf_flux* fl, double eps,
                                       double tol, sf_speed_result* out);

sf_status sf_speed_result_json(const sf_speed_result* res, char** out);

/* ------------------------------------------------------------ profiles ---- */

typedef struct sf_profile sf_profile;

enum {
  SF_PROFILE_REGULAR_FRONT = 0,
  SF_PROFILE_DISCONTINUOUS_STEADY = 1,
  SF_PROFILE_BORDER_STEADY = 2,
  SF_PROFILE_NONMONOTONE = 3,
  SF_PROFILE_INVISCID = 4
};

/* Critical 0 -> 1 front at speed c*(eps); SF_ERR_REGIME below the
 * existence threshold (use sf_profile_steady there). speed_tol <= 0 -> 1e-9. */
sf_status sf_profile_bistable_front(const sf_reaction* r, const sf_flux* fl,
                                    double eps, double speed_tol,
                                    sf_profile** out);

/* alpha -> 1 front. c <= 0 selects the critical speed by shooting; an
 * explicit c must be at or above it. */
sf_status sf_profile_monostable_front(const sf_reaction* r, const sf_flux* fl,
                                      double eps, double c, sf_profile** out);

/* Discontinuous (or border) standing wave; exists when the ceiling is at or
 * below the barrier integral. */
sf_status sf_profile_steady(const sf_reaction* r, const sf_flux* fl,
                            double eps, sf_profile** out);

/* Glued nonmonotone wave with up to max_turns direction changes.
 * from_one != 0 starts at v = 1 (requires c above the bistable critical
 * speed); from_one == 0 starts at v = 0 (c = 0 allowed). */
sf_status sf_profile_nonmonotone(const sf_reaction* r, const sf_flux* fl,
                                 double eps, double c, int from_one,
                                 int max_turns, sf_profile** out);

/* eps = 0 front for the first-order equation at speed c != 0; q1/q2 default
 * to the equilibria adjacent to the sign of c (pass NaN). */
sf_status sf_profile_inviscid(const sf_reaction* r, double c, double q1,
                              double q2, sf_profile** out);

void sf_profile_destroy(sf_profile* p);

sf_status sf_profile_info(const sf_profile* p, int* kind, double* eps,
                          double* c, double* normalization, int* has_jump,
                          double* v_minus, double* v_plus);
sf_status sf_profile_extent(const sf_profile* p, double* z_min, double* z_max);
sf_status sf_profile_num_pieces(const sf_profile* p, size_t* n);
sf_status sf_profile_piece_size(const sf_profile* p, size_t piece, size_t* n);
/* Copies up to cap nodes of the piece into any non-NULL arrays. */
sf_status sf_profile_piece_copy(const sf_profile* p, size_t piece, double* z,
                                double* v, double* dvdz, size_t cap,
                                int* increasing);
sf_status sf_profile_eval(const sf_profile* p, double z, double* v);
/* Sup of |eps (P(v'))' - c v' + f(v)| over interior finite-difference
 * stencils; only defined for profiles without jumps. */
sf_status sf_profile_residual(const sf_profile* p, const sf_reaction* r,
                              const sf_flux* fl, double* sup, double* at_z,
                              long* points);
sf_status sf_profile_csv(const sf_profile* p, char** out);
/* with_residual != 0 embeds the residual report (needs r and fl). */
sf_status sf_profile_sidecar_json(const sf_profile* p, const sf_reaction* r,
                                  const sf_flux* fl, int with_residual,
                                  char** out);

/* -------------------------------------------------- convergence sweeps ---- */

typedef struct sf_report sf_report;

enum { SF_SIDE_BISTABLE = 0, SF_SIDE_MONOSTABLE = 1 };

/* Sup distance to the limiting step outside an exclusion interval around the
 * interface, per eps. half_width/points describe the evaluation grid. */
sf_status sf_report_step(const sf_reaction* r, const sf_flux* fl, int side,
                         const double* eps, size_t n_eps, double exclusion,
                         double half_width, long points, double speed_tol,
                         sf_report** out);

/* Sup distance between the eps-front at fixed supercritical speed c and the
 * eps = 0 front, per eps; no exclusion needed (the limit is continuous). */
sf_status sf_report_fixed_speed(const sf_reaction* r, const sf_flux* fl,
                                double c, const double* eps, size_t n_eps,
                                double half_width, long points,
                                sf_report** out);

/* |<v_eps', psi> - jump psi(0)| for the bump test function of the given
 * width, per eps. target_out (optional) receives jump * psi(0). */
sf_status sf_report_pairing(const sf_reaction* r, const sf_flux* fl, int side,
                            double psi_width, const double* eps, size_t n_eps,
                            double* target_out, sf_report** out);

/* c int (v')^2 dz - (F(1) - F(alpha)) at the critical alpha -> 1 front. */
sf_status sf_report_energy(const sf_reaction* r, const sf_flux* fl,
                           const double* eps, size_t n_eps, double speed_tol,
                           sf_report** out);

/* Critical speed as a function of eps. side = SF_SIDE_MONOSTABLE uses the
 * closed form; empirical != 0 switches it to shooting. */
sf_status sf_report_speed_sweep(const sf_reaction* r, const sf_flux* fl,
                                int side, int empirical, const double* eps,
                                size_t n_eps, double tol, sf_report** out);

void sf_report_destroy(sf_report* rep);

sf_status sf_report_size(const sf_report* rep, size_t* n);
sf_status sf_report_row(const sf_report* rep, size_t i, double* eps,
                        double* value);
sf_status sf_report_csv(const sf_report* rep, char** out);
/* Pass NaN as target to emit null. */
sf_status sf_report_header_json(const sf_report* rep, const char* metric,
                                double target, char** out);

#ifdef __cplusplus
}
#endif

#endif /* SATFRONT_H */
