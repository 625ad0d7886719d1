/* C interface to the minimum-energy Bloch pulse library.
 *
 * Every function returns a bp_status. On failure a message describing the
 * error is available from bp_last_error() on the calling thread until the
 * next call into the library. Strings returned through `char**` are owned by
 * the caller and must be released with bp_string_free().
 */
#ifndef BLOCH_PULSE_H
#define BLOCH_PULSE_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(BP_BUILDING_LIBRARY)
#    define BP_API __declspec(dllexport)
#  else
#    define BP_API __declspec(dllimport)
#  endif
#else
#  define BP_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum bp_status {
  BP_OK = 0,
  BP_ERR_INVALID_ARGUMENT = 1,
  BP_ERR_BOUND_TOO_SMALL = 2,
  BP_ERR_TARGET_OUT_OF_RANGE = 3,
  BP_ERR_UNREACHABLE = 4,
  BP_ERR_NO_BRACKET = 5,
  BP_ERR_STALL = 6,
  BP_ERR_PARSE = 7,
  BP_ERR_DID_NOT_CONVERGE = 8,
  BP_ERR_NUMERIC = 9,
  BP_ERR_INTERNAL = 10
} bp_status;

typedef enum bp_axis { BP_AXIS_HALF_PI = 1, BP_AXIS_PI = 2 } bp_axis;

typedef enum bp_regime {
  BP_REGIME_NONE = 0,
  BP_REGIME_ONE = 1,
  BP_REGIME_TWO = 2,
  BP_REGIME_UNREACHABLE = 3
} bp_regime;

typedef struct bp_program bp_program;
typedef struct bp_trajectory bp_trajectory;

/* Pass BP_UNBOUNDED (or any +inf) as m for the unbounded-control law. */
#define BP_UNBOUNDED (__builtin_inf())

typedef struct bp_program_info {
  double m;
  double r_final;
  bp_axis axis;
  bp_regime regime;
  double kappa;
  double theta1; /* NaN when absent */
  double theta2; /* NaN when absent */
  double energy;
} bp_program_info;

typedef struct bp_trajectory_info {
  size_t samples;
  double final_t;
  double final_r;
  double final_theta;
  double energy;
} bp_trajectory_info;

BP_API const char* bp_last_error(void);
BP_API const char* bp_status_string(bp_status status);
BP_API void bp_string_free(char* s);

BP_API bp_status bp_classify(double m, bp_axis axis, double r_final, bp_regime* out);
/* Largest reachable radius on the axis (r_C1 or r_D1). */
BP_API bp_status bp_limit_radius(double m, bp_axis axis, double* out);

/* On BP_ERR_UNREACHABLE, *limit_radius (if non-null) receives the limit. */
BP_API bp_status bp_synthesize(double m, bp_axis axis, double r_final, bp_program** out,
                               double* limit_radius);
BP_API bp_status bp_program_from_json(const char* json, bp_program** out);
BP_API bp_status bp_program_to_json(const bp_program* program, char** out);
BP_API bp_status bp_program_get_info(const bp_program* program, bp_program_info* out);
BP_API bp_status bp_program_control(const bp_program* program, double theta, double* u);
BP_API void bp_program_free(bp_program* program);

/* step <= 0 selects the default 1e-4. */
BP_API bp_status bp_simulate(const bp_program* program, double step, bp_trajectory** out);
BP_API bp_status bp_trajectory_get_info(const bp_trajectory* trajectory, bp_trajectory_info* out);
BP_API bp_status bp_trajectory_to_csv(const bp_trajectory* trajectory, char** out);
BP_API void bp_trajectory_free(bp_trajectory* trajectory);

BP_API bp_status bp_curves_csv(double m, size_t samples, char** out);
BP_API bp_status bp_landmarks_json(double m, char** out);

/* *passed is set to 1 when every necessary-condition check passes. */
BP_API bp_status bp_verify_json(const bp_program* program, double h_tol, double adjoint_tol,
                                double step, int with_oracle, uint64_t seed, char** out,
                                int* passed);

BP_API bp_status bp_oracle_json(double m, bp_axis axis, double r_final, size_t segments,
                                size_t evaluations, uint64_t seed, char** out);

#ifdef __cplusplus
}
#endif

#endif /* BLOCH_PULSE_H */
