/* C interface to the knn-moo noisy multi-objective search library. */

#ifndef KNN_MOO_H
#define KNN_MOO_H

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result code of every fallible call in this API.
 */
typedef enum KmooStatus {
  /**
   * Success; out parameters are filled.
   */
  KMOO_STATUS_OK = 0,
  /**
   * A required pointer argument was NULL.
   */
  KMOO_STATUS_NULL_POINTER = 1,
  /**
   * Arguments were rejected (bad sizes, bad configuration, undersized
   * buffers). Details via `kmoo_last_error`.
   */
  KMOO_STATUS_INVALID_ARGUMENT = 2,
  /**
   * The operation itself failed. Details via `kmoo_last_error`.
   */
  KMOO_STATUS_RUN_FAILED = 3,
  /**
   * A panic was caught at the language boundary. Details via
   * `kmoo_last_error`.
   */
  KMOO_STATUS_PANIC = 4,
} KmooStatus;

/**
 * Which noise-handling strategy [`KmooStrategy`] selects.
 */
typedef enum KmooStrategyKind {
  /**
   * Single noisy evaluation per individual (cost 1).
   */
  KMOO_STRATEGY_KIND_BASELINE = 0,
  /**
   * Mean of `n` evaluations per individual (cost `n`).
   */
  KMOO_STRATEGY_KIND_REPETITION = 1,
  /**
   * One evaluation averaged with the raw values of the k−1 nearest
   * archived neighbors (cost 1).
   */
  KMOO_STRATEGY_KIND_KNN = 2,
} KmooStrategyKind;

/**
 * Opaque handle to an optimization problem.
 */
typedef struct KmooProblem KmooProblem;

/**
 * Opaque handle to one finished search run.
 */
typedef struct KmooRun KmooRun;

/**
 * Noise-handling strategy selector. Fields other than `kind` are read only
 * where noted.
 */
typedef struct KmooStrategy {
  enum KmooStrategyKind kind;
  /**
   * Evaluations per individual; `Repetition` only, must be ≥ 2.
   */
  uint32_t n;
  /**
   * Neighborhood size including the new point; `Knn` only, must be ≥ 1.
   */
  uint32_t k;
  /**
   * Standardized-distance cutoff for neighbors; `Knn` only, must be > 0
   * (may be INFINITY for no cutoff).
   */
  double max_sed;
} KmooStrategy;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * The message of the most recent failure on this thread, or NULL if no
 * call has failed yet. Valid until the next failing call on this thread;
 * do not free.
 */
const char *kmoo_last_error(void);

/**
 * Exact 2-D hypervolume of `points` (row-major f1,f2 pairs) with respect
 * to `reference` (2 values). Dominated and out-of-reference points are
 * handled internally, so any point set is acceptable.
 */
enum KmooStatus kmoo_hypervolume_2d(const double *points,
                                    uintptr_t point_count,
                                    const double *reference,
                                    double *out_hypervolume);

/**
 * Two-sided Mann-Whitney U p-value for two sample sets (each must hold at
 * least two values; exact for small tie-free samples, normal approximation
 * with tie correction otherwise).
 */
enum KmooStatus kmoo_mann_whitney_u(const double *samples_a,
                                    uintptr_t count_a,
                                    const double *samples_b,
                                    uintptr_t count_b,
                                    double *out_p_value);

/**
 * Vargha-Delaney Â₁₂ effect size: the probability that a value drawn from
 * the first sample exceeds one drawn from the second (ties count half).
 */
enum KmooStatus kmoo_vargha_delaney_a12(const double *samples_a,
                                        uintptr_t count_a,
                                        const double *samples_b,
                                        uintptr_t count_b,
                                        double *out_a12);

/**
 * Standardized Euclidean distance between two decision vectors: each
 * squared coordinate difference is divided by that dimension's variance
 * before summing.
 */
enum KmooStatus kmoo_standardized_distance(const double *x1,
                                           const double *x2,
                                           const double *variances,
                                           uintptr_t dimension_count,
                                           double *out_distance);

/**
 * Marks the non-dominated rows of a point matrix (row-major,
 * `point_count × objective_count`, minimization): `out_mask[i]` becomes 1
 * when row i is dominated by no other row, else 0. Duplicates of a
 * non-dominated row are all kept.
 */
enum KmooStatus kmoo_pareto_mask(const double *points,
                                 uintptr_t point_count,
                                 uintptr_t objective_count,
                                 uint8_t *out_mask);

/**
 * Creates the noisy ZDT1 benchmark (dimensions ≥ 2; additive Gaussian
 * noise with the given per-objective σ ≥ 0).
 */
enum KmooStatus kmoo_problem_zdt1(uintptr_t dimensions,
                                  double sigma_f1,
                                  double sigma_f2,
                                  struct KmooProblem **out_problem);

/**
 * Creates the crossing-pedestrian surrogate, variant 1 (ego position ×
 * velocity) or 2 (pedestrian velocity × trigger delay × trigger position),
 * with its published default constants.
 */
enum KmooStatus kmoo_problem_scenario(uint32_t variant, struct KmooProblem **out_problem);

/**
 * Releases a problem handle. NULL is ignored.
 */
void kmoo_problem_free(struct KmooProblem *problem);

/**
 * Runs the full budgeted NSGA-II search: `total_budget` evaluations split
 * into generations of `population_size` individuals at the strategy's
 * per-individual cost. Same arguments and seed ⇒ bit-identical results.
 */
enum KmooStatus kmoo_run(const struct KmooProblem *problem,
                         const struct KmooStrategy *strategy,
                         uintptr_t population_size,
                         uint64_t total_budget,
                         uint64_t seed,
                         struct KmooRun **out_run);

/**
 * Releases a run handle. NULL is ignored.
 */
void kmoo_run_free(struct KmooRun *run);

/**
 * Number of solutions on the run's predicted front (0 for NULL).
 */
uintptr_t kmoo_run_front_size(const struct KmooRun *run);

/**
 * Decision-space dimensionality of the run's solutions (0 for NULL).
 */
uintptr_t kmoo_run_dimension_count(const struct KmooRun *run);

/**
 * Objective count of the run's fitness vectors (0 for NULL).
 */
uintptr_t kmoo_run_objective_count(const struct KmooRun *run);

/**
 * Generations the run executed, the initial population included (0 for
 * NULL).
 */
uint64_t kmoo_run_generations(const struct KmooRun *run);

/**
 * Evaluation budget the run consumed (0 for NULL).
 */
uint64_t kmoo_run_consumed_budget(const struct KmooRun *run);

/**
 * Number of archived evaluations the run accumulated (0 for NULL).
 */
uintptr_t kmoo_run_archive_size(const struct KmooRun *run);

/**
 * Copies the predicted front's fitness values into `out_values`, row-major
 * `front_size × objective_count`. `capacity` is the buffer length in
 * doubles.
 */
enum KmooStatus kmoo_run_front_objectives(const struct KmooRun *run,
                                          double *out_values,
                                          uintptr_t capacity);

/**
 * Copies the predicted front's decision vectors into `out_values`,
 * row-major `front_size × dimension_count`. `capacity` is the buffer
 * length in doubles.
 */
enum KmooStatus kmoo_run_front_solutions(const struct KmooRun *run,
                                         double *out_values,
                                         uintptr_t capacity);

/**
 * Re-evaluates the run's predicted front `effective_reps` times per
 * solution (seeded, not budget-counted) and reports predicted hypervolume,
 * effective hypervolume, and the mean predicted↔effective objective
 * distance. The problem's default reference point is used.
 */
enum KmooStatus kmoo_assess(const struct KmooRun *run,
                            const struct KmooProblem *problem,
                            uint32_t effective_reps,
                            uint64_t seed,
                            double *out_hv_pred,
                            double *out_hv_eff,
                            double *out_delta_f);

/**
 * Runs a whole experiment campaign from a TOML config file, writing the
 * manifest, per-run results, and front dumps to the output directory
 * (`output_dir` overrides the config's when non-NULL). `jobs` caps
 * parallel runs; 0 means all cores. `out_failed_runs` (optional) receives
 * the number of failed runs; failures are recorded in the manifest and do
 * not make the call fail.
 */
enum KmooStatus kmoo_run_experiment(const char *config_path,
                                    const char *output_dir,
                                    uintptr_t jobs,
                                    uint32_t *out_failed_runs);

/**
 * Writes `verdicts.csv` and `verdicts.txt` (pairwise significance table)
 * for a finished experiment directory.
 */
enum KmooStatus kmoo_emit_verdict_table(const char *experiment_dir);

/**
 * Writes the long-format metric CSVs (`hv_pred.csv`, `hv_eff.csv`,
 * `delta_f.csv`) for a finished experiment directory.
 */
enum KmooStatus kmoo_emit_plot_data(const char *experiment_dir);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* KNN_MOO_H */
