#ifndef NEURODAVIS_H
#define NEURODAVIS_H

#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>

// Result of every fallible call.
typedef enum NdStatus {
  ND_STATUS_OK = 0,
  // A required pointer was null, a string was not UTF-8, or a buffer was
  // too small.
  ND_STATUS_INVALID_ARGUMENT = 1,
  ND_STATUS_INVALID_INPUT = 2,
  ND_STATUS_INVALID_CONFIG = 3,
  ND_STATUS_DEGENERATE = 4,
  // An iterative routine failed to converge.
  ND_STATUS_NUMERIC = 5,
  // Training produced a non-finite loss.
  ND_STATUS_DIVERGED = 6,
  ND_STATUS_PARSE = 7,
  ND_STATUS_IO = 8,
  ND_STATUS_PANIC = 9,
} NdStatus;

// Opaque dataset handle.
typedef struct NdDataset NdDataset;

// Opaque trained-model handle.
typedef struct NdModel NdModel;

// Training configuration. Obtain defaults from `nd_config_default`.
typedef struct NdConfig {
  size_t latent_dim;
  // Hidden layer widths; ignored when `use_default_hidden` is true.
  const size_t *hidden_widths;
  size_t hidden_count;
  bool use_default_hidden;
  double alpha;
  double beta;
  double learning_rate;
  size_t epochs;
  // 0 selects min(n, 64).
  size_t batch_size;
  uint64_t seed;
  bool early_stop;
  size_t window;
  double rel_tol;
} NdConfig;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message for the last failed call on this thread, or null when the last
// call succeeded. Valid until the next call on the same thread.
const char *nd_last_error_message(void);

// Library version as a static NUL-terminated string.
const char *nd_version(void);

struct NdConfig nd_config_default(void);

// Builds a dataset from a row-major `rows × cols` buffer. `labels` may be
// null; otherwise it holds `rows` class ids.
//
// # Safety
// `data` must point to `rows * cols` doubles, `labels` (when non-null) to
// `rows` values, and `out` must be writable.
enum NdStatus nd_dataset_from_rows(const double *data,
                                   size_t rows,
                                   size_t cols,
                                   const size_t *labels,
                                   struct NdDataset **out);

// Generates a synthetic benchmark ("elliptic_ring", "olympic", "spiral",
// "shape" or "world_map").
//
// # Safety
// `kind` must be a NUL-terminated string and `out` writable.
enum NdStatus nd_dataset_generate(const char *kind, uint64_t seed, struct NdDataset **out);

// Reads a CSV. `label_column` is a header name or zero-based index, or null
// for unlabeled data.
//
// # Safety
// String arguments must be NUL-terminated (or null where allowed) and `out`
// writable.
enum NdStatus nd_dataset_load_csv(const char *path,
                                  const char *label_column,
                                  bool has_header,
                                  struct NdDataset **out);

// # Safety
// `ds` must be null or a live handle.
size_t nd_dataset_rows(const struct NdDataset *ds);

// # Safety
// `ds` must be null or a live handle.
size_t nd_dataset_cols(const struct NdDataset *ds);

// Copies the row-major data into `buf`, which holds `len` doubles.
//
// # Safety
// `ds` must be a live handle and `buf` writable for `len` doubles.
enum NdStatus nd_dataset_copy_data(const struct NdDataset *ds, double *buf, size_t len);

// Copies class ids into `buf` (`len` values). Fails with InvalidInput when
// the dataset is unlabeled.
//
// # Safety
// `ds` must be a live handle and `buf` writable for `len` values.
enum NdStatus nd_dataset_copy_labels(const struct NdDataset *ds, size_t *buf, size_t len);

// # Safety
// `ds` must be null or a handle not yet freed.
void nd_dataset_free(struct NdDataset *ds);

// Trains a model on `ds`.
//
// # Safety
// `ds` and `config` must be valid and `out` writable.
enum NdStatus nd_model_fit(const struct NdDataset *ds,
                           const struct NdConfig *config,
                           struct NdModel **out);

// # Safety
// `m` must be null or a live handle.
size_t nd_model_n_samples(const struct NdModel *m);

// # Safety
// `m` must be null or a live handle.
size_t nd_model_latent_dim(const struct NdModel *m);

// Writes the row-major `n × k` embedding into `buf` (`len` doubles).
//
// # Safety
// `m` must be a live handle and `buf` writable for `len` doubles.
enum NdStatus nd_model_embedding(const struct NdModel *m, double *buf, size_t len);

// # Safety
// `m` must be a live handle and `path` NUL-terminated.
enum NdStatus nd_model_save(const struct NdModel *m, const char *path);

// # Safety
// `path` must be NUL-terminated and `out` writable.
enum NdStatus nd_model_load(const char *path, struct NdModel **out);

// # Safety
// `m` must be null or a handle not yet freed.
void nd_model_free(struct NdModel *m);

// Spearman correlation between pairwise distances of the dataset and of the
// row-major `n × k` embedding in `low`. `pair_budget` 0 uses every pair.
//
// # Safety
// `ds` must be live, `low` must hold `n * k` doubles with `n` the dataset's
// row count, and `out` must be writable.
enum NdStatus nd_distance_preservation(const struct NdDataset *ds,
                                       const double *low,
                                       size_t k,
                                       size_t pair_budget,
                                       uint64_t seed,
                                       double *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* NEURODAVIS_H */
