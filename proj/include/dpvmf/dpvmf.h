/* C interface to the dpvmf clustering library.
 *
 * All entry points return a status code (DPVMF_OK on success); on failure
 * dpvmf_last_error() describes what went wrong for the calling thread.
 * Objects are opaque handles released with the matching *_free function.
 * Arrays returned by getters stay owned by their handle and remain valid
 * until it is freed.
 */
#ifndef DPVMF_H
#define DPVMF_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

enum {
  DPVMF_OK = 0,
  DPVMF_ERR_USAGE = 2,          /* invalid arguments or configuration */
  DPVMF_ERR_DATA = 3,           /* file, parse, or data-validity errors */
  DPVMF_ERR_NONCONVERGENCE = 4, /* iteration cap hit with a report */
  DPVMF_ERR_INTERNAL = 5
};

const char* dpvmf_last_error(void);

double dpvmf_lambda_from_phi_deg(double phi_deg);

/* ---- batches of unit vectors ---- */

typedef struct dpvmf_batch dpvmf_batch;

int dpvmf_batch_create(const double* data, size_t n, size_t dim,
                       int auto_normalize, dpvmf_batch** out);
int dpvmf_batch_read(const char* path, int auto_normalize, dpvmf_batch** out);
int dpvmf_batch_write(const dpvmf_batch* b, const char* path, int binary);
size_t dpvmf_batch_size(const dpvmf_batch* b);
size_t dpvmf_batch_dim(const dpvmf_batch* b);
const double* dpvmf_batch_data(const dpvmf_batch* b);
void dpvmf_batch_free(dpvmf_batch* b);

/* ---- batch fits (DP-vMF-means and spherical k-means) ---- */

typedef struct {
  double lambda; /* in [-2, 0]; cos(phi_lambda) - 1 */
  int max_iterations;
  uint64_t seed;
  int workers; /* 0 = hardware default */
} dpvmf_dp_config;
void dpvmf_dp_config_init(dpvmf_dp_config* cfg);

typedef struct {
  int k;
  int max_iterations;
  int restarts;
  uint64_t seed;
  int workers;
} dpvmf_spkm_config;
void dpvmf_spkm_config_init(dpvmf_spkm_config* cfg);

typedef struct dpvmf_fit dpvmf_fit;

int dpvmf_dp_fit(const dpvmf_batch* b, const dpvmf_dp_config* cfg,
                 dpvmf_fit** out);
int dpvmf_spkm_fit(const dpvmf_batch* b, const dpvmf_spkm_config* cfg,
                   dpvmf_fit** out);

size_t dpvmf_fit_k(const dpvmf_fit* f);
double dpvmf_fit_objective(const dpvmf_fit* f);
int dpvmf_fit_iterations(const dpvmf_fit* f);
int dpvmf_fit_restarts(const dpvmf_fit* f);
int dpvmf_fit_converged(const dpvmf_fit* f);
const int* dpvmf_fit_labels(const dpvmf_fit* f);       /* n entries */
const double* dpvmf_fit_means(const dpvmf_fit* f);     /* k * dim entries */
const long* dpvmf_fit_counts(const dpvmf_fit* f);      /* k entries */
void dpvmf_fit_free(dpvmf_fit* f);

/* ---- streaming DDP-vMF-means ---- */

typedef struct {
  double lambda;
  double beta; /* random-walk stiffness */
  double q;    /* survival exponent, <= 0 */
  int max_iterations;
  uint64_t seed;
  int workers;
} dpvmf_ddp_config;
/* defaults: phi_lambda = 100 deg, beta = 1e5, q = lambda / 400 */
void dpvmf_ddp_config_init(dpvmf_ddp_config* cfg);

typedef struct dpvmf_stream dpvmf_stream;
typedef struct dpvmf_frame dpvmf_frame;

int dpvmf_stream_create(const dpvmf_ddp_config* cfg, size_t dim,
                        dpvmf_stream** out);
int dpvmf_stream_step(dpvmf_stream* s, const dpvmf_batch* b, dpvmf_frame** out);
void dpvmf_stream_free(dpvmf_stream* s);

size_t dpvmf_frame_size(const dpvmf_frame* f);
const long* dpvmf_frame_labels(const dpvmf_frame* f); /* stable cluster ids */
size_t dpvmf_frame_k(const dpvmf_frame* f);
const long* dpvmf_frame_cluster_ids(const dpvmf_frame* f);
const double* dpvmf_frame_fractions(const dpvmf_frame* f);
const double* dpvmf_frame_means(const dpvmf_frame* f);
const double* dpvmf_frame_weights(const dpvmf_frame* f);
const long* dpvmf_frame_counts(const dpvmf_frame* f);
size_t dpvmf_frame_born(const dpvmf_frame* f, const long** ids);
size_t dpvmf_frame_revived(const dpvmf_frame* f, const long** ids);
size_t dpvmf_frame_removed(const dpvmf_frame* f, const long** ids);
int dpvmf_frame_iterations(const dpvmf_frame* f);
int dpvmf_frame_restarts(const dpvmf_frame* f);
int dpvmf_frame_converged(const dpvmf_frame* f);
void dpvmf_frame_free(dpvmf_frame* f);

/* ---- synthetic benchmarks ---- */

typedef struct {
  int k_t;
  size_t n;
  double tau;
  size_t dim;
  double min_separation_rad;
  uint64_t seed;
} dpvmf_synth_config;
void dpvmf_synth_config_init(dpvmf_synth_config* cfg);

/* labels gets n ints (caller frees with dpvmf_labels_free); means is a
 * k_t-row batch. Any output pointer may be NULL to skip it. */
int dpvmf_synth_generate(const dpvmf_synth_config* cfg, dpvmf_batch** points,
                         int** labels, dpvmf_batch** means);
void dpvmf_labels_free(int* labels);
void dpvmf_ids_free(long* ids);

typedef struct dpvmf_scenario dpvmf_scenario;

int dpvmf_scenario_read(const char* path, dpvmf_scenario** out);
size_t dpvmf_scenario_frame_count(const dpvmf_scenario* sc);
/* true_ids gets one global cluster id per point (free with dpvmf_ids_free) */
int dpvmf_scenario_frame(const dpvmf_scenario* sc, size_t index,
                         dpvmf_batch** points, long** true_ids);
void dpvmf_scenario_free(dpvmf_scenario* sc);

/* ---- clustering-quality metrics ---- */

int dpvmf_nmi(const int* a, const int* b, size_t n, double* out);
int dpvmf_silhouette(const dpvmf_batch* b, const int* labels, size_t max_sample,
                     uint64_t seed, double* out);

#ifdef __cplusplus
}
#endif

#endif /* DPVMF_H */
