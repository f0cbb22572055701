#include "dpvmf/dpvmf.h"

#include <cmath>
#include <cstring>
#include <memory>
#include <string>

#include "dpvmf/common.hpp"
#include "dpvmf/ddp.hpp"
#include "dpvmf/dp.hpp"
#include "dpvmf/io.hpp"
#include "dpvmf/metrics.hpp"
#include "dpvmf/spkm.hpp"
#include "dpvmf/synth.hpp"

namespace {

thread_local std::string g_last_error;

int code_for(dpvmf::ErrorCode code) {
  using dpvmf::ErrorCode;
  switch (code) {
    case ErrorCode::InvalidArgument:
      return DPVMF_ERR_USAGE;
    case ErrorCode::NonConvergence:
      return DPVMF_ERR_NONCONVERGENCE;
    case ErrorCode::ParseError:
    case ErrorCode::NormViolation:
    case ErrorCode::DegenerateVector:
    case ErrorCode::DimensionMismatch:
    case ErrorCode::LengthMismatch:
    case ErrorCode::SingleCluster:
    case ErrorCode::SeparationInfeasible:
      return DPVMF_ERR_DATA;
    default:
      return DPVMF_ERR_INTERNAL;
  }
}

template <typename Fn>
int guarded(Fn&& fn) {
  try {
    fn();
    return DPVMF_OK;
  } catch (const dpvmf::Error& e) {
    g_last_error = e.what();
    return code_for(e.code());
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return DPVMF_ERR_INTERNAL;
  }
}

int usage_error(const char* what) {
  g_last_error = what;
  return DPVMF_ERR_USAGE;
}

}  // namespace

struct dpvmf_batch {
  dpvmf::Batch impl;
};

struct dpvmf_fit {
  dpvmf::FitResult impl;
};

struct dpvmf_stream {
  dpvmf::DdpStream impl;
};

struct dpvmf_frame {
  dpvmf::FrameResult impl;
};

struct dpvmf_scenario {
  std::vector<dpvmf::FrameData> frames;
};

extern "C" {

const char* dpvmf_last_error(void) { return g_last_error.c_str(); }

double dpvmf_lambda_from_phi_deg(double phi_deg) {
  return std::cos(phi_deg * dpvmf::kPi / 180.0) - 1.0;
}

int dpvmf_batch_create(const double* data, size_t n, size_t dim,
                       int auto_normalize, dpvmf_batch** out) {
  if (!data || !out || n == 0 || dim < 2)
    return usage_error("batch_create needs data, n >= 1, dim >= 2");
  return guarded([&] {
    auto b = std::make_unique<dpvmf_batch>();
    b->impl.dim = dim;
    b->impl.data.assign(data, data + n * dim);
    for (size_t i = 0; i < n; ++i) {
      double* r = b->impl.row(i);
      double norm = dpvmf::norm2(r, dim);
      if (auto_normalize) {
        if (norm <= dpvmf::kNormEps)
          dpvmf::fail(dpvmf::ErrorCode::DegenerateVector,
                      "near-zero row " + std::to_string(i + 1));
        for (size_t j = 0; j < dim; ++j) r[j] /= norm;
      } else if (std::abs(norm - 1.0) > 1e-6) {
        dpvmf::fail(dpvmf::ErrorCode::NormViolation,
                    "row " + std::to_string(i + 1) + " is not unit-norm");
      }
    }
    *out = b.release();
  });
}

int dpvmf_batch_read(const char* path, int auto_normalize, dpvmf_batch** out) {
  if (!path || !out) return usage_error("batch_read needs a path and out");
  return guarded([&] {
    auto b = std::make_unique<dpvmf_batch>();
    b->impl = dpvmf::read_points(path, auto_normalize != 0);
    *out = b.release();
  });
}

int dpvmf_batch_write(const dpvmf_batch* b, const char* path, int binary) {
  if (!b || !path) return usage_error("batch_write needs a batch and path");
  return guarded([&] {
    if (binary)
      dpvmf::write_points_binary(path, b->impl);
    else
      dpvmf::write_points_text(path, b->impl);
  });
}

size_t dpvmf_batch_size(const dpvmf_batch* b) { return b ? b->impl.size() : 0; }
size_t dpvmf_batch_dim(const dpvmf_batch* b) { return b ? b->impl.dim : 0; }
const double* dpvmf_batch_data(const dpvmf_batch* b) {
  return b ? b->impl.data.data() : nullptr;
}
void dpvmf_batch_free(dpvmf_batch* b) { delete b; }

void dpvmf_dp_config_init(dpvmf_dp_config* cfg) {
  dpvmf::DpConfig d;
  cfg->lambda = d.lambda;
  cfg->max_iterations = d.max_iterations;
  cfg->seed = d.seed;
  cfg->workers = d.workers;
}

void dpvmf_spkm_config_init(dpvmf_spkm_config* cfg) {
  dpvmf::SpkmConfig d;
  cfg->k = d.k;
  cfg->max_iterations = d.max_iterations;
  cfg->restarts = d.restarts;
  cfg->seed = d.seed;
  cfg->workers = d.workers;
}

void dpvmf_ddp_config_init(dpvmf_ddp_config* cfg) {
  dpvmf::DdpConfig d;
  cfg->lambda = d.lambda;
  cfg->beta = d.beta;
  cfg->q = d.q;
  cfg->max_iterations = d.max_iterations;
  cfg->seed = d.seed;
  cfg->workers = d.workers;
}

int dpvmf_dp_fit(const dpvmf_batch* b, const dpvmf_dp_config* cfg,
                 dpvmf_fit** out) {
  if (!b || !cfg || !out) return usage_error("dp_fit needs a batch, config, out");
  return guarded([&] {
    dpvmf::DpConfig c;
    c.lambda = cfg->lambda;
    c.max_iterations = cfg->max_iterations;
    c.seed = cfg->seed;
    c.workers = cfg->workers;
    auto f = std::make_unique<dpvmf_fit>();
    f->impl = dpvmf::fit(b->impl, c);
    *out = f.release();
  });
}

int dpvmf_spkm_fit(const dpvmf_batch* b, const dpvmf_spkm_config* cfg,
                   dpvmf_fit** out) {
  if (!b || !cfg || !out)
    return usage_error("spkm_fit needs a batch, config, out");
  return guarded([&] {
    dpvmf::SpkmConfig c;
    c.k = cfg->k;
    c.max_iterations = cfg->max_iterations;
    c.restarts = cfg->restarts;
    c.seed = cfg->seed;
    c.workers = cfg->workers;
    auto f = std::make_unique<dpvmf_fit>();
    f->impl = dpvmf::spkm_fit(b->impl, c);
    *out = f.release();
  });
}

size_t dpvmf_fit_k(const dpvmf_fit* f) { return f->impl.k; }
double dpvmf_fit_objective(const dpvmf_fit* f) { return f->impl.objective; }
int dpvmf_fit_iterations(const dpvmf_fit* f) { return f->impl.iterations; }
int dpvmf_fit_restarts(const dpvmf_fit* f) { return f->impl.restarts; }
int dpvmf_fit_converged(const dpvmf_fit* f) { return f->impl.converged ? 1 : 0; }
const int* dpvmf_fit_labels(const dpvmf_fit* f) { return f->impl.labels.data(); }
const double* dpvmf_fit_means(const dpvmf_fit* f) { return f->impl.means.data(); }
const long* dpvmf_fit_counts(const dpvmf_fit* f) { return f->impl.counts.data(); }
void dpvmf_fit_free(dpvmf_fit* f) { delete f; }

int dpvmf_stream_create(const dpvmf_ddp_config* cfg, size_t dim,
                        dpvmf_stream** out) {
  if (!cfg || !out || dim < 2)
    return usage_error("stream_create needs a config, dim >= 2, out");
  return guarded([&] {
    dpvmf::DdpConfig c;
    c.lambda = cfg->lambda;
    c.beta = cfg->beta;
    c.q = cfg->q;
    c.max_iterations = cfg->max_iterations;
    c.seed = cfg->seed;
    c.workers = cfg->workers;
    *out = new dpvmf_stream{dpvmf::DdpStream(c, dim)};
  });
}

int dpvmf_stream_step(dpvmf_stream* s, const dpvmf_batch* b, dpvmf_frame** out) {
  if (!s || !b || !out)
    return usage_error("stream_step needs a stream, batch, out");
  return guarded([&] {
    auto f = std::make_unique<dpvmf_frame>();
    f->impl = s->impl.step(b->impl);
    *out = f.release();
  });
}

void dpvmf_stream_free(dpvmf_stream* s) { delete s; }

size_t dpvmf_frame_size(const dpvmf_frame* f) { return f->impl.labels.size(); }
const long* dpvmf_frame_labels(const dpvmf_frame* f) {
  return f->impl.labels.data();
}
size_t dpvmf_frame_k(const dpvmf_frame* f) { return f->impl.cluster_ids.size(); }
const long* dpvmf_frame_cluster_ids(const dpvmf_frame* f) {
  return f->impl.cluster_ids.data();
}
const double* dpvmf_frame_fractions(const dpvmf_frame* f) {
  return f->impl.fractions.data();
}
const double* dpvmf_frame_means(const dpvmf_frame* f) {
  return f->impl.means.data();
}
const double* dpvmf_frame_weights(const dpvmf_frame* f) {
  return f->impl.weights.data();
}
const long* dpvmf_frame_counts(const dpvmf_frame* f) {
  return f->impl.counts.data();
}
size_t dpvmf_frame_born(const dpvmf_frame* f, const long** ids) {
  if (ids) *ids = f->impl.born_ids.data();
  return f->impl.born_ids.size();
}
size_t dpvmf_frame_revived(const dpvmf_frame* f, const long** ids) {
  if (ids) *ids = f->impl.revived_ids.data();
  return f->impl.revived_ids.size();
}
size_t dpvmf_frame_removed(const dpvmf_frame* f, const long** ids) {
  if (ids) *ids = f->impl.removed_ids.data();
  return f->impl.removed_ids.size();
}
int dpvmf_frame_iterations(const dpvmf_frame* f) { return f->impl.iterations; }
int dpvmf_frame_restarts(const dpvmf_frame* f) { return f->impl.restarts; }
int dpvmf_frame_converged(const dpvmf_frame* f) {
  return f->impl.converged ? 1 : 0;
}
void dpvmf_frame_free(dpvmf_frame* f) { delete f; }

void dpvmf_synth_config_init(dpvmf_synth_config* cfg) {
  dpvmf::SynthSpec d;
  cfg->k_t = d.k_t;
  cfg->n = d.n;
  cfg->tau = d.tau;
  cfg->dim = d.dim;
  cfg->min_separation_rad = d.min_separation;
  cfg->seed = d.seed;
}

int dpvmf_synth_generate(const dpvmf_synth_config* cfg, dpvmf_batch** points,
                         int** labels, dpvmf_batch** means) {
  if (!cfg) return usage_error("synth_generate needs a config");
  return guarded([&] {
    dpvmf::SynthSpec spec;
    spec.k_t = cfg->k_t;
    spec.n = cfg->n;
    spec.tau = cfg->tau;
    spec.dim = cfg->dim;
    spec.min_separation = cfg->min_separation_rad;
    spec.seed = cfg->seed;
    auto data = dpvmf::generate(spec);
    if (points) *points = new dpvmf_batch{std::move(data.points)};
    if (labels) {
      *labels = new int[data.labels.size()];
      std::memcpy(*labels, data.labels.data(), data.labels.size() * sizeof(int));
    }
    if (means) {
      auto m = std::make_unique<dpvmf_batch>();
      m->impl.dim = spec.dim;
      m->impl.data = std::move(data.means);
      *means = m.release();
    }
  });
}

void dpvmf_labels_free(int* labels) { delete[] labels; }
void dpvmf_ids_free(long* ids) { delete[] ids; }

int dpvmf_scenario_read(const char* path, dpvmf_scenario** out) {
  if (!path || !out) return usage_error("scenario_read needs a path and out");
  return guarded([&] {
    auto sc = dpvmf::read_scenario(path);
    *out = new dpvmf_scenario{dpvmf::generate_stream(sc)};
  });
}

size_t dpvmf_scenario_frame_count(const dpvmf_scenario* sc) {
  return sc ? sc->frames.size() : 0;
}

int dpvmf_scenario_frame(const dpvmf_scenario* sc, size_t index,
                         dpvmf_batch** points, long** true_ids) {
  if (!sc || index >= sc->frames.size())
    return usage_error("scenario_frame index out of range");
  return guarded([&] {
    const auto& f = sc->frames[index];
    if (points) *points = new dpvmf_batch{f.points};
    if (true_ids) {
      *true_ids = new long[f.true_ids.size()];
      std::memcpy(*true_ids, f.true_ids.data(),
                  f.true_ids.size() * sizeof(long));
    }
  });
}

void dpvmf_scenario_free(dpvmf_scenario* sc) { delete sc; }

int dpvmf_nmi(const int* a, const int* b, size_t n, double* out) {
  if (!a || !b || !out || n == 0)
    return usage_error("nmi needs two labelings and out");
  return guarded([&] {
    std::vector<int> va(a, a + n), vb(b, b + n);
    *out = dpvmf::nmi(va, vb);
  });
}

int dpvmf_silhouette(const dpvmf_batch* b, const int* labels, size_t max_sample,
                     uint64_t seed, double* out) {
  if (!b || !labels || !out)
    return usage_error("silhouette needs a batch, labels, out");
  return guarded([&] {
    std::vector<int> vl(labels, labels + b->impl.size());
    *out = dpvmf::silhouette_cosine(b->impl, vl,
                                    max_sample ? max_sample : b->impl.size(),
                                    seed);
  });
}

}  // extern "C"
