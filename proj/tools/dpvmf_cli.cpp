// dpvmf command-line front end. Links only the public C API.

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "dpvmf/dpvmf.h"

namespace {

namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

struct CliError {
  int exit_code;
  std::string message;
};

[[noreturn]] void die(int exit_code, const std::string& message) {
  throw CliError{exit_code, message};
}

int exit_code_for(int api_status) {
  switch (api_status) {
    case DPVMF_ERR_USAGE:
      return 2;
    case DPVMF_ERR_DATA:
      return 3;
    case DPVMF_ERR_NONCONVERGENCE:
      return 4;
    default:
      return 1;
  }
}

void check(int api_status) {
  if (api_status != DPVMF_OK)
    die(exit_code_for(api_status), dpvmf_last_error());
}

double elapsed_ms(Clock::time_point from) {
  return std::chrono::duration<double, std::milli>(Clock::now() - from).count();
}

std::string fmt(double v) {
  char buf[40];
  auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
  (void)ec;
  return std::string(buf, p);
}

std::string fmt_fixed(double v, int digits) {
  std::ostringstream os;
  os.setf(std::ios::fixed);
  os.precision(digits);
  os << v;
  return os.str();
}

std::ofstream open_out(const fs::path& path) {
  std::ofstream out(path);
  if (!out) die(3, path.string() + ": cannot open for writing");
  return out;
}

fs::path prepare_out_dir(const std::string& out_dir) {
  fs::path p(out_dir);
  std::error_code ec;
  fs::create_directories(p, ec);
  if (ec) die(3, out_dir + ": " + ec.message());
  return p;
}

std::vector<int> read_label_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) die(3, path + ": cannot open");
  std::vector<int> out;
  std::string line;
  std::size_t row = 0;
  while (std::getline(in, line)) {
    ++row;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    long v;
    while (ls >> v) out.push_back(static_cast<int>(v));
    if (!ls.eof())
      die(3, path + ":" + std::to_string(row) + ": non-integer label");
  }
  if (out.empty()) die(3, path + ": no labels");
  return out;
}

template <typename T>
void write_label_file(const fs::path& path, const T* labels, std::size_t n) {
  auto out = open_out(path);
  for (std::size_t i = 0; i < n; ++i) out << labels[i] << '\n';
}

using Summary = std::vector<std::pair<std::string, std::string>>;

void write_summary_file(const fs::path& path, const Summary& summary) {
  auto out = open_out(path);
  for (const auto& [k, v] : summary) out << k << ": " << v << '\n';
}

// RAII wrappers over the C handles.
struct BatchHandle {
  dpvmf_batch* p = nullptr;
  ~BatchHandle() { dpvmf_batch_free(p); }
};
struct FitHandle {
  dpvmf_fit* p = nullptr;
  ~FitHandle() { dpvmf_fit_free(p); }
};
struct StreamHandle {
  dpvmf_stream* p = nullptr;
  ~StreamHandle() { dpvmf_stream_free(p); }
};
struct FrameHandle {
  dpvmf_frame* p = nullptr;
  ~FrameHandle() { dpvmf_frame_free(p); }
};
struct ScenarioHandle {
  dpvmf_scenario* p = nullptr;
  ~ScenarioHandle() { dpvmf_scenario_free(p); }
};
struct LabelsHandle {
  int* p = nullptr;
  ~LabelsHandle() { dpvmf_labels_free(p); }
};
struct IdsHandle {
  long* p = nullptr;
  ~IdsHandle() { dpvmf_ids_free(p); }
};

// ---- shared flag bundles ----

struct ConeFlags {
  double phi_deg = -1.0;
  double lambda = 2.0;  // sentinel: valid values are in [-2, 0]
  bool phi_set = false;
  bool lambda_set = false;

  void add(CLI::App* cmd) {
    cmd->add_option("--phi-lambda", phi_deg,
                    "cluster cone half-angle phi_lambda in degrees")
        ->envname("DPVMF_PHI_LAMBDA");
    cmd->add_option("--lambda", lambda, "raw lambda in [-2, 0]")
        ->envname("DPVMF_LAMBDA");
  }

  double resolve(CLI::App* cmd, double default_phi_deg) {
    phi_set = cmd->count("--phi-lambda") > 0;
    lambda_set = cmd->count("--lambda") > 0;
    if (phi_set && lambda_set)
      die(2, "--phi-lambda and --lambda are mutually exclusive");
    if (lambda_set) return lambda;
    return dpvmf_lambda_from_phi_deg(phi_set ? phi_deg : default_phi_deg);
  }
};

struct CommonFlags {
  int max_iters = 100;
  std::uint64_t seed = 0;
  int threads = 0;
  bool auto_normalize = false;
  std::string out_dir = ".";

  void add(CLI::App* cmd, bool with_input_flags = true) {
    cmd->add_option("--max-iters", max_iters, "iteration cap")
        ->envname("DPVMF_MAX_ITERS");
    cmd->add_option("--seed", seed, "random seed")->envname("DPVMF_SEED");
    cmd->add_option("--threads", threads, "worker threads (0 = hardware)")
        ->envname("DPVMF_THREADS");
    if (with_input_flags)
      cmd->add_flag("--auto-normalize", auto_normalize,
                    "normalize input rows instead of requiring unit norm")
          ->envname("DPVMF_AUTO_NORMALIZE");
    cmd->add_option("--out-dir", out_dir, "output directory")
        ->envname("DPVMF_OUT_DIR");
  }
};

void write_cluster_table(const fs::path& path, std::size_t k, std::size_t dim,
                         const double* means, const long* counts) {
  auto out = open_out(path);
  out << "# id";
  for (std::size_t j = 0; j < dim; ++j) out << " mean" << j;
  out << " size\n";
  for (std::size_t c = 0; c < k; ++c) {
    out << c;
    for (std::size_t j = 0; j < dim; ++j) out << ' ' << fmt(means[c * dim + j]);
    out << ' ' << counts[c] << '\n';
  }
}

int emit_fit_outputs(const dpvmf_fit* fit, const dpvmf_batch* batch,
                     const fs::path& dir, Summary summary, double read_ms,
                     double fit_ms) {
  std::size_t n = dpvmf_batch_size(batch);
  std::size_t dim = dpvmf_batch_dim(batch);
  std::size_t k = dpvmf_fit_k(fit);

  auto write_start = Clock::now();
  write_label_file(dir / "labels.txt", dpvmf_fit_labels(fit), n);
  write_cluster_table(dir / "clusters.txt", k, dim, dpvmf_fit_means(fit),
                      dpvmf_fit_counts(fit));

  summary.emplace_back("n", std::to_string(n));
  summary.emplace_back("dim", std::to_string(dim));
  summary.emplace_back("k", std::to_string(k));
  summary.emplace_back("objective", fmt(dpvmf_fit_objective(fit)));
  summary.emplace_back("iterations", std::to_string(dpvmf_fit_iterations(fit)));
  summary.emplace_back("restarts", std::to_string(dpvmf_fit_restarts(fit)));
  summary.emplace_back("converged",
                       dpvmf_fit_converged(fit) ? "true" : "false");
  summary.emplace_back("read_ms", fmt_fixed(read_ms, 3));
  summary.emplace_back("fit_ms", fmt_fixed(fit_ms, 3));
  summary.emplace_back("write_ms", fmt_fixed(elapsed_ms(write_start), 3));
  write_summary_file(dir / "summary.txt", summary);

  for (const auto& [key, value] : summary)
    std::cout << key << ": " << value << '\n';
  if (!dpvmf_fit_converged(fit)) {
    std::cerr << "warning: iteration cap reached before convergence; "
                 "best iterate written\n";
    return 4;
  }
  return 0;
}

// ---- subcommands ----

int run_dp_fit(const std::string& input, ConeFlags& cone, CommonFlags& common,
               CLI::App* cmd) {
  double lambda = cone.resolve(cmd, 60.0);
  auto dir = prepare_out_dir(common.out_dir);

  auto t0 = Clock::now();
  BatchHandle batch;
  check(dpvmf_batch_read(input.c_str(), common.auto_normalize, &batch.p));
  double read_ms = elapsed_ms(t0);

  dpvmf_dp_config cfg;
  dpvmf_dp_config_init(&cfg);
  cfg.lambda = lambda;
  cfg.max_iterations = common.max_iters;
  cfg.seed = common.seed;
  cfg.workers = common.threads;

  auto t1 = Clock::now();
  FitHandle fit;
  check(dpvmf_dp_fit(batch.p, &cfg, &fit.p));
  double fit_ms = elapsed_ms(t1);

  Summary summary{{"command", "dp-fit"},
                  {"input", input},
                  {"lambda", fmt(lambda)},
                  {"phi_lambda_deg",
                   fmt(std::acos(lambda + 1.0) * 180.0 / std::acos(-1.0))},
                  {"max_iters", std::to_string(common.max_iters)},
                  {"seed", std::to_string(common.seed)},
                  {"threads", std::to_string(common.threads)}};
  return emit_fit_outputs(fit.p, batch.p, dir, std::move(summary), read_ms,
                          fit_ms);
}

int run_spkm_fit(const std::string& input, int k, int restarts,
                 CommonFlags& common) {
  auto dir = prepare_out_dir(common.out_dir);

  auto t0 = Clock::now();
  BatchHandle batch;
  check(dpvmf_batch_read(input.c_str(), common.auto_normalize, &batch.p));
  double read_ms = elapsed_ms(t0);

  dpvmf_spkm_config cfg;
  dpvmf_spkm_config_init(&cfg);
  cfg.k = k;
  cfg.restarts = restarts;
  cfg.max_iterations = common.max_iters;
  cfg.seed = common.seed;
  cfg.workers = common.threads;

  auto t1 = Clock::now();
  FitHandle fit;
  check(dpvmf_spkm_fit(batch.p, &cfg, &fit.p));
  double fit_ms = elapsed_ms(t1);

  Summary summary{{"command", "spkm-fit"},
                  {"input", input},
                  {"k", std::to_string(k)},
                  {"spkm_restarts", std::to_string(restarts)},
                  {"max_iters", std::to_string(common.max_iters)},
                  {"seed", std::to_string(common.seed)},
                  {"threads", std::to_string(common.threads)}};
  return emit_fit_outputs(fit.p, batch.p, dir, std::move(summary), read_ms,
                          fit_ms);
}

std::vector<std::string> collect_frame_paths(
    const std::vector<std::string>& inputs, const std::string& manifest) {
  std::vector<std::string> paths;
  if (!manifest.empty()) {
    std::ifstream in(manifest);
    if (!in) die(3, manifest + ": cannot open");
    std::string line;
    while (std::getline(in, line)) {
      auto hash = line.find('#');
      if (hash != std::string::npos) line.erase(hash);
      std::istringstream ls(line);
      std::string p;
      if (ls >> p) paths.push_back(p);
    }
  }
  for (const auto& in : inputs) {
    if (fs::is_directory(in)) {
      std::vector<std::string> expanded;
      for (const auto& entry : fs::directory_iterator(in))
        if (entry.is_regular_file()) expanded.push_back(entry.path().string());
      std::sort(expanded.begin(), expanded.end());
      paths.insert(paths.end(), expanded.begin(), expanded.end());
    } else {
      paths.push_back(in);
    }
  }
  if (paths.empty()) die(2, "ddp-stream needs frame files or --manifest");
  return paths;
}

std::string frame_stem(std::size_t index) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "frame_%03zu", index);
  return buf;
}

int run_ddp_stream(const std::vector<std::string>& inputs,
                   const std::string& manifest, ConeFlags& cone, double beta,
                   double q, double q_frac, CommonFlags& common,
                   CLI::App* cmd) {
  double lambda = cone.resolve(cmd, 100.0);
  bool q_set = cmd->count("--q") > 0;
  bool frac_set = cmd->count("--q-frac") > 0;
  if (q_set && frac_set) die(2, "--q and --q-frac are mutually exclusive");
  double q_value = q_set ? q : lambda / (frac_set ? q_frac : 400.0);

  auto paths = collect_frame_paths(inputs, manifest);
  auto dir = prepare_out_dir(common.out_dir);

  dpvmf_ddp_config cfg;
  dpvmf_ddp_config_init(&cfg);
  cfg.lambda = lambda;
  cfg.beta = beta;
  cfg.q = q_value;
  cfg.max_iterations = common.max_iters;
  cfg.seed = common.seed;
  cfg.workers = common.threads;

  auto ledger = open_out(dir / "ledger.txt");
  ledger << "# frame path k born revived removed iterations restarts frame_ms\n";

  StreamHandle stream;
  bool any_nonconverged = false;
  double total_ms = 0.0;
  std::size_t final_k = 0;

  for (std::size_t f = 0; f < paths.size(); ++f) {
    BatchHandle batch;
    int rc = dpvmf_batch_read(paths[f].c_str(), common.auto_normalize, &batch.p);
    if (rc != DPVMF_OK)
      die(exit_code_for(rc),
          "frame " + std::to_string(f) + ": " + dpvmf_last_error());
    if (!stream.p)
      check(dpvmf_stream_create(&cfg, dpvmf_batch_dim(batch.p), &stream.p));

    auto t0 = Clock::now();
    FrameHandle frame;
    rc = dpvmf_stream_step(stream.p, batch.p, &frame.p);
    if (rc != DPVMF_OK)
      die(exit_code_for(rc),
          "frame " + std::to_string(f) + ": " + dpvmf_last_error());
    double frame_ms = elapsed_ms(t0);
    total_ms += frame_ms;

    std::size_t n = dpvmf_frame_size(frame.p);
    std::size_t k = dpvmf_frame_k(frame.p);
    final_k = k;
    std::size_t dim = dpvmf_batch_dim(batch.p);
    const auto stem = frame_stem(f);
    write_label_file(dir / (stem + "_labels.txt"),
                     dpvmf_frame_labels(frame.p), n);

    auto clusters = open_out(dir / (stem + "_clusters.txt"));
    clusters << "# id fraction weight";
    for (std::size_t j = 0; j < dim; ++j) clusters << " mean" << j;
    clusters << " size\n";
    const long* ids = dpvmf_frame_cluster_ids(frame.p);
    const double* fractions = dpvmf_frame_fractions(frame.p);
    const double* weights = dpvmf_frame_weights(frame.p);
    const double* means = dpvmf_frame_means(frame.p);
    const long* counts = dpvmf_frame_counts(frame.p);
    for (std::size_t c = 0; c < k; ++c) {
      clusters << ids[c] << ' ' << fmt(fractions[c]) << ' ' << fmt(weights[c]);
      for (std::size_t j = 0; j < dim; ++j)
        clusters << ' ' << fmt(means[c * dim + j]);
      clusters << ' ' << counts[c] << '\n';
    }

    auto id_list = [&](std::size_t count, const long* list) {
      std::string s;
      for (std::size_t i = 0; i < count; ++i) {
        if (i) s += ',';
        s += std::to_string(list[i]);
      }
      return s.empty() ? std::string("-") : s;
    };
    const long* born = nullptr;
    const long* revived = nullptr;
    const long* removed = nullptr;
    std::size_t nb = dpvmf_frame_born(frame.p, &born);
    std::size_t nv = dpvmf_frame_revived(frame.p, &revived);
    std::size_t nr = dpvmf_frame_removed(frame.p, &removed);
    ledger << f << ' ' << paths[f] << ' ' << k << ' ' << id_list(nb, born)
           << ' ' << id_list(nv, revived) << ' ' << id_list(nr, removed) << ' '
           << dpvmf_frame_iterations(frame.p) << ' '
           << dpvmf_frame_restarts(frame.p) << ' ' << fmt_fixed(frame_ms, 3)
           << '\n';
    if (!dpvmf_frame_converged(frame.p)) any_nonconverged = true;
  }

  Summary summary{{"command", "ddp-stream"},
                  {"frames", std::to_string(paths.size())},
                  {"lambda", fmt(lambda)},
                  {"beta", fmt(beta)},
                  {"q", fmt(q_value)},
                  {"max_iters", std::to_string(common.max_iters)},
                  {"seed", std::to_string(common.seed)},
                  {"threads", std::to_string(common.threads)},
                  {"final_k", std::to_string(final_k)},
                  {"total_ms", fmt_fixed(total_ms, 3)},
                  {"mean_frame_ms",
                   fmt_fixed(total_ms / static_cast<double>(paths.size()), 3)}};
  write_summary_file(dir / "summary.txt", summary);
  for (const auto& [key, value] : summary)
    std::cout << key << ": " << value << '\n';
  if (any_nonconverged) {
    std::cerr << "warning: at least one frame hit the iteration cap\n";
    return 4;
  }
  return 0;
}

int run_synth(const std::string& scenario_path, int k_t, std::size_t n,
              double tau, std::size_t dim, double min_sep_deg,
              const std::string& format, CommonFlags& common) {
  if (format != "text" && format != "bin")
    die(2, "--format must be text or bin");
  bool binary = format == "bin";
  auto dir = prepare_out_dir(common.out_dir);

  if (!scenario_path.empty()) {
    ScenarioHandle sc;
    check(dpvmf_scenario_read(scenario_path.c_str(), &sc.p));
    std::size_t frames = dpvmf_scenario_frame_count(sc.p);
    auto manifest = open_out(dir / "manifest.txt");
    for (std::size_t f = 0; f < frames; ++f) {
      BatchHandle points;
      IdsHandle ids;
      check(dpvmf_scenario_frame(sc.p, f, &points.p, &ids.p));
      const auto stem = frame_stem(f);
      const std::string points_name =
          stem + (binary ? "_points.bin" : "_points.txt");
      check(dpvmf_batch_write(points.p, (dir / points_name).string().c_str(),
                              binary));
      write_label_file(dir / (stem + "_true_ids.txt"), ids.p,
                       dpvmf_batch_size(points.p));
      manifest << (dir / points_name).string() << '\n';
    }
    std::cout << "frames: " << frames << '\n';
    std::cout << "manifest: " << (dir / "manifest.txt").string() << '\n';
    return 0;
  }

  dpvmf_synth_config cfg;
  dpvmf_synth_config_init(&cfg);
  cfg.k_t = k_t;
  cfg.n = n;
  cfg.tau = tau;
  cfg.dim = dim;
  cfg.min_separation_rad = min_sep_deg * std::acos(-1.0) / 180.0;
  cfg.seed = common.seed;

  BatchHandle points;
  BatchHandle means;
  LabelsHandle labels;
  check(dpvmf_synth_generate(&cfg, &points.p, &labels.p, &means.p));

  const std::string points_name = binary ? "points.bin" : "points.txt";
  check(dpvmf_batch_write(points.p, (dir / points_name).string().c_str(),
                          binary));
  write_label_file(dir / "true_labels.txt", labels.p, n);
  check(dpvmf_batch_write(means.p, (dir / "true_means.txt").string().c_str(),
                          0));

  Summary summary{{"command", "synth"},
                  {"k_t", std::to_string(k_t)},
                  {"n", std::to_string(n)},
                  {"tau", fmt(tau)},
                  {"dim", std::to_string(dim)},
                  {"min_sep_deg", fmt(min_sep_deg)},
                  {"seed", std::to_string(common.seed)},
                  {"points", (dir / points_name).string()}};
  write_summary_file(dir / "summary.txt", summary);
  for (const auto& [key, value] : summary)
    std::cout << key << ": " << value << '\n';
  return 0;
}

int run_eval(const std::string& points_path, const std::string& labels_path,
             const std::string& ref_path, int sweep, std::size_t max_sample,
             CommonFlags& common) {
  auto labels = read_label_file(labels_path);
  Summary summary{{"command", "eval"}, {"labels", labels_path}};

  if (!ref_path.empty()) {
    auto ref = read_label_file(ref_path);
    if (ref.size() != labels.size())
      die(3, "label files differ in length (" + std::to_string(labels.size()) +
                 " vs " + std::to_string(ref.size()) + ")");
    double value = 0.0;
    check(dpvmf_nmi(labels.data(), ref.data(), labels.size(), &value));
    summary.emplace_back("ref", ref_path);
    summary.emplace_back("nmi", fmt(value));
  }

  if (!points_path.empty()) {
    BatchHandle batch;
    check(dpvmf_batch_read(points_path.c_str(), common.auto_normalize,
                           &batch.p));
    if (dpvmf_batch_size(batch.p) != labels.size())
      die(3, "points/labels length mismatch");
    summary.emplace_back("points", points_path);
    if (sweep > 1) {
      std::vector<double> values(sweep);
      for (int r = 0; r < sweep; ++r)
        check(dpvmf_silhouette(batch.p, labels.data(), max_sample,
                               common.seed + static_cast<std::uint64_t>(r),
                               &values[r]));
      double mean = 0.0;
      for (double v : values) mean += v;
      mean /= sweep;
      double var = 0.0;
      for (double v : values) var += (v - mean) * (v - mean);
      double stddev = sweep > 1 ? std::sqrt(var / (sweep - 1)) : 0.0;
      summary.emplace_back("silhouette_runs", std::to_string(sweep));
      summary.emplace_back("silhouette_mean", fmt(mean));
      summary.emplace_back("silhouette_std", fmt(stddev));
    } else {
      double value = 0.0;
      check(dpvmf_silhouette(batch.p, labels.data(), max_sample, common.seed,
                             &value));
      summary.emplace_back("silhouette", fmt(value));
    }
  }

  if (summary.size() <= 2)
    die(2, "eval needs --ref for NMI and/or --points for silhouette");
  auto dir = prepare_out_dir(common.out_dir);
  write_summary_file(dir / "eval.txt", summary);
  for (const auto& [key, value] : summary)
    std::cout << key << ": " << value << '\n';
  return 0;
}

int run_bench(int seeds, double phi_min, double phi_max, double phi_step,
              int k_t, std::size_t n, double tau, double min_sep_deg,
              int spkm_restarts, CommonFlags& common) {
  if (seeds < 1 || phi_step <= 0.0 || phi_max < phi_min)
    die(2, "bench needs seeds >= 1 and a valid phi grid");
  auto dir = prepare_out_dir(common.out_dir);
  auto table = open_out(dir / "bench.txt");

  auto header =
      "# method phi_deg k_mean k_std nmi_mean nmi_std sil_mean sil_std";
  table << header << '\n';
  std::cout << header << '\n';

  struct Agg {
    std::vector<double> k, nmi, sil;
  };
  auto stats = [](const std::vector<double>& v) {
    double mean = 0.0;
    for (double x : v) mean += x;
    mean /= static_cast<double>(v.size());
    double var = 0.0;
    for (double x : v) var += (x - mean) * (x - mean);
    double stddev = v.size() > 1 ? std::sqrt(var / (v.size() - 1)) : 0.0;
    return std::pair<double, double>{mean, stddev};
  };
  auto emit = [&](const std::string& method, double phi, const Agg& agg) {
    auto [km, ks] = stats(agg.k);
    auto [nm, ns] = stats(agg.nmi);
    auto [sm, ss] = stats(agg.sil);
    std::ostringstream row;
    row << method << ' ' << fmt(phi) << ' ' << fmt_fixed(km, 2) << ' '
        << fmt_fixed(ks, 2) << ' ' << fmt_fixed(nm, 4) << ' '
        << fmt_fixed(ns, 4) << ' ' << fmt_fixed(sm, 4) << ' '
        << fmt_fixed(ss, 4);
    table << row.str() << '\n';
    std::cout << row.str() << '\n';
  };

  dpvmf_synth_config synth_cfg;
  dpvmf_synth_config_init(&synth_cfg);
  synth_cfg.k_t = k_t;
  synth_cfg.n = n;
  synth_cfg.tau = tau;
  synth_cfg.dim = 3;
  synth_cfg.min_separation_rad = min_sep_deg * std::acos(-1.0) / 180.0;

  // one dataset per seed, shared across the phi grid and the baseline
  struct Dataset {
    BatchHandle points;
    LabelsHandle truth;
  };
  std::vector<Dataset> data(seeds);
  for (int s = 0; s < seeds; ++s) {
    synth_cfg.seed = common.seed + static_cast<std::uint64_t>(s);
    check(dpvmf_synth_generate(&synth_cfg, &data[s].points.p, &data[s].truth.p,
                               nullptr));
  }

  auto score = [&](const dpvmf_fit* fit, const Dataset& d, Agg& agg) {
    std::size_t count = dpvmf_batch_size(d.points.p);
    double nmi_value = 0.0;
    check(dpvmf_nmi(dpvmf_fit_labels(fit), d.truth.p, count, &nmi_value));
    double sil_value = 0.0;
    if (dpvmf_fit_k(fit) < 2)
      sil_value = 0.0;
    else
      check(dpvmf_silhouette(d.points.p, dpvmf_fit_labels(fit), 2000,
                             common.seed, &sil_value));
    agg.k.push_back(static_cast<double>(dpvmf_fit_k(fit)));
    agg.nmi.push_back(nmi_value);
    agg.sil.push_back(sil_value);
  };

  for (double phi = phi_min; phi <= phi_max + 1e-9; phi += phi_step) {
    dpvmf_dp_config cfg;
    dpvmf_dp_config_init(&cfg);
    cfg.lambda = dpvmf_lambda_from_phi_deg(phi);
    cfg.max_iterations = common.max_iters;
    cfg.workers = common.threads;
    Agg agg;
    for (int s = 0; s < seeds; ++s) {
      cfg.seed = common.seed + static_cast<std::uint64_t>(s);
      FitHandle fit;
      check(dpvmf_dp_fit(data[s].points.p, &cfg, &fit.p));
      score(fit.p, data[s], agg);
    }
    emit("dp-vmf", phi, agg);
  }

  {
    dpvmf_spkm_config cfg;
    dpvmf_spkm_config_init(&cfg);
    cfg.k = k_t;
    cfg.restarts = spkm_restarts;
    cfg.max_iterations = common.max_iters;
    cfg.workers = common.threads;
    Agg agg;
    for (int s = 0; s < seeds; ++s) {
      cfg.seed = common.seed + static_cast<std::uint64_t>(s);
      FitHandle fit;
      check(dpvmf_spkm_fit(data[s].points.p, &cfg, &fit.p));
      score(fit.p, data[s], agg);
    }
    emit("spkm", 0.0, agg);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"dpvmf: nonparametric clustering of directional data"};
  app.require_subcommand(1);

  // dp-fit
  auto* dp = app.add_subcommand("dp-fit", "batch DP-vMF-means fit");
  std::string dp_input;
  dp->add_option("input", dp_input, "point file")->required();
  ConeFlags dp_cone;
  dp_cone.add(dp);
  CommonFlags dp_common;
  dp_common.add(dp);

  // spkm-fit
  auto* spkm = app.add_subcommand("spkm-fit", "spherical k-means baseline fit");
  std::string spkm_input;
  int spkm_k = 1;
  int spkm_restarts = 10;
  spkm->add_option("input", spkm_input, "point file")->required();
  spkm->add_option("--k", spkm_k, "number of clusters")
      ->required()
      ->envname("DPVMF_K");
  spkm->add_option("--restarts", spkm_restarts, "seeded restarts")
      ->envname("DPVMF_RESTARTS");
  CommonFlags spkm_common;
  spkm_common.add(spkm);

  // ddp-stream
  auto* ddp = app.add_subcommand("ddp-stream", "streaming DDP-vMF-means");
  std::vector<std::string> ddp_inputs;
  std::string ddp_manifest;
  double ddp_beta = 1e5, ddp_q = 0.0, ddp_q_frac = 400.0;
  ddp->add_option("inputs", ddp_inputs,
                  "frame point files (directories expand sorted)");
  ddp->add_option("--manifest", ddp_manifest, "file listing frame paths")
      ->envname("DPVMF_MANIFEST");
  ConeFlags ddp_cone;
  ddp_cone.add(ddp);
  ddp->add_option("--beta", ddp_beta, "random-walk stiffness")
      ->envname("DPVMF_BETA");
  ddp->add_option("--q", ddp_q, "survival exponent Q (<= 0)")
      ->envname("DPVMF_Q");
  ddp->add_option("--q-frac", ddp_q_frac, "set Q = lambda / q-frac")
      ->envname("DPVMF_Q_FRAC");
  CommonFlags ddp_common;
  ddp_common.add(ddp);

  // synth
  auto* synth = app.add_subcommand("synth", "generate a synthetic benchmark");
  std::string synth_scenario, synth_format = "text";
  int synth_k = 30;
  std::size_t synth_n = 6000, synth_dim = 3;
  double synth_tau = 500.0, synth_min_sep = 28.0;
  synth->add_option("--scenario", synth_scenario,
                    "streaming scenario file (overrides batch flags)")
      ->envname("DPVMF_SCENARIO");
  synth->add_option("--k", synth_k, "true cluster count")->envname("DPVMF_K");
  synth->add_option("--n", synth_n, "points to draw")->envname("DPVMF_N");
  synth->add_option("--tau", synth_tau, "vMF concentration")
      ->envname("DPVMF_TAU");
  synth->add_option("--dim", synth_dim, "ambient dimension")
      ->envname("DPVMF_DIM");
  synth->add_option("--min-sep", synth_min_sep,
                    "minimum mean separation in degrees")
      ->envname("DPVMF_MIN_SEP");
  synth->add_option("--format", synth_format, "point file format {text,bin}")
      ->envname("DPVMF_FORMAT");
  CommonFlags synth_common;
  synth_common.add(synth, /*with_input_flags=*/false);

  // eval
  auto* eval = app.add_subcommand("eval", "score labelings (NMI, silhouette)");
  std::string eval_points, eval_labels, eval_ref;
  int eval_sweep = 1;
  std::size_t eval_max_sample = 10000;
  eval->add_option("--labels", eval_labels, "labeling to score")->required();
  eval->add_option("--ref", eval_ref, "reference labeling for NMI");
  eval->add_option("--points", eval_points, "point file for silhouette");
  eval->add_option("--sweep", eval_sweep,
                   "silhouette subsample runs (mean/std over R seeds)")
      ->envname("DPVMF_SWEEP");
  eval->add_option("--max-sample", eval_max_sample,
                   "silhouette subsample cap")
      ->envname("DPVMF_MAX_SAMPLE");
  CommonFlags eval_common;
  eval_common.add(eval);

  // bench
  auto* bench =
      app.add_subcommand("bench", "replica benchmark sweep over phi_lambda");
  int bench_seeds = 50, bench_k = 30, bench_spkm_restarts = 1;
  std::size_t bench_n = 6000;
  double bench_tau = 500.0, bench_min_sep = 28.0;
  double bench_phi_min = 10.0, bench_phi_max = 80.0, bench_phi_step = 5.0;
  bench->add_option("--seeds", bench_seeds, "seeded runs per grid point")
      ->envname("DPVMF_SEEDS");
  bench->add_option("--phi-min", bench_phi_min, "grid start (degrees)");
  bench->add_option("--phi-max", bench_phi_max, "grid end (degrees)");
  bench->add_option("--phi-step", bench_phi_step, "grid step (degrees)");
  bench->add_option("--k", bench_k, "true cluster count")->envname("DPVMF_K");
  bench->add_option("--n", bench_n, "points per dataset")->envname("DPVMF_N");
  bench->add_option("--tau", bench_tau, "vMF concentration")
      ->envname("DPVMF_TAU");
  bench->add_option("--min-sep", bench_min_sep,
                    "minimum mean separation in degrees");
  bench->add_option("--restarts", bench_spkm_restarts, "spkm restarts")
      ->envname("DPVMF_RESTARTS");
  CommonFlags bench_common;
  bench_common.add(bench, /*with_input_flags=*/false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (dp->parsed()) return run_dp_fit(dp_input, dp_cone, dp_common, dp);
    if (spkm->parsed())
      return run_spkm_fit(spkm_input, spkm_k, spkm_restarts, spkm_common);
    if (ddp->parsed())
      return run_ddp_stream(ddp_inputs, ddp_manifest, ddp_cone, ddp_beta,
                            ddp_q, ddp_q_frac, ddp_common, ddp);
    if (synth->parsed())
      return run_synth(synth_scenario, synth_k, synth_n, synth_tau, synth_dim,
                       synth_min_sep, synth_format, synth_common);
    if (eval->parsed())
      return run_eval(eval_points, eval_labels, eval_ref, eval_sweep,
                      eval_max_sample, eval_common);
    if (bench->parsed())
      return run_bench(bench_seeds, bench_phi_min, bench_phi_max,
                       bench_phi_step, bench_k, bench_n, bench_tau,
                       bench_min_sep, bench_spkm_restarts, bench_common);
  } catch (const CliError& e) {
    std::cerr << "error: " << e.message << '\n';
    return e.exit_code;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 2;
}
