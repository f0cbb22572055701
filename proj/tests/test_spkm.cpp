#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <algorithm>
#include <set>

#include "doctest.h"
#include "dpvmf/metrics.hpp"
#include "dpvmf/spkm.hpp"
#include "dpvmf/sphere.hpp"

using namespace dpvmf;

namespace {

Batch blob_batch(const std::vector<std::vector<double>>& centers, double tau,
                 int per_blob, Rng& rng, std::vector<int>* truth = nullptr) {
  Batch b;
  b.dim = centers[0].size();
  for (std::size_t k = 0; k < centers.size(); ++k)
    for (int i = 0; i < per_blob; ++i) {
      auto x = sample_vmf(centers[k], tau, rng);
      b.append(x.data());
      if (truth) truth->push_back(static_cast<int>(k));
    }
  return b;
}

}  // namespace

TEST_CASE("k = 1 closed form: normalized total sum") {
  Batch b(3, {1, 0, 0, 0, 1, 0, 0, 0, 1, 1, 0, 0});
  SpkmConfig cfg;
  cfg.k = 1;
  auto res = spkm_fit(b, cfg);
  std::vector<double> sum{2, 1, 1};
  double n = norm2(sum.data(), 3);
  CHECK(res.objective == doctest::Approx(n).epsilon(1e-12));
  for (int j = 0; j < 3; ++j)
    CHECK(res.means[j] == doctest::Approx(sum[j] / n).epsilon(1e-12));
  CHECK(res.labels == std::vector<int>(4, 0));
  CHECK(res.converged);
}

TEST_CASE("k = n distinct points: every point its own cluster") {
  Rng rng(31);
  Batch b;
  b.dim = 4;
  for (int i = 0; i < 8; ++i) {
    auto x = sample_uniform_sphere(4, rng);
    b.append(x.data());
  }
  SpkmConfig cfg;
  cfg.k = 8;
  auto res = spkm_fit(b, cfg);
  CHECK(res.objective == doctest::Approx(8.0).epsilon(1e-9));
  CHECK(res.counts == std::vector<long>(8, 1));
  std::set<int> distinct(res.labels.begin(), res.labels.end());
  CHECK(distinct.size() == 8);
}

TEST_CASE("three separated blobs are recovered with k = 3") {
  Rng rng(37);
  std::vector<int> truth;
  Batch b = blob_batch({{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}, 100.0, 60, rng, &truth);
  SpkmConfig cfg;
  cfg.k = 3;
  auto res = spkm_fit(b, cfg);
  CHECK(nmi(res.labels, truth) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(res.converged);
}

TEST_CASE("objective trace is non-decreasing and means stay unit") {
  Rng rng(41);
  for (int t = 0; t < 20; ++t) {
    Batch b;
    b.dim = 3;
    for (int i = 0; i < 200; ++i) {
      auto x = sample_uniform_sphere(3, rng);
      b.append(x.data());
    }
    SpkmConfig cfg;
    cfg.k = 5;
    cfg.seed = static_cast<std::uint64_t>(t);
    cfg.restarts = 1;
    auto res = spkm_fit(b, cfg);
    for (std::size_t i = 1; i < res.objective_trace.size(); ++i)
      CHECK(res.objective_trace[i] >= res.objective_trace[i - 1] - 1e-9);
    for (int c = 0; c < cfg.k; ++c)
      CHECK(std::abs(norm2(res.means.data() + 3 * c, 3) - 1.0) < 1e-9);
    for (int l : res.labels) {
      CHECK(l >= 0);
      CHECK(l < cfg.k);
    }
  }
}

TEST_CASE("init_means basics") {
  Batch b(3, {1, 0, 0, 0, 1, 0, 0, 0, 1});
  Rng rng(43);
  auto one = spkm_init_means(b, 1, rng);
  REQUIRE(one.size() == 1);
  bool is_row = false;
  for (std::size_t i = 0; i < b.size(); ++i)
    is_row |= std::equal(one[0].begin(), one[0].end(), b.row(i));
  CHECK(is_row);

  // duplicate-free batch: k distinct rows are chosen
  for (int trial = 0; trial < 100; ++trial) {
    auto three = spkm_init_means(b, 3, rng);
    std::set<std::vector<double>> uniq(three.begin(), three.end());
    CHECK(uniq.size() == 3);
  }
}

TEST_CASE("seeding lands in both antipodal blobs almost surely") {
  Rng data_rng(47);
  Batch b = blob_batch({{0, 0, 1}, {0, 0, -1}}, 1000.0, 20, data_rng);
  int split = 0;
  const int trials = 10000;
  for (int t = 0; t < trials; ++t) {
    Rng rng(static_cast<std::uint64_t>(t));
    auto means = spkm_init_means(b, 2, rng);
    if ((means[0][2] > 0) != (means[1][2] > 0)) ++split;
  }
  CHECK(split >= trials * 99 / 100);
}

TEST_CASE("empty clusters are repaired and counted") {
  // identical points make every extra mean collapse onto the first cluster
  Batch b(3, std::vector<double>(30, 0.0));
  for (int i = 0; i < 10; ++i) b.data[3 * i + 2] = 1.0;
  SpkmConfig cfg;
  cfg.k = 2;
  cfg.restarts = 1;
  cfg.max_iterations = 5;
  auto res = spkm_fit(b, cfg);
  CHECK(res.repairs >= 1);
  CHECK(res.counts[0] + res.counts[1] == 10);
}

TEST_CASE("fixed seed reproduces the fit exactly") {
  Rng rng(53);
  Batch b = blob_batch({{1, 0, 0}, {0, 1, 0}}, 20.0, 100, rng);
  SpkmConfig cfg;
  cfg.k = 4;
  cfg.seed = 7;
  auto a = spkm_fit(b, cfg);
  auto c = spkm_fit(b, cfg);
  CHECK(a.labels == c.labels);
  CHECK(a.means == c.means);
  CHECK(a.objective == c.objective);
}

TEST_CASE("restarts never hurt the returned objective") {
  Rng rng(59);
  Batch b = blob_batch({{1, 0, 0}, {0, 1, 0}, {0, 0, 1}, {-1, 0, 0}}, 30.0, 50,
                       rng);
  SpkmConfig cfg;
  cfg.k = 4;
  cfg.seed = 11;
  cfg.restarts = 1;
  double single = spkm_fit(b, cfg).objective;
  cfg.restarts = 10;
  double many = spkm_fit(b, cfg).objective;
  CHECK(many >= single - 1e-12);
}

TEST_CASE("config validation") {
  Batch b(3, {0, 0, 1, 0, 1, 0});
  SpkmConfig cfg;
  cfg.k = 0;
  CHECK_THROWS_AS(spkm_fit(b, cfg), Error);
  cfg.k = 3;  // more clusters than points
  CHECK_THROWS_AS(spkm_fit(b, cfg), Error);
  cfg.k = 2;
  cfg.restarts = 0;
  CHECK_THROWS_AS(spkm_fit(b, cfg), Error);
}
