#include "dpvmf/sphere.hpp"

#include <algorithm>

namespace dpvmf {

std::vector<double> normalize(const std::vector<double>& v, double eps) {
  if (v.size() < 2) fail(ErrorCode::InvalidArgument, "dimension must be >= 2");
  double n = norm2(v.data(), v.size());
  if (n <= eps) fail(ErrorCode::DegenerateVector, "cannot normalize near-zero vector");
  std::vector<double> out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = v[i] / n;
  return out;
}

void normalize_inplace(double* v, std::size_t dim, double eps) {
  double n = norm2(v, dim);
  if (n <= eps) fail(ErrorCode::DegenerateVector, "cannot normalize near-zero vector");
  for (std::size_t i = 0; i < dim; ++i) v[i] /= n;
}

double geodesic_angle(const double* u, const double* v, std::size_t dim) {
  return std::acos(clamp_unit(dot(u, v, dim)));
}

double geodesic_angle(const std::vector<double>& u, const std::vector<double>& v) {
  if (u.size() != v.size())
    fail(ErrorCode::DimensionMismatch, "geodesic_angle: dimension mismatch");
  return geodesic_angle(u.data(), v.data(), u.size());
}

std::vector<double> rotate_towards(const std::vector<double>& u,
                                   const std::vector<double>& target,
                                   double angle) {
  if (u.size() != target.size())
    fail(ErrorCode::DimensionMismatch, "rotate_towards: dimension mismatch");
  const std::size_t d = u.size();
  if (angle == 0.0) return u;

  // Unit tangent at u pointing toward target.
  double c = dot(u.data(), target.data(), d);
  std::vector<double> t(d);
  for (std::size_t i = 0; i < d; ++i) t[i] = target[i] - c * u[i];
  double tn = norm2(t.data(), d);
  if (tn <= kNormEps)
    fail(ErrorCode::DegenerateGeodesic,
         "rotate_towards: endpoints parallel or antiparallel");
  double ca = std::cos(angle), sa = std::sin(angle);
  std::vector<double> out(d);
  for (std::size_t i = 0; i < d; ++i) out[i] = ca * u[i] + sa * t[i] / tn;
  normalize_inplace(out.data(), d);
  return out;
}

namespace {

// Householder reflection mapping e_d (north pole) to mu, applied to x.
void reflect_to_mean(std::vector<double>& x, const std::vector<double>& mu) {
  const std::size_t d = mu.size();
  std::vector<double> h(d);
  for (std::size_t i = 0; i < d; ++i) h[i] = -mu[i];
  h[d - 1] += 1.0;
  double hn = norm2(h.data(), d);
  if (hn <= kNormEps) return;  // mu is (numerically) the north pole
  for (std::size_t i = 0; i < d; ++i) h[i] /= hn;
  double p = dot(h.data(), x.data(), d);
  for (std::size_t i = 0; i < d; ++i) x[i] -= 2.0 * p * h[i];
}

double sample_beta(double a, Rng& rng) {
  // symmetric Beta(a, a) via two gammas
  std::gamma_distribution<double> g(a, 1.0);
  double x = g(rng);
  double y = g(rng);
  return x / (x + y);
}

}  // namespace

std::vector<double> sample_uniform_sphere(std::size_t dim, Rng& rng) {
  if (dim < 2) fail(ErrorCode::InvalidArgument, "dimension must be >= 2");
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<double> v(dim);
  for (;;) {
    for (auto& x : v) x = gauss(rng);
    double n = norm2(v.data(), dim);
    if (n > kNormEps) {
      for (auto& x : v) x /= n;
      return v;
    }
  }
}

std::vector<double> sample_vmf(const std::vector<double>& mean, double tau, Rng& rng) {
  const std::size_t d = mean.size();
  if (d < 2) fail(ErrorCode::InvalidArgument, "dimension must be >= 2");
  if (!(tau >= 0.0) || !std::isfinite(tau))
    fail(ErrorCode::InvalidArgument, "concentration must be finite and >= 0");
  if (tau == 0.0) return sample_uniform_sphere(d, rng);

  // Ulrich (1984) / Wood (1994) rejection scheme for the cosine to the mean.
  const double dm1 = static_cast<double>(d - 1);
  const double b = dm1 / (2.0 * tau + std::sqrt(4.0 * tau * tau + dm1 * dm1));
  const double x0 = (1.0 - b) / (1.0 + b);
  // log(1 - x0^2) computed via 4b/(1+b)^2, stable for large tau
  const double c = tau * x0 + dm1 * std::log(4.0 * b / ((1.0 + b) * (1.0 + b)));

  std::uniform_real_distribution<double> unif(0.0, 1.0);
  double w;
  for (;;) {
    double z = sample_beta(dm1 / 2.0, rng);
    w = (1.0 - (1.0 + b) * z) / (1.0 - (1.0 - b) * z);
    double u = unif(rng);
    if (tau * w + dm1 * std::log1p(-x0 * w) - c >= std::log(u)) break;
  }

  // tangent direction uniform on S^{d-2}
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<double> v(d - 1);
  double vn;
  do {
    for (auto& x : v) x = gauss(rng);
    vn = norm2(v.data(), d - 1);
  } while (vn <= kNormEps);

  std::vector<double> out(d);
  double s = std::sqrt(std::max(0.0, 1.0 - w * w));
  for (std::size_t i = 0; i + 1 < d; ++i) out[i] = s * v[i] / vn;
  out[d - 1] = w;
  reflect_to_mean(out, mean);
  normalize_inplace(out.data(), d);
  return out;
}

std::pair<std::vector<double>, double> weighted_mean_direction(
    const Batch& batch, const std::vector<std::size_t>& indices) {
  if (indices.empty())
    fail(ErrorCode::InvalidArgument, "weighted_mean_direction: empty index set");
  MeanAccumulator acc(batch.dim);
  for (auto i : indices) acc.add(batch.row(i));
  double n = norm2(acc.sum.data(), batch.dim);
  if (n <= kNormEps)
    fail(ErrorCode::DegenerateVector, "weighted_mean_direction: vanishing vector sum");
  std::vector<double> mean(batch.dim);
  for (std::size_t i = 0; i < batch.dim; ++i) mean[i] = acc.sum[i] / n;
  return {std::move(mean), n};
}

}  // namespace dpvmf
