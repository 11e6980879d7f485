#include "modp/sample.hpp"

#include <cmath>
#include <numeric>

namespace modp {

namespace {

int ring_count(double R, double delta) {
  if (!(R > 0) || !(delta > 0)) throw ValidationError("sampling radius and delta must be positive");
  const double k = std::ceil(R / delta - 1e-9);
  if (k > 1e5) throw ValidationError("too many sampling rings");
  return static_cast<int>(k);
}

// Radius of point a among n in annulus [k, k+1] (units of delta). The radii
// stratify the annulus area and are interleaved with the angles by a
// golden-ratio permutation.
double ring_radius(int k, int a, int n) {
  int s = std::max(1, static_cast<int>(std::lround(0.6180339887498949 * n)));
  while (std::gcd(s, n) != 1) ++s;
  const double u = ((static_cast<long long>(a) * s) % n + 0.5) / n;
  return std::sqrt(k * k + u * (2.0 * k + 1.0));
}

}  // namespace

void VarifoldSample::validate() const {
  if (m < 1) throw ValidationError("sample dimension m must be positive");
  if (weights.size() != points.cols()) throw ValidationError("sample weight count mismatch");
  for (Eigen::Index j = 0; j < weights.size(); ++j) {
    if (!(weights[j] >= 0) || !std::isfinite(weights[j])) {
      throw ValidationError("sample weights must be finite and nonnegative");
    }
  }
  if (!plane_index.empty()) {
    if (plane_index.size() != size()) throw ValidationError("tangent index count mismatch");
    for (int i : plane_index) {
      if (i < 0 || i >= static_cast<int>(planes.size())) throw ValidationError("tangent index out of range");
    }
    for (const auto& P : planes) {
      if (P.rows() != dim() || P.cols() != m) throw ValidationError("tangent plane has wrong shape");
    }
  }
}

VarifoldSample VarifoldSample::dilated(double lambda) const {
  if (!(lambda > 0)) throw ValidationError("dilation factor must be positive");
  VarifoldSample s = *this;
  s.points *= lambda;
  s.weights *= std::pow(lambda, m);
  s.delta *= lambda;
  return s;
}

VarifoldSample VarifoldSample::translated(const Vec& shift) const {
  if (shift.size() != dim()) throw ValidationError("translation has wrong dimension");
  VarifoldSample s = *this;
  s.points.colwise() += shift;
  return s;
}

void VarifoldSample::append(const VarifoldSample& o) {
  if (size() == 0 && planes.empty()) {
    const double d = delta;
    *this = o;
    if (d > 0) delta = std::max(d, o.delta);
    return;
  }
  if (o.m != m || o.dim() != dim()) throw ValidationError("appending samples of different shape");
  if (has_tangents() != o.has_tangents() && o.size() > 0) {
    throw ValidationError("appending samples with and without tangent data");
  }
  const Eigen::Index n = points.cols();
  points.conservativeResize(Eigen::NoChange, n + o.points.cols());
  points.rightCols(o.points.cols()) = o.points;
  weights.conservativeResize(n + o.weights.size());
  weights.tail(o.weights.size()) = o.weights;
  const int base = static_cast<int>(planes.size());
  planes.insert(planes.end(), o.planes.begin(), o.planes.end());
  for (int i : o.plane_index) plane_index.push_back(base + i);
  delta = std::max(delta, o.delta);
}

VarifoldSample sample_half_plane(const Vec& u, const Eigen::MatrixXd& spine, double R, double delta,
                                 double factor) {
  const int d = static_cast<int>(u.size());
  const int m = static_cast<int>(spine.cols()) + 1;
  if (m > 2) throw ValidationError("half-plane sampling supports m <= 2");
  const int K = ring_count(R, delta);
  VarifoldSample s;
  s.m = m;
  s.delta = delta;
  Eigen::MatrixXd T(d, m);
  if (m == 2) T.col(0) = spine.col(0);
  T.col(m - 1) = u;
  s.planes.push_back(T);
  std::vector<Vec> pts;
  std::vector<double> w;
  for (int k = 0; k < K; ++k) {
    if (m == 1) {
      pts.push_back((k + 0.5) * delta * u);
      w.push_back(factor * delta);
      continue;
    }
    const int n = std::max(1, static_cast<int>(std::lround(M_PI * (k + 0.5))));
    const double area = 0.5 * M_PI * (2.0 * k + 1.0) * delta * delta;
    for (int a = 0; a < n; ++a) {
      const double rad = ring_radius(k, a, n) * delta;
      const double psi = -0.5 * M_PI + (a + 0.5) * M_PI / n;
      pts.push_back(rad * (std::cos(psi) * u + std::sin(psi) * spine.col(0)));
      w.push_back(factor * area / n);
    }
  }
  s.points.resize(d, static_cast<Eigen::Index>(pts.size()));
  s.weights.resize(static_cast<Eigen::Index>(w.size()));
  for (std::size_t j = 0; j < pts.size(); ++j) {
    s.points.col(j) = pts[j];
    s.weights[j] = w[j];
  }
  s.plane_index.assign(pts.size(), 0);
  return s;
}

VarifoldSample sample_disk(const Vec& center, const Eigen::MatrixXd& basis, double R, double delta) {
  const int m = static_cast<int>(basis.cols());
  if (m < 1 || m > 2) throw ValidationError("disk sampling supports m in {1, 2}");
  if (basis.rows() != center.size()) throw ValidationError("disk basis has wrong dimension");
  if (m == 1) {
    VarifoldSample a = sample_half_plane(basis.col(0), Eigen::MatrixXd(center.size(), 0), R, delta, 1.0);
    a.append(sample_half_plane(-basis.col(0), Eigen::MatrixXd(center.size(), 0), R, delta, 1.0));
    a.planes.assign(1, basis);
    a.plane_index.assign(a.size(), 0);
    return a.translated(center);
  }
  const int K = ring_count(R, delta);
  std::size_t total = 0;
  std::vector<int> per_ring(K);
  for (int k = 0; k < K; ++k) {
    per_ring[k] = std::max(3, static_cast<int>(std::lround(2 * M_PI * (k + 0.5))));
    total += per_ring[k];
  }
  VarifoldSample s;
  s.m = 2;
  s.delta = delta;
  s.points.resize(center.size(), static_cast<Eigen::Index>(total));
  s.weights.resize(static_cast<Eigen::Index>(total));
  std::size_t j = 0;
  for (int k = 0; k < K; ++k) {
    const int n = per_ring[k];
    const double area = M_PI * (2.0 * k + 1.0) * delta * delta;
    for (int a = 0; a < n; ++a, ++j) {
      const double rad = ring_radius(k, a, n) * delta;
      const double psi = (a + 0.5) * 2 * M_PI / n;
      s.points.col(j) = center + rad * (std::cos(psi) * basis.col(0) + std::sin(psi) * basis.col(1));
      s.weights[j] = area / n;
    }
  }
  s.planes.push_back(basis);
  s.plane_index.assign(total, 0);
  return s;
}

json sample_to_json(const VarifoldSample& s) {
  json j;
  j["m"] = s.m;
  j["delta"] = s.delta;
  json pts = json::array();
  for (std::size_t i = 0; i < s.size(); ++i) pts.push_back(vec_to_json(s.points.col(i)));
  j["points"] = pts;
  j["weights"] = vec_to_json(s.weights);
  if (s.has_tangents()) {
    json planes = json::array();
    for (const auto& P : s.planes) {
      json cols = json::array();
      for (Eigen::Index c = 0; c < P.cols(); ++c) cols.push_back(vec_to_json(P.col(c)));
      planes.push_back(cols);
    }
    j["planes"] = planes;
    j["plane_index"] = s.plane_index;
  }
  return j;
}

VarifoldSample sample_from_json(const json& j) {
  VarifoldSample s;
  try {
    s.m = j.at("m").get<int>();
    s.delta = j.value("delta", 0.0);
    const json& pts = j.at("points");
    const int d = pts.empty() ? 0 : static_cast<int>(pts.at(0).size());
    s.points.resize(d, static_cast<Eigen::Index>(pts.size()));
    for (std::size_t i = 0; i < pts.size(); ++i) {
      Vec v = vec_from_json(pts[i]);
      if (v.size() != d) throw ValidationError("sample points have inconsistent dimension");
      s.points.col(i) = v;
    }
    s.weights = vec_from_json(j.at("weights"));
    if (j.contains("planes")) {
      for (const json& P : j.at("planes")) {
        Eigen::MatrixXd B(d, static_cast<Eigen::Index>(P.size()));
        for (std::size_t c = 0; c < P.size(); ++c) {
          Vec v = vec_from_json(P[c]);
          if (v.size() != d) throw ValidationError("tangent vector has wrong dimension");
          B.col(c) = v;
        }
        s.planes.push_back(B);
      }
      s.plane_index = j.at("plane_index").get<std::vector<int>>();
    }
  } catch (const json::exception& e) {
    throw ValidationError(std::string("malformed sample JSON: ") + e.what());
  }
  s.validate();
  return s;
}

double unit_ball_volume(int m) { return std::pow(M_PI, 0.5 * m) / std::tgamma(0.5 * m + 1.0); }

}  // namespace modp
