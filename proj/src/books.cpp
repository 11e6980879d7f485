#include "modp/books.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

#include "modp/kernels.hpp"

namespace modp {

namespace {

constexpr double kOrthoTol = 1e-9;

double wrap_angle(double a) {
  a = std::remainder(a, 2 * M_PI);
  return a <= -M_PI ? a + 2 * M_PI : a;
}

// Squared distance from x in the plane to the closed ray through u.
double ray_dist2(const Eigen::Vector2d& x, const Eigen::Vector2d& u) {
  const double t = x.dot(u);
  if (t <= 0) return x.squaredNorm();
  return (x - t * u).squaredNorm();
}

}  // namespace

Eigen::Vector2d OpenBook::page(std::size_t i) const {
  return Eigen::Vector2d(std::cos(angles.at(i)), std::sin(angles.at(i)));
}

Vec OpenBook::page_vector(std::size_t i) const {
  const Eigen::Vector2d u = page(i);
  return plane.col(0) * u[0] + plane.col(1) * u[1];
}

Eigen::MatrixXd OpenBook::default_plane(const Eigen::MatrixXd& spine, int dim) {
  Eigen::MatrixXd P(dim, 2);
  int found = 0;
  for (int e = 0; e < dim && found < 2; ++e) {
    Vec v = Vec::Unit(dim, e);
    for (Eigen::Index c = 0; c < spine.cols(); ++c) v -= spine.col(c).dot(v) * spine.col(c);
    for (int c = 0; c < found; ++c) v -= P.col(c).dot(v) * P.col(c);
    if (v.norm() > 1e-6) P.col(found++) = v.normalized();
  }
  if (found < 2) throw ValidationError("no 2-plane orthogonal to the spine");
  return P;
}

OpenBook OpenBook::make(int m, int n, const Eigen::MatrixXd& spine, const Eigen::MatrixXd& plane,
                        const std::vector<Eigen::Vector2d>& dirs) {
  OpenBook S;
  S.m = m;
  S.n = n;
  S.spine = spine;
  S.plane = plane;
  for (const auto& d : dirs) {
    if (!(d.norm() > 1e-12)) throw ValidationError("page direction must be nonzero");
    S.angles.push_back(std::atan2(d[1], d[0]));
  }
  S.validate();
  return S;
}

void OpenBook::validate() const {
  if (m < 1 || n < 1) throw ValidationError("book needs m >= 1 and n >= 1");
  const int d = dim();
  if (spine.rows() != d || spine.cols() != m - 1) throw ValidationError("spine must be dim x (m-1)");
  if (plane.rows() != d || plane.cols() != 2) throw ValidationError("page plane must be dim x 2");
  Eigen::MatrixXd B(d, m + 1);
  B << spine, plane;
  if (((B.transpose() * B) - Eigen::MatrixXd::Identity(m + 1, m + 1)).cwiseAbs().maxCoeff() > kOrthoTol) {
    throw ValidationError("spine and page plane must be orthonormal and mutually orthogonal");
  }
  if (angles.empty()) throw ValidationError("book has no pages");
  for (double a : angles) {
    if (!std::isfinite(a)) throw ValidationError("page angle is not finite");
  }
  if (angles.size() > 1 && !(min_opening_angle(*this) > 1e-12)) {
    throw ValidationError("page directions must be pairwise distinct");
  }
}

bool OpenBook::nonflat() const {
  if (pages() < 2) return false;
  if (pages() > 2) return true;
  return std::abs(std::abs(wrap_angle(angles[0] - angles[1])) - M_PI) > 1e-12;
}

void ConeModP::validate() const {
  book.validate();
  if (p < 2) throw ValidationError("modulus p must be at least 2");
  if (kappa.size() != book.pages()) throw ValidationError("one multiplicity per page required");
  int64_t total = 0;
  for (int64_t k : kappa) {
    if (k < 1) throw ValidationError("multiplicities must be positive");
    if (2 * k >= p) throw ValidationError("multiplicities must be below p/2");
    total += k;
  }
  if (total > p) throw ValidationError("multiplicities must sum to at most p");
}

int64_t ConeModP::total_multiplicity() const {
  int64_t t = 0;
  for (int64_t k : kappa) t += k;
  return t;
}

double min_opening_angle(const OpenBook& S) {
  if (S.pages() < 2) return 2 * M_PI;
  std::vector<double> a;
  for (double x : S.angles) a.push_back(std::fmod(std::fmod(x, 2 * M_PI) + 2 * M_PI, 2 * M_PI));
  std::sort(a.begin(), a.end());
  double best = a.front() + 2 * M_PI - a.back();
  for (std::size_t i = 1; i < a.size(); ++i) best = std::min(best, a[i] - a[i - 1]);
  return best;
}

double dist2_to_book(const Vec& q, const OpenBook& S) {
  if (q.size() != S.dim()) throw ValidationError("point dimension does not match the book");
  const Eigen::Vector2d x(S.plane.col(0).dot(q), S.plane.col(1).dot(q));
  Vec normal = q - S.plane * x;
  if (S.spine.cols() > 0) normal -= S.spine * (S.spine.transpose() * q);
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < S.pages(); ++i) best = std::min(best, ray_dist2(x, S.page(i)));
  return normal.squaredNorm() + best;
}

double dist_to_book(const Vec& q, const OpenBook& S) { return std::sqrt(dist2_to_book(q, S)); }

double excess(const VarifoldSample& T, const OpenBook& S, const Vec& q, double R) {
  if (!(R > 0)) throw ValidationError("excess radius must be positive");
  if (T.dim() != S.dim() || q.size() != S.dim()) throw ValidationError("sample and book dimensions differ");
  const double s = ball_sum(T.points, T.weights, q, R,
                            [&](Eigen::Index j) { return dist2_to_book(T.points.col(j) - q, S); });
  return s / std::pow(R, S.m + 2);
}

double excess_serial(const VarifoldSample& T, const OpenBook& S, const Vec& q, double R) {
  if (!(R > 0)) throw ValidationError("excess radius must be positive");
  if (T.dim() != S.dim() || q.size() != S.dim()) throw ValidationError("sample and book dimensions differ");
  const double s = ball_sum_serial(T.points, T.weights, q, R,
                                   [&](Eigen::Index j) { return dist2_to_book(T.points.col(j) - q, S); });
  return s / std::pow(R, S.m + 2);
}

double density_ratio(const VarifoldSample& T, const Vec& q, double r) {
  if (!(r > 0)) throw ValidationError("density radius must be positive");
  if (q.size() != T.dim()) throw ValidationError("center dimension does not match the sample");
  const double mass = ball_sum(T.points, T.weights, q, r, [](Eigen::Index) { return 1.0; });
  return mass / (unit_ball_volume(T.m) * std::pow(r, T.m));
}

namespace {

bool same_span(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B) {
  if (A.cols() != B.cols() || A.rows() != B.rows()) return false;
  if (A.cols() == 0) return true;
  const Eigen::MatrixXd PA = A * A.transpose();
  const Eigen::MatrixXd PB = B * B.transpose();
  return (PA - PB).cwiseAbs().maxCoeff() < 1e-9;
}

void enumerate_groupings(const std::vector<int64_t>& kappa, const std::vector<int64_t>& kappa0,
                         std::vector<int>& current, std::vector<int64_t>& load,
                         const std::function<void(const std::vector<int>&)>& visit) {
  const std::size_t j = current.size();
  if (j == kappa.size()) {
    if (load == kappa0) visit(current);
    return;
  }
  for (std::size_t i = 0; i < kappa0.size(); ++i) {
    if (load[i] + kappa[j] > kappa0[i]) continue;
    load[i] += kappa[j];
    current.push_back(static_cast<int>(i));
    enumerate_groupings(kappa, kappa0, current, load, visit);
    current.pop_back();
    load[i] -= kappa[j];
  }
}

}  // namespace

CoherenceResult coherence_angle(const ConeModP& C, const ConeModP& C0, bool allow_rotation) {
  C.validate();
  C0.validate();
  if (C.p != C0.p) throw ValidationError("cones have different moduli");
  if (C.book.dim() != C0.book.dim() || C.book.m != C0.book.m) {
    throw ValidationError("cones live in different dimensions");
  }
  if (!same_span(C.book.spine, C0.book.spine)) throw ValidationError("cones have different spines");
  if (!same_span(C.book.plane, C0.book.plane)) throw ValidationError("cones have different page planes");
  if (!C0.book.nonflat()) throw ValidationError("reference cone must be nonflat");
  if (!C.book.nonflat()) throw ValidationError("not coherent: cone is flat");

  // page angles of C in the plane coordinates of C0
  const OpenBook& S0 = C0.book;
  std::vector<double> alpha;
  for (std::size_t j = 0; j < C.book.pages(); ++j) {
    const Vec v = C.book.page_vector(j);
    alpha.push_back(std::atan2(S0.plane.col(1).dot(v), S0.plane.col(0).dot(v)));
  }
  const double limit = min_opening_angle(S0) / 4;
  const auto cost = [](double phi, const std::vector<double>& c) {
    double worst = 0.0;
    for (double cj : c) worst = std::max(worst, std::abs(phi - cj));
    return 2 * std::abs(std::sin(phi / 2)) + worst;
  };

  CoherenceResult best;
  bool found = false;
  const auto better = [&](double v, double phi) {
    if (!found) return true;
    if (v < best.value - 1e-15) return true;
    return v <= best.value + 1e-15 && std::abs(phi) < std::abs(best.rotation);
  };
  std::vector<int> current;
  std::vector<int64_t> load(S0.pages(), 0);
  enumerate_groupings(C.kappa, C0.kappa, current, load, [&](const std::vector<int>& g) {
    // page j needs the rotation phi within limit of c_j
    std::vector<double> c(g.size());
    for (std::size_t j = 0; j < g.size(); ++j) c[j] = wrap_angle(S0.angles[g[j]] - alpha[j]);
    for (std::size_t j = 1; j < c.size(); ++j) c[j] = c[0] + wrap_angle(c[j] - c[0]);
    double lo = -std::numeric_limits<double>::infinity(), hi = -lo;
    for (double cj : c) {
      lo = std::max(lo, cj - limit);
      hi = std::min(hi, cj + limit);
    }
    if (!(lo < hi)) return;
    double phi;
    if (!allow_rotation) {
      // O = Id: shift the window to contain 0 if some 2 pi copy does
      const double k = std::round((0.5 * (lo + hi)) / (2 * M_PI));
      lo -= 2 * M_PI * k;
      hi -= 2 * M_PI * k;
      for (double& cj : c) cj -= 2 * M_PI * k;
      if (!(lo < 0 && 0 < hi)) return;
      phi = 0.0;
    } else {
      // represent the window near 0 so |phi| is the rotation angle
      const double k = std::round((0.5 * (lo + hi)) / (2 * M_PI));
      lo -= 2 * M_PI * k;
      hi -= 2 * M_PI * k;
      for (double& cj : c) cj -= 2 * M_PI * k;
      constexpr int kGrid = 2048;
      const double step = (hi - lo) / kGrid;
      phi = lo + 0.5 * step;
      double fphi = cost(phi, c);
      for (int s = 0; s < kGrid; ++s) {
        const double x = lo + (s + 0.5) * step;
        const double fx = cost(x, c);
        if (fx < fphi - 1e-15 || (fx <= fphi + 1e-15 && std::abs(x) < std::abs(phi))) {
          phi = x;
          fphi = fx;
        }
      }
      if (lo < 0 && 0 < hi && cost(0.0, c) <= fphi + 1e-15) {
        phi = 0.0;
      } else {
        // golden-section refinement on the bracketing cells
        double a = std::max(lo, phi - step), b = std::min(hi, phi + step);
        const double g = 0.5 * (std::sqrt(5.0) - 1);
        double x1 = b - g * (b - a), x2 = a + g * (b - a);
        double f1 = cost(x1, c), f2 = cost(x2, c);
        while (b - a > 1e-9) {
          if (f1 <= f2) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - g * (b - a);
            f1 = cost(x1, c);
          } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + g * (b - a);
            f2 = cost(x2, c);
          }
        }
        const double x = 0.5 * (a + b);
        if (cost(x, c) <= fphi) phi = x;
      }
    }
    double worst = 0.0;
    for (double cj : c) worst = std::max(worst, std::abs(phi - cj));
    const double v = 2 * std::abs(std::sin(phi / 2)) + worst;
    if (better(v, phi)) {
      found = true;
      best.value = v;
      best.rotation = phi;
      best.max_page_angle = worst;
      best.grouping = g;
    }
  });
  if (!found) throw ValidationError("not coherent: no grouping keeps every page angle below a quarter of the opening angle");
  return best;
}

Vec retract_to_book(const Vec& q, const OpenBook& S, double rho) {
  if (!(rho > 0 && rho < 0.125)) throw ValidationError("rho must lie in (0, 1/8)");
  if (q.size() != S.dim()) throw ValidationError("point dimension does not match the book");
  if (S.pages() > 1) {
    // chord between neighbouring page directions must exceed 4 rho
    const double chord = 2 * std::sin(min_opening_angle(S) / 2);
    if (!(chord > 4 * rho)) throw ValidationError("rho too large for the book opening angle");
  }
  Vec y = Vec::Zero(q.size());
  if (S.spine.cols() > 0) y = S.spine * (S.spine.transpose() * q);
  const Vec x = q - y;
  const double r = x.norm();
  if (r == 0.0) return y;
  const Vec xh = x / r;
  std::size_t near = 0;
  double t = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < S.pages(); ++i) {
    const double d = (xh - S.page_vector(i)).norm();
    if (d < t) {
      t = d;
      near = i;
    }
  }
  double phi = 0.0;
  if (t < rho) {
    phi = 1.0;
  } else if (t < 2 * rho) {
    const double s = (t - rho) / rho;
    phi = 1 - 3 * s * s + 2 * s * s * s;
  }
  return y + r * phi * S.page_vector(near);
}

VarifoldSample sample_book(const OpenBook& S, const std::vector<double>& factors, double R, double delta) {
  if (factors.size() != S.pages()) throw ValidationError("one sampling factor per page required");
  VarifoldSample out;
  for (std::size_t i = 0; i < S.pages(); ++i) {
    out.append(sample_half_plane(S.page_vector(i), S.spine, R, delta, factors[i]));
  }
  return out;
}

VarifoldSample sample_cone(const ConeModP& C, double R, double delta) {
  std::vector<double> f(C.kappa.begin(), C.kappa.end());
  return sample_book(C.book, f, R, delta);
}

OpenBook rotated_about_spine(const OpenBook& S, double angle) {
  OpenBook r = S;
  for (double& a : r.angles) a += angle;
  return r;
}

json book_to_json(const ConeModP& C) {
  const OpenBook& S = C.book;
  json j;
  j["m"] = S.m;
  j["n"] = S.n;
  json spine = json::array();
  for (Eigen::Index c = 0; c < S.spine.cols(); ++c) spine.push_back(vec_to_json(S.spine.col(c)));
  j["spine"] = spine;
  j["plane"] = json::array({vec_to_json(S.plane.col(0)), vec_to_json(S.plane.col(1))});
  json pages = json::array();
  for (std::size_t i = 0; i < S.pages(); ++i) {
    json pg;
    pg["dir"] = json::array({std::cos(S.angles[i]), std::sin(S.angles[i])});
    if (i < C.kappa.size()) pg["kappa"] = C.kappa[i];
    pages.push_back(pg);
  }
  j["pages"] = pages;
  if (C.p > 0) j["p"] = C.p;
  return j;
}

namespace {

ConeModP parse_book(const json& j) {
  ConeModP C;
  try {
    const int m = j.at("m").get<int>();
    const int n = j.at("n").get<int>();
    const int d = m + n;
    if (m < 1 || n < 1 || d > 16) throw ValidationError("book needs m >= 1, n >= 1, m + n <= 16");
    Eigen::MatrixXd spine(d, m - 1);
    const json& sp = j.value("spine", json::array());
    if (static_cast<int>(sp.size()) != m - 1) throw ValidationError("spine needs m - 1 basis vectors");
    for (int c = 0; c < m - 1; ++c) {
      Vec v = vec_from_json(sp[c]);
      if (v.size() != d) throw ValidationError("spine vector has wrong dimension");
      spine.col(c) = v;
    }
    Eigen::MatrixXd plane;
    if (j.contains("plane")) {
      const json& pl = j.at("plane");
      if (pl.size() != 2) throw ValidationError("page plane needs two basis vectors");
      plane.resize(d, 2);
      for (int c = 0; c < 2; ++c) {
        Vec v = vec_from_json(pl[c]);
        if (v.size() != d) throw ValidationError("page plane vector has wrong dimension");
        plane.col(c) = v;
      }
    } else {
      plane = OpenBook::default_plane(spine, d);
    }
    std::vector<Eigen::Vector2d> dirs;
    for (const json& pg : j.at("pages")) {
      Vec v = vec_from_json(pg.at("dir"));
      if (v.size() != 2) throw ValidationError("page direction needs two plane coordinates");
      dirs.emplace_back(v[0], v[1]);
      C.kappa.push_back(pg.value("kappa", int64_t{1}));
    }
    C.book = OpenBook::make(m, n, spine, plane, dirs);
    C.p = j.value("p", int64_t{0});
  } catch (const json::exception& e) {
    throw ValidationError(std::string("malformed book JSON: ") + e.what());
  }
  return C;
}

}  // namespace

ConeModP cone_from_json(const json& j) {
  ConeModP C = parse_book(j);
  C.validate();
  return C;
}

OpenBook book_from_json(const json& j) { return parse_book(j).book; }

}  // namespace modp
