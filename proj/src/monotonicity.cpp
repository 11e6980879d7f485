#include "modp/monotonicity.hpp"

#include <cmath>
#include <sstream>

#include "modp/kernels.hpp"

namespace modp {

namespace {

Vec normal_part(const VarifoldSample& T, std::size_t j, const Vec& q) {
  const Eigen::MatrixXd& P = T.tangent(j);
  return q - P * (P.transpose() * q);
}

void require_tangents(const VarifoldSample& T) {
  if (!T.has_tangents()) throw ValidationError("fixture must provide tangent planes");
}

void check_center(const VarifoldSample& T, const Vec& c) {
  if (c.size() != T.dim()) throw ValidationError("center dimension does not match the sample");
}

}  // namespace

std::vector<double> density_profile(const VarifoldSample& T, const Vec& q, const std::vector<double>& radii) {
  check_center(T, q);
  for (std::size_t i = 0; i < radii.size(); ++i) {
    if (!(radii[i] > 0)) throw ValidationError("radii must be positive");
    if (i > 0 && !(radii[i] > radii[i - 1])) throw ValidationError("radii must be increasing");
  }
  std::vector<double> out(radii.size());
#pragma omp parallel for schedule(static) num_threads(thread_budget())
  for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(radii.size()); ++i) {
    out[i] = density_ratio(T, q, radii[i]);
  }
  return out;
}

bool profile_nondecreasing(const std::vector<double>& profile, double tol) {
  for (std::size_t i = 1; i < profile.size(); ++i) {
    if (profile[i] < profile[i - 1] - tol) return false;
  }
  return true;
}

double HomogeneousFunction::value(const Vec& q) const {
  const double r = q.norm();
  if (r == 0.0) return 0.0;
  return std::pow(r, k) * ghat(q / r);
}

Vec HomogeneousFunction::gradient(const Vec& q) const {
  const double h = 1e-6 * std::max(q.norm(), 1e-12);
  Vec g(q.size());
  for (Eigen::Index i = 0; i < q.size(); ++i) {
    Vec a = q, b = q;
    a[i] += h;
    b[i] -= h;
    g[i] = (value(a) - value(b)) / (2 * h);
  }
  return g;
}

MonotonicityReport weighted_monotonicity_check(const VarifoldSample& T, const Vec& center,
                                               const HomogeneousFunction& g, double alpha, double R1,
                                               double A_hat, const std::vector<double>& radii) {
  check_center(T, center);
  if (!(alpha > 0 && alpha < 2)) throw ValidationError("alpha must lie in (0, 2)");
  if (!(R1 > 0)) throw ValidationError("R1 must be positive");
  if (g.k < 1) throw ValidationError("homogeneity degree k must be at least 1");
  if (!g.ghat) throw ValidationError("ghat is missing");
  if (A_hat < 0) throw ValidationError("curvature budget must be nonnegative");
  require_tangents(T);
  const int m = T.m;
  const double e = m + 2 * g.k - alpha;

  MonotonicityReport r;
  r.center = center;
  r.radii = radii;
  r.density = density_profile(T, center, radii);
  r.k = g.k;
  r.alpha = alpha;
  r.R1 = R1;
  r.A_hat = A_hat;
  const Eigen::MatrixXd& P = T.points;
  auto rel = [&](Eigen::Index j) -> Vec { return P.col(j) - center; };
  r.lhs = 0.5 * alpha * ball_sum(P, T.weights, center, R1, [&](Eigen::Index j) {
            const Vec q = rel(j);
            const double n = q.norm();
            return n == 0.0 ? 0.0 : std::pow(g.value(q), 2) / std::pow(n, e);
          });
  const double g2 = ball_sum(P, T.weights, center, R1, [&](Eigen::Index j) { return std::pow(g.value(rel(j)), 2); });
  r.rhs_main = (m + 2 * g.k) / std::pow(R1, e) * g2;
  r.rhs_perp = 2.0 / alpha * ball_sum(P, T.weights, center, R1, [&](Eigen::Index j) {
                 const Vec q = rel(j);
                 const double n = q.norm();
                 if (n == 0.0) return 0.0;
                 return g.gradient(q).squaredNorm() * normal_part(T, j, q).squaredNorm() / std::pow(n, e);
               });
  const double mass = ball_sum(P, T.weights, center, R1, [](Eigen::Index) { return 1.0; });
  r.rhs_curvature = A_hat * g.ghat_sup * g.ghat_sup * mass / std::pow(R1, m - alpha);
  r.rhs = r.rhs_main + r.rhs_perp + r.rhs_curvature;
  r.residual = r.lhs - r.rhs;
  r.tol = 3.0 * T.delta * mass;
  r.holds = r.residual <= r.tol;
  return r;
}

RadialProfile RadialProfile::constant(double c) {
  if (!(c >= 0)) throw ValidationError("profile must be nonnegative");
  return {[c](double) { return c; }, [](double) { return 0.0; }};
}

RadialProfile RadialProfile::smooth_cutoff(double a, double b) {
  if (!(a > 0 && b > a)) throw ValidationError("cutoff needs 0 < a < b");
  auto f = [a, b](double t) {
    if (t <= a) return 1.0;
    if (t >= b) return 0.0;
    const double s = (t - a) / (b - a);
    return 1.0 - s * s * (3.0 - 2.0 * s);
  };
  auto fp = [a, b](double t) {
    if (t <= a || t >= b) return 0.0;
    const double s = (t - a) / (b - a);
    return -6.0 * s * (1.0 - s) / (b - a);
  };
  return {f, fp};
}

PrimitiveF::PrimitiveF(const RadialProfile& f, int m, double R1, int intervals)
    : R1_(R1), table_(intervals + 1, 0.0), slope_(intervals + 1, 0.0) {
  if (!(R1 > 0) || intervals < 1) throw ValidationError("primitive needs R1 > 0");
  const double h = R1 / intervals;
  auto integrand = [&](double s) { return f.fprime(s) * std::pow(s, m); };
  for (int i = 0; i <= intervals; ++i) slope_[i] = integrand(i * h);
  for (int i = intervals - 1; i >= 0; --i) {
    const double a = i * h, b = a + h;
    const double piece = h / 6.0 * (integrand(a) + 4.0 * integrand(0.5 * (a + b)) + integrand(b));
    table_[i] = table_[i + 1] - piece;
    if (table_[i] != 0.0) zero_ = false;
  }
}

double PrimitiveF::operator()(double t) const {
  if (t >= R1_) return 0.0;
  if (t <= 0) return table_[0];
  const double u = t / R1_ * (table_.size() - 1);
  const std::size_t i = static_cast<std::size_t>(u);
  if (i + 1 >= table_.size()) return table_.back();
  const double w = u - i, h = R1_ / (table_.size() - 1);
  const double w2 = w * w, w3 = w2 * w;
  return (2 * w3 - 3 * w2 + 1) * table_[i] + (w3 - 2 * w2 + w) * h * slope_[i] + (-2 * w3 + 3 * w2) * table_[i + 1] +
         (w3 - w2) * h * slope_[i + 1];
}

ConeComparisonReport cone_comparison_check(const VarifoldSample& T, const VarifoldSample& C, const Vec& center,
                                           const RadialProfile& f, double R1, const MeanCurvature& H) {
  check_center(T, center);
  check_center(C, center);
  if (!(R1 > 0)) throw ValidationError("R1 must be positive");
  if (T.m != C.m) throw ValidationError("current and cone dimensions differ");
  if (!f.f || !f.fprime) throw ValidationError("profile is missing");
  const int m = T.m;
  const PrimitiveF F(f, m, R1);

  ConeComparisonReport r;
  r.R1 = R1;
  r.F0 = F(0.0);
  auto radial = [&](const VarifoldSample& S) {
    return ball_sum(S.points, S.weights, center, R1,
                    [&](Eigen::Index j) { return f.f((S.points.col(j) - center).norm()); });
  };
  r.cone_term = radial(C);
  r.mass_term = radial(T);
  if (!F.identically_zero()) {
    require_tangents(T);
    r.perp_term = m * ball_sum(T.points, T.weights, center, R1, [&](Eigen::Index j) {
                    const Vec q = T.points.col(j) - center;
                    const double n = q.norm();
                    if (n == 0.0) return 0.0;
                    return F(n) * normal_part(T, j, q).squaredNorm() / std::pow(n, m + 2);
                  });
    if (H) {
      r.rhs = -ball_sum(T.points, T.weights, center, R1, [&](Eigen::Index j) {
        const Vec q = T.points.col(j) - center;
        const double n = q.norm();
        if (n == 0.0) return 0.0;
        return F(n) * normal_part(T, j, q).dot(H(T.points.col(j))) / std::pow(n, m);
      });
    }
  }
  r.lhs = r.cone_term - r.mass_term + r.perp_term;
  r.theta_T = density_ratio(T, center, R1);
  r.theta_C = density_ratio(C, center, R1);
  const double mass = ball_sum(T.points, T.weights, center, R1, [](Eigen::Index) { return 1.0; });
  r.tol = 3.0 * T.delta * mass;
  r.holds = r.lhs <= r.rhs + r.tol;
  return r;
}

RawDiagnostics raw_diagnostics(const VarifoldSample& T, const OpenBook& S, const Vec& q0) {
  check_center(T, q0);
  if (S.dim() != T.dim()) throw ValidationError("sample and book dimensions differ");
  require_tangents(T);
  const int m = T.m;
  const Vec origin = Vec::Zero(T.dim());
  const Eigen::MatrixXd PV = S.spine * S.spine.transpose();
  const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(T.dim(), T.dim());
  RawDiagnostics d;
  d.hardt_simon = ball_sum(T.points, T.weights, origin, 1.0, [&](Eigen::Index j) {
    const Vec q = T.points.col(j) - q0;
    const double n = q.norm();
    if (n == 0.0) return 0.0;
    return dist2_to_book(q, S) / std::pow(n, m + 1.75);
  });
  d.reverse_poincare = ball_sum(T.points, T.weights, origin, 11.0 / 6.0, [&](Eigen::Index j) {
    const Vec q = T.points.col(j);
    const Eigen::MatrixXd& P = T.tangent(j);
    const Eigen::MatrixXd Pperp = I - P * P.transpose();
    const double n = q.norm();
    const double perp = n == 0.0 ? 0.0 : (q - P * (P.transpose() * q)).squaredNorm() / std::pow(n, m + 2);
    return (PV * Pperp).squaredNorm() + perp;
  });
  return d;
}

json monotonicity_to_json(const MonotonicityReport& r) {
  return json{{"center", vec_to_json(r.center)},
              {"radii", r.radii},
              {"density", r.density},
              {"k", r.k},
              {"alpha", r.alpha},
              {"R1", r.R1},
              {"lhs", r.lhs},
              {"rhs_main", r.rhs_main},
              {"rhs_perp", r.rhs_perp},
              {"rhs_curvature", r.rhs_curvature},
              {"rhs", r.rhs},
              {"residual", r.residual},
              {"tol", r.tol},
              {"A_hat", r.A_hat},
              {"holds", r.holds}};
}

json cone_comparison_to_json(const ConeComparisonReport& r) {
  return json{{"R1", r.R1},           {"cone_term", r.cone_term}, {"mass_term", r.mass_term},
              {"perp_term", r.perp_term}, {"lhs", r.lhs},         {"rhs", r.rhs},
              {"F0", r.F0},           {"theta_T", r.theta_T},     {"theta_C", r.theta_C},
              {"tol", r.tol},         {"holds", r.holds}};
}

std::string monotonicity_to_csv(const MonotonicityReport& r) {
  std::ostringstream os;
  os << "r,density\n";
  for (std::size_t i = 0; i < r.radii.size(); ++i) {
    os << format_double(r.radii[i]) << ',' << format_double(r.density[i]) << '\n';
  }
  return os.str();
}

}  // namespace modp
