#include "modp/cone1d.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace modp {

void RayConfiguration::validate() const {
  if (p < 2) throw ValidationError("modulus p must be at least 2");
  if (dirs.empty()) throw ValidationError("configuration has no rays");
  if (kappa.size() != dirs.size() || signs.size() != dirs.size()) {
    throw ValidationError("one multiplicity and one sign per ray required");
  }
  for (std::size_t i = 0; i < dirs.size(); ++i) {
    if (std::abs(dirs[i].norm() - 1) > 1e-12) throw ValidationError("ray directions must be unit vectors");
    if (kappa[i] < 1) throw ValidationError("multiplicities must be positive");
    if (signs[i] != 1 && signs[i] != -1) throw ValidationError("signs must be +1 or -1");
    for (std::size_t j = 0; j < i; ++j) {
      if ((dirs[i] - dirs[j]).norm() < 1e-12) throw ValidationError("ray directions must be distinct");
    }
  }
}

int64_t RayConfiguration::total() const {
  int64_t t = 0;
  for (int64_t k : kappa) t = checked_add(t, k);
  return t;
}

std::vector<std::string> StructureReport::failures() const {
  std::vector<std::string> f;
  if (!balanced) f.push_back("balanced");
  if (!sum_is_p) f.push_back("sum_is_p");
  if (!multiplicity_bounds) f.push_back("multiplicity_bounds");
  if (!at_least_three) f.push_back("at_least_three");
  if (!consistent_signs) f.push_back("consistent_signs");
  return f;
}

StructureReport check_structure(const RayConfiguration& cfg) {
  cfg.validate();
  StructureReport r;
  Eigen::Vector2d s = Eigen::Vector2d::Zero();
  bool bounds = true;
  for (std::size_t i = 0; i < cfg.dirs.size(); ++i) {
    s += static_cast<double>(cfg.kappa[i]) * cfg.dirs[i];
    if (2 * cfg.kappa[i] >= cfg.p) bounds = false;
  }
  r.balance_residual = s.norm();
  r.balanced = r.balance_residual <= 1e-9;
  r.total_multiplicity = cfg.total();
  r.sum_is_p = r.total_multiplicity == cfg.p;
  r.multiplicity_bounds = bounds;
  r.at_least_three = cfg.dirs.size() >= 3;
  r.consistent_signs = std::all_of(cfg.signs.begin(), cfg.signs.end(), [&](int x) { return x == cfg.signs[0]; });
  return r;
}

CompetitorCertificate segment_swap_certificate(const RayConfiguration& cfg, std::size_t i, std::size_t j) {
  cfg.validate();
  if (i >= cfg.dirs.size() || j >= cfg.dirs.size() || i == j) throw ValidationError("ray indices invalid");
  if (cfg.signs[i] == cfg.signs[j]) throw ValidationError("segment swap needs rays of opposite orientation");
  const Eigen::Vector2d& vi = cfg.dirs[i];
  const Eigen::Vector2d& vj = cfg.dirs[j];
  if ((vi + vj).norm() < 1e-12) throw ValidationError("swap degenerate: rays are antipodal");
  // a = the inward ray; S = [0, a] - [0, b] + [a, b] lowers both coefficients
  const std::size_t a = cfg.signs[i] < 0 ? i : j;
  const std::size_t b = a == i ? j : i;
  CompetitorCertificate c;
  c.kind = "segment_swap";
  c.replaced_rays = {i, j};
  c.added_segments = {{Eigen::Vector2d::Zero(), cfg.dirs[a], 1},
                      {Eigen::Vector2d::Zero(), cfg.dirs[b], -1},
                      {cfg.dirs[a], cfg.dirs[b], 1}};
  // per-segment tally on the unit ball
  const int64_t ka = -cfg.kappa[a], kb = cfg.kappa[b];
  const double da = static_cast<double>(std::abs(ka + 1) - std::abs(ka));
  const double db = static_cast<double>(std::abs(kb - 1) - std::abs(kb));
  c.mass_change = (da + db) + (cfg.dirs[a] - cfg.dirs[b]).norm();
  return c;
}

Eigen::Vector2d weighted_fermat_point(const std::vector<Eigen::Vector2d>& pts, const std::vector<double>& w) {
  if (pts.empty() || pts.size() != w.size()) throw ValidationError("Fermat point needs weighted points");
  for (std::size_t k = 0; k < pts.size(); ++k) {
    Eigen::Vector2d pull = Eigen::Vector2d::Zero();
    for (std::size_t j = 0; j < pts.size(); ++j) {
      if (j == k) continue;
      const double d = (pts[k] - pts[j]).norm();
      if (d > 0) pull += w[j] * (pts[k] - pts[j]) / d;
    }
    if (pull.norm() <= w[k]) return pts[k];
  }
  double W = 0.0;
  Eigen::Vector2d y = Eigen::Vector2d::Zero();
  for (std::size_t j = 0; j < pts.size(); ++j) {
    y += w[j] * pts[j];
    W += w[j];
  }
  y /= W;
  for (int it = 0; it < 100000; ++it) {
    Eigen::Vector2d num = Eigen::Vector2d::Zero();
    double den = 0.0;
    for (std::size_t j = 0; j < pts.size(); ++j) {
      const double d = std::max((pts[j] - y).norm(), 1e-300);
      num += w[j] * pts[j] / d;
      den += w[j] / d;
    }
    const Eigen::Vector2d next = num / den;
    const double step = (next - y).norm();
    y = next;
    if (step < 1e-15) break;
  }
  return y;
}

Eigen::Vector2d find_heavy_hemisphere(const RayConfiguration& cfg) {
  cfg.validate();
  if (cfg.total() < 2 * cfg.p) throw ValidationError("hypothesis sum kappa >= 2p not witnessed");
  // the weight of the half-plane changes only where the boundary line hits a ray
  std::vector<double> crit;
  for (const auto& v : cfg.dirs) {
    const double a = std::atan2(v[1], v[0]);
    crit.push_back(std::remainder(a + M_PI / 2, 2 * M_PI));
    crit.push_back(std::remainder(a - M_PI / 2, 2 * M_PI));
  }
  std::sort(crit.begin(), crit.end());
  Eigen::Vector2d best = Eigen::Vector2d::Zero();
  int64_t best_w = -1;
  for (std::size_t k = 0; k < crit.size(); ++k) {
    const double lo = crit[k];
    const double hi = k + 1 < crit.size() ? crit[k + 1] : crit[0] + 2 * M_PI;
    if (hi - lo < 1e-9) continue;
    const double t = 0.5 * (lo + hi);
    const Eigen::Vector2d nu(std::cos(t), std::sin(t));
    int64_t w = 0;
    for (std::size_t i = 0; i < cfg.dirs.size(); ++i) {
      if (cfg.dirs[i].dot(nu) > 0) w += cfg.kappa[i];
    }
    if (w > best_w) {
      best_w = w;
      best = nu;
    }
  }
  if (best_w < cfg.p) throw ValidationError("hypothesis sum kappa >= 2p not witnessed");
  return best;
}

CompetitorCertificate barycenter_certificate(const RayConfiguration& cfg, const Eigen::Vector2d& normal) {
  cfg.validate();
  if (!(normal.norm() > 0)) throw ValidationError("hemisphere normal must be nonzero");
  if (cfg.total() < 2 * cfg.p) throw ValidationError("hypothesis sum kappa >= 2p not witnessed");
  const Eigen::Vector2d nu = normal.normalized();
  std::vector<std::size_t> plus;
  int64_t heavy = 0;
  for (std::size_t i = 0; i < cfg.dirs.size(); ++i) {
    const double s = cfg.dirs[i].dot(nu);
    if (std::abs(s) < 1e-12) throw ValidationError("a ray lies on the hemisphere boundary");
    if (s > 0) {
      plus.push_back(i);
      heavy += cfg.kappa[i];
    }
  }
  if (heavy < cfg.p) throw ValidationError("hypothesis sum kappa >= 2p not witnessed");
  std::stable_sort(plus.begin(), plus.end(),
                   [&](std::size_t a, std::size_t b) { return cfg.kappa[a] > cfg.kappa[b]; });
  CompetitorCertificate c;
  c.kind = "barycenter";
  int64_t left = cfg.p;
  std::vector<Eigen::Vector2d> pts;
  std::vector<double> w;
  for (std::size_t i : plus) {
    if (left == 0) break;
    const int64_t take = std::min(cfg.kappa[i], left);
    left -= take;
    c.replaced_rays.push_back(i);
    c.m_plus.push_back(take);
    pts.push_back(cfg.dirs[i]);
    w.push_back(static_cast<double>(take));
  }
  c.barycenter = Eigen::Vector2d::Zero();
  for (std::size_t k = 0; k < pts.size(); ++k) c.barycenter += w[k] * pts[k];
  c.barycenter /= static_cast<double>(cfg.p);
  c.z = weighted_fermat_point(pts, w);
  double drop = 0.0, bary = 0.0;
  for (std::size_t k = 0; k < pts.size(); ++k) {
    c.added_segments.push_back({c.z, pts[k], c.m_plus[k]});
    drop += w[k] * (pts[k] - c.z).norm();
    bary += w[k] * (pts[k] - c.barycenter).norm();
  }
  c.mass_change = drop - static_cast<double>(cfg.p);
  c.barycenter_mass_change = bary - static_cast<double>(cfg.p);
  return c;
}

RayConfiguration rays_from_json(const json& j) {
  RayConfiguration cfg;
  try {
    cfg.p = j.value("p", int64_t{0});
    for (const json& r : j.at("rays")) {
      Vec v = vec_from_json(r.at("dir"));
      if (v.size() != 2) throw ValidationError("ray direction needs two coordinates");
      if (!(v.norm() > 0)) throw ValidationError("ray direction must be nonzero");
      if (std::abs(v.norm() - 1) > 1e-12) v /= v.norm();
      cfg.dirs.emplace_back(v[0], v[1]);
      cfg.kappa.push_back(r.value("kappa", int64_t{1}));
      cfg.signs.push_back(r.value("sign", 1));
    }
  } catch (const json::exception& e) {
    throw ValidationError(std::string("malformed ray configuration: ") + e.what());
  }
  return cfg;
}

json rays_to_json(const RayConfiguration& cfg) {
  json rays = json::array();
  for (std::size_t i = 0; i < cfg.dirs.size(); ++i) {
    rays.push_back({{"dir", {cfg.dirs[i][0], cfg.dirs[i][1]}}, {"kappa", cfg.kappa[i]}, {"sign", cfg.signs[i]}});
  }
  return {{"p", cfg.p}, {"rays", rays}};
}

json structure_to_json(const StructureReport& r) {
  return {{"balanced", r.balanced},
          {"sum_is_p", r.sum_is_p},
          {"multiplicity_bounds", r.multiplicity_bounds},
          {"at_least_three", r.at_least_three},
          {"consistent_signs", r.consistent_signs},
          {"balance_residual", r.balance_residual},
          {"total_multiplicity", r.total_multiplicity},
          {"all_flags", r.all()},
          {"failed", r.failures()}};
}

json certificate_to_json(const CompetitorCertificate& c) {
  json segs = json::array();
  for (const Segment& s : c.added_segments) {
    segs.push_back({{"from", {s.from[0], s.from[1]}}, {"to", {s.to[0], s.to[1]}}, {"multiplicity", s.multiplicity}});
  }
  json j = {{"kind", c.kind},
            {"replaced_rays", c.replaced_rays},
            {"added_segments", segs},
            {"mass_change", c.mass_change},
            {"certifies_non_minimality", c.mass_change < 0}};
  if (c.kind == "barycenter") {
    j["m_plus"] = c.m_plus;
    j["z"] = {c.z[0], c.z[1]};
    j["barycenter"] = {c.barycenter[0], c.barycenter[1]};
    j["barycenter_mass_change"] = c.barycenter_mass_change;
  }
  return j;
}

}  // namespace modp
