#include "modp/taylor.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <queue>
#include <sstream>

#include "modp/flat.hpp"
#include "modp/mesh.hpp"
#include "modp/parallel.hpp"

namespace modp {

namespace {

constexpr double kTwoPi = 2 * M_PI;

double point_segment_distance(const Eigen::Vector2d& q, const Eigen::Vector2d& a, const Eigen::Vector2d& b) {
  const Eigen::Vector2d d = b - a;
  const double L2 = d.squaredNorm();
  const double t = L2 > 0 ? std::clamp((q - a).dot(d) / L2, 0.0, 1.0) : 0.0;
  return (a + t * d - q).norm();
}

double point_polyline_distance(const Eigen::Vector2d& q, const std::vector<Eigen::Vector2d>& pts) {
  if (pts.size() == 1) return (q - pts[0]).norm();
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i < pts.size(); ++i) best = std::min(best, point_segment_distance(q, pts[i - 1], pts[i]));
  return best;
}

Eigen::Vector2d rotate(const Eigen::Vector2d& v, double a) {
  return {std::cos(a) * v[0] - std::sin(a) * v[1], std::sin(a) * v[0] + std::cos(a) * v[1]};
}

// Triangles of the disk mesh whose centroid lies within width of a ray [0, dir].
SimplicialComplex strip_complex(double h, const std::vector<Eigen::Vector2d>& dirs, double width) {
  const SimplicialComplex D = disk_mesh(h);
  std::map<int, int> remap;
  std::vector<Vec> verts;
  std::vector<std::vector<Simplex>> s(3);
  for (std::size_t t = 0; t < D.count(2); ++t) {
    const Simplex& tri = D.simplex(2, t);
    Eigen::Vector2d c = Eigen::Vector2d::Zero();
    for (int v : tri) c += Eigen::Vector2d(D.vertex(v)[0], D.vertex(v)[1]) / 3.0;
    bool near = false;
    for (const auto& d : dirs) near = near || point_segment_distance(c, Eigen::Vector2d::Zero(), d) <= width;
    if (!near) continue;
    Simplex nt;
    for (int v : tri) {
      auto [it, fresh] = remap.emplace(v, static_cast<int>(verts.size()));
      if (fresh) verts.push_back(D.vertex(v));
      nt.push_back(it->second);
    }
    s[2].push_back(nt);
  }
  return SimplicialComplex(std::move(verts), std::move(s));
}

// Snaps the points to vertices and joins consecutive vertices by shortest edge paths.
void add_projected_path(const SimplicialComplex& K, const std::vector<Eigen::Vector2d>& pts, int64_t mult,
                        IntegerChain& chain) {
  std::vector<std::size_t> snapped;
  for (const auto& q : pts) {
    Vec v(2);
    v << q[0], q[1];
    const std::size_t id = nearest_vertex(K, v);
    if (snapped.empty() || snapped.back() != id) snapped.push_back(id);
  }
  const std::size_t n = K.num_vertices();
  for (std::size_t i = 0; i + 1 < snapped.size(); ++i) {
    const std::size_t a = snapped[i], b = snapped[i + 1];
    std::vector<double> dist(n, std::numeric_limits<double>::infinity());
    std::vector<std::size_t> prev(n, n), via(n, 0);
    using Item = std::pair<double, std::size_t>;
    std::priority_queue<Item, std::vector<Item>, std::greater<Item>> pq;
    dist[a] = 0;
    pq.push({0, a});
    while (!pq.empty()) {
      const auto [d, v] = pq.top();
      pq.pop();
      if (d > dist[v]) continue;
      if (v == b) break;
      for (const Incidence& e : K.coboundary_row(1, v)) {
        const Simplex& s = K.simplex(1, e.row);
        const std::size_t u = s[0] == static_cast<int>(v) ? s[1] : s[0];
        const double nd = d + K.volume(1, e.row);
        if (nd < dist[u]) {
          dist[u] = nd;
          prev[u] = v;
          via[u] = e.row;
          pq.push({nd, u});
        }
      }
    }
    if (prev[b] == n) throw SolverError("projection: strip complex is disconnected");
    for (std::size_t v = b; v != a; v = prev[v]) {
      const Simplex& s = K.simplex(1, via[v]);
      chain.add(via[v], s[1] == static_cast<int>(v) ? mult : -mult);
    }
  }
}

}  // namespace

VarifoldSample revolve_network(const WeightedNetwork& net, double delta) {
  if (!(delta > 0)) throw ValidationError("sample delta must be positive");
  std::vector<Eigen::Vector3d> pts;
  std::vector<double> w;
  for (const NetworkArc& arc : net.arcs) {
    const auto& P = arc.path.pts;
    std::vector<double> cum(P.size(), 0.0);
    for (std::size_t i = 1; i < P.size(); ++i) cum[i] = cum[i - 1] + (P[i] - P[i - 1]).norm();
    const double len = cum.back();
    if (len <= 0) continue;
    const int cells = std::max(1, static_cast<int>(std::ceil(len / delta)));
    const double ds = len / cells;
    std::size_t seg = 1;
    for (int c = 0; c < cells; ++c) {
      const double s = (c + 0.5) * ds;
      while (seg + 1 < P.size() && cum[seg] < s) ++seg;
      const double span = cum[seg] - cum[seg - 1];
      const double t = span > 0 ? (s - cum[seg - 1]) / span : 0.0;
      const Eigen::Vector2d q = P[seg - 1] + t * (P[seg] - P[seg - 1]);
      if (q[0] <= 0) continue;
      const int nphi = std::max(8, static_cast<int>(std::ceil(kTwoPi * q[0] / delta)));
      const double cell_w = static_cast<double>(arc.multiplicity) * kTwoPi * q[0] * ds / nphi;
      for (int k = 0; k < nphi; ++k) {
        const double phi = kTwoPi * (k + 0.5) / nphi;
        pts.emplace_back(q[0] * std::cos(phi), q[0] * std::sin(phi), q[1]);
        w.push_back(cell_w);
      }
    }
  }
  VarifoldSample out;
  out.m = 2;
  out.delta = delta;
  out.points.resize(3, static_cast<Eigen::Index>(pts.size()));
  out.weights.resize(static_cast<Eigen::Index>(w.size()));
  for (std::size_t j = 0; j < pts.size(); ++j) {
    out.points.col(static_cast<Eigen::Index>(j)) = pts[j];
    out.weights[static_cast<Eigen::Index>(j)] = w[j];
  }
  return out;
}

std::vector<SingularCircle> singular_circles(const WeightedNetwork& net) {
  std::vector<SingularCircle> out;
  for (std::size_t k = 0; k < net.junctions.size(); ++k) {
    const int v = net.junctions[k];
    SingularCircle c;
    c.pos = net.nodes[v].pos;
    c.node = v;
    for (const NetworkArc& a : net.arcs) {
      if (a.from == v) {
        c.tangents.push_back(a.start_tangent);
        c.multiplicities.push_back(a.multiplicity);
      }
      if (a.to == v) {
        c.tangents.push_back(-a.end_tangent);
        c.multiplicities.push_back(-a.multiplicity);
      }
    }
    c.balance_residual = k < net.balance_residuals.size() ? net.balance_residuals[k] : 0.0;
    if (c.tangents.size() == 3) {
      for (int i = 0; i < 3; ++i) {
        for (int j = i + 1; j < 3; ++j) {
          const double ang = std::acos(std::clamp(c.tangents[i].dot(c.tangents[j]), -1.0, 1.0)) * 180 / M_PI;
          c.max_angle_error_deg = std::max(c.max_angle_error_deg, std::abs(ang - 120.0));
        }
      }
    }
    out.push_back(c);
  }
  return out;
}

double single_geodesic_residual(const std::vector<Eigen::Vector2d>& pts, const WeightedMetric& metric) {
  if (pts.size() < 3) return 0.0;
  double span = 0.0;
  for (const auto& a : pts) {
    for (const auto& b : pts) span = std::max(span, (a - b).norm());
  }
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < pts.size(); ++i) {
    for (std::size_t j = i + 1; j < pts.size(); ++j) {
      GeodesicArc g;
      try {
        g = geodesic_between(pts[i], pts[j], metric);
      } catch (const SolverError&) {
        continue;
      }
      const ShotResult fwd = geodesic_shoot(pts[j], g.end_tangent, 3 * span, metric);
      const ShotResult bwd = geodesic_shoot(pts[i], -g.start_tangent, 3 * span, metric);
      double worst = 0.0;
      for (std::size_t k = 0; k < pts.size(); ++k) {
        if (k == i || k == j) continue;
        const double d = std::min({point_polyline_distance(pts[k], g.path.pts),
                                   point_polyline_distance(pts[k], fwd.path.pts),
                                   point_polyline_distance(pts[k], bwd.path.pts)});
        worst = std::max(worst, d);
      }
      best = std::min(best, worst);
    }
  }
  return best;
}

RevolvedCurrent build_taylor_example(int64_t p, const std::vector<double>& angles_deg, double radius,
                                     const WeightedMetric& metric, const TaylorOptions& opt) {
  if (p < 3) throw ValidationError("the Taylor example needs p >= 3");
  if (static_cast<int64_t>(angles_deg.size()) != p) throw ValidationError("need exactly p terminal angles");
  if (!(radius > 0)) throw ValidationError("radius must be positive");
  if (!metric.conformal()) throw ValidationError("the Taylor example needs a conformal weight (x or sqrtx)");
  std::vector<Terminal> terminals;
  std::vector<Eigen::Vector2d> pts;
  for (double a : angles_deg) {
    const Eigen::Vector2d q(radius * std::cos(a * M_PI / 180), radius * std::sin(a * M_PI / 180));
    if (!(q[0] >= 1e-3 * radius)) throw ValidationError("terminal angles must keep x >= 1e-3 radius");
    for (const auto& o : pts) {
      if ((o - q).norm() < 1e-12 * radius) throw ValidationError("terminal angles must be distinct");
    }
    pts.push_back(q);
    terminals.push_back({q, 1});
  }
  if (single_geodesic_residual(pts, metric) <= 1e-6 * radius) {
    throw ValidationError("no singular circle (degenerate): terminals lie on a single geodesic");
  }
  NetworkOptions nopt = opt.network;
  nopt.min_x = std::max(nopt.min_x, 1e-3 * radius);
  RevolvedCurrent R;
  R.p = p;
  R.radius = radius;
  R.angles_deg = angles_deg;
  R.generator = solve_network(terminals, p, metric, nopt);
  R.circles = singular_circles(R.generator);
  if (R.circles.empty()) throw ValidationError("no singular circle (degenerate)");
  R.delta = opt.delta;
  R.sample = revolve_network(R.generator, opt.delta);
  return R;
}

Vec circle_point(const SingularCircle& c, double phi) {
  Vec q(3);
  q << c.pos[0] * std::cos(phi), c.pos[0] * std::sin(phi), c.pos[1];
  return q;
}

OpenBook tangent_book(const SingularCircle& c, double phi) {
  Eigen::MatrixXd spine(3, 1), plane(3, 2);
  spine << -std::sin(phi), std::cos(phi), 0;
  plane << std::cos(phi), 0, std::sin(phi), 0, 0, 1;
  return OpenBook::make(2, 1, spine, plane, c.tangents);
}

int circle_through(const RevolvedCurrent& R, const Vec& q, double tol) {
  if (q.size() != 3) throw ValidationError("point must have 3 coordinates");
  for (std::size_t i = 0; i < R.circles.size(); ++i) {
    const double rho = std::hypot(q[0], q[1]);
    const double d = std::hypot(rho - R.circles[i].pos[0], q[2] - R.circles[i].pos[1]);
    if (d <= tol * std::max(1.0, R.radius)) return static_cast<int>(i);
  }
  throw ValidationError("point is not on a singular circle");
}

MeshCrossCheck taylor_mesh_crosscheck(const RevolvedCurrent& R, double h) {
  StencilGraphSpec spec;
  spec.h = h * R.radius;
  spec.radius = R.radius;
  spec.x_min = 1e-3 * R.radius;
  std::vector<std::pair<Eigen::Vector2d, int64_t>> terms;
  for (const NetworkNode& n : R.generator.nodes) {
    if (!n.terminal) continue;
    Vec v(2);
    v << n.pos[0], n.pos[1];
    spec.extra_points.push_back(v);
    terms.push_back({n.pos, n.boundary});
  }
  const SimplicialComplex K = half_disk_stencil_graph(spec);
  IntegerChain b(0);
  for (const auto& [pos, mult] : terms) {
    Vec v(2);
    v << pos[0], pos[1];
    b.add(nearest_vertex(K, v), mult);
  }
  MeshCrossCheck out;
  out.h = spec.h;
  out.edges = K.count(1);
  out.network_mass = R.generator.mass;
  if (R.generator.metric.conformal()) {
    const std::vector<double> w = weighted_edge_lengths(K, R.generator.metric.kind == WeightKind::kSqrtX);
    out.mesh_mass = plateau_modp(K, reduce_modp(b, R.p), PlateauMethod::kGraph, &w).mass;
  } else {
    out.mesh_mass = plateau_modp(K, reduce_modp(b, R.p), PlateauMethod::kGraph).mass;
  }
  return out;
}

std::vector<double> excess_ladder(const VarifoldSample& T, const OpenBook& S, const Vec& q,
                                  const std::vector<double>& radii) {
  std::vector<double> out(radii.size());
#pragma omp parallel for schedule(dynamic) num_threads(thread_budget())
  for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(radii.size()); ++i) {
    out[i] = excess(T, S, q, radii[i]);
  }
  return out;
}

double cross_section_flat_distance(const WeightedNetwork& net, const SingularCircle& c, double r,
                                   const DecayOptions& opt) {
  if (!(r > 0)) throw ValidationError("radius must be positive");
  // rotate so the first tangent lies on a mesh spoke (90 degrees)
  const double rot = M_PI / 2 - std::atan2(c.tangents[0][1], c.tangents[0][0]);
  std::vector<Eigen::Vector2d> dirs;
  for (const auto& t : c.tangents) dirs.push_back(rotate(t, rot));
  const SimplicialComplex K = strip_complex(opt.flat_h, dirs, opt.strip_width);
  const double inner = 1.0 - 0.25 * opt.flat_h;
  IntegerChain T(1), C(1);
  for (const NetworkArc& a : net.arcs) {
    std::vector<Eigen::Vector2d> run;
    const auto flush = [&]() {
      if (run.size() >= 2) add_projected_path(K, run, static_cast<int64_t>(a.multiplicity), T);
      run.clear();
    };
    for (const auto& q : a.path.pts) {
      const Eigen::Vector2d z = rotate((q - c.pos) / r, rot);
      if (z.norm() <= inner) {
        run.push_back(z);
      } else {
        flush();
      }
    }
    flush();
  }
  const int steps = static_cast<int>(std::ceil(8 / opt.flat_h));
  for (std::size_t i = 0; i < dirs.size(); ++i) {
    std::vector<Eigen::Vector2d> ray;
    for (int k = 0; k <= steps; ++k) ray.push_back(dirs[i] * (inner * k / steps));
    const int64_t m = c.multiplicities[i];
    if (m < 0) std::reverse(ray.begin(), ray.end());
    add_projected_path(K, ray, std::abs(m), C);
  }
  return flat_distance_modp(K, T, C, net.p);
}

double fit_decay_constant(const std::vector<double>& radii, const std::vector<double>& values, double alpha) {
  if (radii.size() < 2 || values[0] <= 0) return 1.0;
  const double ratio = values[1] / values[0] / std::pow(radii[1] / radii[0], alpha);
  return std::max(1.0, ratio);
}

DecayScan decay_scan(const RevolvedCurrent& R, const Vec& q, const std::vector<double>& radii,
                     const DecayOptions& opt) {
  if (radii.empty()) throw ValidationError("need at least one radius");
  for (std::size_t i = 0; i < radii.size(); ++i) {
    if (!(radii[i] > 0)) throw ValidationError("radii must be positive");
    if (i > 0 && !(radii[i] < radii[i - 1])) throw ValidationError("radii must be decreasing");
  }
  const int ci = circle_through(R, q);
  const SingularCircle& c = R.circles[ci];
  const double phi = std::atan2(q[1], q[0]);
  const OpenBook S = tangent_book(c, phi);
  const std::vector<double> ex = excess_ladder(R.sample, S, circle_point(c, phi), radii);
  std::vector<double> fl(radii.size(), 0.0);
  if (opt.flat) {
#pragma omp parallel for schedule(dynamic) num_threads(thread_budget())
    for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(radii.size()); ++i) {
      fl[i] = cross_section_flat_distance(R.generator, c, radii[i], opt);
    }
  }
  DecayScan d;
  for (std::size_t i = 0; i < radii.size(); ++i) d.rows.push_back({radii[i], ex[i], fl[i]});
  d.fitted_C = fit_decay_constant(radii, ex, 0.5);
  d.fitted_C_flat = fit_decay_constant(radii, fl, 0.25);
  d.monotone = d.flat_monotone = d.excess_bound_holds = d.flat_bound_holds = true;
  for (std::size_t i = 1; i < radii.size(); ++i) {
    const double s = radii[i] / radii[0];
    d.monotone = d.monotone && ex[i] <= ex[i - 1] * (1 + 1e-12) + 1e-300;
    d.flat_monotone = d.flat_monotone && fl[i] <= fl[i - 1] * (1 + 1e-12);
    d.excess_bound_holds = d.excess_bound_holds && ex[i] <= d.fitted_C * std::sqrt(s) * ex[0] * (1 + 1e-12);
    d.flat_bound_holds = d.flat_bound_holds && fl[i] <= d.fitted_C_flat * std::pow(s, 0.25) * fl[0] * (1 + 1e-12);
  }
  // log-log slope over the rungs with positive excess
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int n = 0;
  for (std::size_t i = 0; i < radii.size(); ++i) {
    if (ex[i] <= 0) continue;
    const double x = std::log(radii[i]), y = std::log(ex[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++n;
  }
  d.excess_rate = n >= 2 ? (n * sxy - sx * sy) / (n * sxx - sx * sx) : 0.0;
  return d;
}

json revolved_to_json(const RevolvedCurrent& R) {
  json circles = json::array();
  for (const SingularCircle& c : R.circles) {
    json tans = json::array();
    for (const auto& t : c.tangents) tans.push_back({t[0], t[1]});
    circles.push_back({{"x", c.pos[0]},
                       {"y", c.pos[1]},
                       {"node", c.node},
                       {"tangents", tans},
                       {"multiplicities", c.multiplicities},
                       {"balance_residual", c.balance_residual},
                       {"max_angle_error_deg", c.max_angle_error_deg}});
  }
  return {{"p", R.p},
          {"radius", R.radius},
          {"angles", R.angles_deg},
          {"weight", R.generator.metric.name()},
          {"delta", R.delta},
          {"generator", network_to_json(R.generator)},
          {"singular_circles", circles},
          {"sample", {{"points", R.sample.size()}, {"total_weight", R.sample.total_weight()}}}};
}

RevolvedCurrent revolved_from_json(const json& j) {
  RevolvedCurrent R;
  try {
    R.p = j.at("p").get<int64_t>();
    R.radius = j.at("radius").get<double>();
    R.angles_deg = j.at("angles").get<std::vector<double>>();
    R.delta = j.at("delta").get<double>();
    R.generator = network_from_json(j.at("generator"));
  } catch (const json::exception& e) {
    throw ValidationError(std::string("malformed surface JSON: ") + e.what());
  }
  R.circles = singular_circles(R.generator);
  R.sample = revolve_network(R.generator, R.delta);
  return R;
}

json decay_to_json(const DecayScan& d) {
  json rows = json::array();
  for (const DecayRow& r : d.rows) rows.push_back({{"r", r.r}, {"excess", r.excess}, {"flat_distance", r.flat_distance}});
  return {{"rows", rows},
          {"fitted_C", d.fitted_C},
          {"fitted_C_flat", d.fitted_C_flat},
          {"excess_rate", d.excess_rate},
          {"monotone", d.monotone},
          {"excess_bound_holds", d.excess_bound_holds},
          {"flat_monotone", d.flat_monotone},
          {"flat_bound_holds", d.flat_bound_holds}};
}

std::string decay_to_csv(const DecayScan& d) {
  std::ostringstream os;
  os << "r,excess,flat_distance,fitted_C\n";
  for (const DecayRow& r : d.rows) {
    os << format_double(r.r) << ',' << format_double(r.excess) << ',' << format_double(r.flat_distance) << ','
       << format_double(d.fitted_C) << '\n';
  }
  return os.str();
}

}  // namespace modp
