#include "modp/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>

namespace modp {

namespace {

Vec pt(double x, double y) {
  Vec v(2);
  v << x, y;
  return v;
}

}  // namespace

SimplicialComplex unit_right_triangle_complex() {
  std::vector<Vec> v{pt(0, 0), pt(1, 0), pt(0, 1)};
  std::vector<std::vector<Simplex>> s(3);
  s[1] = {{0, 1}, {1, 2}, {2, 0}};
  s[2] = {{0, 1, 2}};
  return SimplicialComplex(std::move(v), std::move(s));
}

SimplicialComplex disk_mesh(double h) {
  if (!(h > 0) || h > 1) throw ValidationError("disk mesh size must be in (0, 1]");
  const int n = static_cast<int>(std::ceil(1.0 / h - 1e-12));
  std::vector<Vec> verts{pt(0, 0)};
  std::vector<int> ring_start{0};
  for (int i = 1; i <= n; ++i) {
    ring_start.push_back(static_cast<int>(verts.size()));
    const double r = static_cast<double>(i) / n;
    for (int j = 0; j < 6 * i; ++j) {
      const double a = std::numbers::pi / 2 + 2 * std::numbers::pi * j / (6.0 * i);
      verts.push_back(pt(r * std::cos(a), r * std::sin(a)));
    }
  }
  auto id = [&](int ring, int j) {
    if (ring == 0) return 0;
    return ring_start[ring] + (j % (6 * ring));
  };
  std::vector<std::vector<Simplex>> s(3);
  for (int i = 0; i < n; ++i) {
    for (int q = 0; q < 6; ++q) {
      for (int t = 0; t <= i; ++t) {
        s[2].push_back({id(i, i * q + t), id(i + 1, (i + 1) * q + t), id(i + 1, (i + 1) * q + t + 1)});
      }
      for (int t = 0; t < i; ++t) {
        s[2].push_back({id(i, i * q + t), id(i + 1, (i + 1) * q + t + 1), id(i, i * q + t + 1)});
      }
    }
  }
  return SimplicialComplex(std::move(verts), std::move(s));
}

std::size_t nearest_vertex(const SimplicialComplex& K, const Vec& x) {
  std::size_t best = 0;
  double bd = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < K.num_vertices(); ++i) {
    const double d = (K.vertex(i) - x).squaredNorm();
    if (d < bd) {
      bd = d;
      best = i;
    }
  }
  return best;
}

SimplicialComplex half_disk_stencil_graph(const StencilGraphSpec& spec) {
  const double h = spec.h;
  if (!(h > 0) || !(spec.reach >= 1)) throw ValidationError("stencil graph: bad spacing");
  auto inside = [&](const Vec& v) {
    return v[0] >= spec.x_min - 1e-12 && v.squaredNorm() <= spec.radius * spec.radius * (1 + 1e-12);
  };
  std::vector<Vec> verts;
  const double dy = h * std::sqrt(3.0) / 2;
  const int rows = static_cast<int>(std::ceil(spec.radius / dy));
  for (int r = -rows; r <= rows; ++r) {
    const double y = r * dy;
    const double shift = (r % 2 == 0) ? 0.0 : h / 2;
    for (int c = 0;; ++c) {
      const double x = spec.x_min + shift + c * h;
      if (x > spec.radius) break;
      Vec v = pt(x, y);
      if (!inside(v)) continue;
      bool near_extra = false;
      for (const Vec& e : spec.extra_points) near_extra |= (e - v).norm() < 0.25 * h;
      if (!near_extra) verts.push_back(v);
    }
  }
  for (const Vec& e : spec.extra_points) {
    if (!inside(e)) throw ValidationError("stencil graph: point outside the half disk");
    verts.push_back(e);
  }
  // bucket grid for neighbor search
  const double reach = spec.reach * h * (1 + 1e-9);
  const double cell = reach;
  auto key = [&](const Vec& v) {
    return std::pair<long, long>(std::lround(std::floor(v[0] / cell)), std::lround(std::floor(v[1] / cell)));
  };
  std::map<std::pair<long, long>, std::vector<int>> buckets;
  for (int i = 0; i < static_cast<int>(verts.size()); ++i) buckets[key(verts[i])].push_back(i);
  std::vector<std::vector<Simplex>> s(2);
  for (int i = 0; i < static_cast<int>(verts.size()); ++i) {
    const auto [bx, by] = key(verts[i]);
    for (long ox = -1; ox <= 1; ++ox) {
      for (long oy = -1; oy <= 1; ++oy) {
        auto it = buckets.find({bx + ox, by + oy});
        if (it == buckets.end()) continue;
        for (int j : it->second) {
          if (j <= i) continue;
          if ((verts[i] - verts[j]).norm() <= reach) s[1].push_back({i, j});
        }
      }
    }
  }
  std::sort(s[1].begin(), s[1].end());
  return SimplicialComplex(std::move(verts), std::move(s));
}

std::vector<double> weighted_edge_lengths(const SimplicialComplex& K, bool sqrt_weight) {
  std::vector<double> w(K.count(1));
  for (std::size_t e = 0; e < w.size(); ++e) {
    const Simplex& s = K.simplex(1, e);
    const Vec& a = K.vertex(s[0]);
    const Vec& b = K.vertex(s[1]);
    const double len = (b - a).norm();
    const double xa = a[0], xb = b[0];
    if (!sqrt_weight) {
      w[e] = len * (xa + xb) / 2;
    } else if (std::abs(xb - xa) < 1e-12) {
      w[e] = len * std::sqrt(xa);
    } else {
      w[e] = len * (2.0 / 3.0) * (std::pow(xb, 1.5) - std::pow(xa, 1.5)) / (xb - xa);
    }
  }
  return w;
}

SimplicialComplex grid_complex(int nx, int ny, double s) {
  std::vector<Vec> verts;
  for (int j = 0; j <= ny; ++j) {
    for (int i = 0; i <= nx; ++i) verts.push_back(pt(i * s, j * s));
  }
  auto id = [&](int i, int j) { return j * (nx + 1) + i; };
  std::vector<std::vector<Simplex>> t(3);
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      t[2].push_back({id(i, j), id(i + 1, j), id(i + 1, j + 1)});
      t[2].push_back({id(i, j), id(i + 1, j + 1), id(i, j + 1)});
    }
  }
  return SimplicialComplex(std::move(verts), std::move(t));
}

}  // namespace modp
