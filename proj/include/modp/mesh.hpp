#pragma once

#include <cstdint>
#include <vector>

#include "modp/chain.hpp"

namespace modp {

// Vertices (0,0), (1,0), (0,1) and the single triangle [0,1,2].
SimplicialComplex unit_right_triangle_complex();

// Unit disk with n = ceil(1/h) concentric rings, ring i holding 6i vertices
// at angles 90 + 60 j / i degrees. Triangles are oriented counterclockwise.
SimplicialComplex disk_mesh(double h);

// Index of the vertex closest to x.
std::size_t nearest_vertex(const SimplicialComplex& K, const Vec& x);

// Triangular lattice of spacing h clipped to a planar domain, with extra
// vertices at the given points, joined by every segment of length <= reach*h
// that stays inside the domain. Returns a 1-dimensional complex.
struct StencilGraphSpec {
  double h = 0.05;
  double reach = 3.0;
  double radius = 1.0;
  double x_min = 1e-3;
  std::vector<Vec> extra_points;
};
SimplicialComplex half_disk_stencil_graph(const StencilGraphSpec& spec);

// Exact integral of w along each edge, w(x) = x or w(x) = sqrt(x).
std::vector<double> weighted_edge_lengths(const SimplicialComplex& K, bool sqrt_weight);

// A small 2D grid of 2*nx*ny right triangles on [0,nx]x[0,ny] scaled by s.
SimplicialComplex grid_complex(int nx, int ny, double s = 1.0);

}  // namespace modp
