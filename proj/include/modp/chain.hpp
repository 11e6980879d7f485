#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace modp {

using Vec = Eigen::VectorXd;

// Bad input: malformed files, violated preconditions. CLI exit code 2.
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A solver gave up (iteration cap, non-convergence). CLI exit code 3.
class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

int64_t checked_add(int64_t a, int64_t b);
int64_t checked_mul(int64_t a, int64_t b);

// Representative of a mod p in (-p/2, p/2].
int64_t reduce_coeff(int64_t a, int64_t p);

using Simplex = std::vector<int>;

struct Incidence {
  int64_t row;
  int sign;
};

// Oriented simplicial complex. simplices(0) are the vertices themselves.
// Faces missing from the input are added with ascending vertex order.
class SimplicialComplex {
 public:
  SimplicialComplex(std::vector<Vec> vertices,
                    std::vector<std::vector<Simplex>> simplices_by_degree);

  int top_degree() const { return static_cast<int>(simplices_.size()) - 1; }
  int ambient_dim() const { return dim_; }
  std::size_t count(int k) const;
  const Simplex& simplex(int k, std::size_t i) const;
  double volume(int k, std::size_t i) const;
  const std::vector<double>& volumes(int k) const;
  const Vec& vertex(std::size_t i) const { return vertices_[i]; }
  std::size_t num_vertices() const { return vertices_.size(); }
  const std::vector<Vec>& vertices() const { return vertices_; }

  // Boundary column of the k-simplex i: (face index, sign) pairs.
  const std::vector<Incidence>& boundary_column(int k, std::size_t i) const;
  // Cofaces of the (k-1)-simplex j among the k-simplices.
  const std::vector<Incidence>& coboundary_row(int k, std::size_t j) const;

  std::optional<std::size_t> find(int k, const Simplex& s) const;

 private:
  void add_simplex(int k, const Simplex& s);

  int dim_ = 0;
  std::vector<Vec> vertices_;
  std::vector<std::vector<Simplex>> simplices_;
  std::vector<std::vector<double>> volumes_;
  std::vector<std::map<Simplex, std::size_t>> lookup_;
  std::vector<std::vector<std::vector<Incidence>>> columns_;
  std::vector<std::vector<std::vector<Incidence>>> rows_;
};

class IntegerChain {
 public:
  IntegerChain() = default;
  explicit IntegerChain(int degree) : degree_(degree) {}

  int degree() const { return degree_; }
  const std::map<std::size_t, int64_t>& coeffs() const { return coeffs_; }
  int64_t get(std::size_t i) const;
  void set(std::size_t i, int64_t v);
  void add(std::size_t i, int64_t v);
  bool is_zero() const { return coeffs_.empty(); }
  int64_t max_abs() const;

  IntegerChain operator+(const IntegerChain& o) const;
  IntegerChain operator-(const IntegerChain& o) const;
  IntegerChain scaled(int64_t s) const;
  bool operator==(const IntegerChain& o) const = default;

 private:
  int degree_ = 0;
  std::map<std::size_t, int64_t> coeffs_;
};

struct ModPClass {
  int64_t p = 2;
  IntegerChain representative;
};

IntegerChain boundary(const SimplicialComplex& K, const IntegerChain& c);
double mass(const SimplicialComplex& K, const IntegerChain& c);
ModPClass reduce_modp(const IntegerChain& c, int64_t p);
bool is_cycle_modp(const SimplicialComplex& K, const IntegerChain& c, int64_t p);
bool congruent_modp(const IntegerChain& a, const IntegerChain& b, int64_t p);

// Set of simplices per degree. An empty optional for a degree means "all".
struct Region {
  std::vector<std::optional<std::vector<bool>>> member;

  static Region whole();
  static Region empty(const SimplicialComplex& K);
  bool contains(int k, std::size_t i) const;
  // Adds every face of every listed top simplex.
  static Region closure_of(const SimplicialComplex& K, int k,
                           const std::vector<std::size_t>& top);
};

double mass_in(const SimplicialComplex& K, const IntegerChain& c, const Region& W);
IntegerChain restrict_to(const IntegerChain& c, const Region& W);

}  // namespace modp
