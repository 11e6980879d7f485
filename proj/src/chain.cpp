#include "modp/chain.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace modp {

int64_t checked_add(int64_t a, int64_t b) {
  int64_t r;
  if (__builtin_add_overflow(a, b, &r)) throw ValidationError("integer overflow in chain arithmetic");
  return r;
}

int64_t checked_mul(int64_t a, int64_t b) {
  int64_t r;
  if (__builtin_mul_overflow(a, b, &r)) throw ValidationError("integer overflow in chain arithmetic");
  return r;
}

int64_t reduce_coeff(int64_t a, int64_t p) {
  int64_t r = a % p;
  if (r < 0) r += p;
  // r in [0, p); move to (-p/2, p/2]
  if (2 * r > p) r -= p;
  return r;
}

namespace {

Simplex sorted_key(const Simplex& s) {
  Simplex k = s;
  std::sort(k.begin(), k.end());
  return k;
}

// Sign of the permutation taking a to b (same vertex set).
int relative_sign(const Simplex& a, const Simplex& b) {
  Simplex perm(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    perm[i] = static_cast<int>(std::find(b.begin(), b.end(), a[i]) - b.begin());
  }
  int sign = 1;
  std::vector<bool> seen(perm.size(), false);
  for (std::size_t i = 0; i < perm.size(); ++i) {
    if (seen[i]) continue;
    std::size_t len = 0;
    for (std::size_t j = i; !seen[j]; j = perm[j]) {
      seen[j] = true;
      ++len;
    }
    if (len % 2 == 0) sign = -sign;
  }
  return sign;
}

double simplex_volume(const std::vector<Vec>& verts, const Simplex& s, double* scale) {
  const int k = static_cast<int>(s.size()) - 1;
  const Vec& v0 = verts[s[0]];
  Eigen::MatrixXd E(v0.size(), k);
  double longest = 0.0;
  for (int i = 0; i < k; ++i) {
    E.col(i) = verts[s[i + 1]] - v0;
    longest = std::max(longest, E.col(i).norm());
  }
  *scale = longest;
  const double det = (E.transpose() * E).determinant();
  double fact = 1.0;
  for (int i = 2; i <= k; ++i) fact *= i;
  return std::sqrt(std::max(det, 0.0)) / fact;
}

}  // namespace

SimplicialComplex::SimplicialComplex(std::vector<Vec> vertices,
                                     std::vector<std::vector<Simplex>> by_degree)
    : vertices_(std::move(vertices)) {
  if (vertices_.empty()) throw ValidationError("complex has no vertices");
  dim_ = static_cast<int>(vertices_[0].size());
  if (dim_ < 1 || dim_ > 4) throw ValidationError("vertex dimension must be in 1..4");
  for (const Vec& v : vertices_) {
    if (v.size() != dim_) throw ValidationError("vertices have inconsistent dimension");
  }
  // by_degree[0] is ignored; vertices are the 0-simplices
  int K = 0;
  for (std::size_t k = 1; k < by_degree.size(); ++k) {
    if (!by_degree[k].empty()) K = static_cast<int>(k);
  }
  simplices_.assign(K + 1, {});
  lookup_.assign(K + 1, {});
  for (std::size_t i = 0; i < vertices_.size(); ++i) {
    simplices_[0].push_back({static_cast<int>(i)});
    lookup_[0][{static_cast<int>(i)}] = i;
  }
  const int n = static_cast<int>(vertices_.size());
  for (int k = 1; k <= K; ++k) {
    for (const Simplex& s : by_degree[k]) {
      if (static_cast<int>(s.size()) != k + 1) {
        throw ValidationError("simplex of degree " + std::to_string(k) + " needs " +
                              std::to_string(k + 1) + " vertices");
      }
      for (int v : s) {
        if (v < 0 || v >= n) throw ValidationError("simplex vertex index out of range");
      }
      Simplex key = sorted_key(s);
      if (std::adjacent_find(key.begin(), key.end()) != key.end()) {
        throw ValidationError("simplex has repeated vertices");
      }
      if (lookup_[k].count(key)) throw ValidationError("duplicate simplex");
      add_simplex(k, s);
    }
  }
  // close under faces, top down
  for (int k = K; k >= 2; --k) {
    for (std::size_t i = 0; i < simplices_[k].size(); ++i) {
      const Simplex s = simplices_[k][i];
      for (int j = 0; j <= k; ++j) {
        Simplex f = s;
        f.erase(f.begin() + j);
        Simplex key = sorted_key(f);
        if (!lookup_[k - 1].count(key)) add_simplex(k - 1, key);
      }
    }
  }
  volumes_.assign(K + 1, {});
  volumes_[0].assign(vertices_.size(), 1.0);
  for (int k = 1; k <= K; ++k) {
    volumes_[k].resize(simplices_[k].size());
    for (std::size_t i = 0; i < simplices_[k].size(); ++i) {
      double scale = 0.0;
      const double vol = simplex_volume(vertices_, simplices_[k][i], &scale);
      if (!(vol > 1e-12 * std::pow(scale, k))) {
        throw ValidationError("degenerate " + std::to_string(k) + "-simplex " + std::to_string(i));
      }
      volumes_[k][i] = vol;
    }
  }
  columns_.assign(K + 1, {});
  rows_.assign(K + 1, {});
  for (int k = 1; k <= K; ++k) {
    columns_[k].resize(simplices_[k].size());
    rows_[k].resize(simplices_[k - 1].size());
    for (std::size_t i = 0; i < simplices_[k].size(); ++i) {
      const Simplex& s = simplices_[k][i];
      for (int j = 0; j <= k; ++j) {
        Simplex f = s;
        f.erase(f.begin() + j);
        const std::size_t fi = lookup_[k - 1].at(sorted_key(f));
        const int sign = ((j % 2 == 0) ? 1 : -1) * relative_sign(f, simplices_[k - 1][fi]);
        columns_[k][i].push_back({static_cast<int64_t>(fi), sign});
        rows_[k][fi].push_back({static_cast<int64_t>(i), sign});
      }
      std::sort(columns_[k][i].begin(), columns_[k][i].end(),
                [](const Incidence& a, const Incidence& b) { return a.row < b.row; });
    }
  }
}

void SimplicialComplex::add_simplex(int k, const Simplex& s) {
  lookup_[k][sorted_key(s)] = simplices_[k].size();
  simplices_[k].push_back(s);
}

std::size_t SimplicialComplex::count(int k) const {
  if (k < 0 || k > top_degree()) return 0;
  return simplices_[k].size();
}

const Simplex& SimplicialComplex::simplex(int k, std::size_t i) const {
  return simplices_.at(k).at(i);
}

double SimplicialComplex::volume(int k, std::size_t i) const { return volumes_.at(k).at(i); }

const std::vector<double>& SimplicialComplex::volumes(int k) const { return volumes_.at(k); }

const std::vector<Incidence>& SimplicialComplex::boundary_column(int k, std::size_t i) const {
  return columns_.at(k).at(i);
}

const std::vector<Incidence>& SimplicialComplex::coboundary_row(int k, std::size_t j) const {
  return rows_.at(k).at(j);
}

std::optional<std::size_t> SimplicialComplex::find(int k, const Simplex& s) const {
  if (k < 0 || k > top_degree()) return std::nullopt;
  auto it = lookup_[k].find(sorted_key(s));
  if (it == lookup_[k].end()) return std::nullopt;
  return it->second;
}

int64_t IntegerChain::get(std::size_t i) const {
  auto it = coeffs_.find(i);
  return it == coeffs_.end() ? 0 : it->second;
}

void IntegerChain::set(std::size_t i, int64_t v) {
  if (v == 0) {
    coeffs_.erase(i);
  } else {
    coeffs_[i] = v;
  }
}

void IntegerChain::add(std::size_t i, int64_t v) {
  if (v == 0) return;
  set(i, checked_add(get(i), v));
}

int64_t IntegerChain::max_abs() const {
  int64_t m = 0;
  for (const auto& [i, v] : coeffs_) m = std::max(m, v < 0 ? -v : v);
  return m;
}

IntegerChain IntegerChain::operator+(const IntegerChain& o) const {
  if (o.degree_ != degree_ && !o.is_zero() && !is_zero()) {
    throw ValidationError("adding chains of different degree");
  }
  IntegerChain r = (is_zero() && !o.is_zero()) ? IntegerChain(o.degree_) : *this;
  for (const auto& [i, v] : o.coeffs_) r.add(i, v);
  return r;
}

IntegerChain IntegerChain::operator-(const IntegerChain& o) const { return *this + o.scaled(-1); }

IntegerChain IntegerChain::scaled(int64_t s) const {
  IntegerChain r(degree_);
  for (const auto& [i, v] : coeffs_) r.set(i, checked_mul(v, s));
  return r;
}

IntegerChain boundary(const SimplicialComplex& K, const IntegerChain& c) {
  if (c.degree() < 1) throw ValidationError("no boundary in degree 0");
  if (c.degree() > K.top_degree()) throw ValidationError("chain degree exceeds complex");
  IntegerChain b(c.degree() - 1);
  for (const auto& [i, v] : c.coeffs()) {
    if (i >= K.count(c.degree())) throw ValidationError("chain index out of range");
    for (const Incidence& e : K.boundary_column(c.degree(), i)) {
      b.add(e.row, checked_mul(v, e.sign));
    }
  }
  return b;
}

double mass(const SimplicialComplex& K, const IntegerChain& c) {
  double m = 0.0;
  for (const auto& [i, v] : c.coeffs()) m += std::abs(static_cast<double>(v)) * K.volume(c.degree(), i);
  return m;
}

ModPClass reduce_modp(const IntegerChain& c, int64_t p) {
  if (p < 2) throw ValidationError("modulus p must be at least 2");
  ModPClass r{p, IntegerChain(c.degree())};
  for (const auto& [i, v] : c.coeffs()) r.representative.set(i, reduce_coeff(v, p));
  return r;
}

bool is_cycle_modp(const SimplicialComplex& K, const IntegerChain& c, int64_t p) {
  if (p < 2) throw ValidationError("modulus p must be at least 2");
  const IntegerChain b = boundary(K, c);
  for (const auto& [i, v] : b.coeffs()) {
    if (v % p != 0) return false;
  }
  return true;
}

bool congruent_modp(const IntegerChain& a, const IntegerChain& b, int64_t p) {
  const IntegerChain d = a - b;
  for (const auto& [i, v] : d.coeffs()) {
    if (v % p != 0) return false;
  }
  return true;
}

Region Region::whole() { return Region{}; }

Region Region::empty(const SimplicialComplex& K) {
  Region r;
  for (int k = 0; k <= K.top_degree(); ++k) r.member.push_back(std::vector<bool>(K.count(k), false));
  return r;
}

bool Region::contains(int k, std::size_t i) const {
  if (k < 0 || k >= static_cast<int>(member.size()) || !member[k]) return true;
  return i < member[k]->size() && (*member[k])[i];
}

Region Region::closure_of(const SimplicialComplex& K, int k, const std::vector<std::size_t>& top) {
  Region r = empty(K);
  std::vector<std::size_t> current = top;
  for (int d = k; d >= 0; --d) {
    std::vector<std::size_t> next;
    for (std::size_t i : current) {
      if (i >= K.count(d)) throw ValidationError("region index out of range");
      if ((*r.member[d])[i]) continue;
      (*r.member[d])[i] = true;
      if (d > 0) {
        for (const Incidence& e : K.boundary_column(d, i)) next.push_back(e.row);
      }
    }
    current = std::move(next);
  }
  return r;
}

double mass_in(const SimplicialComplex& K, const IntegerChain& c, const Region& W) {
  double m = 0.0;
  for (const auto& [i, v] : c.coeffs()) {
    if (W.contains(c.degree(), i)) m += std::abs(static_cast<double>(v)) * K.volume(c.degree(), i);
  }
  return m;
}

IntegerChain restrict_to(const IntegerChain& c, const Region& W) {
  IntegerChain r(c.degree());
  for (const auto& [i, v] : c.coeffs()) {
    if (W.contains(c.degree(), i)) r.set(i, v);
  }
  return r;
}

}  // namespace modp
