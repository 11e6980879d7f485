#include "modp/lp.hpp"

#include <cmath>

#include "modp/chain.hpp"

namespace modp {

int LpProblem::add_var(double c, double lo, double hi) {
  cost.push_back(c);
  lower.push_back(lo);
  upper.push_back(hi);
  return num_vars() - 1;
}

void LpProblem::add_row(std::vector<std::pair<int, double>> row, double b) {
  rows.push_back(std::move(row));
  rhs.push_back(b);
}

namespace {

constexpr double kPivotTol = 1e-9;

class Tableau {
 public:
  Tableau(int m, int n) : m_(m), n_(n), a_(static_cast<std::size_t>(m) * n, 0.0),
                          beta_(m, 0.0), basis_(m, -1), pos_(n, -1), range_(n, kInf),
                          at_upper_(n, 0), d_(n, 0.0), cost_(n, 0.0) {}

  double& at(int i, int j) { return a_[static_cast<std::size_t>(i) * n_ + j]; }

  void compute_reduced_costs() {
    for (int j = 0; j < n_; ++j) d_[j] = cost_[j];
    for (int i = 0; i < m_; ++i) {
      const double cb = cost_[basis_[i]];
      if (cb == 0.0) continue;
      for (int j = 0; j < n_; ++j) d_[j] -= cb * at(i, j);
    }
  }

  void pivot(int r, int enter) {
    const double piv = at(r, enter);
    double* row = &a_[static_cast<std::size_t>(r) * n_];
    for (int j = 0; j < n_; ++j) row[j] /= piv;
    for (int i = 0; i < m_; ++i) {
      if (i == r) continue;
      const double f = at(i, enter);
      if (f == 0.0) continue;
      double* ri = &a_[static_cast<std::size_t>(i) * n_];
      for (int j = 0; j < n_; ++j) ri[j] -= f * row[j];
      ri[enter] = 0.0;
    }
    const double f = d_[enter];
    if (f != 0.0) {
      for (int j = 0; j < n_; ++j) d_[j] -= f * row[j];
      d_[enter] = 0.0;
    }
    pos_[basis_[r]] = -1;
    basis_[r] = enter;
    pos_[enter] = r;
  }

  LpStatus iterate(const LpOptions& opt, int* iters) {
    const double tol = opt.tol;
    int degenerate_run = 0;
    while (true) {
      if (*iters >= opt.max_iterations) return LpStatus::kIterationLimit;
      const bool bland = degenerate_run > 50;
      int enter = -1;
      int dir = 0;
      double best = 0.0;
      for (int j = 0; j < n_; ++j) {
        if (pos_[j] >= 0 || range_[j] <= tol) continue;
        int s = 0;
        if (!at_upper_[j] && d_[j] < -tol) s = 1;
        if (at_upper_[j] && d_[j] > tol) s = -1;
        if (s == 0) continue;
        if (bland) {
          enter = j;
          dir = s;
          break;
        }
        if (std::abs(d_[j]) > best) {
          best = std::abs(d_[j]);
          enter = j;
          dir = s;
        }
      }
      if (enter < 0) return LpStatus::kOptimal;
      ++*iters;

      double t = range_[enter];
      int leave = -1;
      bool leave_upper = false;
      for (int i = 0; i < m_; ++i) {
        const double alpha = at(i, enter);
        const double delta = -dir * alpha;
        double lim;
        bool to_upper;
        if (delta < -kPivotTol) {
          lim = std::max(beta_[i], 0.0) / -delta;
          to_upper = false;
        } else if (delta > kPivotTol && range_[basis_[i]] < kInf) {
          lim = std::max(range_[basis_[i]] - beta_[i], 0.0) / delta;
          to_upper = true;
        } else {
          continue;
        }
        bool take = lim < t - 1e-12;
        if (!take && leave >= 0 && lim <= t + 1e-12) {
          take = bland ? basis_[i] < basis_[leave]
                       : std::abs(alpha) > std::abs(at(leave, enter));
        }
        if (take) {
          t = lim;
          leave = i;
          leave_upper = to_upper;
        }
      }
      if (t == kInf) return LpStatus::kUnbounded;
      degenerate_run = t < 1e-12 ? degenerate_run + 1 : 0;
      for (int i = 0; i < m_; ++i) beta_[i] -= dir * at(i, enter) * t;
      if (leave < 0) {
        at_upper_[enter] = !at_upper_[enter];
        continue;
      }
      const double value = at_upper_[enter] ? range_[enter] - t : t;
      const int out = basis_[leave];
      at_upper_[out] = leave_upper;
      pivot(leave, enter);
      at_upper_[enter] = 0;
      beta_[leave] = value;
    }
  }

  int m_, n_;
  std::vector<double> a_;
  std::vector<double> beta_;
  std::vector<int> basis_;
  std::vector<int> pos_;
  std::vector<double> range_;
  std::vector<char> at_upper_;
  std::vector<double> d_;
  std::vector<double> cost_;
};

}  // namespace

LpResult solve_lp(const LpProblem& lp, const LpOptions& opt) {
  const int ns = lp.num_vars();
  const int m = static_cast<int>(lp.rows.size());
  for (int j = 0; j < ns; ++j) {
    if (!std::isfinite(lp.lower[j])) throw ValidationError("lp: lower bounds must be finite");
    if (lp.upper[j] < lp.lower[j]) {
      LpResult r;
      r.status = LpStatus::kInfeasible;
      return r;
    }
  }
  Tableau T(m, ns + m);
  for (int j = 0; j < ns; ++j) T.range_[j] = lp.upper[j] - lp.lower[j];
  for (int i = 0; i < m; ++i) {
    double b = lp.rhs[i];
    for (const auto& [j, v] : lp.rows[i]) {
      T.at(i, j) += v;
      b -= v * lp.lower[j];
    }
    if (b < 0) {
      for (int j = 0; j < ns; ++j) T.at(i, j) = -T.at(i, j);
      b = -b;
    }
    T.at(i, ns + i) = 1.0;
    T.basis_[i] = ns + i;
    T.pos_[ns + i] = i;
    T.beta_[i] = b;
    T.cost_[ns + i] = 1.0;
  }
  LpResult res;
  T.compute_reduced_costs();
  LpStatus st = T.iterate(opt, &res.iterations);
  if (st == LpStatus::kIterationLimit) {
    res.status = st;
    return res;
  }
  double infeas = 0.0;
  for (int i = 0; i < m; ++i) {
    if (T.basis_[i] >= ns) infeas += std::abs(T.beta_[i]);
  }
  if (infeas > 1e-7) {
    res.status = LpStatus::kInfeasible;
    return res;
  }
  for (int i = 0; i < m; ++i) {
    if (T.basis_[i] < ns) continue;
    for (int j = 0; j < ns; ++j) {
      if (T.pos_[j] >= 0 || std::abs(T.at(i, j)) < 1e-7) continue;
      const double value = T.at_upper_[j] ? T.range_[j] : 0.0;
      T.pivot(i, j);
      T.at_upper_[j] = 0;
      T.beta_[i] = value;
      break;
    }
  }
  for (int i = 0; i < m; ++i) {
    T.range_[ns + i] = 0.0;
    T.at_upper_[ns + i] = 0;
    T.cost_[ns + i] = 0.0;
  }
  for (int j = 0; j < ns; ++j) T.cost_[j] = lp.cost[j];
  T.compute_reduced_costs();
  st = T.iterate(opt, &res.iterations);
  res.status = st;
  if (st != LpStatus::kOptimal) return res;
  res.x.assign(ns, 0.0);
  for (int j = 0; j < ns; ++j) {
    const double shifted = T.pos_[j] >= 0 ? T.beta_[T.pos_[j]] : (T.at_upper_[j] ? T.range_[j] : 0.0);
    res.x[j] = lp.lower[j] + shifted;
  }
  res.objective = 0.0;
  for (int j = 0; j < ns; ++j) res.objective += lp.cost[j] * res.x[j];
  return res;
}

}  // namespace modp
