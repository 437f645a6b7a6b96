#include "cpcombss/linalg.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>

namespace cpcombss {

DiagonalScaling DiagonalScaling::from_t(std::span<const double> t) {
  const std::size_t n = t.size();
  DiagonalScaling s;
  s.t.resize(n);
  s.d.resize(n);
  const double nd = static_cast<double>(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double ti = std::clamp(t[i], kEpsilonT, 1.0 - kEpsilonT);
    s.t[i] = ti;
    s.d[i] = nd * (1.0 - ti * ti);
  }
  return s;
}

std::vector<double> prefix_sum(std::span<const double> v) {
  std::vector<double> out(v.size());
  detail::prefix_sum_into(v, out);
  return out;
}

std::vector<double> suffix_sum(std::span<const double> v) {
  std::vector<double> out(v.size());
  detail::suffix_sum_into(v, out);
  return out;
}

std::vector<double> gram_apply(std::span<const double> v) {
  std::vector<double> out(v.size());
  detail::prefix_sum_into(v, out);
  detail::suffix_sum_into(out, out);
  return out;
}

Tridiagonal xtx_inverse_tridiag(std::size_t n) {
  Tridiagonal a;
  a.diag.assign(n, 2.0);
  if (n > 0) a.diag[0] = 1.0;
  a.lower.assign(n > 0 ? n - 1 : 0, -1.0);
  a.upper.assign(n > 0 ? n - 1 : 0, -1.0);
  return a;
}

std::vector<double> thomas_solve(const Tridiagonal& m, std::span<const double> b) {
  const std::size_t n = m.size();
  std::vector<double> x(n);
  std::vector<double> cprime(n);
  detail::thomas_solve_into(m, b, x, cprime);
  return x;
}

std::vector<double> mt_solve(const DiagonalScaling& scaling, std::span<const double> b) {
  detail::MtWorkspace ws(scaling.t.size());
  std::vector<double> u(scaling.t.size());
  ws.solve(scaling, b, u);
  return u;
}

namespace detail {

void prefix_sum_into(std::span<const double> v, std::span<double> out) {
  double acc = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    acc += v[i];
    out[i] = acc;
  }
}

void suffix_sum_into(std::span<const double> v, std::span<double> out) {
  double acc = 0.0;
  for (std::size_t i = v.size(); i-- > 0;) {
    acc += v[i];
    out[i] = acc;
  }
}

void thomas_solve_into(const Tridiagonal& m, std::span<const double> b,
                       std::span<double> x, std::span<double> cprime) {
  const std::size_t n = m.size();
  assert(b.size() == n && x.size() == n && cprime.size() >= n);
  if (n == 0) return;

  double pivot = m.diag[0];
  if (std::abs(pivot) < kPivotTol) throw SingularSystem("thomas_solve: zero pivot at row 0");
  if (n > 1) cprime[0] = m.upper[0] / pivot;
  x[0] = b[0] / pivot;

  for (std::size_t i = 1; i < n; ++i) {
    pivot = m.diag[i] - m.lower[i - 1] * cprime[i - 1];
    if (std::abs(pivot) < kPivotTol)
      throw SingularSystem("thomas_solve: degenerate pivot at row " + std::to_string(i));
    if (i + 1 < n) cprime[i] = m.upper[i] / pivot;
    x[i] = (b[i] - m.lower[i - 1] * x[i - 1]) / pivot;
  }

  for (std::size_t i = n - 1; i-- > 0;) x[i] -= cprime[i] * x[i + 1];
}

MtWorkspace::MtWorkspace(std::size_t n)
    : mtilde_(xtx_inverse_tridiag(n)), z_(n), rhs_(n), v_(n), cprime_(n) {}

void MtWorkspace::solve(const DiagonalScaling& scaling, std::span<const double> b,
                        std::span<double> u) {
  const std::size_t n = mtilde_.size();
  assert(scaling.t.size() == n && b.size() == n && u.size() == n);
  const auto& t = scaling.t;
  const auto& d = scaling.d;

  // Mtilde = (X^T X)^{-1} + T D^{-1} T; only the diagonal depends on t.
  for (std::size_t i = 0; i < n; ++i) {
    const double base = (i == 0) ? 1.0 : 2.0;
    mtilde_.diag[i] = base + t[i] * t[i] / d[i];
    z_[i] = b[i] / d[i];
    rhs_[i] = t[i] * z_[i];
  }
  thomas_solve_into(mtilde_, rhs_, v_, cprime_);
  for (std::size_t i = 0; i < n; ++i) u[i] = z_[i] - t[i] * v_[i] / d[i];
}

}  // namespace detail

}  // namespace cpcombss
