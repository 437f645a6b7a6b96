#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

// Structured linear algebra for the lower-triangular all-ones design matrix
// X.  X itself is never materialized: products with X, X^T and X^T X are
// running sums, and the inverse of X^T X is a fixed tridiagonal matrix, which
// makes every solve in this library O(n).

namespace cpcombss {

/// Thrown when a tridiagonal pivot degenerates (|pivot| < 1e-14).
struct SingularSystem : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Three-band matrix: lower/upper have length n-1, diag has length n.
struct Tridiagonal {
  std::vector<double> lower;
  std::vector<double> diag;
  std::vector<double> upper;

  std::size_t size() const { return diag.size(); }
};

/// Relaxation variables t in [0,1]^n together with the diagonal
/// d_i = n * (1 - t_i^2) of D_t.  Construction clamps every t_i into
/// [kEpsilonT, 1 - kEpsilonT] so all d_i stay strictly positive.
struct DiagonalScaling {
  std::vector<double> t;
  std::vector<double> d;

  static DiagonalScaling from_t(std::span<const double> t);
};

/// Clamp applied to t before any solve.
inline constexpr double kEpsilonT = 1e-8;

/// Pivot magnitude below which thomas_solve reports SingularSystem.
inline constexpr double kPivotTol = 1e-14;

/// out_i = sum_{j<=i} v_j.  Equals the dense product X * v.
std::vector<double> prefix_sum(std::span<const double> v);

/// out_i = sum_{j>=i} v_j.  Equals the dense product X^T * v.
std::vector<double> suffix_sum(std::span<const double> v);

/// (X^T X) * v, computed as suffix_sum(prefix_sum(v)).
std::vector<double> gram_apply(std::span<const double> v);

/// A = (X^T X)^{-1}: diag (1, 2, 2, ..., 2), both off-diagonals -1.
Tridiagonal xtx_inverse_tridiag(std::size_t n);

/// Solves m * u = b by forward elimination / back substitution without
/// pivoting.  Throws SingularSystem when a pivot falls below kPivotTol.
std::vector<double> thomas_solve(const Tridiagonal& m, std::span<const double> b);

/// Solves M_t u = b where M_t = T_t X^T X T_t + n (I - T_t^2), using the
/// Woodbury expansion M_t^{-1} = D_t^{-1} - D_t^{-1} T_t Mtilde^{-1} T_t D_t^{-1}
/// with Mtilde = (X^T X)^{-1} + T_t D_t^{-1} T_t tridiagonal.  One Thomas
/// solve plus elementwise work, O(n) total.
std::vector<double> mt_solve(const DiagonalScaling& scaling, std::span<const double> b);

namespace detail {

/// Reusable buffers for repeated mt_solve calls at fixed n (off-diagonals of
/// Mtilde are always -1, so only its diagonal is rewritten per call).
class MtWorkspace {
 public:
  explicit MtWorkspace(std::size_t n);

  std::size_t size() const { return mtilde_.size(); }

  /// u may not alias b.
  void solve(const DiagonalScaling& scaling, std::span<const double> b,
             std::span<double> u);

 private:
  Tridiagonal mtilde_;
  std::vector<double> z_;
  std::vector<double> rhs_;
  std::vector<double> v_;
  std::vector<double> cprime_;
};

/// Thomas sweep into caller-provided storage; cprime is scratch of length n.
void thomas_solve_into(const Tridiagonal& m, std::span<const double> b,
                       std::span<double> x, std::span<double> cprime);

void prefix_sum_into(std::span<const double> v, std::span<double> out);
void suffix_sum_into(std::span<const double> v, std::span<double> out);

}  // namespace detail

}  // namespace cpcombss
