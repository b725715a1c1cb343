#pragma once

// Dense matrix primitives used by the ALM solvers.
//
// Matrices are Eigen::MatrixXd (column-major). Every routine here is a pure
// function of its arguments.

#include <Eigen/Dense>

namespace fcmsc {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Throws InvalidInput if `m` is empty or holds a NaN/Inf. `what` names the
/// argument in the message.
void require_finite(const Matrix& m, const char* what);

/// Sum of Euclidean norms of the columns.
double l21_norm(const Matrix& m);

/// Sum of singular values.
double nuclear_norm(const Matrix& m);

/// Largest absolute entry.
double max_abs(const Matrix& m);

/// Column-wise shrinkage: argmin_E tau*||E||_{2,1} + 0.5*||E - T||_F^2.
/// A column whose norm is at most tau becomes zero, every other column is
/// rescaled by (norm - tau) / norm.
Matrix col_l21_prox(const Matrix& t, double tau);

/// Singular value thresholding: argmin_J tau*||J||_* + 0.5*||J - T||_F^2.
Matrix svt(const Matrix& t, double tau);

/// Symmetric eigendecomposition, cached so a fixed left operator can be
/// reused across many Sylvester solves.
struct SymmetricEigen {
    Vector values;
    Matrix vectors;

    static SymmetricEigen of(const Matrix& sym);
};

/// What to do with an eigenvalue pair whose sum alpha_i + beta_j is below
/// the singular-pair tolerance.
enum class SingularPairs {
    reject,  ///< throw IllConditioned naming the pair
    /// Drop the component. When A (x) I + I (x) B is positive semidefinite and
    /// RHS lies in its range this yields the minimum-norm solution.
    min_norm,
};

/// Solves A*Z + Z*B = RHS for symmetric A (p x p) and B (q x q) through
/// their eigendecompositions. A pair is singular when
/// |alpha_i + beta_j| < 1e-10 * max(|alpha|, |beta|, 1).
Matrix solve_sylvester(const Matrix& a, const Matrix& b, const Matrix& rhs,
                       SingularPairs policy = SingularPairs::reject);
Matrix solve_sylvester(const SymmetricEigen& a, const SymmetricEigen& b,
                       const Matrix& rhs,
                       SingularPairs policy = SingularPairs::reject);

/// Relative tolerance used by the singular-pair guard above.
inline constexpr double kSylvesterPairTol = 1e-10;

} // namespace fcmsc
