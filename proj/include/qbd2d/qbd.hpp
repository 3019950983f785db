#pragma once

#include "qbd2d/ctmc.hpp"
#include "qbd2d/types.hpp"

#include <Eigen/Eigenvalues>

#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <string>

namespace qbd2d {

// A level-independent QBD with a distinct boundary level 0:
//
//   | B0     Bup              |
//   | Bdown  A0    Aup        |
//   |        Adown A0    Aup  |
//   |              ...        |
struct QbdSpec {
  Matrix b0;
  Matrix bup;
  Matrix bdown;
  Matrix adown;
  Matrix a0;
  Matrix aup;

  Eigen::Index boundary_phases() const { return b0.rows(); }
  Eigen::Index phases() const { return a0.rows(); }

  void check(double tolerance = 1e-12) const {
    const Eigen::Index sb = b0.rows(), s = a0.rows();
    if (sb < 1 || s < 1 || b0.cols() != sb || bup.rows() != sb || bup.cols() != s || bdown.rows() != s ||
        bdown.cols() != sb || a0.cols() != s || adown.rows() != s || adown.cols() != s || aup.rows() != s ||
        aup.cols() != s)
      throw InvalidArgument("QBD blocks have inconsistent shapes");
    double scale = 0.0;
    for (const Matrix* m : {&b0, &bup, &bdown, &adown, &a0, &aup}) scale = std::max(scale, m->cwiseAbs().maxCoeff());
    const double tol = tolerance * std::max(scale, 1e-300);
    const auto bad = [tol](const Vector& v) { return v.cwiseAbs().maxCoeff() > tol; };
    if (bad(b0.rowwise().sum() + bup.rowwise().sum()) ||
        bad(bdown.rowwise().sum() + a0.rowwise().sum() + aup.rowwise().sum()) ||
        bad(adown.rowwise().sum() + a0.rowwise().sum() + aup.rowwise().sum()))
      throw InvalidArgument("QBD blocks do not have zero row sums");
  }
};

struct RateMatrix {
  Matrix r;
  std::size_t iterations = 0;
};

struct RateMatrixOptions {
  double tolerance = 1e-14;
  std::size_t max_iterations = 1'000'000;
};

// Minimal nonnegative solution of R^2 Adown + R A0 + Aup = O by the natural
// fixed point R <- -(Aup + R^2 Adown) A0^{-1} started from O. The iterates
// increase monotonically to the minimal solution.
inline RateMatrix minimal_rate_matrix(const Matrix& aup, const Matrix& a0, const Matrix& adown,
                                      const RateMatrixOptions& options = {}) {
  const Eigen::Index s = a0.rows();
  if (s < 1 || a0.cols() != s || aup.rows() != s || aup.cols() != s || adown.rows() != s || adown.cols() != s)
    throw InvalidArgument("rate matrix: blocks must be square of equal order");
  if ((a0.diagonal().array() >= 0.0).any()) throw InvalidArgument("rate matrix: A0 must have a negative diagonal");
  Eigen::FullPivLU<Matrix> lu(a0);
  if (!lu.isInvertible()) throw InvalidArgument("rate matrix: A0 is singular");
  const Matrix a0_inv = lu.inverse();

  RateMatrix out{Matrix::Zero(s, s), 0};
  if (aup.cwiseAbs().maxCoeff() == 0.0) return out;
  Matrix next(s, s);
  // Steps of the last `window` iterations, for a low-noise contraction estimate.
  constexpr std::size_t window = 10;
  std::array<double, window> history{};
  while (out.iterations < options.max_iterations) {
    next.noalias() = -(aup + out.r * out.r * adown) * a0_inv;
    const double change = (next - out.r).cwiseAbs().maxCoeff();
    out.r.swap(next);
    const double oldest = history[out.iterations % window];
    history[out.iterations % window] = change;
    ++out.iterations;
    if (change > options.tolerance) continue;
    // Steps at rounding level cannot shrink further.
    if (change <= 2.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, out.r.cwiseAbs().maxCoeff())) return out;
    // Linear convergence with ratio q leaves an error of about change*q/(1-q).
    if (out.iterations > window && oldest > 0.0) {
      const double q = std::pow(change / oldest, 1.0 / window);
      if (q < 1.0 && change * q <= options.tolerance * (1.0 - q)) return out;
    }
  }
  throw NearCriticalError("rate matrix iteration did not converge in " + std::to_string(options.max_iterations) +
                          " steps; the chain is likely null recurrent or transient");
}

inline double rate_matrix_residual(const Matrix& r, const Matrix& aup, const Matrix& a0, const Matrix& adown) {
  return (r * r * adown + r * a0 + aup).cwiseAbs().rowwise().sum().maxCoeff();
}

inline double spectral_radius(const Matrix& m) {
  if (m.size() == 0) return 0.0;
  Eigen::EigenSolver<Matrix> es(m, false);
  return es.eigenvalues().cwiseAbs().maxCoeff();
}

struct QbdSolution {
  RowVector pi0;  // level 0 (boundary phases)
  RowVector pi1;  // level 1
  RowVector pi2;  // level 2 = pi1 R
  Matrix r;
  Matrix n;  // (-A0 - R Adown)^{-1}
  double spectral_radius = 0.0;
  std::size_t iterations = 0;

  // Sum of the stationary vectors over all levels l >= 2.
  RowVector tail_from_level2() const {
    const Eigen::Index s = r.rows();
    return pi2 * (Matrix::Identity(s, s) - r).inverse();
  }
};

struct QbdSolveOptions {
  RateMatrixOptions rate;
  // sp(R) at or above 1 - margin is treated as null recurrent.
  double critical_margin = 1e-9;
  // Off-diagonal entries of the censored boundary generator below this
  // (relative) size are rounding noise.
  double boundary_noise = 1e-12;
};

// Stationary distribution of a positive recurrent QBD: matrix-geometric tail
// pi_l = pi1 R^{l-1} and censored boundary balance pi0 (B0 + Bup N Bdown) = 0.
inline QbdSolution solve_qbd(const QbdSpec& spec, const QbdSolveOptions& options = {}) {
  spec.check(1e-10);
  const Eigen::Index s = spec.phases();
  const Matrix eye = Matrix::Identity(s, s);

  QbdSolution sol;
  const RateMatrix rate = minimal_rate_matrix(spec.aup, spec.a0, spec.adown, options.rate);
  sol.r = rate.r;
  sol.iterations = rate.iterations;
  sol.spectral_radius = spectral_radius(sol.r);
  if (sol.spectral_radius >= 1.0 - options.critical_margin)
    throw NearCriticalError("spectral radius of R is " + std::to_string(sol.spectral_radius) +
                            "; the chain is not positive recurrent");

  sol.n = (-spec.a0 - sol.r * spec.adown).inverse();
  Matrix censored = spec.b0 + spec.bup * sol.n * spec.bdown;
  const double noise = options.boundary_noise * std::max(censored.cwiseAbs().maxCoeff(), 1e-300);
  for (Eigen::Index i = 0; i < censored.rows(); ++i) {
    double off = 0.0;
    for (Eigen::Index j = 0; j < censored.cols(); ++j) {
      if (i == j) continue;
      if (censored(i, j) < noise) censored(i, j) = 0.0;
      off += censored(i, j);
    }
    censored(i, i) = -off;
  }

  RowVector pi0;
  try {
    pi0 = stationary(censored);
  } catch (const ClosedClassError& e) {
    throw AssumptionViolation(3, "boundary of the one-dimensional chain has " + std::to_string(e.count()) +
                                     " closed classes (null space dimension must be 1)");
  }
  RowVector pi1 = pi0 * spec.bup * sol.n;
  const double mass = pi0.sum() + (pi1 * (eye - sol.r).inverse()).sum();
  sol.pi0 = pi0 / mass;
  sol.pi1 = pi1 / mass;
  sol.pi2 = sol.pi1 * sol.r;
  return sol;
}

inline RowVector level_distribution(const QbdSolution& sol, int level) {
  if (level < 0) throw InvalidArgument("level must be nonnegative");
  if (level == 0) return sol.pi0;
  RowVector v = sol.pi1;
  for (int l = 1; l < level; ++l) v = v * sol.r;
  return v;
}

// Level-truncated generator over levels 0..levels; upward transitions out of
// the top level are folded back into the diagonal.
inline Matrix truncated_qbd_generator(const QbdSpec& spec, int levels) {
  if (levels < 1) throw InvalidArgument("truncation needs at least one level above the boundary");
  const Eigen::Index sb = spec.boundary_phases(), s = spec.phases();
  const Eigen::Index n = sb + s * levels;
  Matrix q = Matrix::Zero(n, n);
  q.block(0, 0, sb, sb) = spec.b0;
  q.block(0, sb, sb, s) = spec.bup;
  q.block(sb, 0, s, sb) = spec.bdown;
  for (int l = 1; l <= levels; ++l) {
    const Eigen::Index row = sb + (l - 1) * s;
    q.block(row, row, s, s) = spec.a0;
    if (l > 1) q.block(row, row - s, s, s) = spec.adown;
    if (l < levels)
      q.block(row, row + s, s, s) = spec.aup;
    else
      q.block(row, row, s, s).diagonal() += spec.aup.rowwise().sum();
  }
  return q;
}

}  // namespace qbd2d
