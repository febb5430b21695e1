#pragma once

namespace homocone {

/// Every numerical threshold used by the library, in one place.
struct Tolerances {
  /// Absolute residual for subspace membership and closure on unit-norm inputs.
  double closure = 1e-9;
  /// Equality s_k = p_k/2 in the Gindikin-Wallach strata.
  double gindikin_equality = 1e-9;
  /// Relative residual accepted by the dual decomposition.
  double dual_residual = 1e-8;
  int dual_max_iterations = 200;
  /// Relative step for central differences: h = fd_step * (1 + |theta|).
  double fd_step = 1e-5;
  /// Bases whose Gram matrix is within this of the identity are kept verbatim.
  double orthonormal_keep = 1e-14;
  /// Required accuracy of (v|v) = 2 for the flip construction.
  double flip_norm = 1e-9;
  /// Identity checks in cocycle reports.
  double cocycle = 1e-9;
  /// Agreement of two character probes in parameter recovery.
  double recovery = 1e-9;
};

/// Process-wide defaults; callers may pass their own copy instead.
inline const Tolerances& default_tolerances() {
  static const Tolerances tol{};
  return tol;
}

}  // namespace homocone
