#ifndef SPINPOW_ANGULAR_HPP
#define SPINPOW_ANGULAR_HPP

#include <Eigen/Dense>
#include <complex>

#include "spinpow/half_int.hpp"

namespace spinpow {

/// Clebsch-Gordan coefficient <j1 m1 j2 m2 | J M> in the Condon-Shortley
/// convention. Selection-rule failures (M != m1+m2, triangle violations,
/// out-of-range m) return 0 rather than throwing.
///
/// Evaluated from the Racah sum with prime-factorized exact integer
/// arithmetic; the only rounding happens in the final conversion to double.
double clebsch_gordan(HalfInt j1, HalfInt m1, HalfInt j2, HalfInt m2, HalfInt J, HalfInt M);

/// Wigner 6-j symbol {a b c; d e f}. Returns 0 when any triad violates the
/// triangle conditions. Same exact-arithmetic evaluation as clebsch_gordan.
double wigner_6j(HalfInt a, HalfInt b, HalfInt c, HalfInt d, HalfInt e, HalfInt f);

/// Small Wigner matrix element d^j_{m_row, m_col}(beta).
double wigner_small_d(HalfInt j, HalfInt m_row, HalfInt m_col, double beta);

/// Wigner rotation matrix D^j(alpha, beta, gamma) in the active zyz Euler
/// convention, basis ordered m = j, j-1, ..., -j:
///   D_{m',m} = exp(-i m' alpha) d^j_{m',m}(beta) exp(-i m gamma).
Eigen::MatrixXcd wigner_D(HalfInt j, double alpha, double beta, double gamma);

/// n! as a double, n <= 170.
double factorial(int n);

/// Binomial coefficient as a double.
double binomial(int n, int k);

}  // namespace spinpow

#endif
