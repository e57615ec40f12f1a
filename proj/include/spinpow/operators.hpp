#ifndef SPINPOW_OPERATORS_HPP
#define SPINPOW_OPERATORS_HPP

#include <Eigen/Dense>
#include <complex>

#include "spinpow/half_int.hpp"

namespace spinpow {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

/// Kronecker product, row-major index convention: (a x b)[(i1 i2),(k1 k2)].
Matrix kron(const Matrix& a, const Matrix& b);

/// Index of |j,m1>|j,m2> in the two-spin basis, both labels descending.
constexpr int pair_index(HalfInt j, HalfInt m1, HalfInt m2) {
    return spin_index(j, m1) * dim(j) + spin_index(j, m2);
}

/// Trace out the first (resp. second) tensor factor of an operator on a
/// d*d-dimensional two-spin space; the result acts on the remaining factor.
Matrix partial_trace_first(const Matrix& op, int d);
Matrix partial_trace_second(const Matrix& op, int d);

/// Angular momentum matrices on the spin-j space, basis m descending.
Matrix spin_jz(HalfInt j);
Matrix spin_jplus(HalfInt j);
Matrix spin_jx(HalfInt j);
Matrix spin_jy(HalfInt j);

/// Coupled two-spin state |j,j,L,M> as a (2j+1)^2 vector of Clebsch-Gordan
/// components. Requires 0 <= L <= 2j and |M| <= L, both integers.
Vector coupled_state(HalfInt j, HalfInt L, HalfInt M);

/// Isometry whose columns are |j,j,L,M> for M = L, L-1, ..., -L.
Matrix coupled_block(HalfInt j, HalfInt L);

/// Projector P_L onto the total-spin-L subspace of the two-spin space.
Matrix projector_L(HalfInt j, HalfInt L);

/// Multipole (irreducible tensor) operator T_{sigma mu} on the spin-j space,
/// orthonormal under the Hilbert-Schmidt product.
Matrix multipole(HalfInt j, HalfInt sigma, HalfInt mu);

/// Two-spin multipole operator sum_mu T_{sigma mu} (x) T_{sigma mu}^dagger.
Matrix pair_multipole(HalfInt j, HalfInt sigma);

/// Swap of the two tensor factors.
Matrix swap_operator(HalfInt j);

/// Weight chi(q, j, L) entering the measure operator in the projector basis.
double chi_weight(int q, HalfInt j, HalfInt L);

/// Eigenvalue of the measure operator on the total-spin-L block.
double measure_block_eigenvalue(HalfInt j, int q, HalfInt L);

/// The block-diagonal operator whose coherent-state expectation value gives
/// 1 - E_q. Built from the chi-weighted projector sum; requires 1 <= q <= 2j.
Matrix measure_operator(HalfInt j, int q);

/// Same operator assembled from the pair multipoles; used as the algebraic
/// cross-check of measure_operator.
Matrix measure_operator_from_multipoles(HalfInt j, int q);

/// Sphere average of |2j,n><2j,n|, equal to P_{2j}/(4j+1).
Matrix coherent_average_operator(HalfInt j);

/// Change of basis between the pair multipoles and the projectors:
///   T_sigma = sum_L t_in_p(sigma, L) P_L,   P_L = sum_sigma p_in_t(L, sigma) T_sigma.
struct PairBasisTransform {
    Eigen::MatrixXd t_in_p;
    Eigen::MatrixXd p_in_t;
};
PairBasisTransform basis_transform_tp(HalfInt j);

}  // namespace spinpow

#endif
