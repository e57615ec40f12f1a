#ifndef SPINPOW_INVARIANT_HPP
#define SPINPOW_INVARIANT_HPP

#include <Eigen/Dense>
#include <utility>

#include "spinpow/half_int.hpp"
#include "spinpow/operators.hpp"

namespace spinpow {

/// A gate on the spin-j space with a verified unitarity certificate.
struct UnitaryGate {
    HalfInt j;
    Matrix matrix;

    /// Throws std::domain_error unless U U^dagger = 1 within tol.
    static UnitaryGate checked(HalfInt j, Matrix m, double tol = 1e-10);

    /// Max-norm deviation of U U^dagger from the identity.
    double unitarity_defect() const;

    UnitaryGate dagger() const { return {j, matrix.adjoint()}; }
};

enum class InvariantBasis { P, T };

/// Rotation-invariant components of a two-spin operator: traces against the
/// normalized projectors (P) or normalized pair multipoles (T).
struct InvariantVector {
    HalfInt j;
    InvariantBasis basis = InvariantBasis::P;
    Eigen::VectorXd components;
};

InvariantVector invariant_vector(HalfInt j, const Matrix& pair_op, InvariantBasis basis);

/// (U x U) applied to a two-spin vector without forming the Kronecker product.
Vector pair_apply(const Matrix& u, const Vector& pair_state);

/// The real (2j+1) x (2j+1) matrix of overlaps between transformed and plain
/// normalized projectors (or pair multipoles), oriented so that
/// uhat(U) * invariant_vector(V) = invariant_vector((UxU) V (UxU)^dag).
/// Rotations map to the identity.
Eigen::MatrixXd uhat(const UnitaryGate& u, InvariantBasis basis);

/// Invariant vector of (U x U) N (U x U)^dagger: entry L is the overlap of the
/// transformed coherent-average operator with the normalized projector P_L.
InvariantVector transformed_coherent_vector(const UnitaryGate& u, InvariantBasis basis);

/// Single P-basis component p_L of the transformed coherent-average operator.
double transformed_coherent_component(const UnitaryGate& u, int L);

/// Entangling power e_p(E_q, U) from the invariant inner-product formula.
double ep_geometric(const UnitaryGate& u, int q);

/// Deviations from the three identities that hold for every unitary:
/// the parity-restricted projector sums of the transformed coherent-average
/// operator (target 1) and of the measure operator (target
/// (j+1)(2j+1)/(2j+1-q)), and the full multipole sum of the measure operator
/// (target twice that).
struct HyperplaneResiduals {
    double coherent_p = 0.0;
    double measure_p = 0.0;
    double measure_t = 0.0;
};
HyperplaneResiduals hyperplane_residuals(const UnitaryGate& u, int q);

/// Closed forms for j = 1, 3/2, 2; throws std::domain_error for other spins.
double ep_closed_small(const UnitaryGate& u, int q);

/// j=1 trace form (3/5)(1 - |Tr(Phi U^T Phi U)|^2 / 9).
double ep_trace_form_j1(const UnitaryGate& u);

/// Nonlocal factor A(c) of the j=1 Cartan decomposition together with its
/// entangling power (4/15)(sin^2 c12 + sin^2 c13 + sin^2 c23).
/// Requires c1 + c2 + c3 = 0 within 1e-12.
std::pair<UnitaryGate, double> cartan_gate_j1(double c1, double c2, double c3);

/// e_p(E_q, U) - e_p(E_q, U^dagger); identically zero for j = 1 and 3/2.
double dagger_gap(const UnitaryGate& u, int q);

}  // namespace spinpow

#endif
