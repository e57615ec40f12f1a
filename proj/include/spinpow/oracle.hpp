#ifndef SPINPOW_ORACLE_HPP
#define SPINPOW_ORACLE_HPP

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "spinpow/half_int.hpp"
#include "spinpow/invariant.hpp"
#include "spinpow/operators.hpp"

namespace spinpow {

/// Pure state of a single spin-j, basis m descending, unit norm.
struct SpinState {
    HalfInt j;
    Vector amplitudes;
};

/// Spin-coherent state |j,n> = D(phi, theta, 0)|j,j>.
SpinState spin_coherent(HalfInt j, double theta, double phi);

SpinState apply_gate(const UnitaryGate& u, const SpinState& psi);

enum class ReductionMethod { Multipole, QubitTrace };

/// Reduced density matrix of q of the 2j constituent qubits, on the spin-q/2
/// space. The multipole route rescales the state's tensor components; the
/// qubit route embeds into (C^2)^(2j), traces, and projects back (2j <= 12).
Matrix reduced_state(const SpinState& psi, int q, ReductionMethod method);

/// Isometry from the spin-j space into the symmetric sector of 2j qubits.
Eigen::MatrixXd dicke_embedding(HalfInt j);

/// Normalized linear entanglement entropy E_q = (d/(d-1))(1 - Tr rho_A^2)
/// with d = q+1, for the bipartition q | 2j-q. Requires 1 <= q <= 2j-1; the
/// canonical measures have q <= floor(j).
double linear_entropy(const SpinState& psi, int q);

/// Purity Tr(rho_A^2) of the q-qubit reduced state, multipole route.
double reduced_purity(const SpinState& psi, int q);

/// Product quadrature on the sphere: Gauss-Legendre in cos(theta), uniform
/// trapezoid in phi. Exact for the degree-4j band when n_theta >= 2j+1 and
/// n_phi >= 4j+1.
struct QuadratureSpec {
    int n_theta = 0;
    int n_phi = 0;

    static QuadratureSpec defaults(HalfInt j) { return {j.twice() + 2, 2 * j.twice() + 2}; }
    bool exact_for(HalfInt j) const {
        return n_theta >= j.twice() + 1 && n_phi >= 2 * j.twice() + 1;
    }
};

struct QuadratureResult {
    double value = 0.0;
    bool exact = true;  // false when the grid is undersized for this j
};

/// Entangling power as the quadrature average of E_q over coherent inputs --
/// the brute-force definition, independent of the invariant reformulation.
QuadratureResult ep_quadrature(const UnitaryGate& u, int q, QuadratureSpec spec);
QuadratureResult ep_quadrature(const UnitaryGate& u, int q);

/// Monte-Carlo sphere average of E_q; sanity mode only.
double ep_montecarlo(const UnitaryGate& u, int q, int n_samples, uint64_t seed);

/// Gauss-Legendre nodes and weights on [-1, 1].
void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights);

}  // namespace spinpow

#endif
