#ifndef SPINPOW_DISTRIBUTION_HPP
#define SPINPOW_DISTRIBUTION_HPP

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "spinpow/invariant.hpp"
#include "spinpow/oracle.hpp"
#include "spinpow/rotations.hpp"

namespace spinpow {

/// Restriction of (U x U)^dagger M_q (U x U) to the total-spin-2j block,
/// expressed in the coupled basis with M descending: a Hermitian
/// (4j+1) x (4j+1) matrix whose coherent expectation gives 1 - E_q.
Matrix dq_matrix(const UnitaryGate& u, int q);

/// E_q(U |j,n>) evaluated through the dq_matrix quadratic form.
double entanglement_at(const UnitaryGate& u, int q, double theta, double phi);

/// Eigendecomposition of dq_matrix: E_q(n) = 1 - sum_k sigma_k |<2j,n|psi_k>|^2.
/// Eigenvalues descending; eigenvectors carry a deterministic phase (first
/// significant component real positive) and degenerate groups are re-spanned
/// from canonical seed vectors so the output is reproducible.
struct HusimiDecomposition {
    HalfInt j;                      // spin of the gate (states live on spin 2j)
    int q = 1;
    Eigen::VectorXd eigenvalues;
    Matrix eigenstates;             // columns, on the spin-2j space

    double entangling_power() const;  // 1 - sum sigma_k / (4j+1)
};

HusimiDecomposition husimi_decomposition(const UnitaryGate& u, int q);

/// Reconstruction 1 - sum_k sigma_k |<2j,n|psi_k>|^2.
double husimi_reconstruct(const HusimiDecomposition& h, double theta, double phi);

/// Closed-form entanglement distributions of the catalog gates.
enum class ReferenceDistribution { J1Perm, J32Opt, J2Q2Affine };
double reference_distribution(ReferenceDistribution which, double theta, double phi);

struct SphereSample {
    double theta = 0.0;
    double phi = 0.0;
    double value = 0.0;
};

/// Row-major (theta, phi) grid of E_q values; theta inclusive of both poles,
/// phi periodic on [0, 2pi).
std::vector<SphereSample> distribution_grid(const UnitaryGate& u, int q, int n_theta, int n_phi);

/// Max over a test grid of |E_q(R n) - E_q(n)|; near zero iff R is a symmetry
/// of the distribution.
double symmetry_residual(const UnitaryGate& u, int q, const EulerAngles& rotation,
                         int n_theta = 24, int n_phi = 48);

/// Extrema of the distribution, located by grid search plus local refinement.
struct SphereExtrema {
    SphereSample min;
    SphereSample max;
};
SphereExtrema find_extrema(const UnitaryGate& u, int q, int n_theta = 61, int n_phi = 120);

/// Refine a single extremum of E_q near the given starting point.
SphereSample refine_extremum(const UnitaryGate& u, int q, double theta, double phi, bool maximize);

/// CSV export: header theta,phi,value; with stereographic=true two extra
/// columns x,y = tan(theta/2) (cos phi, sin phi).
void write_grid_csv(const std::string& path, const std::vector<SphereSample>& samples,
                    bool stereographic = false);

}  // namespace spinpow

#endif
