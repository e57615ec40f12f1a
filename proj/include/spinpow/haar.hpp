#ifndef SPINPOW_HAAR_HPP
#define SPINPOW_HAAR_HPP

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include "spinpow/invariant.hpp"
#include "spinpow/rng.hpp"

namespace spinpow {

/// Haar-distributed unitary via Ginibre + QR with the R-diagonal phase fix.
Matrix haar_matrix(int d, CounterRng& rng);
UnitaryGate haar_unitary(HalfInt j, uint64_t seed, uint64_t stream = 0);

/// Random SU(2) rotation gate D^j(alpha, beta, gamma) with Haar-uniform
/// rotation angles.
UnitaryGate random_rotation_gate(HalfInt j, CounterRng& rng);

/// Haar average of e_p(E_q, U): 1 - 1/(2j+1-q).
double average_ep_analytic(HalfInt j, int q);

/// The analogous average for n = 2j unconstrained qubits, 1 - (2^q+1)/(2^n+1);
/// exposed for comparison with the symmetric-sector value.
double average_ep_nonsymmetric(HalfInt j, int q);

struct Histogram {
    std::vector<double> edges;   // bins+1 ascending edges
    std::vector<long> counts;    // bins entries
};

struct McAverage {
    double mean = 0.0;
    double std_error = 0.0;
    int n_samples = 0;
    Histogram histogram;  // empty unless bins > 0 was requested
};

/// Monte-Carlo Haar average of e_p; deterministic per seed, parallel over
/// workers with a fixed aggregation order.
McAverage average_ep_mc(HalfInt j, int q, int n_samples, uint64_t seed, int bins = 0);

void write_histogram_csv(const std::string& path, const Histogram& h);

/// Generalized Gell-Mann basis of su(d), normalized Tr(Ga Gb) = 2 delta_ab.
std::vector<Matrix> su_generators(int d);

/// Riemannian gradient of e_p over the su(d) generator basis: component a is
/// the derivative of e_p along exp(i eps G_a) U at eps = 0.
Eigen::VectorXd ep_gradient(const UnitaryGate& u, int q);

/// Symmetrized Hessian of e_p in the same basis.
Eigen::MatrixXd ep_hessian(const UnitaryGate& u, int q);

enum class Criticality { Maximum, Saddle, Minimum, Inconclusive };
std::string to_string(Criticality c);

struct CriticalityReport {
    double grad_norm = 0.0;
    Eigen::VectorXd hessian_eigenvalues;  // descending
    int zero_count = 0;                   // |lambda| below zero_tol * scale
    Criticality classification = Criticality::Inconclusive;
};

CriticalityReport criticality_report(const UnitaryGate& u, int q, double grad_tol = 1e-7,
                                     double zero_tol = 1e-6);

struct OptimizerConfig {
    uint64_t seed = 1;
    int restarts = 20;
    double step_init = 0.25;
    double step_shrink = 0.5;
    // Line-search progress is limited by double-precision differences of e_p,
    // which floors the reachable gradient norm near 3e-8.
    double grad_tol = 1e-7;
    int max_iters = 20000;
};

struct OptimizeResult {
    UnitaryGate gate;
    double ep = 0.0;
    CriticalityReport report;
    bool converged = false;
    int best_restart = -1;
    int iterations = 0;
};

/// Gradient ascent over the unitary group with exponential retraction and
/// backtracking line search, best result over Haar-random restarts.
OptimizeResult optimize_ep(HalfInt j, int q, const OptimizerConfig& config);

/// The catalog of extremal gates.
enum class KnownGate { J1Omega, J1Perm, J32Opt, J2Q1, J2Q2 };
UnitaryGate known_gate(KnownGate id);
KnownGate known_gate_from_name(const std::string& name);  // "j1_perm", ...
std::string known_gate_name(KnownGate id);
std::vector<KnownGate> known_gate_catalog();
/// True for the j=2 gates, whose optimality is conjectural.
bool known_gate_conjectured(KnownGate id);

/// Singular values (descending) of the coefficient matrix of a two-spin state.
Eigen::VectorXd schmidt_values(HalfInt j, const Vector& pair_state);

/// Schmidt numbers of the coupled state |j,j,L,M>.
Eigen::VectorXd schmidt_spectrum(HalfInt j, HalfInt L, HalfInt M);

/// |<dst| (U x U) |src>|; equal Schmidt spectra of src and dst are necessary
/// for the value 1.
double schmidt_transport_check(const UnitaryGate& u, const Vector& src, const Vector& dst);

/// Worker cap honoring the SPINPOW_THREADS environment variable.
int worker_threads();

}  // namespace spinpow

#endif
