#include <doctest.h>

#include <cmath>
#include <cstdlib>

#include "spinpow/haar.hpp"
#include "spinpow/oracle.hpp"

using namespace spinpow;

namespace {

HalfInt h(int twice) { return HalfInt(twice); }

double ep_along(const UnitaryGate& u, int q, const Matrix& gen, double eps) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(gen);
    Vector phases(gen.rows());
    for (Eigen::Index k = 0; k < gen.rows(); ++k)
        phases(k) = std::exp(Complex(0.0, eps * es.eigenvalues()(k)));
    const Matrix moved = es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
    return ep_geometric({u.j, moved * u.matrix}, q);
}

}  // namespace

TEST_SUITE("haar") {

TEST_CASE("haar sampling: unitarity, determinism, first moment") {
    const UnitaryGate a = haar_unitary(h(4), 7);
    CHECK(a.unitarity_defect() < 1e-12);
    const UnitaryGate b = haar_unitary(h(4), 7);
    CHECK((a.matrix - b.matrix).cwiseAbs().maxCoeff() == 0.0);
    CHECK((a.matrix - haar_unitary(h(4), 8).matrix).cwiseAbs().maxCoeff() > 1e-3);

    // E|U_11|^2 = 1/d; var(|U11|^2) = 1/d^2 (d+1)/(d-1)... use 1/18 for d=3
    const int n = 100000;
    double mean = 0.0;
    CounterRng rng(123, 0);
    for (int k = 0; k < n; ++k) mean += std::norm(haar_matrix(3, rng)(0, 0));
    mean /= n;
    const double se = std::sqrt(1.0 / 18.0 / n);
    CHECK(std::abs(mean - 1.0 / 3.0) < 3.0 * se);
}

TEST_CASE("analytic Haar averages") {
    CHECK(average_ep_analytic(h(2), 1) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(average_ep_analytic(h(3), 1) == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
    CHECK(average_ep_analytic(h(4), 1) == doctest::Approx(0.75).epsilon(1e-15));
    CHECK(average_ep_analytic(h(4), 2) == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
    CHECK(average_ep_analytic(h(5), 2) == doctest::Approx(0.75).epsilon(1e-15));
    // the unconstrained-qubit analog differs
    CHECK(average_ep_nonsymmetric(h(2), 1) == doctest::Approx(1.0 - 3.0 / 5.0).epsilon(1e-15));
    CHECK_THROWS_AS(average_ep_analytic(h(2), 2), std::domain_error);
}

TEST_CASE("monte-carlo Haar averages agree within four standard errors") {
    for (const auto& [j, q] : std::vector<std::pair<HalfInt, int>>{
             {h(2), 1}, {h(3), 1}, {h(4), 1}, {h(4), 2}}) {
        const McAverage mc = average_ep_mc(j, q, 2000, 99, 20);
        CHECK(std::abs(mc.mean - average_ep_analytic(j, q)) < 4.0 * mc.std_error);
        // the distribution concentrates: sample spread well below the mean
        CHECK(mc.std_error * std::sqrt(2000.0) < 0.2 * mc.mean);
        long total = 0;
        for (long c : mc.histogram.counts) total += c;
        CHECK(total == 2000);
    }
    // deterministic per seed
    CHECK(average_ep_mc(h(2), 1, 500, 11).mean == average_ep_mc(h(2), 1, 500, 11).mean);
    CHECK_THROWS_AS(average_ep_mc(h(2), 1, 50, 1), std::domain_error);
    CHECK_THROWS_AS(optimize_ep(h(2), 1, OptimizerConfig{1, 0}), std::domain_error);
    CHECK_THROWS_AS(uhat({h(2), 2.0 * Matrix::Identity(3, 3)}, InvariantBasis::P),
                    std::domain_error);
}

TEST_CASE("su(d) generator basis") {
    for (int d : {2, 3, 4, 5, 6}) {
        const auto gens = su_generators(d);
        REQUIRE(static_cast<int>(gens.size()) == d * d - 1);
        for (size_t a = 0; a < gens.size(); ++a) {
            CHECK(std::abs(gens[a].trace()) < 1e-14);
            CHECK((gens[a] - gens[a].adjoint().eval()).cwiseAbs().maxCoeff() < 1e-14);
            for (size_t b = a; b < gens.size(); ++b) {
                const double overlap = (gens[a] * gens[b]).trace().real();
                CHECK(std::abs(overlap - (a == b ? 2.0 : 0.0)) < 1e-13);
            }
        }
    }
}

TEST_CASE("gradient vanishes at rotations and at the catalog maxima") {
    const UnitaryGate rot{h(3), Matrix::Identity(4, 4)};
    CHECK(ep_gradient(rot, 1).norm() < 1e-10);
    CHECK(ep_gradient(known_gate(KnownGate::J1Omega), 1).norm() < 1e-10);
    CHECK(ep_gradient(known_gate(KnownGate::J1Perm), 1).norm() < 1e-10);
    CHECK(ep_gradient(known_gate(KnownGate::J32Opt), 1).norm() < 1e-10);
    CHECK(ep_gradient(known_gate(KnownGate::J2Q1), 1).norm() < 1e-10);
    CHECK(ep_gradient(known_gate(KnownGate::J2Q2), 2).norm() < 1e-10);
}

TEST_CASE("gradient matches central finite differences") {
    int cases = 0;
    for (const auto& [j, q] :
         std::vector<std::pair<HalfInt, int>>{{h(2), 1}, {h(3), 1}, {h(4), 1}, {h(4), 2}}) {
        const auto gens = su_generators(dim(j));
        for (uint64_t s = 0; s < 13; ++s) {
            const UnitaryGate u = haar_unitary(j, 301, s);
            const Eigen::VectorXd g = ep_gradient(u, q);
            const double eps = 1e-5;
            for (size_t a = 0; a < gens.size(); a += 3) {
                const double fd =
                    (ep_along(u, q, gens[a], eps) - ep_along(u, q, gens[a], -eps)) / (2.0 * eps);
                CHECK(std::abs(fd - g(static_cast<Eigen::Index>(a))) < 1e-6);
            }
            ++cases;
        }
    }
    CHECK(cases >= 50);
}

TEST_CASE("hessian spectra at the catalog gates") {
    {
        const CriticalityReport r = criticality_report(known_gate(KnownGate::J1Omega), 1);
        REQUIRE(r.hessian_eigenvalues.size() == 8);
        CHECK(r.zero_count == 6);
        CHECK(r.classification == Criticality::Maximum);
        // two equal negative eigenvalues
        const double lam = r.hessian_eigenvalues(7);
        CHECK(lam < 0.0);
        CHECK(r.hessian_eigenvalues(6) == doctest::Approx(lam).epsilon(1e-10));
    }
    {
        const CriticalityReport r = criticality_report(known_gate(KnownGate::J32Opt), 1);
        REQUIRE(r.hessian_eigenvalues.size() == 15);
        CHECK(r.zero_count == 6);
        CHECK(r.classification == Criticality::Maximum);
        // degeneracies 5 and 4 with eigenvalue ratio 5
        const double mild = r.hessian_eigenvalues(6), deep = r.hessian_eigenvalues(11);
        CHECK(r.hessian_eigenvalues(10) == doctest::Approx(mild).epsilon(1e-10));
        CHECK(r.hessian_eigenvalues(14) == doctest::Approx(deep).epsilon(1e-10));
        CHECK(deep / mild == doctest::Approx(5.0).epsilon(1e-9));
    }
    for (const auto& [id, q] :
         std::vector<std::pair<KnownGate, int>>{{KnownGate::J2Q1, 1}, {KnownGate::J2Q2, 2}}) {
        const CriticalityReport r = criticality_report(known_gate(id), q);
        CHECK(r.classification == Criticality::Maximum);
        CHECK(r.zero_count >= 6);
    }
    // rotations are global minima
    const CriticalityReport r = criticality_report({h(2), Matrix::Identity(3, 3)}, 1);
    CHECK(r.classification == Criticality::Minimum);
}

TEST_CASE("hessian matches second finite differences at critical points") {
    const UnitaryGate u = known_gate(KnownGate::J32Opt);
    const Eigen::MatrixXd hess = ep_hessian(u, 1);
    const auto gens = su_generators(4);
    const double eps = 1e-4;
    const double ep0 = ep_geometric(u, 1);
    for (size_t a = 0; a < gens.size(); a += 4) {
        const double second =
            (ep_along(u, 1, gens[a], eps) - 2.0 * ep0 + ep_along(u, 1, gens[a], -eps)) /
            (eps * eps);
        CHECK(std::abs(second - hess(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(a))) <
              1e-5);
    }
}

TEST_CASE("optimizer recovers the known maxima for small spins") {
    OptimizerConfig cfg;
    cfg.seed = 4;
    cfg.restarts = 4;
    const OptimizeResult r1 = optimize_ep(h(2), 1, cfg);
    CHECK(r1.ep == doctest::Approx(0.6).epsilon(1e-8));
    CHECK(r1.ep <= 0.6 + 1e-9);
    CHECK(r1.converged);
    CHECK(r1.report.zero_count >= 6);

    const OptimizeResult r2 = optimize_ep(h(3), 1, cfg);
    CHECK(r2.ep == doctest::Approx(20.0 / 21.0).epsilon(1e-8));
    CHECK(r2.ep <= 20.0 / 21.0 + 1e-9);
}

TEST_CASE("known gates are unitary and correctly named") {
    for (KnownGate id : known_gate_catalog()) {
        const UnitaryGate u = known_gate(id);
        CHECK(u.unitarity_defect() < 1e-14);
        CHECK(known_gate_from_name(known_gate_name(id)) == id);
    }
    CHECK(known_gate_conjectured(KnownGate::J2Q1));
    CHECK(known_gate_conjectured(KnownGate::J2Q2));
    CHECK_FALSE(known_gate_conjectured(KnownGate::J32Opt));
    CHECK_THROWS_AS(known_gate_from_name("nope"), std::invalid_argument);
    // the j=1 permutation gate swaps the lower two basis states
    const Matrix perm = known_gate(KnownGate::J1Perm).matrix;
    CHECK(perm(0, 0).real() == 1.0);
    CHECK(perm(1, 2).real() == 1.0);
    CHECK(perm(2, 1).real() == 1.0);
}

TEST_CASE("schmidt spectra of coupled states") {
    const Eigen::VectorXd singlet = schmidt_spectrum(h(2), h(0), h(0));
    for (int k = 0; k < 3; ++k)
        CHECK(singlet(k) == doctest::Approx(1.0 / std::sqrt(3.0)).epsilon(1e-13));

    const Eigen::VectorXd pm1 = schmidt_spectrum(h(3), h(2), h(2));
    CHECK(pm1(0) == doctest::Approx(2.0 / std::sqrt(10.0)).epsilon(1e-13));
    CHECK(pm1(1) == doctest::Approx(std::sqrt(3.0 / 10.0)).epsilon(1e-13));
    CHECK(pm1(2) == doctest::Approx(std::sqrt(3.0 / 10.0)).epsilon(1e-13));
    CHECK(pm1(3) == doctest::Approx(0.0).epsilon(1e-13));

    const Eigen::VectorXd zero = schmidt_spectrum(h(3), h(2), h(0));
    CHECK(zero(0) == doctest::Approx(3.0 / (2.0 * std::sqrt(5.0))).epsilon(1e-13));
    CHECK(zero(1) == doctest::Approx(3.0 / (2.0 * std::sqrt(5.0))).epsilon(1e-13));
    CHECK(zero(2) == doctest::Approx(1.0 / (2.0 * std::sqrt(5.0))).epsilon(1e-13));
    CHECK(zero(3) == doctest::Approx(1.0 / (2.0 * std::sqrt(5.0))).epsilon(1e-13));

    for (HalfInt j : {h(2), h(3), h(4)}) {
        for (int L = 0; L <= j.twice(); ++L) {
            const Eigen::VectorXd s = schmidt_spectrum(j, HalfInt::from_int(L), h(0));
            CHECK(s.squaredNorm() == doctest::Approx(1.0).epsilon(1e-12));
        }
    }
}

TEST_CASE("schmidt spectra are invariant under the doubled gate") {
    for (HalfInt j : {h(2), h(3)}) {
        const UnitaryGate u = haar_unitary(j, 47, 8);
        for (int L = 0; L <= j.twice(); ++L) {
            const Vector state = coupled_state(j, HalfInt::from_int(L), h(0));
            const Eigen::VectorXd before = schmidt_values(j, state);
            const Eigen::VectorXd after = schmidt_values(j, pair_apply(u.matrix, state));
            CHECK((before - after).cwiseAbs().maxCoeff() < 1e-10);
        }
    }
}

TEST_CASE("schmidt transport checks for the optimal gates") {
    {
        const UnitaryGate u = known_gate(KnownGate::J1Perm);
        const Vector src = (std::sqrt(2.0) * coupled_state(h(2), h(4), h(2)) -
                            coupled_state(h(2), h(4), h(-4))) /
                           std::sqrt(3.0);
        const Vector dst = coupled_state(h(2), h(0), h(0));
        CHECK(schmidt_transport_check(u, src, dst) == doctest::Approx(1.0).epsilon(1e-10));
    }
    {
        const UnitaryGate u = known_gate(KnownGate::J32Opt);
        CHECK(schmidt_transport_check(u, coupled_state(h(3), h(6), h(0)),
                                      coupled_state(h(3), h(2), h(0))) ==
              doctest::Approx(1.0).epsilon(1e-10));
        // the total-spin-3 states carried onto |1,+-1> are the deficit
        // eigenstates of the distribution: -i sqrt(3/5)|3,+-2> + sqrt(2/5)|3,-+3>
        const Complex mi(0.0, -1.0);
        const Vector src_plus = mi * std::sqrt(0.6) * coupled_state(h(3), h(6), h(4)) +
                                std::sqrt(0.4) * coupled_state(h(3), h(6), h(-6));
        CHECK(schmidt_transport_check(u, src_plus, coupled_state(h(3), h(2), h(2))) ==
              doctest::Approx(1.0).epsilon(1e-10));
        const Vector src_minus = mi * std::sqrt(0.6) * coupled_state(h(3), h(6), h(-4)) +
                                 std::sqrt(0.4) * coupled_state(h(3), h(6), h(6));
        CHECK(schmidt_transport_check(u, src_minus, coupled_state(h(3), h(2), h(-2))) ==
              doctest::Approx(1.0).epsilon(1e-10));
        // equal Schmidt spectra, as transport requires
        CHECK((schmidt_values(h(3), src_plus) - schmidt_spectrum(h(3), h(2), h(2)))
                  .cwiseAbs()
                  .maxCoeff() < 1e-12);
    }
    // unequal spectra make unit overlap impossible
    const UnitaryGate u = haar_unitary(h(2), 53, 1);
    const double overlap = schmidt_transport_check(u, coupled_state(h(2), h(4), h(0)),
                                                   coupled_state(h(2), h(0), h(0)));
    CHECK(overlap < 0.999);
}

TEST_CASE("worker thread cap honors the environment") {
    setenv("SPINPOW_THREADS", "3", 1);
    CHECK(worker_threads() == 3);
    unsetenv("SPINPOW_THREADS");
    CHECK(worker_threads() >= 1);
}

}  // TEST_SUITE
