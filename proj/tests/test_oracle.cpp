#include <doctest.h>

#include <cmath>
#include <numbers>

#include "spinpow/angular.hpp"
#include "spinpow/haar.hpp"
#include "spinpow/oracle.hpp"

using namespace spinpow;

namespace {

constexpr double kPi = std::numbers::pi;

HalfInt h(int twice) { return HalfInt(twice); }

SpinState random_state(HalfInt j, uint64_t seed, uint64_t stream) {
    CounterRng rng(seed, stream);
    Vector amp(dim(j));
    for (int i = 0; i < dim(j); ++i) amp(i) = Complex(rng.next_normal(), rng.next_normal());
    amp /= amp.norm();
    return {j, amp};
}

double bloch_expectation(const SpinState& psi, double theta, double phi) {
    const Matrix jn = std::sin(theta) * std::cos(phi) * spin_jx(psi.j) +
                      std::sin(theta) * std::sin(phi) * spin_jy(psi.j) +
                      std::cos(theta) * spin_jz(psi.j);
    return (psi.amplitudes.adjoint() * jn * psi.amplitudes)(0, 0).real();
}

}  // namespace

TEST_SUITE("oracle") {

TEST_CASE("spin coherent states point where they should") {
    for (HalfInt j : {h(1), h(2), h(3), h(4), h(5)}) {
        const SpinState top = spin_coherent(j, 0.0, 1.3);
        CHECK(std::abs(top.amplitudes(0)) == doctest::Approx(1.0).epsilon(1e-14));

        for (double theta : {0.4, 1.2, 2.6}) {
            for (double phi : {0.0, 2.1, 5.0}) {
                const SpinState psi = spin_coherent(j, theta, phi);
                CHECK(psi.amplitudes.norm() == doctest::Approx(1.0).epsilon(1e-13));
                CHECK(bloch_expectation(psi, theta, phi) ==
                      doctest::Approx(j.value()).epsilon(1e-11));
                // agreement with the rotation-matrix route D(phi, theta, 0)|j,j>
                const Vector viaD = wigner_D(j, phi, theta, 0.0).col(0);
                CHECK((psi.amplitudes - viaD).cwiseAbs().maxCoeff() < 1e-12);
            }
        }
    }
    // antipodal coherent state is the lowest-weight state up to phase
    const SpinState down = spin_coherent(h(2), kPi, 0.0);
    CHECK(std::abs(down.amplitudes(2)) == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("tensor square of a coherent state is the spin-2j coherent state") {
    for (HalfInt j : {h(1), h(2), h(3)}) {
        for (double theta : {0.7, 1.9}) {
            const SpinState one = spin_coherent(j, theta, 1.1);
            const SpinState two = spin_coherent(h(2 * j.twice()), theta, 1.1);
            Vector pair(dim(j) * dim(j));
            for (int a = 0; a < dim(j); ++a)
                for (int b = 0; b < dim(j); ++b)
                    pair(a * dim(j) + b) = one.amplitudes(a) * one.amplitudes(b);
            // expand through the coupled block of total spin 2j
            const Vector coupled = coupled_block(j, h(2 * j.twice())).adjoint() * pair;
            CHECK((coupled - two.amplitudes).cwiseAbs().maxCoeff() < 1e-10);
        }
    }
}

TEST_CASE("reduced states: product input stays pure") {
    for (int q : {1, 2}) {
        const SpinState top = spin_coherent(h(4), 0.0, 0.0);
        const Matrix rho = reduced_state(top, q, ReductionMethod::Multipole);
        Matrix expected = Matrix::Zero(q + 1, q + 1);
        expected(0, 0) = 1.0;
        CHECK((rho - expected).cwiseAbs().maxCoeff() < 1e-12);
    }
}

TEST_CASE("reduced state of |1,0> is maximally mixed for q=1") {
    SpinState psi{h(2), Vector::Zero(3)};
    psi.amplitudes(1) = 1.0;
    for (ReductionMethod m : {ReductionMethod::Multipole, ReductionMethod::QubitTrace}) {
        const Matrix rho = reduced_state(psi, 1, m);
        CHECK((rho - 0.5 * Matrix::Identity(2, 2)).cwiseAbs().maxCoeff() < 1e-12);
    }
    CHECK(linear_entropy(psi, 1) == doctest::Approx(1.0).epsilon(1e-13));
}

TEST_CASE("the two reduction routes agree on random states") {
    for (HalfInt j : {h(2), h(3), h(4), h(5)}) {
        for (int q = 1; q <= j.twice(); ++q) {
            const SpinState psi = random_state(j, 7, static_cast<uint64_t>(10 * q));
            const Matrix a = reduced_state(psi, q, ReductionMethod::Multipole);
            const Matrix b = reduced_state(psi, q, ReductionMethod::QubitTrace);
            CHECK((a - b).cwiseAbs().maxCoeff() < 1e-9);
            CHECK(std::abs(a.trace().real() - 1.0) < 1e-10);
            CHECK((a - a.adjoint().eval()).cwiseAbs().maxCoeff() < 1e-10);
            Eigen::SelfAdjointEigenSolver<Matrix> es(a);
            CHECK(es.eigenvalues().minCoeff() > -1e-10);
        }
    }
    CHECK_THROWS_AS(reduced_state(random_state(h(2), 1, 1), 3, ReductionMethod::Multipole),
                    std::domain_error);
}

TEST_CASE("reducing to all qubits reproduces the state itself") {
    const SpinState psi = random_state(h(3), 13, 4);
    const Matrix rho = reduced_state(psi, 3, ReductionMethod::Multipole);
    const Matrix expected = psi.amplitudes * psi.amplitudes.adjoint();
    CHECK((rho - expected).cwiseAbs().maxCoeff() < 1e-11);
}

TEST_CASE("purity is the same from either side of the bipartition") {
    for (HalfInt j : {h(3), h(4), h(5)}) {
        for (int q = 1; q < j.twice(); ++q) {
            const SpinState psi = random_state(j, 17, static_cast<uint64_t>(q));
            CHECK(reduced_purity(psi, q) ==
                  doctest::Approx(reduced_purity(psi, j.twice() - q)).epsilon(1e-11));
        }
    }
}

TEST_CASE("dicke embedding is an isometry") {
    for (HalfInt j : {h(1), h(2), h(3), h(5)}) {
        const Eigen::MatrixXd s = dicke_embedding(j);
        CHECK((s.transpose() * s - Eigen::MatrixXd::Identity(dim(j), dim(j)))
                  .cwiseAbs()
                  .maxCoeff() < 1e-13);
    }
}

TEST_CASE("coherent states have zero entropy, coupled pair states match their spectra") {
    for (HalfInt j : {h(2), h(3), h(4)}) {
        for (int q = 1; q <= j.twice() / 2; ++q) {
            const SpinState psi = spin_coherent(j, 1.1, 0.7);
            CHECK(std::abs(linear_entropy(psi, q)) < 1e-12);
        }
    }
    // pair linear entropy from the Schmidt spectrum of |j,j,L,M>, both routes:
    // 1 - sum Gamma_k^2 from singular values vs purity of the traced pair
    const Eigen::VectorXd schmidt = schmidt_spectrum(h(3), h(2), h(2));
    double sum_sq = 0.0;
    for (Eigen::Index k = 0; k < schmidt.size(); ++k)
        sum_sq += schmidt(k) * schmidt(k) * schmidt(k) * schmidt(k);
    const Vector pair = coupled_state(h(3), h(2), h(2));
    const Matrix rho_a = partial_trace_second(pair * pair.adjoint(), 4);
    CHECK((rho_a * rho_a).trace().real() == doctest::Approx(sum_sq).epsilon(1e-12));
    CHECK(sum_sq == doctest::Approx(0.34).epsilon(1e-12));
    // normalized pair entropy (d = 4): (4/3)(1 - 0.34)
    CHECK(4.0 / 3.0 * (1.0 - sum_sq) == doctest::Approx(0.88).epsilon(1e-12));

    CHECK_THROWS_AS(linear_entropy(spin_coherent(h(2), 0.1, 0.1), 2), std::domain_error);
}

TEST_CASE("gauss-legendre nodes integrate polynomials exactly") {
    std::vector<double> x, w;
    gauss_legendre(5, x, w);
    double total = 0.0, x2 = 0.0, x8 = 0.0;
    for (int i = 0; i < 5; ++i) {
        total += w[static_cast<size_t>(i)];
        x2 += w[static_cast<size_t>(i)] * x[static_cast<size_t>(i)] * x[static_cast<size_t>(i)];
        x8 += w[static_cast<size_t>(i)] * std::pow(x[static_cast<size_t>(i)], 8.0);
    }
    CHECK(total == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(x2 == doctest::Approx(2.0 / 3.0).epsilon(1e-14));
    CHECK(x8 == doctest::Approx(2.0 / 9.0).epsilon(1e-13));  // degree 8 <= 2*5-1
}

TEST_CASE("quadrature oracle on the catalog") {
    const UnitaryGate rot{h(2), wigner_D(h(2), 0.9, 2.0, 0.3)};
    CHECK(std::abs(ep_quadrature(rot, 1).value) < 1e-12);
    CHECK(ep_quadrature(known_gate(KnownGate::J1Perm), 1).value ==
          doctest::Approx(0.6).epsilon(1e-10));
    CHECK(ep_quadrature(known_gate(KnownGate::J2Q2), 2).value ==
          doctest::Approx(25.0 / 28.0).epsilon(1e-9));
    // an undersized grid is flagged rather than rejected
    const QuadratureResult rough = ep_quadrature(known_gate(KnownGate::J2Q2), 2, {3, 4});
    CHECK_FALSE(rough.exact);
}

TEST_CASE("quadrature agrees with the geometric formula on random gates") {
    for (const auto& [j, q] :
         std::vector<std::pair<HalfInt, int>>{{h(2), 1}, {h(3), 1}, {h(4), 2}, {h(5), 2}}) {
        for (uint64_t s = 0; s < 10; ++s) {
            const UnitaryGate u = haar_unitary(j, 23, s);
            CHECK(std::abs(ep_quadrature(u, q).value - ep_geometric(u, q)) < 1e-8);
        }
    }
}

TEST_CASE("quadrature spec invariants and determinism") {
    const QuadratureSpec spec = QuadratureSpec::defaults(h(4));
    CHECK(spec.n_theta >= 5);
    CHECK(spec.n_phi >= 9);
    CHECK(spec.exact_for(h(4)));
    CHECK_FALSE(QuadratureSpec{2, 2}.exact_for(h(4)));
    const UnitaryGate u = haar_unitary(h(4), 29, 1);
    CHECK(ep_quadrature(u, 1).value == ep_quadrature(u, 1).value);
}

TEST_CASE("monte-carlo sphere average lands near the exact value") {
    const double mc = ep_montecarlo(known_gate(KnownGate::J1Perm), 1, 20000, 5);
    CHECK(std::abs(mc - 0.6) < 0.02);
}

}  // TEST_SUITE
