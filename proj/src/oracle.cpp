#include "spinpow/oracle.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "spinpow/angular.hpp"
#include "spinpow/rng.hpp"

namespace spinpow {

namespace {

constexpr double kPi = std::numbers::pi;

// q! / (2j)! * sqrt[(2j-sigma)!(2j+sigma+1)! / ((q-sigma)!(q+sigma+1)!)]
double reduction_scale(HalfInt j, int q, int sigma) {
    const int twoj = j.twice();
    return factorial(q) / factorial(twoj) *
           std::sqrt(factorial(twoj - sigma) * factorial(twoj + sigma + 1) /
                     (factorial(q - sigma) * factorial(q + sigma + 1)));
}

void require_reduction_q(HalfInt j, int q, const char* where) {
    if (q < 1 || q > j.twice())
        throw std::domain_error(std::string(where) + ": q=" + std::to_string(q) +
                                " invalid for j=" + j.str());
}

// Multipole components rho_{sigma mu} = <psi| T_{sigma mu}^dagger |psi> for
// sigma = 0..q, flattened mu-major within sigma.
std::vector<Complex> state_multipole_components(const SpinState& psi, int q) {
    std::vector<Complex> comps;
    comps.reserve(static_cast<size_t>((q + 1) * (q + 1)));
    for (int sigma = 0; sigma <= q; ++sigma) {
        for (int mu = -sigma; mu <= sigma; ++mu) {
            const Matrix t = multipole(psi.j, HalfInt::from_int(sigma), HalfInt::from_int(mu));
            comps.push_back((psi.amplitudes.adjoint() * t.adjoint() * psi.amplitudes)(0, 0));
        }
    }
    return comps;
}

}  // namespace

SpinState spin_coherent(HalfInt j, double theta, double phi) {
    if (j.twice() < 0) throw std::domain_error("spin_coherent: negative spin");
    const int d = dim(j);
    const double c = std::cos(theta / 2.0), s = std::sin(theta / 2.0);
    Vector amp(d);
    for (int i = 0; i < d; ++i) {
        const HalfInt m = spin_label(j, i);
        const int jm = spin_index(j, m);  // j - m
        const double mag = std::sqrt(binomial(j.twice(), jm)) *
                           std::pow(c, j.twice() - jm) * std::pow(s, jm);
        amp(i) = mag * std::exp(Complex(0.0, -m.value() * phi));
    }
    return {j, amp};
}

SpinState apply_gate(const UnitaryGate& u, const SpinState& psi) {
    if (u.j != psi.j) throw std::domain_error("apply_gate: spin mismatch");
    return {psi.j, u.matrix * psi.amplitudes};
}

Eigen::MatrixXd dicke_embedding(HalfInt j) {
    const int n = j.twice();
    if (n > 12) throw std::domain_error("dicke_embedding: 2j > 12 not materialized");
    const int d = dim(j);
    Eigen::MatrixXd s = Eigen::MatrixXd::Zero(1 << n, d);
    for (unsigned bits = 0; bits < (1u << n); ++bits) {
        const int k = __builtin_popcount(bits);  // number of lowered qubits
        s(bits, k) = 1.0;                        // column k corresponds to m = j-k
    }
    for (int k = 0; k < d; ++k) s.col(k) /= s.col(k).norm();
    return s;
}

Matrix reduced_state(const SpinState& psi, int q, ReductionMethod method) {
    require_reduction_q(psi.j, q, "reduced_state");
    const HalfInt j = psi.j;
    const HalfInt jq(q);  // q/2
    const int dq = q + 1;

    if (method == ReductionMethod::Multipole) {
        Matrix rho = Matrix::Zero(dq, dq);
        int idx = 0;
        const std::vector<Complex> comps = state_multipole_components(psi, q);
        for (int sigma = 0; sigma <= q; ++sigma) {
            const double scale = reduction_scale(j, q, sigma);
            for (int mu = -sigma; mu <= sigma; ++mu, ++idx)
                rho += scale * comps[static_cast<size_t>(idx)] *
                       multipole(jq, HalfInt::from_int(sigma), HalfInt::from_int(mu));
        }
        return rho;
    }

    // Qubit route: embed into 2j qubits, keep the first q, project back.
    const int n = j.twice();
    const Eigen::MatrixXd embed = dicke_embedding(j);
    const Vector full = embed * psi.amplitudes;
    // bits: qubit 0 is the highest-order bit of the index, so the first q
    // qubits form the row index of the (2^q) x (2^(n-q)) reshape
    const int rows = 1 << q, cols = 1 << (n - q);
    Eigen::Map<const Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>
        m(full.data(), rows, cols);
    const Matrix rho_qubits = m * m.adjoint();
    const Eigen::MatrixXd embed_q = dicke_embedding(jq);
    return embed_q.transpose() * rho_qubits * embed_q;
}

double reduced_purity(const SpinState& psi, int q) {
    require_reduction_q(psi.j, q, "reduced_purity");
    const std::vector<Complex> comps = state_multipole_components(psi, q);
    double purity = 0.0;
    int idx = 0;
    for (int sigma = 0; sigma <= q; ++sigma) {
        const double scale = reduction_scale(psi.j, q, sigma);
        for (int mu = -sigma; mu <= sigma; ++mu, ++idx)
            purity += scale * scale * std::norm(comps[static_cast<size_t>(idx)]);
    }
    return purity;
}

double linear_entropy(const SpinState& psi, int q) {
    if (q < 1 || q > psi.j.twice() - 1)
        throw std::domain_error("linear_entropy: q=" + std::to_string(q) +
                                " invalid for j=" + psi.j.str());
    const double d = q + 1.0;
    return d / (d - 1.0) * (1.0 - reduced_purity(psi, q));
}

void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights) {
    if (n < 1) throw std::domain_error("gauss_legendre: need at least one node");
    nodes.assign(static_cast<size_t>(n), 0.0);
    weights.assign(static_cast<size_t>(n), 0.0);
    const int half = (n + 1) / 2;
    for (int i = 0; i < half; ++i) {
        // Newton iteration from the Chebyshev estimate of the i-th root
        double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0, p1 = 0.0;
            for (int k = 0; k < n; ++k) {
                const double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * k + 1.0) * x * p1 - k * p2) / (k + 1.0);
            }
            dp = n * (x * p0 - p1) / (x * x - 1.0);
            const double dx = p0 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        nodes[static_cast<size_t>(i)] = -x;
        nodes[static_cast<size_t>(n - 1 - i)] = x;
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        weights[static_cast<size_t>(i)] = w;
        weights[static_cast<size_t>(n - 1 - i)] = w;
    }
}

QuadratureResult ep_quadrature(const UnitaryGate& u, int q, QuadratureSpec spec) {
    if (q < 1 || q > u.j.twice() / 2)
        throw std::domain_error("ep_quadrature: q=" + std::to_string(q) +
                                " invalid for j=" + u.j.str());
    if (spec.n_theta < 1 || spec.n_phi < 1)
        throw std::domain_error("ep_quadrature: empty quadrature grid");

    std::vector<double> x, w;
    gauss_legendre(spec.n_theta, x, w);

    // Kahan accumulation in a fixed order keeps the result bit-stable.
    double sum = 0.0, comp = 0.0;
    for (int i = 0; i < spec.n_theta; ++i) {
        const double theta = std::acos(x[static_cast<size_t>(i)]);
        for (int k = 0; k < spec.n_phi; ++k) {
            const double phi = 2.0 * kPi * k / spec.n_phi;
            const double e = linear_entropy(apply_gate(u, spin_coherent(u.j, theta, phi)), q);
            const double term = w[static_cast<size_t>(i)] * e - comp;
            const double next = sum + term;
            comp = (next - sum) - term;
            sum = next;
        }
    }
    return {sum / (2.0 * spec.n_phi), spec.exact_for(u.j)};
}

QuadratureResult ep_quadrature(const UnitaryGate& u, int q) {
    return ep_quadrature(u, q, QuadratureSpec::defaults(u.j));
}

double ep_montecarlo(const UnitaryGate& u, int q, int n_samples, uint64_t seed) {
    if (n_samples < 1) throw std::domain_error("ep_montecarlo: need samples");
    CounterRng rng(seed, 0x5348);
    double sum = 0.0;
    for (int i = 0; i < n_samples; ++i) {
        const double theta = std::acos(2.0 * rng.next_double() - 1.0);
        const double phi = 2.0 * kPi * rng.next_double();
        sum += linear_entropy(apply_gate(u, spin_coherent(u.j, theta, phi)), q);
    }
    return sum / n_samples;
}

}  // namespace spinpow
