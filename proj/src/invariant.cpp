#include "spinpow/invariant.hpp"

#include <cmath>
#include <complex>
#include <stdexcept>

namespace spinpow {

namespace {

constexpr Complex kI{0.0, 1.0};

void require_q(HalfInt j, int q, const char* where) {
    if (q < 1 || q > j.twice() / 2)
        throw std::domain_error(std::string(where) + ": q=" + std::to_string(q) +
                                " invalid for j=" + j.str() + " (need 1 <= q <= floor(j))");
}

// Columns of (U x U) C where the columns of C are the |j,j,L,M>.
Matrix transformed_block(const UnitaryGate& u, HalfInt L) {
    const Matrix block = coupled_block(u.j, L);
    Matrix out(block.rows(), block.cols());
    for (Eigen::Index c = 0; c < block.cols(); ++c) out.col(c) = pair_apply(u.matrix, block.col(c));
    return out;
}

}  // namespace

UnitaryGate UnitaryGate::checked(HalfInt j, Matrix m, double tol) {
    if (m.rows() != dim(j) || m.cols() != dim(j))
        throw std::domain_error("UnitaryGate: matrix dimension does not match j=" + j.str());
    UnitaryGate g{j, std::move(m)};
    const double defect = g.unitarity_defect();
    if (defect > tol)
        throw std::domain_error("UnitaryGate: not unitary (defect " + std::to_string(defect) + ")");
    return g;
}

double UnitaryGate::unitarity_defect() const {
    const Matrix shouldBeId = matrix * matrix.adjoint();
    return (shouldBeId - Matrix::Identity(matrix.rows(), matrix.cols())).cwiseAbs().maxCoeff();
}

Vector pair_apply(const Matrix& u, const Vector& pair_state) {
    const int d = static_cast<int>(u.rows());
    if (pair_state.size() != d * d) throw std::domain_error("pair_apply: dimension mismatch");
    // Row-major pair indexing: (U x U) vec(S) = vec(U S U^T). Eigen's
    // column-major reshape transposes both ways, which cancels.
    const Eigen::Map<const Matrix> s(pair_state.data(), d, d);
    const Matrix t = u * s * u.transpose();
    return Eigen::Map<const Vector>(t.data(), static_cast<Eigen::Index>(d) * d);
}

InvariantVector invariant_vector(HalfInt j, const Matrix& pair_op, InvariantBasis basis) {
    const int d = dim(j);
    if (pair_op.rows() != d * d || pair_op.cols() != d * d)
        throw std::domain_error("invariant_vector: operator dimension does not match j=" + j.str());
    const int count = j.twice() + 1;
    InvariantVector v{j, basis, Eigen::VectorXd::Zero(count)};
    for (int k = 0; k < count; ++k) {
        const HalfInt label = HalfInt::from_int(k);
        const double norm = std::sqrt(2.0 * k + 1.0);
        if (basis == InvariantBasis::P) {
            const Matrix& c = coupled_block(j, label);
            v.components(k) = (c.adjoint() * pair_op * c).trace().real() / norm;
        } else {
            v.components(k) = (pair_op * pair_multipole(j, label)).trace().real() / norm;
        }
    }
    return v;
}

Eigen::MatrixXd uhat(const UnitaryGate& u, InvariantBasis basis) {
    // Entry (row, col) = Tr((UxU) B_col (UxU)^dag B_row) over the normalized
    // basis operators, so that uhat(U) * vec(V) is the invariant vector of
    // (UxU) V (UxU)^dag. With the opposite index order the inner-product
    // identity for e_p would only hold for gates with e_p(U) = e_p(U^dag).
    if (u.unitarity_defect() > 1e-10)
        throw std::domain_error("uhat: gate is not unitary");
    const HalfInt j = u.j;
    const int count = j.twice() + 1;
    Eigen::MatrixXd m(count, count);
    if (basis == InvariantBasis::P) {
        for (int a = 0; a < count; ++a) {
            const Matrix ta = transformed_block(u, HalfInt::from_int(a));
            for (int b = 0; b < count; ++b) {
                const Matrix& cb = coupled_block(j, HalfInt::from_int(b));
                m(b, a) = (cb.adjoint() * ta).squaredNorm() /
                          std::sqrt((2.0 * a + 1.0) * (2.0 * b + 1.0));
            }
        }
    } else {
        const Matrix uu = kron(u.matrix, u.matrix);
        for (int a = 0; a < count; ++a) {
            const Matrix ta = uu * pair_multipole(j, HalfInt::from_int(a)) * uu.adjoint();
            for (int b = 0; b < count; ++b) {
                m(b, a) = (ta * pair_multipole(j, HalfInt::from_int(b))).trace().real() /
                          std::sqrt((2.0 * a + 1.0) * (2.0 * b + 1.0));
            }
        }
    }
    return m;
}

InvariantVector transformed_coherent_vector(const UnitaryGate& u, InvariantBasis basis) {
    const HalfInt j = u.j;
    const int count = j.twice() + 1;
    const double norm = 2.0 * j.twice() + 1.0;  // 4j+1
    const Matrix w = transformed_block(u, HalfInt(2 * j.twice()));
    InvariantVector v{j, basis, Eigen::VectorXd::Zero(count)};
    for (int k = 0; k < count; ++k) {
        const HalfInt label = HalfInt::from_int(k);
        if (basis == InvariantBasis::P) {
            const Matrix& c = coupled_block(j, label);
            v.components(k) = (c.adjoint() * w).squaredNorm() / (norm * std::sqrt(2.0 * k + 1.0));
        } else {
            v.components(k) = (w.adjoint() * pair_multipole(j, label) * w).trace().real() /
                              (norm * std::sqrt(2.0 * k + 1.0));
        }
    }
    return v;
}

double transformed_coherent_component(const UnitaryGate& u, int L) {
    const HalfInt j = u.j;
    if (L < 0 || L > j.twice())
        throw std::domain_error("transformed_coherent_component: L out of range");
    const Matrix w = transformed_block(u, HalfInt(2 * j.twice()));
    const Matrix& c = coupled_block(j, HalfInt::from_int(L));
    return (c.adjoint() * w).squaredNorm() /
           ((2.0 * j.twice() + 1.0) * std::sqrt(2.0 * L + 1.0));
}

double ep_geometric(const UnitaryGate& u, int q) {
    require_q(u.j, q, "ep_geometric");
    const HalfInt j = u.j;
    const Matrix w = transformed_block(u, HalfInt(2 * j.twice()));
    const Matrix m = measure_operator(j, q);
    const double overlap = (w.adjoint() * m * w).trace().real() / (2.0 * j.twice() + 1.0);
    return 1.0 - overlap;
}

HyperplaneResiduals hyperplane_residuals(const UnitaryGate& u, int q) {
    require_q(u.j, q, "hyperplane_residuals");
    const HalfInt j = u.j;
    const int count = j.twice() + 1;
    const int par = j.twice() % 2;

    HyperplaneResiduals r;
    const InvariantVector n_p = transformed_coherent_vector(u, InvariantBasis::P);
    double sum_n = 0.0;
    for (int L = par; L < count; L += 2) sum_n += std::sqrt(2.0 * L + 1.0) * n_p.components(L);
    r.coherent_p = std::abs(sum_n - 1.0);

    // measure operator transported by U, parity-restricted projector sum
    const Matrix uu = kron(u.matrix, u.matrix);
    const Matrix moved = uu * measure_operator(j, q) * uu.adjoint();
    const InvariantVector m_p = invariant_vector(j, moved, InvariantBasis::P);
    double sum_mp = 0.0;
    for (int L = par; L < count; L += 2) sum_mp += std::sqrt(2.0 * L + 1.0) * m_p.components(L);
    const double target_p = (j.value() + 1.0) * (j.twice() + 1.0) / (j.twice() + 1.0 - q);
    r.measure_p = std::abs(sum_mp - target_p);

    const InvariantVector m_t = invariant_vector(j, moved, InvariantBasis::T);
    double sum_mt = 0.0;
    for (int s = 0; s < count; ++s) sum_mt += std::sqrt(2.0 * s + 1.0) * m_t.components(s);
    r.measure_t = std::abs(sum_mt - 2.0 * target_p);
    return r;
}

double ep_trace_form_j1(const UnitaryGate& u) {
    if (u.j.twice() != 2) throw std::domain_error("ep_trace_form_j1: requires j=1");
    Matrix phi = Matrix::Zero(3, 3);
    phi(0, 2) = -1.0;
    phi(1, 1) = 1.0;
    phi(2, 0) = -1.0;
    const Complex tr = (phi * u.matrix.transpose() * phi * u.matrix).trace();
    return 0.6 * (1.0 - std::norm(tr) / 9.0);
}

double ep_closed_small(const UnitaryGate& u, int q) {
    require_q(u.j, q, "ep_closed_small");
    const int tj = u.j.twice();
    // Each case needs only one or two invariant components; the remaining
    // component is fixed by the hyperplane constraint and never computed.
    if (tj == 2) return 3.0 * transformed_coherent_component(u, 0);
    if (tj == 3) return 20.0 * std::sqrt(3.0) / 9.0 * transformed_coherent_component(u, 1);
    if (tj == 4)
        return 0.25 * (10.0 * transformed_coherent_component(u, 0) / q +
                       7.0 * std::sqrt(5.0) * transformed_coherent_component(u, 2));
    throw std::domain_error("ep_closed_small: no closed form for j=" + u.j.str());
}

std::pair<UnitaryGate, double> cartan_gate_j1(double c1, double c2, double c3) {
    if (std::abs(c1 + c2 + c3) > 1e-12)
        throw std::domain_error("cartan_gate_j1: c1+c2+c3 must vanish");
    const Complex l1 = std::exp(kI * (0.5 * (-c1 + c2 + c3)));
    const Complex l2 = std::exp(kI * (0.5 * (c1 + c2 - c3)));
    const Complex l3 = std::exp(kI * (0.5 * (c1 - c2 + c3)));
    Matrix a = Matrix::Zero(3, 3);
    a(0, 0) = a(2, 2) = 0.5 * (l1 + l3);
    a(0, 2) = a(2, 0) = 0.5 * (l1 - l3);
    a(1, 1) = l2;
    const auto sq = [](double x) { return x * x; };
    const double ep = 4.0 / 15.0 *
                      (sq(std::sin(c1 - c2)) + sq(std::sin(c1 - c3)) + sq(std::sin(c2 - c3)));
    return {UnitaryGate::checked(HalfInt(2), std::move(a)), ep};
}

double dagger_gap(const UnitaryGate& u, int q) {
    return ep_geometric(u, q) - ep_geometric(u.dagger(), q);
}

}  // namespace spinpow
