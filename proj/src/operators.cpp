#include "spinpow/operators.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>
#include <tuple>

#include "spinpow/angular.hpp"

namespace spinpow {

namespace {

// Shared memo for the deterministic operator builders. Entries are immutable
// once inserted; the mutex only guards the map itself.
template <typename Key>
class MatrixCache {
public:
    template <typename Fn>
    Matrix get(const Key& key, Fn&& build) {
        {
            std::lock_guard<std::mutex> lock(mutex_);
            auto it = cache_.find(key);
            if (it != cache_.end()) return it->second;
        }
        Matrix value = build();
        std::lock_guard<std::mutex> lock(mutex_);
        return cache_.emplace(key, std::move(value)).first->second;
    }

private:
    std::mutex mutex_;
    std::map<Key, Matrix> cache_;
};

void require_valid_L(HalfInt j, HalfInt L, const char* where) {
    if (!L.is_integer() || L.twice() < 0 || L.twice() > 2 * j.twice())
        throw std::domain_error(std::string(where) + ": L=" + L.str() + " invalid for j=" + j.str());
}

}  // namespace

Matrix kron(const Matrix& a, const Matrix& b) {
    Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index k = 0; k < a.cols(); ++k)
            out.block(i * b.rows(), k * b.cols(), b.rows(), b.cols()) = a(i, k) * b;
    return out;
}

Matrix partial_trace_first(const Matrix& op, int d) {
    if (op.rows() != d * d || op.cols() != d * d)
        throw std::domain_error("partial_trace_first: dimension mismatch");
    Matrix out = Matrix::Zero(d, d);
    for (int i = 0; i < d; ++i)
        for (int k = 0; k < d; ++k)
            for (int a = 0; a < d; ++a) out(i, k) += op(a * d + i, a * d + k);
    return out;
}

Matrix partial_trace_second(const Matrix& op, int d) {
    if (op.rows() != d * d || op.cols() != d * d)
        throw std::domain_error("partial_trace_second: dimension mismatch");
    Matrix out = Matrix::Zero(d, d);
    for (int i = 0; i < d; ++i)
        for (int k = 0; k < d; ++k)
            for (int a = 0; a < d; ++a) out(i, k) += op(i * d + a, k * d + a);
    return out;
}

Matrix spin_jz(HalfInt j) {
    const int d = dim(j);
    Matrix m = Matrix::Zero(d, d);
    for (int i = 0; i < d; ++i) m(i, i) = spin_label(j, i).value();
    return m;
}

Matrix spin_jplus(HalfInt j) {
    const int d = dim(j);
    const double jj = j.value();
    Matrix m = Matrix::Zero(d, d);
    for (int i = 1; i < d; ++i) {
        const double mm = spin_label(j, i).value();  // J+ |j,m> = c |j,m+1>
        m(i - 1, i) = std::sqrt(jj * (jj + 1.0) - mm * (mm + 1.0));
    }
    return m;
}

Matrix spin_jx(HalfInt j) {
    const Matrix jp = spin_jplus(j);
    return 0.5 * (jp + jp.adjoint()).eval();
}

Matrix spin_jy(HalfInt j) {
    const Matrix jp = spin_jplus(j);
    return Complex(0.0, -0.5) * (jp - jp.adjoint()).eval();
}

Vector coupled_state(HalfInt j, HalfInt L, HalfInt M) {
    require_valid_L(j, L, "coupled_state");
    if (!M.is_integer() || std::abs(M.twice()) > L.twice())
        throw std::domain_error("coupled_state: M=" + M.str() + " invalid for L=" + L.str());
    const int d = dim(j);
    Vector v = Vector::Zero(d * d);
    for (int i1 = 0; i1 < d; ++i1) {
        const HalfInt m1 = spin_label(j, i1);
        const HalfInt m2 = M - m1;
        if (!valid_m(j, m2)) continue;
        v(pair_index(j, m1, m2)) = clebsch_gordan(j, m1, j, m2, L, M);
    }
    return v;
}

Matrix coupled_block(HalfInt j, HalfInt L) {
    static MatrixCache<std::pair<int, int>> cache;
    require_valid_L(j, L, "coupled_block");
    return cache.get({j.twice(), L.twice()}, [&] {
        const int d = dim(j);
        Matrix block(d * d, L.twice() + 1);
        int col = 0;
        for (int tm = L.twice(); tm >= -L.twice(); tm -= 2)
            block.col(col++) = coupled_state(j, L, HalfInt(tm));
        return block;
    });
}

Matrix projector_L(HalfInt j, HalfInt L) {
    static MatrixCache<std::pair<int, int>> cache;
    require_valid_L(j, L, "projector_L");
    return cache.get({j.twice(), L.twice()}, [&] {
        const Matrix c = coupled_block(j, L);
        return Matrix(c * c.adjoint());
    });
}

Matrix multipole(HalfInt j, HalfInt sigma, HalfInt mu) {
    if (!sigma.is_integer() || sigma.twice() < 0 || sigma.twice() > 2 * j.twice())
        throw std::domain_error("multipole: sigma=" + sigma.str() + " invalid for j=" + j.str());
    if (!mu.is_integer() || std::abs(mu.twice()) > sigma.twice())
        throw std::domain_error("multipole: mu=" + mu.str() + " invalid for sigma=" + sigma.str());
    const int d = dim(j);
    const double norm = std::sqrt(static_cast<double>(sigma.twice() + 1) / d);
    Matrix t = Matrix::Zero(d, d);
    for (int col = 0; col < d; ++col) {
        const HalfInt mp = spin_label(j, col);
        const HalfInt m = mp + mu;
        if (!valid_m(j, m)) continue;
        t(spin_index(j, m), col) = norm * clebsch_gordan(j, mp, sigma, mu, j, m);
    }
    return t;
}

Matrix pair_multipole(HalfInt j, HalfInt sigma) {
    static MatrixCache<std::pair<int, int>> cache;
    if (!sigma.is_integer() || sigma.twice() < 0 || sigma.twice() > 2 * j.twice())
        throw std::domain_error("pair_multipole: sigma=" + sigma.str() + " invalid for j=" + j.str());
    return cache.get({j.twice(), sigma.twice()}, [&] {
        const int d = dim(j);
        Matrix sum = Matrix::Zero(d * d, d * d);
        for (int tmu = -sigma.twice(); tmu <= sigma.twice(); tmu += 2) {
            const Matrix t = multipole(j, sigma, HalfInt(tmu));
            sum += kron(t, t.adjoint().eval());
        }
        return sum;
    });
}

Matrix swap_operator(HalfInt j) {
    const int d = dim(j);
    Matrix f = Matrix::Zero(d * d, d * d);
    for (int i1 = 0; i1 < d; ++i1)
        for (int i2 = 0; i2 < d; ++i2) f(i1 * d + i2, i2 * d + i1) = 1.0;
    return f;
}

double chi_weight(int q, HalfInt j, HalfInt L) {
    const HalfInt qhalf(q);                         // q/2 has twice-value q
    const HalfInt qfull = HalfInt::from_int(q);
    const HalfInt twoj(2 * j.twice());
    double sum = 0.0;
    for (int sigma = 1; sigma <= q; ++sigma) {
        const HalfInt s = HalfInt::from_int(sigma);
        const double num =
            wigner_6j(qhalf, qhalf, qfull, qhalf, qhalf, s) * wigner_6j(j, j, L, j, j, s);
        const double den = wigner_6j(j, j, twoj, j, j, s);
        sum += (2.0 * sigma + 1.0) * num / den;
    }
    return sum;
}

double measure_block_eigenvalue(HalfInt j, int q, HalfInt L) {
    // (-1)^(2j+L); both 2j and L are integers here
    const double sign = ((j.twice() + L.as_int()) % 2 == 0) ? 1.0 : -1.0;
    return (q + 1.0) / q * sign * chi_weight(q, j, L);
}

namespace {

void require_valid_q(HalfInt j, int q, const char* where) {
    if (q < 1 || q > j.twice())
        throw std::domain_error(std::string(where) + ": q=" + std::to_string(q) +
                                " invalid for j=" + j.str());
}

}  // namespace

Matrix measure_operator(HalfInt j, int q) {
    static MatrixCache<std::pair<int, int>> cache;
    require_valid_q(j, q, "measure_operator");
    return cache.get({j.twice(), q}, [&] {
        const int d = dim(j);
        Matrix m = Matrix::Zero(d * d, d * d);
        for (int L = 0; L <= j.twice(); ++L)
            m += measure_block_eigenvalue(j, q, HalfInt::from_int(L)) *
                 projector_L(j, HalfInt::from_int(L));
        return m;
    });
}

Matrix measure_operator_from_multipoles(HalfInt j, int q) {
    require_valid_q(j, q, "measure_operator_from_multipoles");
    const int d = dim(j);
    const HalfInt qhalf(q);
    const HalfInt qfull = HalfInt::from_int(q);
    const HalfInt twoj(2 * j.twice());
    Matrix m = Matrix::Zero(d * d, d * d);
    for (int sigma = 1; sigma <= q; ++sigma) {
        const HalfInt s = HalfInt::from_int(sigma);
        const double coeff = wigner_6j(qhalf, qhalf, qfull, qhalf, qhalf, s) /
                             wigner_6j(j, j, twoj, j, j, s);
        m += coeff * pair_multipole(j, s);
    }
    return (q + 1.0) / q * m;
}

Matrix coherent_average_operator(HalfInt j) {
    return projector_L(j, HalfInt(2 * j.twice())) / (2.0 * j.twice() + 1.0);
}

PairBasisTransform basis_transform_tp(HalfInt j) {
    const int count = j.twice() + 1;  // labels L (equivalently sigma) run 0..2j
    PairBasisTransform out;
    out.t_in_p.resize(count, count);
    out.p_in_t.resize(count, count);
    for (int sigma = 0; sigma < count; ++sigma) {
        for (int L = 0; L < count; ++L) {
            const double sixj =
                wigner_6j(j, j, HalfInt::from_int(L), j, j, HalfInt::from_int(sigma));
            const double sign = ((j.twice() + L) % 2 == 0) ? 1.0 : -1.0;
            out.t_in_p(sigma, L) = (2.0 * sigma + 1.0) * sign * sixj;
            out.p_in_t(L, sigma) = (2.0 * L + 1.0) * sign * sixj;
        }
    }
    return out;
}

}  // namespace spinpow
