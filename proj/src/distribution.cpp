#include "spinpow/distribution.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <stdexcept>

namespace spinpow {

namespace {

constexpr double kPi = std::numbers::pi;

Matrix dq_block(const UnitaryGate& u, int q) {
    const HalfInt j = u.j;
    const HalfInt twoj(2 * j.twice());
    const Matrix& c = coupled_block(j, twoj);
    Matrix moved(c.rows(), c.cols());
    for (Eigen::Index k = 0; k < c.cols(); ++k) moved.col(k) = pair_apply(u.matrix, c.col(k));
    const Matrix g = moved.adjoint() * measure_operator(j, q) * moved;
    return 0.5 * (g + g.adjoint().eval());
}

}  // namespace

Matrix dq_matrix(const UnitaryGate& u, int q) {
    if (q < 1 || q > u.j.twice() / 2)
        throw std::domain_error("dq_matrix: q=" + std::to_string(q) + " invalid for j=" + u.j.str());
    return dq_block(u, q);
}

double entanglement_at(const UnitaryGate& u, int q, double theta, double phi) {
    const Matrix d = dq_matrix(u, q);
    const Vector n = spin_coherent(HalfInt(2 * u.j.twice()), theta, phi).amplitudes;
    return 1.0 - (n.adjoint() * d * n)(0, 0).real();
}

double HusimiDecomposition::entangling_power() const {
    return 1.0 - eigenvalues.sum() / (2.0 * j.twice() + 1.0);
}

HusimiDecomposition husimi_decomposition(const UnitaryGate& u, int q) {
    const Matrix d = dq_matrix(u, q);
    Eigen::SelfAdjointEigenSolver<Matrix> solver(d);
    const int n = static_cast<int>(d.rows());

    HusimiDecomposition h{u.j, q, Eigen::VectorXd(n), Matrix(n, n)};
    // Eigen returns eigenvalues ascending; flip to descending.
    for (int k = 0; k < n; ++k) {
        h.eigenvalues(k) = solver.eigenvalues()(n - 1 - k);
        h.eigenstates.col(k) = solver.eigenvectors().col(n - 1 - k);
    }

    // Deterministic representatives inside degenerate groups: orthonormalize
    // the projections of the canonical basis vectors onto the eigenspace.
    constexpr double kGroupTol = 1e-9;
    int start = 0;
    while (start < n) {
        int stop = start + 1;
        while (stop < n && std::abs(h.eigenvalues(stop) - h.eigenvalues(start)) < kGroupTol) ++stop;
        const int size = stop - start;
        if (size > 1) {
            const Matrix basis = h.eigenstates.middleCols(start, size);
            Matrix fresh(n, size);
            int accepted = 0;
            for (int seed = 0; seed < n && accepted < size; ++seed) {
                Vector w = basis * (basis.adjoint() * Vector::Unit(n, seed));
                for (int k = 0; k < accepted; ++k)
                    w -= fresh.col(k) * (fresh.col(k).adjoint() * w)(0, 0);
                const double norm = w.norm();
                if (norm > 1e-6) fresh.col(accepted++) = w / norm;
            }
            if (accepted == size) h.eigenstates.middleCols(start, size) = fresh;
        }
        start = stop;
    }

    // Phase convention: first significant component real positive.
    for (int k = 0; k < n; ++k) {
        for (int i = 0; i < n; ++i) {
            const Complex a = h.eigenstates(i, k);
            if (std::abs(a) > 1e-8) {
                h.eigenstates.col(k) *= std::conj(a) / std::abs(a);
                break;
            }
        }
    }
    return h;
}

double husimi_reconstruct(const HusimiDecomposition& h, double theta, double phi) {
    const Vector n = spin_coherent(HalfInt(2 * h.j.twice()), theta, phi).amplitudes;
    double sum = 0.0;
    for (int k = 0; k < h.eigenvalues.size(); ++k)
        sum += h.eigenvalues(k) * std::norm((n.adjoint() * h.eigenstates.col(k))(0, 0));
    return 1.0 - sum;
}

double reference_distribution(ReferenceDistribution which, double theta, double phi) {
    // The azimuthal origin of these closed forms sits a half turn from the
    // active-rotation coherent-state convention |j,n> = D(phi,theta,0)|j,j>;
    // az absorbs that frame rotation. Range, extrema and point groups are
    // frame independent.
    const double az = phi + kPi;
    const double s = std::sin(theta / 2.0), c = std::cos(theta / 2.0);
    switch (which) {
        case ReferenceDistribution::J1Perm:
            return 4.0 * std::sqrt(2.0) * std::pow(s, 5) * std::pow(c, 3) * std::cos(3.0 * az) +
                   s * s / 32.0 *
                       (90.0 + 105.0 * std::cos(theta) + 54.0 * std::cos(2.0 * theta) +
                        7.0 * std::cos(3.0 * theta));
        case ReferenceDistribution::J32Opt:
            return (1090.0 +
                    192.0 * std::pow(std::sin(theta), 5) * std::cos(theta) * std::sin(5.0 * az) -
                    15.0 * std::cos(2.0 * theta) - 18.0 * std::cos(4.0 * theta) -
                    33.0 * std::cos(6.0 * theta)) /
                   1152.0;
        case ReferenceDistribution::J2Q2Affine:
            return (9.0 * reference_distribution(ReferenceDistribution::J32Opt, theta, phi) - 5.0) /
                   4.0;
    }
    throw std::domain_error("reference_distribution: unknown case");
}

std::vector<SphereSample> distribution_grid(const UnitaryGate& u, int q, int n_theta, int n_phi) {
    if (n_theta < 2 || n_phi < 2) throw std::domain_error("distribution_grid: grid sizes >= 2");
    const Matrix d = dq_matrix(u, q);
    const HalfInt twoj(2 * u.j.twice());
    std::vector<SphereSample> samples;
    samples.reserve(static_cast<size_t>(n_theta) * n_phi);
    for (int i = 0; i < n_theta; ++i) {
        const double theta = kPi * i / (n_theta - 1);
        for (int k = 0; k < n_phi; ++k) {
            const double phi = 2.0 * kPi * k / n_phi;
            const Vector n = spin_coherent(twoj, theta, phi).amplitudes;
            samples.push_back({theta, phi, 1.0 - (n.adjoint() * d * n)(0, 0).real()});
        }
    }
    return samples;
}

double symmetry_residual(const UnitaryGate& u, int q, const EulerAngles& rotation, int n_theta,
                         int n_phi) {
    const Matrix d = dq_matrix(u, q);
    const HalfInt twoj(2 * u.j.twice());
    const Eigen::Matrix3d r = rotation_matrix(rotation);
    const auto value_at = [&](double theta, double phi) {
        const Vector n = spin_coherent(twoj, theta, phi).amplitudes;
        return 1.0 - (n.adjoint() * d * n)(0, 0).real();
    };
    double residual = 0.0;
    for (int i = 0; i < n_theta; ++i) {
        const double theta = kPi * (i + 0.5) / n_theta;
        for (int k = 0; k < n_phi; ++k) {
            const double phi = 2.0 * kPi * k / n_phi;
            const auto [rt, rp] = direction_angles(r * direction(theta, phi));
            residual = std::max(residual, std::abs(value_at(rt, rp) - value_at(theta, phi)));
        }
    }
    return residual;
}

SphereSample refine_extremum(const UnitaryGate& u, int q, double theta, double phi, bool maximize) {
    const Matrix d = dq_matrix(u, q);
    const HalfInt twoj(2 * u.j.twice());
    const auto value_at = [&](double t, double p) {
        const Vector n = spin_coherent(twoj, t, p).amplitudes;
        return 1.0 - (n.adjoint() * d * n)(0, 0).real();
    };
    SphereSample best{theta, phi, value_at(theta, phi)};
    double h = 0.05;
    for (int round = 0; round < 90 && h > 1e-13; ++round) {
        bool improved = false;
        for (int dt = -2; dt <= 2; ++dt) {
            for (int dp = -2; dp <= 2; ++dp) {
                if (dt == 0 && dp == 0) continue;
                double t = best.theta + h * dt;
                double p = best.phi + h * dp;
                if (t < 0.0 || t > kPi) continue;
                const double v = value_at(t, p);
                if (maximize ? v > best.value : v < best.value) {
                    best = {t, p, v};
                    improved = true;
                }
            }
        }
        if (!improved) h *= 0.35;
    }
    return best;
}

SphereExtrema find_extrema(const UnitaryGate& u, int q, int n_theta, int n_phi) {
    const std::vector<SphereSample> grid = distribution_grid(u, q, n_theta, n_phi);
    SphereSample lo = grid.front(), hi = grid.front();
    for (const auto& s : grid) {
        if (s.value < lo.value) lo = s;
        if (s.value > hi.value) hi = s;
    }
    return {refine_extremum(u, q, lo.theta, lo.phi, false),
            refine_extremum(u, q, hi.theta, hi.phi, true)};
}

void write_grid_csv(const std::string& path, const std::vector<SphereSample>& samples,
                    bool stereographic) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("write_grid_csv: cannot open " + path);
    out.precision(17);
    out << (stereographic ? "theta,phi,value,x,y\n" : "theta,phi,value\n");
    for (const auto& s : samples) {
        out << s.theta << ',' << s.phi << ',' << s.value;
        if (stereographic) {
            const double r = std::tan(s.theta / 2.0);
            out << ',' << r * std::cos(s.phi) << ',' << r * std::sin(s.phi);
        }
        out << '\n';
    }
    if (!out) throw std::runtime_error("write_grid_csv: write failed for " + path);
}

}  // namespace spinpow
