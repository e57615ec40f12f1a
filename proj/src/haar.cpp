#include "spinpow/haar.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <numbers>
#include <stdexcept>
#include <thread>

#include "spinpow/angular.hpp"

namespace spinpow {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr Complex kI{0.0, 1.0};

void require_q(HalfInt j, int q, const char* where) {
    if (q < 1 || q > j.twice() / 2)
        throw std::domain_error(std::string(where) + ": q=" + std::to_string(q) +
                                " invalid for j=" + j.str());
}

// exp(i s H) for Hermitian H
Matrix exp_i_hermitian(const Matrix& h, double s) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(h);
    const Eigen::VectorXd& lam = es.eigenvalues();
    Vector phases(lam.size());
    for (Eigen::Index k = 0; k < lam.size(); ++k) phases(k) = std::exp(kI * (s * lam(k)));
    return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

// Run fn(k) for k = 0..n-1 on up to worker_threads() threads; results land in
// a caller-provided slot per task, so aggregation order is deterministic.
void parallel_for(int n, const std::function<void(int)>& fn) {
    const int workers = std::min(worker_threads(), n);
    if (workers <= 1) {
        for (int k = 0; k < n; ++k) fn(k);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(static_cast<size_t>(workers));
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            for (int k = w; k < n; k += workers) fn(k);
        });
    }
    for (auto& t : pool) t.join();
}

// Shared state for one e_p evaluation context (fixed j, q).
struct EpContext {
    HalfInt j;
    int q;
    Matrix coupled;  // columns |j,j,2j,M>
    Matrix measure;

    explicit EpContext(HalfInt jj, int qq)
        : j(jj), q(qq), coupled(coupled_block(jj, HalfInt(2 * jj.twice()))),
          measure(measure_operator(jj, qq)) {}

    double ep(const Matrix& u) const {
        Matrix moved(coupled.rows(), coupled.cols());
        for (Eigen::Index k = 0; k < coupled.cols(); ++k)
            moved.col(k) = pair_apply(u, coupled.col(k));
        const double overlap =
            (moved.adjoint() * measure * moved).trace().real() / (2.0 * j.twice() + 1.0);
        return 1.0 - overlap;
    }
};

}  // namespace

int worker_threads() {
    if (const char* env = std::getenv("SPINPOW_THREADS")) {
        const int n = std::atoi(env);
        if (n >= 1) return n;
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

Matrix haar_matrix(int d, CounterRng& rng) {
    if (d < 2) throw std::domain_error("haar_matrix: need d >= 2");
    Matrix g(d, d);
    for (int r = 0; r < d; ++r)
        for (int c = 0; c < d; ++c) g(r, c) = Complex(rng.next_normal(), rng.next_normal());
    const Eigen::HouseholderQR<Matrix> qr(g);
    Matrix q = qr.householderQ();
    const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (int k = 0; k < d; ++k) {
        const Complex diag = r(k, k);
        q.col(k) *= (diag == Complex(0.0) ? Complex(1.0) : diag / std::abs(diag));
    }
    return q;
}

UnitaryGate haar_unitary(HalfInt j, uint64_t seed, uint64_t stream) {
    CounterRng rng(seed, stream);
    return {j, haar_matrix(dim(j), rng)};
}

UnitaryGate random_rotation_gate(HalfInt j, CounterRng& rng) {
    const double alpha = 2.0 * kPi * rng.next_double();
    const double beta = std::acos(2.0 * rng.next_double() - 1.0);
    const double gamma = 2.0 * kPi * rng.next_double();
    return {j, wigner_D(j, alpha, beta, gamma)};
}

double average_ep_analytic(HalfInt j, int q) {
    require_q(j, q, "average_ep_analytic");
    return 1.0 - 1.0 / (j.twice() + 1.0 - q);
}

double average_ep_nonsymmetric(HalfInt j, int q) {
    require_q(j, q, "average_ep_nonsymmetric");
    return 1.0 - (std::pow(2.0, q) + 1.0) / (std::pow(2.0, j.twice()) + 1.0);
}

McAverage average_ep_mc(HalfInt j, int q, int n_samples, uint64_t seed, int bins) {
    require_q(j, q, "average_ep_mc");
    if (n_samples < 100) throw std::domain_error("average_ep_mc: need at least 100 samples");

    const EpContext ctx(j, q);
    std::vector<double> samples(static_cast<size_t>(n_samples));
    parallel_for(n_samples, [&](int k) {
        CounterRng rng(seed, static_cast<uint64_t>(k) + 1);
        samples[static_cast<size_t>(k)] = ctx.ep(haar_matrix(dim(j), rng));
    });

    double mean = 0.0;
    for (double s : samples) mean += s;
    mean /= n_samples;
    double var = 0.0;
    for (double s : samples) var += (s - mean) * (s - mean);
    var /= (n_samples - 1.0);

    McAverage out{mean, std::sqrt(var / n_samples), n_samples, {}};
    if (bins > 0) {
        out.histogram.edges.resize(static_cast<size_t>(bins) + 1);
        out.histogram.counts.assign(static_cast<size_t>(bins), 0);
        for (int b = 0; b <= bins; ++b)
            out.histogram.edges[static_cast<size_t>(b)] = static_cast<double>(b) / bins;
        for (double s : samples) {
            int b = static_cast<int>(s * bins);
            b = std::clamp(b, 0, bins - 1);
            ++out.histogram.counts[static_cast<size_t>(b)];
        }
    }
    return out;
}

void write_histogram_csv(const std::string& path, const Histogram& h) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("write_histogram_csv: cannot open " + path);
    out.precision(17);
    out << "bin_left,bin_right,count\n";
    for (size_t b = 0; b + 1 < h.edges.size(); ++b)
        out << h.edges[b] << ',' << h.edges[b + 1] << ',' << h.counts[b] << '\n';
}

std::vector<Matrix> su_generators(int d) {
    if (d < 2) throw std::domain_error("su_generators: need d >= 2");
    std::vector<Matrix> gens;
    gens.reserve(static_cast<size_t>(d) * d - 1);
    for (int i = 0; i < d; ++i) {
        for (int k = i + 1; k < d; ++k) {
            Matrix sym = Matrix::Zero(d, d);
            sym(i, k) = sym(k, i) = 1.0;
            gens.push_back(sym);
            Matrix asym = Matrix::Zero(d, d);
            asym(i, k) = -kI;
            asym(k, i) = kI;
            gens.push_back(asym);
        }
    }
    for (int l = 1; l < d; ++l) {
        Matrix diag = Matrix::Zero(d, d);
        const double norm = std::sqrt(2.0 / (l * (l + 1.0)));
        for (int i = 0; i < l; ++i) diag(i, i) = norm;
        diag(l, l) = -norm * l;
        gens.push_back(diag);
    }
    return gens;
}

namespace {

// [X, M] partial-traced onto one factor: gradient components are
// -i Tr((pt1 + pt2)([X, M]) G_a).
Matrix gradient_kernel(const UnitaryGate& u, const Matrix& measure) {
    const int d = dim(u.j);
    const Matrix uu = kron(u.matrix, u.matrix);
    const Matrix n_op = coherent_average_operator(u.j);
    const Matrix x = uu * n_op * uu.adjoint();
    const Matrix comm = x * measure - measure * x;
    return partial_trace_first(comm, d) + partial_trace_second(comm, d);
}

}  // namespace

Eigen::VectorXd ep_gradient(const UnitaryGate& u, int q) {
    require_q(u.j, q, "ep_gradient");
    const int d = dim(u.j);
    const Matrix kernel = gradient_kernel(u, measure_operator(u.j, q));
    const std::vector<Matrix> gens = su_generators(d);
    Eigen::VectorXd g(gens.size());
    for (size_t a = 0; a < gens.size(); ++a)
        g(static_cast<Eigen::Index>(a)) = (-kI * (kernel * gens[a]).trace()).real();
    return g;
}

Eigen::MatrixXd ep_hessian(const UnitaryGate& u, int q) {
    require_q(u.j, q, "ep_hessian");
    const int d = dim(u.j);
    const Matrix uu = kron(u.matrix, u.matrix);
    const Matrix x = uu * coherent_average_operator(u.j) * uu.adjoint();
    const Matrix measure = measure_operator(u.j, q);
    const std::vector<Matrix> gens = su_generators(d);
    const int n = static_cast<int>(gens.size());
    const Matrix id = Matrix::Identity(d, d);

    // Second derivative of e_p along exp(i eps G_a) U is +Tr(X [[M, G_a], G_a])
    // with X the transported coherent average; the quadratic form therefore
    // carries a plus sign and comes out negative definite (modulo the six
    // rotation zero modes) at maxima.
    Eigen::MatrixXd h(n, n);
    for (int a = 0; a < n; ++a) {
        const Matrix ga = kron(gens[static_cast<size_t>(a)], id) + kron(id, gens[static_cast<size_t>(a)]);
        const Matrix inner = measure * ga - ga * measure;
        const Matrix outer = x * inner - inner * x;
        const Matrix kernel = partial_trace_first(outer, d) + partial_trace_second(outer, d);
        for (int b = 0; b < n; ++b)
            h(a, b) = (kernel * gens[static_cast<size_t>(b)]).trace().real();
    }
    return 0.5 * (h + h.transpose()).eval();
}

std::string to_string(Criticality c) {
    switch (c) {
        case Criticality::Maximum: return "max";
        case Criticality::Saddle: return "saddle";
        case Criticality::Minimum: return "min";
        case Criticality::Inconclusive: return "inconclusive";
    }
    return "inconclusive";
}

CriticalityReport criticality_report(const UnitaryGate& u, int q, double grad_tol,
                                     double zero_tol) {
    CriticalityReport r;
    r.grad_norm = ep_gradient(u, q).norm();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(ep_hessian(u, q));
    r.hessian_eigenvalues = es.eigenvalues().reverse();

    const double scale = std::max(1.0, r.hessian_eigenvalues.cwiseAbs().maxCoeff());
    const double cut = zero_tol * scale;
    int neg = 0, pos = 0;
    for (Eigen::Index k = 0; k < r.hessian_eigenvalues.size(); ++k) {
        const double lam = r.hessian_eigenvalues(k);
        if (std::abs(lam) < cut)
            ++r.zero_count;
        else if (lam < 0)
            ++neg;
        else
            ++pos;
    }
    if (r.grad_norm >= grad_tol)
        r.classification = Criticality::Inconclusive;
    else if (neg > 0 && pos == 0)
        r.classification = Criticality::Maximum;
    else if (pos > 0 && neg == 0)
        r.classification = Criticality::Minimum;
    else if (pos > 0 && neg > 0)
        r.classification = Criticality::Saddle;
    else
        r.classification = Criticality::Inconclusive;
    return r;
}

OptimizeResult optimize_ep(HalfInt j, int q, const OptimizerConfig& config) {
    require_q(j, q, "optimize_ep");
    if (config.restarts < 1) throw std::domain_error("optimize_ep: restarts >= 1");
    if (config.grad_tol <= 0.0) throw std::domain_error("optimize_ep: grad_tol must be positive");
    const int d = dim(j);
    const EpContext ctx(j, q);
    const std::vector<Matrix> gens = su_generators(d);
    const Matrix measure = measure_operator(j, q);

    struct RunResult {
        Matrix u;
        double ep = -1.0;
        double grad_norm = 0.0;
        bool converged = false;
        int iterations = 0;
    };
    std::vector<RunResult> runs(static_cast<size_t>(config.restarts));

    parallel_for(config.restarts, [&](int r) {
        CounterRng rng(config.seed, 0x6f70 + static_cast<uint64_t>(r));
        Matrix u = haar_matrix(d, rng);
        double ep = ctx.ep(u);
        double step = config.step_init;
        double grad_norm = 0.0;
        bool converged = false;
        int iter = 0;
        for (; iter < config.max_iters; ++iter) {
            const Matrix kernel = gradient_kernel({j, u}, measure);
            Eigen::VectorXd g(gens.size());
            Matrix dir = Matrix::Zero(d, d);
            for (size_t a = 0; a < gens.size(); ++a) {
                g(static_cast<Eigen::Index>(a)) = (-kI * (kernel * gens[a]).trace()).real();
                dir += g(static_cast<Eigen::Index>(a)) * gens[a];
            }
            grad_norm = g.norm();
            if (grad_norm < config.grad_tol) {
                converged = true;
                break;
            }
            // Ascent along exp(i s sum_a g_a G_a) with backtracking; the
            // expected first-order gain of the move is s * |g|^2.
            bool accepted = false;
            while (step > 1e-15) {
                const Matrix candidate = exp_i_hermitian(dir, step) * u;
                const double ep_new = ctx.ep(candidate);
                if (ep_new > ep + 1e-4 * step * grad_norm * grad_norm) {
                    u = candidate;
                    ep = ep_new;
                    step = std::min(step * 1.6, 2.0);
                    accepted = true;
                    break;
                }
                step *= config.step_shrink;
            }
            if (!accepted) break;  // numerically stalled
        }
        runs[static_cast<size_t>(r)] = {std::move(u), ep, grad_norm, converged, iter};
    });

    int best = 0;
    for (int r = 1; r < config.restarts; ++r)
        if (runs[static_cast<size_t>(r)].ep > runs[static_cast<size_t>(best)].ep) best = r;

    const RunResult& win = runs[static_cast<size_t>(best)];
    OptimizeResult out{UnitaryGate{j, win.u}, win.ep, {}, win.converged, best, win.iterations};
    out.report = criticality_report(out.gate, q);
    if (!win.converged) out.report.classification = Criticality::Inconclusive;
    return out;
}

UnitaryGate known_gate(KnownGate id) {
    switch (id) {
        case KnownGate::J1Omega: {
            const Complex w = std::exp(-kI * (kPi / 3.0));
            Matrix m = Matrix::Zero(3, 3);
            m(0, 0) = m(2, 2) = 0.5 * (w + 1.0);
            m(0, 2) = m(2, 0) = 0.5 * (w - 1.0);
            m(1, 1) = 1.0 / w;
            return UnitaryGate::checked(HalfInt(2), std::move(m));
        }
        case KnownGate::J1Perm: {
            Matrix m = Matrix::Zero(3, 3);
            m(0, 0) = m(1, 2) = m(2, 1) = 1.0;
            return UnitaryGate::checked(HalfInt(2), std::move(m));
        }
        case KnownGate::J32Opt: {
            Matrix m = Matrix::Zero(4, 4);
            m(0, 1) = 1.0;
            m(1, 3) = kI;
            m(2, 0) = kI;
            m(3, 2) = 1.0;
            return UnitaryGate::checked(HalfInt(3), std::move(m));
        }
        case KnownGate::J2Q1: {
            const double alpha = std::atan(std::sqrt(83.0 / 53.0));
            const Complex beta = std::exp(-kI * std::atan(std::sqrt(53.0 / 83.0)));
            Matrix m = Matrix::Zero(5, 5);
            m(0, 0) = beta * std::cos(alpha);
            m(0, 4) = kI * beta * std::sin(alpha);
            m(1, 1) = std::exp(kI * (kPi / 4.0));
            m(2, 2) = beta * beta;
            m(3, 3) = std::exp(-kI * (kPi / 4.0));
            m(4, 0) = -kI * beta * std::sin(alpha);
            m(4, 4) = -beta * std::cos(alpha);
            return UnitaryGate::checked(HalfInt(4), std::move(m));
        }
        case KnownGate::J2Q2: {
            Matrix m = Matrix::Zero(5, 5);
            m(0, 3) = kI;
            m(1, 0) = kI;
            m(2, 2) = 1.0;
            m(3, 4) = kI;
            m(4, 1) = kI;
            return UnitaryGate::checked(HalfInt(4), std::move(m));
        }
    }
    throw std::domain_error("known_gate: unknown id");
}

std::string known_gate_name(KnownGate id) {
    switch (id) {
        case KnownGate::J1Omega: return "j1_omega";
        case KnownGate::J1Perm: return "j1_perm";
        case KnownGate::J32Opt: return "j32_opt";
        case KnownGate::J2Q1: return "j2_q1";
        case KnownGate::J2Q2: return "j2_q2";
    }
    throw std::domain_error("known_gate_name: unknown id");
}

KnownGate known_gate_from_name(const std::string& name) {
    for (KnownGate id : known_gate_catalog())
        if (known_gate_name(id) == name) return id;
    throw std::invalid_argument("unknown catalog gate '" + name + "'");
}

std::vector<KnownGate> known_gate_catalog() {
    return {KnownGate::J1Omega, KnownGate::J1Perm, KnownGate::J32Opt, KnownGate::J2Q1,
            KnownGate::J2Q2};
}

bool known_gate_conjectured(KnownGate id) {
    return id == KnownGate::J2Q1 || id == KnownGate::J2Q2;
}

Eigen::VectorXd schmidt_values(HalfInt j, const Vector& pair_state) {
    const int d = dim(j);
    if (pair_state.size() != d * d) throw std::domain_error("schmidt_values: dimension mismatch");
    // row-major reshape: coefficient matrix Psi(m1, m2)
    Eigen::Map<const Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>
        psi(pair_state.data(), d, d);
    Eigen::JacobiSVD<Matrix> svd{Matrix(psi)};
    return svd.singularValues();
}

Eigen::VectorXd schmidt_spectrum(HalfInt j, HalfInt L, HalfInt M) {
    return schmidt_values(j, coupled_state(j, L, M));
}

double schmidt_transport_check(const UnitaryGate& u, const Vector& src, const Vector& dst) {
    if (src.size() != dst.size()) throw std::domain_error("schmidt_transport_check: size mismatch");
    return std::abs((dst.adjoint() * pair_apply(u.matrix, src))(0, 0));
}

}  // namespace spinpow
