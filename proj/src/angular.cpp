#include "spinpow/angular.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace spinpow {

namespace {

// ---------------------------------------------------------------------------
// Exact evaluation of the Racah sums.
//
// Every term of a Clebsch-Gordan or 6-j sum is a product of factorials and
// therefore has an exact prime factorization. The alternating sum is done by
// pulling out the largest common rational factor, which leaves a signed
// big-integer sum, so no cancellation error is incurred. Only the final
// square roots and products are evaluated in floating point.
// ---------------------------------------------------------------------------

constexpr int kMaxFactorial = 100;

constexpr std::array<int, 25> kPrimes = {2,  3,  5,  7,  11, 13, 17, 19, 23, 29, 31, 37, 41,
                                         43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89, 97};

using ExpVec = std::array<int, kPrimes.size()>;

ExpVec& operator+=(ExpVec& a, const ExpVec& b) {
    for (size_t i = 0; i < a.size(); ++i) a[i] += b[i];
    return a;
}

ExpVec& operator-=(ExpVec& a, const ExpVec& b) {
    for (size_t i = 0; i < a.size(); ++i) a[i] -= b[i];
    return a;
}

// Exponent vectors of n! for n = 0..kMaxFactorial, built once.
const std::vector<ExpVec>& factorial_exponents() {
    static const std::vector<ExpVec> table = [] {
        std::vector<ExpVec> t(kMaxFactorial + 1);
        t[0].fill(0);
        for (int n = 1; n <= kMaxFactorial; ++n) {
            t[n] = t[n - 1];
            int rem = n;
            for (size_t i = 0; i < kPrimes.size() && rem > 1; ++i) {
                while (rem % kPrimes[i] == 0) {
                    ++t[n][i];
                    rem /= kPrimes[i];
                }
            }
        }
        return t;
    }();
    return table;
}

// value = mant * 2^exp with mant in [1,2) (or exactly 0).
struct ScaledFloat {
    double mant = 0.0;
    long exp = 0;

    static ScaledFloat normalized(double m, long e) {
        if (m == 0.0) return {};
        int k = 0;
        m = std::frexp(m, &k);  // m in [0.5, 1)
        return {m * 2.0, e + k - 1};
    }
    static ScaledFloat one() { return {1.0, 0}; }

    ScaledFloat times(const ScaledFloat& o) const { return normalized(mant * o.mant, exp + o.exp); }
    ScaledFloat over(const ScaledFloat& o) const { return normalized(mant / o.mant, exp - o.exp); }
    ScaledFloat root() const {
        if (mant == 0.0) return {};
        if (exp % 2 == 0) return normalized(std::sqrt(mant), exp / 2);
        return normalized(std::sqrt(2.0 * mant), (exp - 1) / 2);
    }
    double to_double() const { return std::ldexp(mant, static_cast<int>(exp)); }
};

// Unsigned big integer, little-endian base 2^32.
class BigUInt {
public:
    BigUInt() = default;
    explicit BigUInt(uint64_t v) {
        if (v) {
            limbs_.push_back(static_cast<uint32_t>(v));
            if (v >> 32) limbs_.push_back(static_cast<uint32_t>(v >> 32));
        }
    }

    bool is_zero() const { return limbs_.empty(); }

    void mul_small(uint32_t f) {
        if (f == 0) { limbs_.clear(); return; }
        uint64_t carry = 0;
        for (auto& limb : limbs_) {
            const uint64_t w = static_cast<uint64_t>(limb) * f + carry;
            limb = static_cast<uint32_t>(w);
            carry = w >> 32;
        }
        if (carry) limbs_.push_back(static_cast<uint32_t>(carry));
    }

    void add(const BigUInt& o) {
        limbs_.resize(std::max(limbs_.size(), o.limbs_.size()), 0);
        uint64_t carry = 0;
        for (size_t i = 0; i < limbs_.size(); ++i) {
            uint64_t w = carry + limbs_[i];
            if (i < o.limbs_.size()) w += o.limbs_[i];
            limbs_[i] = static_cast<uint32_t>(w);
            carry = w >> 32;
        }
        if (carry) limbs_.push_back(static_cast<uint32_t>(carry));
    }

    // requires *this >= o
    void sub(const BigUInt& o) {
        int64_t borrow = 0;
        for (size_t i = 0; i < limbs_.size(); ++i) {
            int64_t w = static_cast<int64_t>(limbs_[i]) - borrow - (i < o.limbs_.size() ? o.limbs_[i] : 0);
            borrow = 0;
            if (w < 0) { w += (int64_t(1) << 32); borrow = 1; }
            limbs_[i] = static_cast<uint32_t>(w);
        }
        while (!limbs_.empty() && limbs_.back() == 0) limbs_.pop_back();
    }

    // -1, 0, +1 for <, ==, >
    int compare(const BigUInt& o) const {
        if (limbs_.size() != o.limbs_.size()) return limbs_.size() < o.limbs_.size() ? -1 : 1;
        for (size_t i = limbs_.size(); i-- > 0;) {
            if (limbs_[i] != o.limbs_[i]) return limbs_[i] < o.limbs_[i] ? -1 : 1;
        }
        return 0;
    }

    ScaledFloat to_scaled() const {
        if (limbs_.empty()) return {};
        const size_t top = limbs_.size() - 1;
        double m = limbs_[top];
        long e = 32L * static_cast<long>(top);
        if (top >= 1) { m = m * 4294967296.0 + limbs_[top - 1]; e -= 32; }
        if (top >= 2) { m = m * 4294967296.0 + limbs_[top - 2]; e -= 32; }
        return ScaledFloat::normalized(m, e);
    }

private:
    std::vector<uint32_t> limbs_;
};

// prod over primes of p^e[i] for the nonnegative exponents only.
BigUInt prime_product(const ExpVec& e, bool negated) {
    BigUInt r(1);
    for (size_t i = 0; i < kPrimes.size(); ++i) {
        int n = negated ? -e[i] : e[i];
        for (; n > 0; --n) r.mul_small(static_cast<uint32_t>(kPrimes[i]));
    }
    return r;
}

ScaledFloat prime_value(const ExpVec& e) {
    return prime_product(e, false).to_scaled().over(prime_product(e, true).to_scaled());
}

// Signed accumulator over big integers.
struct SignedBig {
    BigUInt mag;
    int sign = 0;  // -1, 0, +1

    void accumulate(const BigUInt& term, int term_sign) {
        if (term.is_zero()) return;
        if (sign == 0) { mag = term; sign = term_sign; return; }
        if (sign == term_sign) { mag.add(term); return; }
        const int c = mag.compare(term);
        if (c == 0) { mag = BigUInt(); sign = 0; return; }
        if (c > 0) { mag.sub(term); return; }
        BigUInt t = term;
        t.sub(mag);
        mag = t;
        sign = term_sign;
    }
};

const ExpVec& fact_exp(int n) { return factorial_exponents().at(static_cast<size_t>(n)); }

// Alternating sum  sum_k (-1)^(k+k0) * prod_i 1/den[i](k)!  evaluated exactly.
// `dens` yields the (nonnegative) factorial arguments of term k; `extra`
// yields an optional factorial in the numerator ((t+1)! for the 6-j sum).
template <typename DenFn, typename NumFn>
ScaledFloat exact_alternating_sum(int kmin, int kmax, DenFn dens, NumFn num, int& sign_out) {
    std::vector<ExpVec> exps;
    exps.reserve(static_cast<size_t>(kmax - kmin + 1));
    for (int k = kmin; k <= kmax; ++k) {
        ExpVec e{};
        e.fill(0);
        e += fact_exp(num(k));
        for (int arg : dens(k)) e -= fact_exp(arg);
        exps.push_back(e);
    }

    ExpVec common = exps.front();
    for (const auto& e : exps)
        for (size_t i = 0; i < common.size(); ++i) common[i] = std::min(common[i], e[i]);

    SignedBig sum;
    for (int k = kmin; k <= kmax; ++k) {
        ExpVec rel = exps[static_cast<size_t>(k - kmin)];
        rel -= common;
        sum.accumulate(prime_product(rel, false), (k % 2 == 0) ? 1 : -1);
    }
    sign_out = sum.sign;
    if (sum.sign == 0) return {};
    return sum.mag.to_scaled().times(prime_value(common));
}

bool triangle_ok(HalfInt a, HalfInt b, HalfInt c) {
    const int ta = a.twice(), tb = b.twice(), tc = c.twice();
    if (ta < 0 || tb < 0 || tc < 0) return false;
    if ((ta + tb + tc) % 2 != 0) return false;
    return tc >= std::abs(ta - tb) && tc <= ta + tb;
}

// Exponents of the triangle coefficient (a+b-c)!(a-b+c)!(-a+b+c)!/(a+b+c+1)!.
ExpVec triangle_exponents(HalfInt a, HalfInt b, HalfInt c) {
    ExpVec e{};
    e.fill(0);
    e += fact_exp((a.twice() + b.twice() - c.twice()) / 2);
    e += fact_exp((a.twice() - b.twice() + c.twice()) / 2);
    e += fact_exp((-a.twice() + b.twice() + c.twice()) / 2);
    e -= fact_exp((a.twice() + b.twice() + c.twice()) / 2 + 1);
    return e;
}

}  // namespace

double clebsch_gordan(HalfInt j1, HalfInt m1, HalfInt j2, HalfInt m2, HalfInt J, HalfInt M) {
    if (!valid_m(j1, m1) || !valid_m(j2, m2) || !valid_m(J, M)) return 0.0;
    if (m1.twice() + m2.twice() != M.twice()) return 0.0;
    if (!triangle_ok(j1, j2, J)) return 0.0;

    // integer combinations (all guaranteed integral by the checks above)
    const int j1pm1 = (j1.twice() + m1.twice()) / 2, j1mm1 = (j1.twice() - m1.twice()) / 2;
    const int j2pm2 = (j2.twice() + m2.twice()) / 2, j2mm2 = (j2.twice() - m2.twice()) / 2;
    const int JpM = (J.twice() + M.twice()) / 2, JmM = (J.twice() - M.twice()) / 2;
    const int j12J = (j1.twice() + j2.twice() - J.twice()) / 2;
    const int Jj2m1 = (J.twice() - j2.twice() + m1.twice()) / 2;   // J - j2 + m1
    const int Jj1m2 = (J.twice() - j1.twice() - m2.twice()) / 2;   // J - j1 - m2

    const int kmin = std::max({0, -Jj2m1, -Jj1m2});
    const int kmax = std::min({j12J, j1mm1, j2pm2});
    if (kmin > kmax) return 0.0;

    int sign = 0;
    const ScaledFloat sum = exact_alternating_sum(
        kmin, kmax,
        [&](int k) {
            return std::array<int, 6>{k, j12J - k, j1mm1 - k, j2pm2 - k, Jj2m1 + k, Jj1m2 + k};
        },
        [](int) { return 0; }, sign);
    if (sign == 0) return 0.0;

    ExpVec pref = triangle_exponents(j1, j2, J);
    pref += fact_exp(JpM);
    pref += fact_exp(JmM);
    pref += fact_exp(j1pm1);
    pref += fact_exp(j1mm1);
    pref += fact_exp(j2pm2);
    pref += fact_exp(j2mm2);

    const ScaledFloat root =
        prime_value(pref).times(ScaledFloat::normalized(J.twice() + 1, 0)).root();
    return sign * sum.times(root).to_double();
}

double wigner_6j(HalfInt a, HalfInt b, HalfInt c, HalfInt d, HalfInt e, HalfInt f) {
    if (!triangle_ok(a, b, c) || !triangle_ok(a, e, f) || !triangle_ok(d, b, f) ||
        !triangle_ok(d, e, c))
        return 0.0;

    const int abc = (a.twice() + b.twice() + c.twice()) / 2;
    const int aef = (a.twice() + e.twice() + f.twice()) / 2;
    const int dbf = (d.twice() + b.twice() + f.twice()) / 2;
    const int dec = (d.twice() + e.twice() + c.twice()) / 2;
    const int abde = (a.twice() + b.twice() + d.twice() + e.twice()) / 2;
    const int bcef = (b.twice() + c.twice() + e.twice() + f.twice()) / 2;
    const int acdf = (a.twice() + c.twice() + d.twice() + f.twice()) / 2;

    const int tmin = std::max({abc, aef, dbf, dec});
    const int tmax = std::min({abde, bcef, acdf});
    if (tmin > tmax) return 0.0;

    int sign = 0;
    const ScaledFloat sum = exact_alternating_sum(
        tmin, tmax,
        [&](int t) {
            return std::array<int, 7>{t - abc, t - aef, t - dbf, t - dec,
                                      abde - t, bcef - t, acdf - t};
        },
        [](int t) { return t + 1; }, sign);
    if (sign == 0) return 0.0;

    ExpVec pref = triangle_exponents(a, b, c);
    pref += triangle_exponents(a, e, f);
    pref += triangle_exponents(d, b, f);
    pref += triangle_exponents(d, e, c);

    return sign * sum.times(prime_value(pref).root()).to_double();
}

double factorial(int n) {
    static const std::vector<double> table = [] {
        std::vector<double> t(171);
        t[0] = 1.0;
        for (int i = 1; i <= 170; ++i) t[i] = t[i - 1] * i;
        return t;
    }();
    if (n < 0 || n > 170) throw std::domain_error("factorial: argument out of range");
    return table[static_cast<size_t>(n)];
}

double binomial(int n, int k) {
    if (k < 0 || k > n) return 0.0;
    return factorial(n) / (factorial(k) * factorial(n - k));
}

double wigner_small_d(HalfInt j, HalfInt m_row, HalfInt m_col, double beta) {
    if (!valid_m(j, m_row) || !valid_m(j, m_col)) return 0.0;
    const int jpm = (j.twice() + m_col.twice()) / 2, jmm = (j.twice() - m_col.twice()) / 2;
    const int jpmp = (j.twice() + m_row.twice()) / 2, jmmp = (j.twice() - m_row.twice()) / 2;
    const int mpmm = (m_row.twice() - m_col.twice()) / 2;  // m' - m

    const double c = std::cos(beta / 2.0), s = std::sin(beta / 2.0);
    const double norm = std::sqrt(factorial(jpm) * factorial(jmm) * factorial(jpmp) * factorial(jmmp));

    double sum = 0.0;
    const int kmin = std::max(0, -mpmm);
    const int kmax = std::min(jpm, jmmp);
    for (int k = kmin; k <= kmax; ++k) {
        const double den =
            factorial(k) * factorial(jpm - k) * factorial(jmmp - k) * factorial(mpmm + k);
        const double term = std::pow(c, jpm + jmmp - 2 * k) * std::pow(-s, mpmm + 2 * k) / den;
        sum += (k % 2 == 0 ? term : -term);
    }
    return norm * sum;
}

Eigen::MatrixXcd wigner_D(HalfInt j, double alpha, double beta, double gamma) {
    if (j.twice() < 0) throw std::domain_error("wigner_D: negative spin");
    const int d = dim(j);
    Eigen::MatrixXcd D(d, d);
    const std::complex<double> I(0.0, 1.0);
    for (int r = 0; r < d; ++r) {
        const HalfInt mr = spin_label(j, r);
        for (int c = 0; c < d; ++c) {
            const HalfInt mc = spin_label(j, c);
            D(r, c) = std::exp(-I * (mr.value() * alpha)) * wigner_small_d(j, mr, mc, beta) *
                      std::exp(-I * (mc.value() * gamma));
        }
    }
    return D;
}

}  // namespace spinpow
