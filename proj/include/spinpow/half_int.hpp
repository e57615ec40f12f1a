#ifndef SPINPOW_HALF_INT_HPP
#define SPINPOW_HALF_INT_HPP

#include <compare>
#include <string>

namespace spinpow {

/// Exact half-integer angular momentum label (j, m, L, sigma, ...),
/// stored as twice its value so that 3/2 is representable without rounding.
class HalfInt {
public:
    constexpr HalfInt() = default;
    constexpr explicit HalfInt(int twice) : twice_(twice) {}

    static constexpr HalfInt from_int(int n) { return HalfInt(2 * n); }

    constexpr int twice() const { return twice_; }
    constexpr double value() const { return 0.5 * twice_; }
    constexpr bool is_integer() const { return twice_ % 2 == 0; }

    /// For labels known to be integers (L, M of coupled states, sigma, mu).
    int as_int() const;

    constexpr friend HalfInt operator+(HalfInt a, HalfInt b) { return HalfInt(a.twice_ + b.twice_); }
    constexpr friend HalfInt operator-(HalfInt a, HalfInt b) { return HalfInt(a.twice_ - b.twice_); }
    constexpr friend HalfInt operator-(HalfInt a) { return HalfInt(-a.twice_); }
    constexpr auto operator<=>(const HalfInt&) const = default;

    /// "2", "3/2", "-1/2", ...
    std::string str() const;

    /// Accepts "1", "3/2" and "1.5"; throws std::invalid_argument otherwise.
    static HalfInt parse(const std::string& text);

private:
    int twice_ = 0;
};

/// Dimension 2j+1 of the spin-j space.
constexpr int dim(HalfInt j) { return j.twice() + 1; }

/// True when m is a valid magnetic label for spin j (|m| <= j, same parity).
constexpr bool valid_m(HalfInt j, HalfInt m) {
    const int tj = j.twice(), tm = m.twice();
    return tj >= 0 && tm >= -tj && tm <= tj && (tj - tm) % 2 == 0;
}

/// Row index of |j,m> with the basis ordered m = j, j-1, ..., -j.
constexpr int spin_index(HalfInt j, HalfInt m) { return (j.twice() - m.twice()) / 2; }

/// m label of a row index under the same ordering.
constexpr HalfInt spin_label(HalfInt j, int index) { return HalfInt(j.twice() - 2 * index); }

}  // namespace spinpow

#endif
