#include "spinpow/half_int.hpp"

#include <cmath>
#include <cstdlib>
#include <stdexcept>

namespace spinpow {

int HalfInt::as_int() const {
    if (twice_ % 2 != 0)
        throw std::domain_error("HalfInt: " + str() + " is not an integer label");
    return twice_ / 2;
}

std::string HalfInt::str() const {
    if (twice_ % 2 == 0) return std::to_string(twice_ / 2);
    return std::to_string(twice_) + "/2";
}

HalfInt HalfInt::parse(const std::string& text) {
    if (text.empty()) throw std::invalid_argument("HalfInt: empty string");
    const auto slash = text.find('/');
    try {
        if (slash != std::string::npos) {
            const int num = std::stoi(text.substr(0, slash));
            const int den = std::stoi(text.substr(slash + 1));
            if (den == 1) return HalfInt(2 * num);
            if (den == 2) return HalfInt(num);
            throw std::invalid_argument("HalfInt: denominator must be 1 or 2 in '" + text + "'");
        }
        size_t used = 0;
        const double v = std::stod(text, &used);
        if (used != text.size())
            throw std::invalid_argument("HalfInt: trailing characters in '" + text + "'");
        const double tw = 2.0 * v;
        const double rounded = std::round(tw);
        if (std::abs(tw - rounded) > 1e-9)
            throw std::invalid_argument("HalfInt: '" + text + "' is not a half-integer");
        return HalfInt(static_cast<int>(rounded));
    } catch (const std::out_of_range&) {
        throw std::invalid_argument("HalfInt: value out of range in '" + text + "'");
    }
}

}  // namespace spinpow
