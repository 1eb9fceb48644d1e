#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <sstream>
#include <string>
#include <string_view>

#include "lookdown/errors.hpp"

namespace lookdown {

using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

inline double to_double(const Rational& r) { return r.convert_to<double>(); }

inline std::string to_string(const Rational& r) {
    std::ostringstream os;
    os << r;
    return os.str();
}

inline BigInt factorial(int n) {
    BigInt f = 1;
    for (int i = 2; i <= n; ++i) f *= i;
    return f;
}

// Accepts "p/q", plain integers, and simple decimal strings ("0.25").
inline Rational parse_rational(std::string_view text) {
    std::string s(text);
    if (s.empty()) fail(errc::parse_error, "empty rational literal");
    auto slash = s.find('/');
    try {
        if (slash != std::string::npos) {
            BigInt num(s.substr(0, slash));
            BigInt den(s.substr(slash + 1));
            if (den == 0) fail(errc::parse_error, "zero denominator in '" + s + "'");
            return Rational(num, den);
        }
        auto dot = s.find('.');
        if (dot != std::string::npos) {
            std::string digits = s.substr(0, dot) + s.substr(dot + 1);
            std::string sign;
            if (!digits.empty() && (digits[0] == '-' || digits[0] == '+')) {
                if (digits[0] == '-') sign = "-";
                digits.erase(digits.begin());
            }
            // strip leading zeros so the big-int parser cannot read octal
            std::size_t nz = digits.find_first_not_of('0');
            digits = nz == std::string::npos ? "0" : digits.substr(nz);
            int frac_len = static_cast<int>(s.size() - dot - 1);
            BigInt den = 1;
            for (int i = 0; i < frac_len; ++i) den *= 10;
            return Rational(BigInt(sign + digits), den);
        }
        return Rational(BigInt(s));
    } catch (const Error&) {
        throw;
    } catch (const std::exception&) {
        fail(errc::parse_error, "bad rational literal '" + s + "'");
    }
}

}  // namespace lookdown
