#include "etopaq/rational.hpp"

#include <stdexcept>

namespace etopaq {

long floor_int(const Rational& q) {
    mpz_class f;
    mpz_fdiv_q(f.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
    return f.get_si();
}

Rational frac(const Rational& q) { return q - Rational(floor_int(q)); }

bool is_integer(const Rational& q) { return mpz_divisible_p(q.get_num_mpz_t(), q.get_den_mpz_t()) != 0; }

Rational parse_rational(const std::string& text) {
    if (text.empty()) throw std::runtime_error("empty rational");
    auto dot = text.find('.');
    try {
        if (dot == std::string::npos) {
            Rational q(text, 10);
            if (q.get_den() == 0) throw std::invalid_argument("zero denominator");
            q.canonicalize();
            return q;
        }
        std::string ip = text.substr(0, dot), fp = text.substr(dot + 1);
        bool neg = !ip.empty() && ip[0] == '-';
        if (neg) ip = ip.substr(1);
        if (ip.empty()) ip = "0";
        if (fp.empty() || fp.find_first_not_of("0123456789") != std::string::npos ||
            ip.find_first_not_of("0123456789") != std::string::npos)
            throw std::invalid_argument("bad decimal");
        mpz_class den = 1;
        for (size_t i = 0; i < fp.size(); ++i) den *= 10;
        Rational q(mpz_class(ip + fp, 10), den);
        q.canonicalize();
        return neg ? Rational(-q) : q;
    } catch (const std::invalid_argument&) {
        throw std::runtime_error("malformed rational '" + text + "'");
    }
}

std::string to_string(const Rational& q) {
    Rational c(q);
    c.canonicalize();
    return c.get_str();
}

}  // namespace etopaq
