#include "oista/rational.hpp"

#include "oista/error.hpp"

#include <cctype>

namespace oista {

Rational parse_rational(const std::string& text) {
    if (text.empty()) throw Error("empty rational literal");
    auto slash = text.find('/');
    auto dot = text.find('.');
    try {
        if (slash != std::string::npos) {
            Rational q(text);
            q.canonicalize();
            return q;
        }
        if (dot != std::string::npos) {
            // decimal p.f -> (p*10^k + f) / 10^k
            std::string digits = text.substr(0, dot) + text.substr(dot + 1);
            std::size_t frac_len = text.size() - dot - 1;
            if (frac_len == 0) throw Error("trailing decimal point in '" + text + "'");
            mpz_class num(digits);
            mpz_class den(1);
            for (std::size_t i = 0; i < frac_len; ++i) den *= 10;
            Rational q(num, den);
            q.canonicalize();
            return q;
        }
        return Rational(mpz_class(text));
    } catch (const std::invalid_argument&) {
        throw Error("bad rational literal '" + text + "'");
    }
}

} // namespace oista
