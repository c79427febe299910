#include "twosq/rational.hpp"

#include <cctype>

#include "twosq/errors.hpp"

namespace twosq {

Rational parse_rational(std::string_view text) {
    auto bad = [&](const char* why) {
        throw ValidationError("cannot parse rational '" + std::string(text) +
                              "': " + why);
    };
    if (text.empty()) bad("empty");
    std::size_t slash = text.find('/');
    auto check_integer = [&](std::string_view part) {
        if (part.empty()) bad("missing digits");
        std::size_t i = (part[0] == '-' || part[0] == '+') ? 1 : 0;
        if (i == part.size()) bad("missing digits");
        for (; i < part.size(); ++i)
            if (!std::isdigit(static_cast<unsigned char>(part[i])))
                bad("only integer num/den form is accepted");
    };
    std::string_view num = text.substr(0, slash);
    check_integer(num);
    BigInt n(std::string(num), 10);
    BigInt d(1);
    if (slash != std::string_view::npos) {
        std::string_view den = text.substr(slash + 1);
        check_integer(den);
        d = BigInt(std::string(den), 10);
        if (d == 0) bad("zero denominator");
    }
    Rational r(n, d);
    r.canonicalize();
    return r;
}

std::string rational_str(const Rational& x) {
    return x.get_num().get_str() + "/" + x.get_den().get_str();
}

}  // namespace twosq
