#include "hyptctl/rational.hpp"

#include <cctype>

namespace hyptctl {

std::optional<Rational> rational_from_string(const std::string& text) {
    if (text.empty()) return std::nullopt;
    std::string s = text;
    // Decimal literals are turned into exact fractions.
    auto dot = s.find('.');
    if (dot != std::string::npos) {
        std::string intpart = s.substr(0, dot);
        std::string frac = s.substr(dot + 1);
        if (frac.empty()) return std::nullopt;
        for (char c : frac)
            if (!std::isdigit(static_cast<unsigned char>(c))) return std::nullopt;
        bool neg = !intpart.empty() && intpart[0] == '-';
        if (neg) intpart = intpart.substr(1);
        if (intpart.empty()) intpart = "0";
        for (char c : intpart)
            if (!std::isdigit(static_cast<unsigned char>(c))) return std::nullopt;
        std::string den = "1" + std::string(frac.size(), '0');
        try {
            Rational q(intpart + frac, 10);
            q /= Rational(den, 10);
            q.canonicalize();
            if (neg) q = -q;
            return q;
        } catch (...) {
            return std::nullopt;
        }
    }
    try {
        Rational q(s, 10);
        q.canonicalize();
        return q;
    } catch (...) {
        return std::nullopt;
    }
}

std::string rational_to_string(const Rational& q) {
    if (q.get_den() == 1) return q.get_num().get_str();
    return q.get_num().get_str() + "/" + q.get_den().get_str();
}

bool is_integral(const Rational& q) { return q.get_den() == 1; }

}  // namespace hyptctl
