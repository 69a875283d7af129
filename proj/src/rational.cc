#include "gme/rational.h"

#include <cctype>

#include "gme/errors.h"

namespace gme {

namespace {

bool is_integer_text(std::string_view s) {
    if (!s.empty() && (s.front() == '-' || s.front() == '+')) {
        s.remove_prefix(1);
    }
    if (s.empty()) {
        return false;
    }
    for (char c : s) {
        if (!std::isdigit(static_cast<unsigned char>(c))) {
            return false;
        }
    }
    return true;
}

BigInt parse_integer(std::string_view s) {
    bool negative = false;
    if (s.front() == '-' || s.front() == '+') {
        negative = s.front() == '-';
        s.remove_prefix(1);
    }
    BigInt value{std::string(s)};
    return negative ? BigInt(-value) : value;
}

}  // namespace

Rational parse_rational(std::string_view text) {
    while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) {
        text.remove_prefix(1);
    }
    while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) {
        text.remove_suffix(1);
    }
    auto slash = text.find('/');
    std::string_view num = text.substr(0, slash);
    std::string_view den = slash == std::string_view::npos ? std::string_view("1") : text.substr(slash + 1);
    if (!is_integer_text(num) || !is_integer_text(den) || den.front() == '-' || den.front() == '+') {
        throw DomainError("not a rational number: '" + std::string(text) + "'");
    }
    BigInt d = parse_integer(den);
    if (d == 0) {
        throw DomainError("zero denominator in '" + std::string(text) + "'");
    }
    return Rational(parse_integer(num), d);
}

std::string to_string(const Rational& value) {
    return value.str();
}

double to_double(const Rational& value) {
    return value.convert_to<double>();
}

}  // namespace gme
