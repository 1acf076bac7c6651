#include "cfpomdp/rational.hpp"

#include <cctype>
#include <ostream>

#include "cfpomdp/errors.hpp"

namespace cfpomdp {

namespace {

bool is_integer_literal(std::string_view s) {
  if (s.empty()) return false;
  std::size_t i = (s.front() == '-' || s.front() == '+') ? 1 : 0;
  if (i == s.size()) return false;
  for (; i < s.size(); ++i) {
    if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
  }
  return true;
}

BigInt parse_integer(std::string_view s) {
  std::string digits(s.front() == '+' ? s.substr(1) : s);
  return BigInt(digits, 10);
}

}  // namespace

Rat::Rat(const BigInt& num, const BigInt& den) {
  if (den == 0) throw InputError("rational with zero denominator");
  value_ = mpq_class(num, den);
  value_.canonicalize();
}

Rat::Rat(mpq_class value) : value_(std::move(value)) { value_.canonicalize(); }

Rat Rat::parse(std::string_view text) {
  const auto slash = text.find('/');
  if (slash == std::string_view::npos) {
    if (!is_integer_literal(text)) {
      throw InputError("malformed rational literal '" + std::string(text) + "'");
    }
    return Rat(parse_integer(text), BigInt(1));
  }
  const auto num = text.substr(0, slash);
  const auto den = text.substr(slash + 1);
  if (!is_integer_literal(num) || !is_integer_literal(den) || den.front() == '-') {
    throw InputError("malformed rational literal '" + std::string(text) + "'");
  }
  const BigInt d = parse_integer(den);
  if (d == 0) throw InputError("zero denominator in '" + std::string(text) + "'");
  return Rat(parse_integer(num), d);
}

std::string Rat::str() const {
  if (value_.get_den() == 1) return value_.get_num().get_str();
  return value_.get_num().get_str() + "/" + value_.get_den().get_str();
}

Rat& Rat::operator/=(const Rat& o) {
  if (o.is_zero()) throw InternalError("division by zero rational");
  value_ /= o.value_;
  return *this;
}

std::ostream& operator<<(std::ostream& os, const Rat& r) { return os << r.str(); }

BigInt big_pow(const BigInt& base, unsigned long exponent) {
  BigInt out;
  mpz_pow_ui(out.get_mpz_t(), base.get_mpz_t(), exponent);
  return out;
}

}  // namespace cfpomdp
