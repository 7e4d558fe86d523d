#include "sgs/rational.hpp"

#include <cctype>
#include <ostream>
#include <stdexcept>

namespace sgs {

Rational::Rational(long n, long d) {
  if (d == 0) throw std::invalid_argument("rational with zero denominator");
  q_ = mpq_class(n, d);
  q_.canonicalize();
}

Rational& Rational::operator/=(const Rational& o) {
  if (o.q_ == 0) throw std::invalid_argument("rational division by zero");
  q_ /= o.q_;
  return *this;
}

static bool is_integer_token(std::string_view t) {
  if (!t.empty() && (t[0] == '+' || t[0] == '-')) t.remove_prefix(1);
  if (t.empty()) return false;
  for (char c : t)
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  return true;
}

Rational Rational::parse(std::string_view text) {
  auto slash = text.find('/');
  std::string_view num = text.substr(0, slash);
  std::string_view den =
      slash == std::string_view::npos ? std::string_view("1") : text.substr(slash + 1);
  if (!is_integer_token(num) || !is_integer_token(den))
    throw std::invalid_argument("malformed rational '" + std::string(text) + "'");
  // GMP takes neither a leading '+' nor (in base 0) leading zeros literally,
  // so signs are peeled off here and the digits passed in base 10.
  int sign = 1;
  auto digits = [&sign](std::string_view t) {
    if (t[0] == '-') sign = -sign;
    return (t[0] == '-' || t[0] == '+') ? t.substr(1) : t;
  };
  std::string_view nd = digits(num);
  std::string_view dd = digits(den);
  mpq_class q(std::string(nd) + "/" + std::string(dd), 10);
  if (q.get_den() == 0)
    throw std::invalid_argument("malformed rational '" + std::string(text) + "' (zero denominator)");
  q.canonicalize();
  if (sign < 0) q = -q;
  return Rational(q);
}

std::string Rational::to_string() const {
  return q_.get_den() == 1 ? q_.get_num().get_str() : q_.get_str();
}

std::string Rational::to_decimal(int digits) const {
  if (digits < 0) throw std::invalid_argument("negative digit count");
  bool neg = sgn(q_) < 0;
  mpz_class scale;
  mpz_ui_pow_ui(scale.get_mpz_t(), 10, static_cast<unsigned long>(digits));
  // round(|q| * 10^digits) with half-up tie-breaking
  mpz_class n = ::abs(q_.get_num()) * scale * 2 + q_.get_den();
  mpz_class scaled = n / (q_.get_den() * 2);
  mpz_class whole = scaled / scale;
  mpz_class frac = scaled % scale;
  std::string out = (neg && scaled != 0) ? "-" : "";
  out += whole.get_str();
  if (digits > 0) {
    std::string f = frac.get_str();
    out += "." + std::string(static_cast<size_t>(digits) - f.size(), '0') + f;
  }
  return out;
}

std::ostream& operator<<(std::ostream& os, const Rational& r) {
  return os << r.to_string();
}

}  // namespace sgs
