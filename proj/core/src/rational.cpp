#include "mvlim/rational.hpp"

#include <cctype>
#include <stdexcept>

namespace mvlim {

Rational make_rational(long num, long den) {
  Rational q(num, den);
  q.canonicalize();
  return q;
}

namespace {

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s)
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  return true;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  std::string_view s = text;
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  bool negative = false;
  if (!s.empty() && (s.front() == '-' || s.front() == '+')) {
    negative = s.front() == '-';
    s.remove_prefix(1);
  }
  Rational result;
  if (auto slash = s.find('/'); slash != std::string_view::npos) {
    auto num = s.substr(0, slash);
    auto den = s.substr(slash + 1);
    if (!all_digits(num) || !all_digits(den))
      throw std::invalid_argument("not a rational: '" + std::string(text) + "'");
    mpz_class d{std::string(den)};
    if (d == 0) throw std::invalid_argument("zero denominator in '" + std::string(text) + "'");
    result = Rational(mpz_class(std::string(num)), d);
  } else if (auto dot = s.find('.'); dot != std::string_view::npos) {
    auto whole = s.substr(0, dot);
    auto frac = s.substr(dot + 1);
    if ((!whole.empty() && !all_digits(whole)) || !all_digits(frac))
      throw std::invalid_argument("not a rational: '" + std::string(text) + "'");
    mpz_class scale;
    mpz_ui_pow_ui(scale.get_mpz_t(), 10, frac.size());
    mpz_class w = whole.empty() ? mpz_class(0) : mpz_class(std::string(whole));
    result = Rational(w * scale + mpz_class(std::string(frac)), scale);
  } else {
    if (!all_digits(s)) throw std::invalid_argument("not a rational: '" + std::string(text) + "'");
    result = Rational(mpz_class(std::string(s)));
  }
  result.canonicalize();
  return negative ? Rational(-result) : result;
}

std::string to_string(const Rational& q) { return q.get_str(); }

bool is_integer(const Rational& q) { return q.get_den() == 1; }

bool is_even_integer(const Rational& q) { return is_integer(q) && mpz_even_p(q.get_num_mpz_t()); }

int negative_base_sign(const Rational& q) {
  if (mpz_even_p(q.get_den_mpz_t())) return 1;
  return mpz_odd_p(q.get_num_mpz_t()) ? -1 : 1;
}

bool exponents_add_safely(const Rational& p, const Rational& q) {
  Rational sum = p + q;
  return negative_base_sign(p) * negative_base_sign(q) == negative_base_sign(sum);
}

bool exponents_compose_safely(const Rational& p, const Rational& q) {
  int inner = negative_base_sign(p);
  int composite = inner > 0 ? 1 : negative_base_sign(q);
  Rational product = p * q;
  return composite == negative_base_sign(product);
}

namespace {

std::optional<mpz_class> exact_root(const mpz_class& value, unsigned long n) {
  mpz_class root;
  if (mpz_root(root.get_mpz_t(), value.get_mpz_t(), n) == 0) return std::nullopt;
  return root;
}

}  // namespace

Rational integer_power(const Rational& c, long n) {
  if (n == 0) return Rational(1);
  mpz_class num, den;
  unsigned long k = static_cast<unsigned long>(n < 0 ? -n : n);
  mpz_pow_ui(num.get_mpz_t(), c.get_num_mpz_t(), k);
  mpz_pow_ui(den.get_mpz_t(), c.get_den_mpz_t(), k);
  Rational r(num, den);
  r.canonicalize();
  if (n < 0) {
    if (r == 0) throw std::domain_error("zero to a negative power");
    r = 1 / r;
  }
  return r;
}

std::optional<Rational> exact_power(const Rational& c, const Rational& p) {
  if (p == 0) return Rational(1);
  if (c == 0) {
    if (p > 0) return Rational(0);
    return std::nullopt;
  }
  if (!p.get_num().fits_slong_p() || !p.get_den().fits_ulong_p()) return std::nullopt;
  long a = p.get_num().get_si();
  unsigned long b = p.get_den().get_ui();
  Rational mag = abs(c);
  auto rn = exact_root(mag.get_num(), b);
  auto rd = exact_root(mag.get_den(), b);
  if (!rn || !rd) return std::nullopt;
  Rational root(*rn, *rd);
  root.canonicalize();
  Rational value = integer_power(root, a);
  if (c < 0 && negative_base_sign(p) < 0) value = -value;
  return value;
}

mpz_class lcm_of_denominators(const std::vector<Rational>& values) {
  mpz_class l = 1;
  for (const auto& v : values) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), v.get_den_mpz_t());
  return l;
}

double to_double(const Rational& q) { return q.get_d(); }

}  // namespace mvlim
