#include "domlab/rational.hpp"

#include <charconv>
#include <limits>
#include <numeric>
#include <ostream>
#include <stdexcept>

namespace domlab {
namespace {

using Wide = __int128;

Wide wide_abs(Wide v) { return v < 0 ? -v : v; }

Wide wide_gcd(Wide a, Wide b) {
  a = wide_abs(a);
  b = wide_abs(b);
  constexpr Wide kMax64 = std::numeric_limits<std::uint64_t>::max();
  if (a <= kMax64 && b <= kMax64) {
    return std::gcd(static_cast<std::uint64_t>(a), static_cast<std::uint64_t>(b));
  }
  while (b != 0) {
    Wide t = a % b;
    a = b;
    b = t;
  }
  return a;
}

bool fits64(Wide v) {
  return v >= std::numeric_limits<std::int64_t>::min() &&
         v <= std::numeric_limits<std::int64_t>::max();
}

std::int64_t parse_int(std::string_view s, std::string_view whole) {
  std::int64_t v = 0;
  const char* first = s.data();
  const char* last = s.data() + s.size();
  if (!s.empty() && s.front() == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last || first == last) {
    throw std::invalid_argument("malformed rational '" + std::string(whole) +
                                "'");
  }
  return v;
}

}  // namespace

Rational::Rational(std::int64_t n, std::int64_t d) {
  if (d == 0) throw std::domain_error("rational with zero denominator");
  *this = from_wide(n, d);
}

Rational Rational::from_wide(Wide n, Wide d) {
  if (d == 0) throw std::domain_error("rational division by zero");
  if (d < 0) {
    n = -n;
    d = -d;
  }
  if (fits64(n) && d <= std::numeric_limits<std::int64_t>::max()) {
    auto n64 = static_cast<std::int64_t>(n);
    auto d64 = static_cast<std::int64_t>(d);
    const std::int64_t g = static_cast<std::int64_t>(std::gcd(
        n64 < 0 ? -static_cast<std::uint64_t>(n64) : static_cast<std::uint64_t>(n64),
        static_cast<std::uint64_t>(d64)));
    Rational r;
    r.num_ = g > 1 ? n64 / g : n64;
    r.den_ = g > 1 ? d64 / g : d64;
    return r;
  }
  Wide g = wide_gcd(n, d);
  if (g > 1) {
    n /= g;
    d /= g;
  }
  if (!fits64(n) || !fits64(d)) {
    throw std::overflow_error("rational overflow beyond 64-bit range");
  }
  Rational r;
  r.num_ = static_cast<std::int64_t>(n);
  r.den_ = static_cast<std::int64_t>(d);
  return r;
}

Rational Rational::parse(std::string_view text) {
  auto slash = text.find('/');
  if (slash == std::string_view::npos) return Rational(parse_int(text, text));
  std::int64_t n = parse_int(text.substr(0, slash), text);
  std::int64_t d = parse_int(text.substr(slash + 1), text);
  if (d <= 0) {
    throw std::invalid_argument("rational denominator must be positive in '" +
                                std::string(text) + "'");
  }
  return Rational(n, d);
}

Rational Rational::operator-() const {
  return from_wide(-static_cast<Wide>(num_), den_);
}

Rational& Rational::operator+=(const Rational& o) {
  if (den_ == o.den_) {
    *this = from_wide(static_cast<Wide>(num_) + o.num_, den_);
    return *this;
  }
  Wide g = wide_gcd(den_, o.den_);
  Wide n = static_cast<Wide>(num_) * (o.den_ / g) +
           static_cast<Wide>(o.num_) * (den_ / g);
  Wide d = static_cast<Wide>(den_) * (o.den_ / g);
  *this = from_wide(n, d);
  return *this;
}

Rational& Rational::operator-=(const Rational& o) { return *this += -o; }

Rational& Rational::operator*=(const Rational& o) {
  if (num_ == 0 || o.num_ == 0) {
    *this = Rational();
    return *this;
  }
  Wide g1 = wide_gcd(num_, o.den_);
  Wide g2 = wide_gcd(o.num_, den_);
  Wide n = (static_cast<Wide>(num_) / g1) * (static_cast<Wide>(o.num_) / g2);
  Wide d = (static_cast<Wide>(den_) / g2) * (static_cast<Wide>(o.den_) / g1);
  *this = from_wide(n, d);
  return *this;
}

Rational& Rational::operator/=(const Rational& o) {
  if (o.num_ == 0) throw std::domain_error("rational division by zero");
  Rational inv;
  inv.num_ = o.num_ < 0 ? -o.den_ : o.den_;
  inv.den_ = o.num_ < 0 ? -o.num_ : o.num_;
  return *this *= inv;
}

std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
  if (a.den_ == b.den_) return a.num_ <=> b.num_;
  Wide lhs = static_cast<Wide>(a.num_) * b.den_;
  Wide rhs = static_cast<Wide>(b.num_) * a.den_;
  if (lhs < rhs) return std::strong_ordering::less;
  if (lhs > rhs) return std::strong_ordering::greater;
  return std::strong_ordering::equal;
}

std::string Rational::str() const {
  return std::to_string(num_) + "/" + std::to_string(den_);
}

std::ostream& operator<<(std::ostream& os, const Rational& r) {
  return os << r.str();
}

}  // namespace domlab
