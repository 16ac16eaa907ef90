#include "qpdirac/padic.hpp"

#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>
#include <string>

namespace qpdirac {

namespace {

using u128 = uint128;

std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return static_cast<std::uint64_t>(static_cast<u128>(a) * b % m);
}

// Inverse of a modulo m for gcd(a, m) = 1.
std::uint64_t invmod(std::uint64_t a, std::uint64_t m) {
  int128 t = 0, new_t = 1;
  int128 r = m, new_r = a % m;
  while (new_r != 0) {
    int128 q = r / new_r;
    int128 tmp = t - q * new_t;
    t = new_t;
    new_t = tmp;
    tmp = r - q * new_r;
    r = new_r;
    new_r = tmp;
  }
  if (r != 1) throw std::domain_error("invmod: not invertible");
  if (t < 0) t += m;
  return static_cast<std::uint64_t>(t);
}

std::uint64_t upow(std::uint64_t base, int exp) {
  return static_cast<std::uint64_t>(ipow(static_cast<std::int64_t>(base), exp));
}

}  // namespace

Rational make_rational(std::int64_t num, std::int64_t den) {
  if (den == 0) throw std::domain_error("make_rational: zero denominator");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  const std::int64_t g = std::gcd(num < 0 ? -num : num, den);
  if (g > 1) {
    num /= g;
    den /= g;
  }
  return {num, den};
}

std::int64_t ipow(std::int64_t base, int exp) {
  if (exp < 0) throw std::domain_error("ipow: negative exponent");
  std::int64_t result = 1;
  for (int i = 0; i < exp; ++i) {
    if (__builtin_mul_overflow(result, base, &result)) throw std::overflow_error("ipow overflow");
  }
  return result;
}

int ord_of_integer(std::uint64_t n, std::uint64_t p) {
  if (n == 0) return kInfiniteOrder;
  int t = 0;
  while (n % p == 0) {
    n /= p;
    ++t;
  }
  return t;
}

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d) {
    if (n % d == 0) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// PrimeContext

PrimeContext::PrimeContext(std::uint32_t p) : p_(p) {
  if (p == 2 || !is_prime(p)) {
    throw std::invalid_argument("PrimeContext: p must be an odd prime, got " + std::to_string(p));
  }
  table_.assign(p, -1);
  table_[0] = 0;
  for (std::uint64_t z = 1; z < p; ++z) table_[z * z % p] = 1;
}

int PrimeContext::legendre(std::int64_t j) const {
  std::int64_t r = j % static_cast<std::int64_t>(p_);
  if (r < 0) r += p_;
  if (r == 0) throw std::domain_error("legendre: argument divisible by p");
  return table_[static_cast<std::size_t>(r)];
}

std::vector<std::uint32_t> PrimeContext::residues() const {
  std::vector<std::uint32_t> out;
  for (std::uint32_t j = 1; j < p_; ++j) {
    if (table_[j] == 1) out.push_back(j);
  }
  return out;
}

std::vector<std::uint32_t> PrimeContext::non_residues() const {
  std::vector<std::uint32_t> out;
  for (std::uint32_t j = 1; j < p_; ++j) {
    if (table_[j] == -1) out.push_back(j);
  }
  return out;
}

int legendre(std::int64_t j, const PrimeContext& ctx) { return ctx.legendre(j); }

// ---------------------------------------------------------------------------
// Phase

Phase::Phase(std::uint64_t numerator, std::uint64_t modulus) {
  if (modulus == 0) throw std::domain_error("Phase: zero modulus");
  numerator %= modulus;
  const std::uint64_t g = std::gcd(numerator, modulus);
  num_ = numerator / g;
  mod_ = modulus / g;
}

std::complex<double> Phase::value() const {
  const long double angle = 2.0L * std::numbers::pi_v<long double> * static_cast<long double>(num_) /
                            static_cast<long double>(mod_);
  return {static_cast<double>(std::cos(angle)), static_cast<double>(std::sin(angle))};
}

Phase Phase::operator*(const Phase& other) const {
  const std::uint64_t common = std::lcm(mod_, other.mod_);
  const std::uint64_t a = mulmod(num_, common / mod_, common);
  const std::uint64_t b = mulmod(other.num_, common / other.mod_, common);
  return Phase((a + b) % common, common);
}

// ---------------------------------------------------------------------------
// PAdicScalar

std::uint64_t PAdicScalar::modulus() const { return upow(p_, precision_); }

void PAdicScalar::check_compatible(const PAdicScalar& other) const {
  if (p_ != other.p_ || precision_ != other.precision_) {
    throw std::invalid_argument("PAdicScalar: mismatched prime or precision");
  }
}

PAdicScalar PAdicScalar::zero(std::uint32_t p, int precision) {
  if (precision < 1) throw std::invalid_argument("PAdicScalar: precision must be >= 1");
  PAdicScalar z(p, precision);
  (void)z.modulus();  // overflow check
  return z;
}

PAdicScalar PAdicScalar::from_unit(int valuation, std::uint64_t unit, std::uint32_t p,
                                   int precision) {
  PAdicScalar x = zero(p, precision);
  if (unit % p == 0) throw std::invalid_argument("PAdicScalar::from_unit: unit divisible by p");
  x.zero_ = false;
  x.valuation_ = valuation;
  x.unit_ = unit % x.modulus();
  return x;
}

PAdicScalar PAdicScalar::from_integer(std::int64_t n, std::uint32_t p, int precision) {
  return from_rational(n, 1, p, precision);
}

PAdicScalar PAdicScalar::from_rational(std::int64_t num, std::int64_t den, std::uint32_t p,
                                       int precision) {
  if (den == 0) throw std::domain_error("PAdicScalar::from_rational: zero denominator");
  PAdicScalar x = zero(p, precision);
  if (num == 0) return x;
  const bool negative = (num < 0) != (den < 0);
  std::uint64_t un = static_cast<std::uint64_t>(num < 0 ? -static_cast<int128>(num) : num);
  std::uint64_t ud = static_cast<std::uint64_t>(den < 0 ? -static_cast<int128>(den) : den);
  int v = 0;
  while (un % p == 0) {
    un /= p;
    ++v;
  }
  while (ud % p == 0) {
    ud /= p;
    --v;
  }
  const std::uint64_t mod = x.modulus();
  std::uint64_t u = mulmod(un % mod, invmod(ud % mod, mod), mod);
  if (negative) u = mod - u;
  return from_unit(v, u, p, precision);
}

std::vector<std::uint32_t> PAdicScalar::digits() const {
  std::vector<std::uint32_t> d(static_cast<std::size_t>(precision_), 0);
  std::uint64_t u = zero_ ? 0 : unit_;
  for (auto& digit : d) {
    digit = static_cast<std::uint32_t>(u % p_);
    u /= p_;
  }
  return d;
}

PAdicScalar PAdicScalar::operator+(const PAdicScalar& other) const {
  check_compatible(other);
  if (zero_) return other;
  if (other.zero_) return *this;
  const int v = std::min(valuation_, other.valuation_);
  const std::uint64_t mod = modulus();
  auto shifted = [&](const PAdicScalar& s) -> std::uint64_t {
    const int shift = s.valuation_ - v;
    if (shift >= precision_) return 0;
    return mulmod(s.unit_, upow(p_, shift), mod);
  };
  const std::uint64_t sum = (shifted(*this) + shifted(other)) % mod;
  if (sum == 0) return zero(p_, precision_);
  const int t = ord_of_integer(sum, p_);
  return from_unit(v + t, sum / upow(p_, t), p_, precision_);
}

PAdicScalar PAdicScalar::operator-() const {
  if (zero_) return *this;
  PAdicScalar r = *this;
  r.unit_ = modulus() - unit_;
  return r;
}

PAdicScalar PAdicScalar::operator-(const PAdicScalar& other) const { return *this + (-other); }

PAdicScalar PAdicScalar::operator*(const PAdicScalar& other) const {
  check_compatible(other);
  if (zero_ || other.zero_) return zero(p_, precision_);
  return from_unit(valuation_ + other.valuation_, mulmod(unit_, other.unit_, modulus()), p_,
                   precision_);
}

// ---------------------------------------------------------------------------
// Free functions

int ord(const PAdicScalar& x) { return x.valuation(); }

Rational norm_p(const PAdicScalar& x) {
  if (x.is_zero()) return {0, 1};
  const int v = x.valuation();
  const auto p = static_cast<std::int64_t>(x.prime());
  return v >= 0 ? Rational{1, ipow(p, v)} : Rational{ipow(p, -v), 1};
}

Rational frac_part(const PAdicScalar& x) {
  if (x.is_zero() || x.valuation() >= 0) return {0, 1};
  const int k = -x.valuation();
  const auto denom = static_cast<std::uint64_t>(ipow(x.prime(), k));
  // Digits at negative positions are the low k digits of the unit.
  const std::uint64_t numer = x.unit() % denom;
  return make_rational(static_cast<std::int64_t>(numer), static_cast<std::int64_t>(denom));
}

Phase chi_p(const PAdicScalar& x) {
  const Rational f = frac_part(x);
  return Phase(static_cast<std::uint64_t>(f.num), static_cast<std::uint64_t>(f.den));
}

int pi_character(const PAdicScalar& x, const PrimeContext& ctx) {
  if (x.is_zero()) throw std::domain_error("pi_character: undefined at 0");
  if (x.prime() != ctx.p()) throw std::invalid_argument("pi_character: prime mismatch");
  return ctx.legendre(x.leading_digit());
}

int pi_character_or_zero(const PAdicScalar& x, const PrimeContext& ctx) {
  return x.is_zero() ? 0 : pi_character(x, ctx);
}

}  // namespace qpdirac
