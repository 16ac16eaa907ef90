#pragma once

#include <complex>
#include <cstdint>
#include <limits>
#include <span>
#include <vector>

namespace qpdirac {

__extension__ using uint128 = unsigned __int128;
__extension__ using int128 = __int128;

/// Valuation reported for the zero element.
inline constexpr int kInfiniteOrder = std::numeric_limits<int>::max();

/// Reduced fraction num/den with den > 0. Only p-power denominators occur in practice.
struct Rational {
  std::int64_t num = 0;
  std::int64_t den = 1;

  double to_double() const { return static_cast<double>(num) / static_cast<double>(den); }
  friend bool operator==(const Rational&, const Rational&) = default;
};

Rational make_rational(std::int64_t num, std::int64_t den);

/// base^exp for exp >= 0; throws std::overflow_error if the result leaves int64.
std::int64_t ipow(std::int64_t base, int exp);

/// Exponent of p in n (n > 0).
int ord_of_integer(std::uint64_t n, std::uint64_t p);

bool is_prime(std::uint64_t n);

/// An odd prime together with its Legendre-symbol table.
class PrimeContext {
 public:
  explicit PrimeContext(std::uint32_t p);

  std::uint32_t p() const { return p_; }

  /// Legendre symbol (j/p) for j not divisible by p.
  int legendre(std::int64_t j) const;

  /// Entry k holds (k/p); entry 0 is 0.
  std::span<const std::int8_t> legendre_table() const { return table_; }

  /// F_p^+ and F_p^- in increasing order.
  std::vector<std::uint32_t> residues() const;
  std::vector<std::uint32_t> non_residues() const;

  friend bool operator==(const PrimeContext& a, const PrimeContext& b) { return a.p_ == b.p_; }

 private:
  std::uint32_t p_;
  std::vector<std::int8_t> table_;
};

int legendre(std::int64_t j, const PrimeContext& ctx);

/// exp(2*pi*i*numerator/modulus), kept as an exact reduced fraction.
class Phase {
 public:
  Phase() = default;
  Phase(std::uint64_t numerator, std::uint64_t modulus);

  std::uint64_t numerator() const { return num_; }
  std::uint64_t modulus() const { return mod_; }
  std::complex<double> value() const;

  Phase operator*(const Phase& other) const;
  friend bool operator==(const Phase&, const Phase&) = default;

 private:
  std::uint64_t num_ = 0;
  std::uint64_t mod_ = 1;
};

/// x = p^valuation * u with u a unit known modulo p^precision (relative precision).
///
/// Zero is a distinguished value. Arithmetic is exact on the stored representatives and
/// truncates to `precision` digits after the leading one; both operands must share p and
/// precision.
class PAdicScalar {
 public:
  static PAdicScalar zero(std::uint32_t p, int precision);
  static PAdicScalar from_integer(std::int64_t n, std::uint32_t p, int precision);
  /// num/den for any den != 0; the p-free part of den is inverted modulo p^precision.
  static PAdicScalar from_rational(std::int64_t num, std::int64_t den, std::uint32_t p,
                                   int precision);
  /// p^valuation * unit, where unit must not be divisible by p.
  static PAdicScalar from_unit(int valuation, std::uint64_t unit, std::uint32_t p, int precision);

  bool is_zero() const { return zero_; }
  int valuation() const { return zero_ ? kInfiniteOrder : valuation_; }
  std::uint64_t unit() const { return unit_; }
  std::uint32_t prime() const { return p_; }
  int precision() const { return precision_; }

  /// Digits d_0..d_{K-1} of the angular component; all zero for x = 0.
  std::vector<std::uint32_t> digits() const;
  std::uint32_t leading_digit() const { return static_cast<std::uint32_t>(unit_ % p_); }

  PAdicScalar operator+(const PAdicScalar& other) const;
  PAdicScalar operator-(const PAdicScalar& other) const;
  PAdicScalar operator*(const PAdicScalar& other) const;
  PAdicScalar operator-() const;

  friend bool operator==(const PAdicScalar&, const PAdicScalar&) = default;

 private:
  PAdicScalar(std::uint32_t p, int precision) : p_(p), precision_(precision) {}
  void check_compatible(const PAdicScalar& other) const;
  std::uint64_t modulus() const;

  std::uint32_t p_ = 3;
  int precision_ = 1;
  bool zero_ = true;
  int valuation_ = 0;
  std::uint64_t unit_ = 0;
};

int ord(const PAdicScalar& x);
Rational norm_p(const PAdicScalar& x);
/// {x}_p in [0, 1).
Rational frac_part(const PAdicScalar& x);
Phase chi_p(const PAdicScalar& x);

/// Quadratic character of the leading digit. Throws std::domain_error for x = 0.
int pi_character(const PAdicScalar& x, const PrimeContext& ctx);
/// Same, but returns 0 at x = 0.
int pi_character_or_zero(const PAdicScalar& x, const PrimeContext& ctx);

}  // namespace qpdirac
