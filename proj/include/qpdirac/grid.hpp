#pragma once

#include <complex>
#include <cstdint>
#include <memory>
#include <vector>

#include <Eigen/Dense>

#include "qpdirac/padic.hpp"

namespace qpdirac {

using Index = Eigen::Index;
using Complex = std::complex<double>;

enum class SignClass { zero, plus, minus };

SignClass sign_class(const PAdicScalar& x, const PrimeContext& ctx);

/// exp(2*pi*i*k/P) for k in [0, P). Every phase used on a grid of size P comes from here.
class RootTable {
 public:
  explicit RootTable(std::uint64_t modulus);

  std::uint64_t modulus() const { return roots_.size(); }
  const Complex& operator[](std::uint64_t k) const { return roots_[k % roots_.size()]; }
  const Complex* data() const { return roots_.data(); }

 private:
  std::vector<Complex> roots_;
};

namespace detail {
struct GridTables;
}

/// The quotient p^{-N}Z_p / p^M Z_p. Point a in [0, P) is the coset of x_a = p^{-N} a.
class GridSpec {
 public:
  GridSpec(PrimeContext ctx, int N, int M);

  const PrimeContext& context() const { return ctx_; }
  std::uint32_t p() const { return ctx_.p(); }
  int N() const { return N_; }
  int M() const { return M_; }
  /// Total digit count N + M, which is also the PAdicScalar precision used on this grid.
  int digits() const { return N_ + M_; }
  Index size() const { return size_; }
  /// Haar measure of one coset, p^{-M}.
  double cell_measure() const { return cell_measure_; }

  /// Same prime with support and constancy exponents swapped. The dual of an N = 0 grid has
  /// M = 0, which only this path may construct.
  GridSpec dual() const { return GridSpec(ctx_, M_, N_, DualTag{}); }

  /// ord(x_a); kInfiniteOrder for a = 0.
  int order_of_index(Index a) const;
  SignClass sign_of_index(Index a) const;
  std::uint32_t leading_digit_of_index(Index a) const;
  const RootTable& roots() const;

  friend bool operator==(const GridSpec& a, const GridSpec& b) {
    return a.p() == b.p() && a.N_ == b.N_ && a.M_ == b.M_;
  }

 private:
  struct DualTag {};
  GridSpec(PrimeContext ctx, int N, int M, DualTag);

  PrimeContext ctx_;
  int N_;
  int M_;
  Index size_;
  double cell_measure_;
  std::shared_ptr<const detail::GridTables> tables_;
};

PAdicScalar point_of_index(const GridSpec& spec, Index a);
/// Coset index of x; x must lie in B_N. Digits beyond the grid resolution are dropped.
Index index_of_point(const GridSpec& spec, const PAdicScalar& x);

/// Complex values on the cosets of a grid.
class GridFunction {
 public:
  explicit GridFunction(GridSpec spec);
  GridFunction(GridSpec spec, Eigen::VectorXcd values);

  const GridSpec& spec() const { return spec_; }
  const Eigen::VectorXcd& values() const { return values_; }
  Eigen::VectorXcd& values() { return values_; }
  Index size() const { return values_.size(); }

  Complex& operator[](Index a) { return values_[a]; }
  const Complex& operator[](Index a) const { return values_[a]; }

  GridFunction& operator+=(const GridFunction& other);
  GridFunction& operator-=(const GridFunction& other);
  GridFunction& operator*=(Complex s);

  friend GridFunction operator+(GridFunction a, const GridFunction& b) { return a += b; }
  friend GridFunction operator-(GridFunction a, const GridFunction& b) { return a -= b; }
  friend GridFunction operator*(Complex s, GridFunction a) { return a *= s; }
  friend GridFunction operator*(GridFunction a, Complex s) { return a *= s; }

 private:
  GridSpec spec_;
  Eigen::VectorXcd values_;
};

void require_same_spec(const GridSpec& a, const GridSpec& b, const char* what);

/// {x : |x - center|_p <= p^radius_exponent}.
struct Ball {
  PAdicScalar center;
  int radius_exponent = 0;
};

/// Ball of radius p^r around 0 (that is, p^{-r} Z_p).
Ball centered_ball(const GridSpec& spec, int radius_exponent);
bool is_representable(const GridSpec& spec, const Ball& ball);
bool contains(const GridSpec& spec, const Ball& ball, Index a);
GridFunction indicator(const GridSpec& spec, const Ball& ball);

std::complex<double> haar_integral(const GridFunction& f);
/// Integral over Q_p^+ or Q_p^-. The zero coset p^M Z_p is split evenly between the two
/// classes (half its measure lies in each), which makes the result exact for grid functions.
std::complex<double> haar_integral_signed(const GridFunction& f, SignClass sign);
std::complex<double> inner(const GridFunction& f, const GridFunction& g);
double l2_norm(const GridFunction& f);

/// Labels Theta_{r,n,j}(x) = chi_p(p^{-1} j (p^r x - n)) Omega(|p^r x - n|_p).
/// n is a/p^k with 0 <= a < p^k, standing for a class in Q_p / Z_p.
struct ThetaIndex {
  int r = 0;
  Rational n{0, 1};
  std::uint32_t j = 1;

  friend bool operator==(const ThetaIndex&, const ThetaIndex&) = default;
};

/// Support p^{-r} n + p^{-r} Z_p, a ball of radius p^r.
Ball theta_support(const GridSpec& spec, const ThetaIndex& idx);
bool is_representable(const GridSpec& spec, const ThetaIndex& idx);
GridFunction theta(const GridSpec& spec, const ThetaIndex& idx);
/// All representable indices, grouped by r then n then j. There are P - 1 of them.
std::vector<ThetaIndex> enumerate_theta_indices(const GridSpec& spec);

}  // namespace qpdirac
