#pragma once

#include <complex>

#include <Eigen/Dense>

#include "qpdirac/fourier.hpp"
#include "qpdirac/grid.hpp"

namespace qpdirac {

enum class DerivativeMode { spectral, kernel };

/// Fourier symbol pi^{-1}(xi) |xi|_p^alpha of the twisted Taibleson-Vladimirov operator.
class TwistedSymbol {
 public:
  TwistedSymbol(double alpha, PrimeContext ctx);

  double alpha() const { return alpha_; }
  const PrimeContext& context() const { return ctx_; }

  /// Zero at xi = 0.
  double operator()(const PAdicScalar& xi) const;
  /// The symbol sampled at every point xi_b of a (dual) grid.
  Eigen::VectorXd sample(const GridSpec& dual_spec) const;

 private:
  double alpha_;
  PrimeContext ctx_;
};

/// Gamma_p(s, pi) = p^s int_{Z_p^x} pi(t) chi_p(p^{-1} t) dt, reduced to a quadratic Gauss sum.
std::complex<double> gamma_p(double s, const PrimeContext& ctx);

/// inverse(symbol * forward(f)). Exact on the mean-zero subspace.
GridFunction apply_spectral(const GridFunction& f, double alpha,
                            TransformMethod method = TransformMethod::fft);

/// Direct evaluation of the singular-integral form
///   (D f)(x) = Gamma_p(-alpha, pi)^{-1} int pi(y) (f(x - y) - f(x)) |y|_p^{-alpha-1} dy
/// at every grid point. Shells with |y| <= p^{-M} vanish by local constancy and shells with
/// |y| > p^N vanish by character orthogonality, so the finite sum is exact. O(P * nnz(f)).
GridFunction apply_kernel(const GridFunction& f, double alpha);

GridFunction apply_twisted(const GridFunction& f, double alpha, DerivativeMode mode);

/// Sign of the Theta_{r,n,j} eigenvalue: pi(-j).
///
/// The transform of Theta_{r,n,j} sits on -p^{r-1} j + p^r Z_p, so the symbol is read there.
/// For p = 1 mod 4 this equals pi(j); for p = 3 mod 4 it is -pi(j).
int theta_eigen_sign(const PrimeContext& ctx, std::uint32_t j);

/// pi(-j) p^{(1-r) alpha}.
double theta_eigenvalue(const PrimeContext& ctx, const ThetaIndex& idx, double alpha);

/// ||D Theta - lambda Theta||_2 / ||Theta||_2 against the exact eigenvalue above.
double eigen_residual(const GridSpec& spec, const ThetaIndex& idx, double alpha, DerivativeMode mode);

/// Same residual against an arbitrary candidate eigenvalue.
double eigen_residual(const GridSpec& spec, const ThetaIndex& idx, double alpha, DerivativeMode mode,
                      double candidate);

}  // namespace qpdirac
