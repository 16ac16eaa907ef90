#include "qpdirac/operators.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "qpdirac/parallel.hpp"

namespace qpdirac {

TwistedSymbol::TwistedSymbol(double alpha, PrimeContext ctx) : alpha_(alpha), ctx_(std::move(ctx)) {
  if (!(alpha > 0.0)) throw std::invalid_argument("TwistedSymbol: alpha must be positive");
}

double TwistedSymbol::operator()(const PAdicScalar& xi) const {
  if (xi.is_zero()) return 0.0;
  const double p = ctx_.p();
  return pi_character(xi, ctx_) * std::pow(p, -alpha_ * xi.valuation());
}

Eigen::VectorXd TwistedSymbol::sample(const GridSpec& dual_spec) const {
  if (dual_spec.p() != ctx_.p()) throw std::invalid_argument("TwistedSymbol::sample: prime mismatch");
  const double p = ctx_.p();
  Eigen::VectorXd m(dual_spec.size());
  m[0] = 0.0;
  for (Index b = 1; b < dual_spec.size(); ++b) {
    const int sign = ctx_.legendre(dual_spec.leading_digit_of_index(b));
    m[b] = sign * std::pow(p, -alpha_ * dual_spec.order_of_index(b));
  }
  return m;
}

std::complex<double> gamma_p(double s, const PrimeContext& ctx) {
  const std::uint32_t p = ctx.p();
  const RootTable roots(p);
  Complex gauss = 0.0;
  for (std::uint32_t j = 1; j < p; ++j) gauss += static_cast<double>(ctx.legendre(j)) * roots[j];
  // pi and chi_p(p^{-1} t) are constant on each coset j + pZ_p, which has measure 1/p.
  return std::pow(static_cast<double>(p), s) * gauss / static_cast<double>(p);
}

GridFunction apply_spectral(const GridFunction& f, double alpha, TransformMethod method) {
  const TwistedSymbol symbol(alpha, f.spec().context());
  DualGridFunction g = method == TransformMethod::fft ? forward_fft(f) : forward(f);
  g.values().array() *= symbol.sample(g.spec()).array().cast<Complex>();
  return inverse(g, method);
}

GridFunction apply_kernel(const GridFunction& f, double alpha) {
  if (!(alpha > 0.0)) throw std::invalid_argument("apply_kernel: alpha must be positive");
  const GridSpec& spec = f.spec();
  const Index size = spec.size();
  const double p = spec.p();
  const Complex norm = spec.cell_measure() / gamma_p(-alpha, spec.context());

  // Weight of the cell around y_b: pi(y_b) |y_b|^{-alpha-1} p^{-M} / Gamma_p(-alpha, pi).
  std::vector<Complex> weight(static_cast<std::size_t>(size), 0.0);
  Complex total = 0.0;
  for (Index b = 1; b < size; ++b) {
    const int sign = spec.context().legendre(spec.leading_digit_of_index(b));
    const double magnitude = std::pow(p, (alpha + 1.0) * spec.order_of_index(b));
    weight[static_cast<std::size_t>(b)] = static_cast<double>(sign) * magnitude * norm;
    total += weight[static_cast<std::size_t>(b)];
  }

  std::vector<Index> support;
  for (Index c = 0; c < size; ++c) {
    if (f[c] != Complex(0.0)) support.push_back(c);
  }

  // sum_b w_b (f(a - b) - f(a)) = sum_{c in supp f} w_{a - c} f(c) - f(a) sum_b w_b
  GridFunction out(spec);
  const Complex* values = f.values().data();
  const Complex* w = weight.data();
  parallel_for(size, [&](Index lo, Index hi) {
    for (Index a = lo; a < hi; ++a) {
      Complex acc = 0.0;
      for (const Index c : support) {
        Index d = a - c;
        if (d < 0) d += size;
        acc += w[d] * values[c];
      }
      out[a] = acc - values[a] * total;
    }
  });
  return out;
}

GridFunction apply_twisted(const GridFunction& f, double alpha, DerivativeMode mode) {
  return mode == DerivativeMode::kernel ? apply_kernel(f, alpha) : apply_spectral(f, alpha);
}

int theta_eigen_sign(const PrimeContext& ctx, std::uint32_t j) {
  return ctx.legendre(-static_cast<std::int64_t>(j));
}

double theta_eigenvalue(const PrimeContext& ctx, const ThetaIndex& idx, double alpha) {
  return theta_eigen_sign(ctx, idx.j) * std::pow(static_cast<double>(ctx.p()), (1 - idx.r) * alpha);
}

double eigen_residual(const GridSpec& spec, const ThetaIndex& idx, double alpha, DerivativeMode mode,
                      double candidate) {
  const GridFunction th = theta(spec, idx);
  const GridFunction image = apply_twisted(th, alpha, mode);
  return std::sqrt((image.values() - candidate * th.values()).squaredNorm() / th.values().squaredNorm());
}

double eigen_residual(const GridSpec& spec, const ThetaIndex& idx, double alpha, DerivativeMode mode) {
  return eigen_residual(spec, idx, alpha, mode, theta_eigenvalue(spec.context(), idx, alpha));
}

}  // namespace qpdirac
