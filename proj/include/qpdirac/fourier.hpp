#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "qpdirac/grid.hpp"

namespace qpdirac {

/// A function of xi_b = p^{-M} b living on spec().dual() of the grid it was transformed from.
/// It is an ordinary GridFunction; the alias only documents which side of the transform it is on.
using DualGridFunction = GridFunction;

struct FftStats {
  std::uint64_t complex_mults = 0;
  std::uint64_t butterflies = 0;
};

enum class TransformMethod { naive, fft };

namespace detail {

template <typename Scalar>
std::complex<Scalar> root_as(const RootTable& roots, std::uint64_t k) {
  const Complex& w = roots[k];
  return {static_cast<Scalar>(w.real()), static_cast<Scalar>(w.imag())};
}

// Plain product; std::complex operator* goes through the Annex G inf/nan path.
template <typename Scalar>
std::complex<Scalar> mul(const std::complex<Scalar>& a, const std::complex<Scalar>& b) {
  return {a.real() * b.real() - a.imag() * b.imag(), a.real() * b.imag() + a.imag() * b.real()};
}

}  // namespace detail

/// Unscaled DFT out[b] = sum_a in[a] * w^(a b), w = exp(2 pi i / P). O(P^2).
template <typename Scalar>
void dft_naive(std::span<const std::complex<Scalar>> in, std::span<std::complex<Scalar>> out,
               const RootTable& roots) {
  const std::uint64_t size = in.size();
  if (out.size() != size || roots.modulus() != size) throw std::invalid_argument("dft_naive: size mismatch");
  for (std::uint64_t b = 0; b < size; ++b) {
    std::complex<Scalar> acc{};
    std::uint64_t k = 0;
    for (std::uint64_t a = 0; a < size; ++a) {
      acc += detail::mul(in[a], detail::root_as<Scalar>(roots, k));
      k += b;
      if (k >= size) k -= size;
    }
    out[b] = acc;
  }
}

/// Same transform by radix-p decimation in time; size must be p^K. O(P K p).
template <typename Scalar>
void dft_radix_p(std::span<const std::complex<Scalar>> in, std::span<std::complex<Scalar>> out,
                 const RootTable& roots, std::uint32_t p, FftStats* stats = nullptr) {
  const std::uint64_t size = in.size();
  if (out.size() != size || roots.modulus() != size) throw std::invalid_argument("dft_radix_p: size mismatch");
  int levels = 0;
  for (std::uint64_t s = size; s > 1; s /= p) {
    if (s % p != 0) throw std::invalid_argument("dft_radix_p: size is not a power of p");
    ++levels;
  }

  // Base-p digit reversal.
  for (std::uint64_t a = 0; a < size; ++a) {
    std::uint64_t rev = 0;
    std::uint64_t v = a;
    for (int d = 0; d < levels; ++d) {
      rev = rev * p + v % p;
      v /= p;
    }
    out[rev] = in[a];
  }

  const std::uint64_t p_step = size / p;
  std::vector<std::complex<Scalar>> small(p);  // w_p^(q t) indexed by (q t mod p)
  for (std::uint32_t i = 0; i < p; ++i) small[i] = detail::root_as<Scalar>(roots, i * p_step);
  std::vector<std::complex<Scalar>> y(p);
  const Complex* twiddle = roots.data();

  std::uint64_t mults = 0;
  std::uint64_t flies = 0;
  for (std::uint64_t span_len = p; span_len <= size; span_len *= p) {
    const std::uint64_t sub = span_len / p;
    const std::uint64_t twiddle_step = size / span_len;
    for (std::uint64_t start = 0; start < size; start += span_len) {
      for (std::uint64_t k = 0; k < sub; ++k) {
        for (std::uint32_t q = 0; q < p; ++q) {
          y[q] = detail::mul(out[start + q * sub + k], std::complex<Scalar>(twiddle[q * k * twiddle_step]));
        }
        for (std::uint32_t t = 0; t < p; ++t) {
          std::complex<Scalar> acc = y[0];
          std::uint32_t idx = 0;
          for (std::uint32_t q = 1; q < p; ++q) {
            idx += t;
            if (idx >= p) idx -= p;
            acc += detail::mul(y[q], small[idx]);
          }
          out[start + k + t * sub] = acc;
        }
        mults += static_cast<std::uint64_t>(p) * p;
        ++flies;
      }
    }
  }
  if (stats) {
    stats->complex_mults += mults;
    stats->butterflies += flies;
  }
}

/// (F f)(xi_b) = p^{-M} sum_a chi_p(xi_b x_a) f(x_a), evaluated directly.
DualGridFunction forward(const GridFunction& f);
/// Same transform through the radix-p FFT.
DualGridFunction forward_fft(const GridFunction& f, FftStats* stats = nullptr);
/// Inverse transform via F(F f)(x) = f(-x): forward on the dual grid, then index negation.
GridFunction inverse(const DualGridFunction& g, TransformMethod method = TransformMethod::fft);
/// f(x) -> f(-x).
GridFunction parity(const GridFunction& f);

}  // namespace qpdirac
