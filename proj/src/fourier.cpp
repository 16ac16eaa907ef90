#include "qpdirac/fourier.hpp"

namespace qpdirac {

namespace {

DualGridFunction transform(const GridFunction& f, TransformMethod method, FftStats* stats) {
  const GridSpec& spec = f.spec();
  DualGridFunction out(spec.dual());
  const auto n = static_cast<std::size_t>(spec.size());
  std::span<const Complex> in(f.values().data(), n);
  std::span<Complex> dst(out.values().data(), n);
  if (method == TransformMethod::naive) {
    dft_naive<double>(in, dst, spec.roots());
  } else {
    dft_radix_p<double>(in, dst, spec.roots(), spec.p(), stats);
  }
  out.values() *= spec.cell_measure();
  return out;
}

}  // namespace

DualGridFunction forward(const GridFunction& f) { return transform(f, TransformMethod::naive, nullptr); }

DualGridFunction forward_fft(const GridFunction& f, FftStats* stats) {
  return transform(f, TransformMethod::fft, stats);
}

GridFunction inverse(const DualGridFunction& g, TransformMethod method) {
  return parity(transform(g, method, nullptr));
}

GridFunction parity(const GridFunction& f) {
  GridFunction out(f.spec());
  const Index size = f.size();
  out[0] = f[0];
  for (Index a = 1; a < size; ++a) out[size - a] = f[a];
  return out;
}

}  // namespace qpdirac
