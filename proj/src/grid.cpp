#include "qpdirac/grid.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <map>
#include <mutex>
#include <numbers>
#include <stdexcept>
#include <string>
#include <tuple>

namespace qpdirac {

namespace detail {

struct GridTables {
  std::vector<int> order;
  std::vector<SignClass> sign;
  std::vector<std::uint32_t> leading;
  RootTable roots;

  GridTables(const PrimeContext& ctx, int N, Index size) : roots(static_cast<std::uint64_t>(size)) {
    const std::uint32_t p = ctx.p();
    order.resize(static_cast<std::size_t>(size));
    sign.resize(static_cast<std::size_t>(size));
    leading.resize(static_cast<std::size_t>(size));
    order[0] = kInfiniteOrder;
    sign[0] = SignClass::zero;
    leading[0] = 0;
    for (Index a = 1; a < size; ++a) {
      std::uint64_t u = static_cast<std::uint64_t>(a);
      int t = 0;
      while (u % p == 0) {
        u /= p;
        ++t;
      }
      const auto i = static_cast<std::size_t>(a);
      order[i] = t - N;
      leading[i] = static_cast<std::uint32_t>(u % p);
      sign[i] = ctx.legendre(leading[i]) > 0 ? SignClass::plus : SignClass::minus;
    }
  }
};

}  // namespace detail

namespace {

int exponent_of_power(std::int64_t den, std::uint32_t p) {
  int k = 0;
  while (den > 1) {
    if (den % p != 0) return -1;
    den /= p;
    ++k;
  }
  return den == 1 ? k : -1;
}

// Grids and their duals are rebuilt constantly by the transforms; share tables per (p, N, M).
std::shared_ptr<const detail::GridTables> shared_tables(const PrimeContext& ctx, int N, int M, Index size) {
  static std::mutex mutex;
  static std::map<std::tuple<std::uint32_t, int, int>, std::weak_ptr<const detail::GridTables>> cache;
  const std::lock_guard lock(mutex);
  auto& slot = cache[{ctx.p(), N, M}];
  auto tables = slot.lock();
  if (!tables) {
    tables = std::make_shared<const detail::GridTables>(ctx, N, size);
    slot = tables;
  }
  // Keep a few recent tables alive so a temporary dual grid does not rebuild them every call.
  static std::deque<std::shared_ptr<const detail::GridTables>> recent;
  if (std::find(recent.begin(), recent.end(), tables) == recent.end()) {
    recent.push_back(tables);
    if (recent.size() > 8) recent.pop_front();
  }
  return tables;
}

}  // namespace

SignClass sign_class(const PAdicScalar& x, const PrimeContext& ctx) {
  if (x.is_zero()) return SignClass::zero;
  return pi_character(x, ctx) > 0 ? SignClass::plus : SignClass::minus;
}

RootTable::RootTable(std::uint64_t modulus) {
  if (modulus == 0) throw std::invalid_argument("RootTable: zero modulus");
  roots_.resize(modulus);
  const long double step = 2.0L * std::numbers::pi_v<long double> / static_cast<long double>(modulus);
  for (std::uint64_t k = 0; k < modulus; ++k) {
    const long double angle = step * static_cast<long double>(k);
    roots_[k] = {static_cast<double>(std::cos(angle)), static_cast<double>(std::sin(angle))};
  }
}

// ---------------------------------------------------------------------------
// GridSpec

GridSpec::GridSpec(PrimeContext ctx, int N, int M) : GridSpec(std::move(ctx), N, M, DualTag{}) {
  if (M < 1) throw std::invalid_argument("GridSpec: M must be >= 1");
}

GridSpec::GridSpec(PrimeContext ctx, int N, int M, DualTag) : ctx_(std::move(ctx)), N_(N), M_(M) {
  if (N < 0 || M < 0) throw std::invalid_argument("GridSpec: N and M must be >= 0");
  if (N + M < 1) throw std::invalid_argument("GridSpec: M must be >= 1");
  const std::int64_t size = ipow(ctx_.p(), N + M);
  if (size > (std::int64_t{1} << 26)) {
    throw std::invalid_argument("GridSpec: p^(N+M) = " + std::to_string(size) + " is too large");
  }
  size_ = static_cast<Index>(size);
  cell_measure_ = std::pow(static_cast<double>(ctx_.p()), -M);
  tables_ = shared_tables(ctx_, N, M, size_);
}

int GridSpec::order_of_index(Index a) const { return tables_->order[static_cast<std::size_t>(a)]; }
SignClass GridSpec::sign_of_index(Index a) const { return tables_->sign[static_cast<std::size_t>(a)]; }
std::uint32_t GridSpec::leading_digit_of_index(Index a) const {
  return tables_->leading[static_cast<std::size_t>(a)];
}
const RootTable& GridSpec::roots() const { return tables_->roots; }

PAdicScalar point_of_index(const GridSpec& spec, Index a) {
  if (a < 0 || a >= spec.size()) throw std::out_of_range("point_of_index: index out of range");
  if (a == 0) return PAdicScalar::zero(spec.p(), spec.digits());
  const int t = ord_of_integer(static_cast<std::uint64_t>(a), spec.p());
  const auto unit = static_cast<std::uint64_t>(a) / static_cast<std::uint64_t>(ipow(spec.p(), t));
  return PAdicScalar::from_unit(t - spec.N(), unit, spec.p(), spec.digits());
}

Index index_of_point(const GridSpec& spec, const PAdicScalar& x) {
  if (x.prime() != spec.p()) throw std::invalid_argument("index_of_point: prime mismatch");
  if (x.is_zero()) return 0;
  const int shift = x.valuation() + spec.N();
  if (shift < 0) throw std::out_of_range("index_of_point: point lies outside B_N");
  if (shift >= spec.digits()) return 0;
  const auto size = static_cast<uint128>(spec.size());
  const auto scaled = static_cast<uint128>(x.unit()) * static_cast<std::uint64_t>(ipow(spec.p(), shift));
  return static_cast<Index>(scaled % size);
}

// ---------------------------------------------------------------------------
// GridFunction

GridFunction::GridFunction(GridSpec spec)
    : spec_(std::move(spec)), values_(Eigen::VectorXcd::Zero(spec_.size())) {}

GridFunction::GridFunction(GridSpec spec, Eigen::VectorXcd values)
    : spec_(std::move(spec)), values_(std::move(values)) {
  if (values_.size() != spec_.size()) {
    throw std::invalid_argument("GridFunction: value count does not match grid size");
  }
}

void require_same_spec(const GridSpec& a, const GridSpec& b, const char* what) {
  if (!(a == b)) throw std::invalid_argument(std::string(what) + ": grid mismatch");
}

GridFunction& GridFunction::operator+=(const GridFunction& other) {
  require_same_spec(spec_, other.spec_, "GridFunction +=");
  values_ += other.values_;
  return *this;
}

GridFunction& GridFunction::operator-=(const GridFunction& other) {
  require_same_spec(spec_, other.spec_, "GridFunction -=");
  values_ -= other.values_;
  return *this;
}

GridFunction& GridFunction::operator*=(Complex s) {
  values_ *= s;
  return *this;
}

// ---------------------------------------------------------------------------
// Balls and integrals

Ball centered_ball(const GridSpec& spec, int radius_exponent) {
  return {PAdicScalar::zero(spec.p(), spec.digits()), radius_exponent};
}

bool is_representable(const GridSpec& spec, const Ball& ball) {
  if (ball.center.prime() != spec.p()) return false;
  if (ball.radius_exponent < -spec.M() || ball.radius_exponent > spec.N()) return false;
  return ball.center.is_zero() || ball.center.valuation() >= -spec.N();
}

bool contains(const GridSpec& spec, const Ball& ball, Index a) {
  const Index c = index_of_point(spec, ball.center);
  const auto step = static_cast<Index>(ipow(spec.p(), spec.N() - ball.radius_exponent));
  const Index diff = ((a - c) % spec.size() + spec.size()) % spec.size();
  return diff % step == 0;
}

GridFunction indicator(const GridSpec& spec, const Ball& ball) {
  if (!is_representable(spec, ball)) throw std::invalid_argument("indicator: ball not representable");
  GridFunction f(spec);
  const Index c = index_of_point(spec, ball.center);
  const auto step = static_cast<Index>(ipow(spec.p(), spec.N() - ball.radius_exponent));
  for (Index a = c % step; a < spec.size(); a += step) f[a] = 1.0;
  return f;
}

std::complex<double> haar_integral(const GridFunction& f) {
  return f.spec().cell_measure() * f.values().sum();
}

std::complex<double> haar_integral_signed(const GridFunction& f, SignClass sign) {
  if (sign == SignClass::zero) return 0.0;
  const GridSpec& spec = f.spec();
  Complex sum = 0.5 * f[0];
  for (Index a = 1; a < spec.size(); ++a) {
    if (spec.sign_of_index(a) == sign) sum += f[a];
  }
  return spec.cell_measure() * sum;
}

std::complex<double> inner(const GridFunction& f, const GridFunction& g) {
  require_same_spec(f.spec(), g.spec(), "inner");
  return f.spec().cell_measure() * f.values().dot(g.values());
}

double l2_norm(const GridFunction& f) {
  return std::sqrt(f.spec().cell_measure() * f.values().squaredNorm());
}

// ---------------------------------------------------------------------------
// Theta family

Ball theta_support(const GridSpec& spec, const ThetaIndex& idx) {
  if (idx.n.num == 0) return centered_ball(spec, idx.r);
  const int k = exponent_of_power(idx.n.den, spec.p());
  if (k < 0) throw std::invalid_argument("theta_support: n must have a p-power denominator");
  return {PAdicScalar::from_unit(-k - idx.r, static_cast<std::uint64_t>(idx.n.num), spec.p(), spec.digits()),
          idx.r};
}

bool is_representable(const GridSpec& spec, const ThetaIndex& idx) {
  if (idx.j < 1 || idx.j >= spec.p()) return false;
  if (idx.r < 1 - spec.M() || idx.r > spec.N()) return false;
  if (idx.n.num < 0 || idx.n.num >= idx.n.den) return false;
  const int k = exponent_of_power(idx.n.den, spec.p());
  if (k < 0) return false;
  if (idx.n.num != 0 && idx.n.num % spec.p() == 0) return false;
  return k + idx.r <= spec.N();
}

GridFunction theta(const GridSpec& spec, const ThetaIndex& idx) {
  if (!is_representable(spec, idx)) throw std::invalid_argument("theta: index not representable on grid");
  const std::uint32_t p = spec.p();
  const Index size = spec.size();
  const int k = exponent_of_power(idx.n.den, p);
  // p^r x_a - n = (a - shift) / p^e with e = N - r.
  const int e = spec.N() - idx.r;
  const auto pe = static_cast<Index>(ipow(p, e));
  const Index shift = static_cast<Index>(idx.n.num) * static_cast<Index>(ipow(p, e - k)) % size;
  const auto root_step = static_cast<std::uint64_t>(size / p);
  const RootTable& roots = spec.roots();

  GridFunction f(spec);
  for (Index s = 0; s < size; s += pe) {
    const Index a = (s + shift) % size;
    const auto z_mod_p = static_cast<std::uint64_t>((s / pe) % p);
    f[a] = roots[(idx.j * z_mod_p % p) * root_step];
  }
  return f;
}

std::vector<ThetaIndex> enumerate_theta_indices(const GridSpec& spec) {
  const std::uint32_t p = spec.p();
  std::vector<ThetaIndex> out;
  out.reserve(static_cast<std::size_t>(spec.size() - 1));
  for (int r = 1 - spec.M(); r <= spec.N(); ++r) {
    const int kmax = spec.N() - r;
    const std::int64_t den = ipow(p, kmax);
    for (std::int64_t c = 0; c < den; ++c) {
      const Rational n = make_rational(c, den);
      for (std::uint32_t j = 1; j < p; ++j) out.push_back({r, n, j});
    }
  }
  return out;
}

}  // namespace qpdirac
