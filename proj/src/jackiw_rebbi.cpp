#include "qpdirac/jackiw_rebbi.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace qpdirac {

namespace {

constexpr Complex kI{0.0, 1.0};

PAdicScalar with_precision(const PAdicScalar& x, int precision) {
  if (x.is_zero()) return PAdicScalar::zero(x.prime(), precision);
  return PAdicScalar::from_unit(x.valuation(), x.unit(), x.prime(), precision);
}

bool in_ball(const PAdicScalar& x, const Ball& ball) {
  const int k = std::min(x.precision(), ball.center.precision());
  const PAdicScalar diff = with_precision(x, k) - with_precision(ball.center, k);
  return diff.is_zero() || diff.valuation() >= -ball.radius_exponent;
}

bool balls_intersect(const Ball& a, const Ball& b) {
  const int k = std::min(a.center.precision(), b.center.precision());
  const PAdicScalar diff = with_precision(a.center, k) - with_precision(b.center, k);
  return diff.is_zero() || diff.valuation() >= -std::max(a.radius_exponent, b.radius_exponent);
}

double pow_p(const PrimeContext& ctx, double e) { return std::pow(static_cast<double>(ctx.p()), e); }

// Relative defect of the 2x2 system [[m v^2 - E, -i hbar v mu], [-i hbar v mu, -m v^2 - E]] s = 0
// and of its determinant condition E^2 - m^2 v^4 + hbar^2 v^2 mu^2 = 0.
double region_defect(double m, double mu, double E, const PhysicalParams& params, const Eigen::Vector2cd& s) {
  const double mv2 = m * params.v * params.v;
  const Complex off = -kI * params.hbar * params.v * mu;
  Eigen::Matrix2cd A;
  A << mv2 - E, off, off, -mv2 - E;
  const double scale = std::abs(mv2) + std::abs(E) + std::abs(off);
  const double spinor = (A * s).norm() / (scale * s.norm());
  const double det = E * E - mv2 * mv2 + std::norm(off);
  const double det_scale = mv2 * mv2 + E * E + std::norm(off);
  return std::max(spinor, std::abs(det) / det_scale);
}

void require_representable_scale(const GridSpec& spec, int r, const char* what) {
  if (r < 1 - spec.M() || r > spec.N()) {
    throw std::invalid_argument(std::string(what) + ": scale r=" + std::to_string(r) + " not representable on grid (need " +
                                std::to_string(1 - spec.M()) + " <= r <= " + std::to_string(spec.N()) + ")");
  }
}

GridFunction column(const GridSpec& spec, const Eigen::MatrixXcd& m, Index b) {
  return GridFunction(spec, m.col(b));
}

GridFunction row(const GridSpec& spec, const Eigen::MatrixXcd& m, Index a) {
  return GridFunction(spec, m.row(a).transpose());
}

Eigen::MatrixXcd derivative_along_x(const SpinorField2D& f, const Eigen::MatrixXcd& m, DerivativeMode mode) {
  Eigen::MatrixXcd out(m.rows(), m.cols());
  for (Index b = 0; b < m.cols(); ++b) out.col(b) = apply_twisted(column(f.spec_x, m, b), 1.0, mode).values();
  return out;
}

Eigen::MatrixXcd derivative_along_y(const SpinorField2D& f, const Eigen::MatrixXcd& m, DerivativeMode mode) {
  Eigen::MatrixXcd out(m.rows(), m.cols());
  for (Index a = 0; a < m.rows(); ++a) out.row(a) = apply_twisted(row(f.spec_y, m, a), 1.0, mode).values().transpose();
  return out;
}

}  // namespace

void PhysicalParams::validate() const {
  if (!(v > 0.0) || !(hbar > 0.0)) throw std::invalid_argument("PhysicalParams: v and hbar must be positive");
}

// ---------------------------------------------------------------------------
// Mass profiles

MassProfile MassProfile::two_value(double m1, double m2) {
  if (!(m1 > 0.0) || !(m2 > 0.0)) throw std::invalid_argument("MassProfile: m1 and m2 must be positive");
  return MassProfile(TwoValue{m1, m2});
}

MassProfile MassProfile::piecewise(std::vector<MassPiece> pieces, const PrimeContext& ctx) {
  for (std::size_t i = 0; i < pieces.size(); ++i) {
    const Ball& ball = pieces[i].ball;
    if (ball.center.prime() != ctx.p()) throw std::invalid_argument("MassProfile: prime mismatch");
    // A ball avoids 0 and sits in one sign class exactly when |center| > radius.
    if (ball.center.is_zero() || ball.center.valuation() >= -ball.radius_exponent) {
      throw std::invalid_argument("MassProfile: piece " + std::to_string(i) + " contains 0");
    }
    const int sign = pi_character(ball.center, ctx);
    if (!(pieces[i].value * sign > 0.0)) {
      throw std::invalid_argument("MassProfile: piece " + std::to_string(i) + " has a value of the wrong sign");
    }
    for (std::size_t k = 0; k < i; ++k) {
      if (balls_intersect(ball, pieces[k].ball)) {
        throw std::invalid_argument("MassProfile: pieces " + std::to_string(k) + " and " + std::to_string(i) +
                                    " overlap");
      }
    }
  }
  return MassProfile(std::move(pieces));
}

double MassProfile::m1() const {
  if (!is_two_value()) throw std::logic_error("MassProfile::m1: not a two-value profile");
  return std::get<TwoValue>(rep_).m1;
}

double MassProfile::m2() const {
  if (!is_two_value()) throw std::logic_error("MassProfile::m2: not a two-value profile");
  return std::get<TwoValue>(rep_).m2;
}

const std::vector<MassPiece>& MassProfile::pieces() const {
  if (is_two_value()) throw std::logic_error("MassProfile::pieces: not a piecewise profile");
  return std::get<std::vector<MassPiece>>(rep_);
}

double MassProfile::at(const PAdicScalar& x, const PrimeContext& ctx) const {
  if (x.is_zero()) throw std::domain_error("mass_at: mass is undefined at x = 0");
  if (const auto* tv = std::get_if<TwoValue>(&rep_)) {
    return pi_character(x, ctx) > 0 ? tv->m2 : -tv->m1;
  }
  for (const MassPiece& piece : std::get<std::vector<MassPiece>>(rep_)) {
    if (in_ball(x, piece.ball)) return piece.value;
  }
  throw std::domain_error("mass_at: point not covered by any piece");
}

Eigen::VectorXd MassProfile::on_grid(const GridSpec& spec) const {
  Eigen::VectorXd m = Eigen::VectorXd::Zero(spec.size());
  if (const auto* tv = std::get_if<TwoValue>(&rep_)) {
    for (Index a = 1; a < spec.size(); ++a) m[a] = spec.sign_of_index(a) == SignClass::plus ? tv->m2 : -tv->m1;
    return m;
  }
  std::vector<bool> covered(static_cast<std::size_t>(spec.size()), false);
  for (const MassPiece& piece : std::get<std::vector<MassPiece>>(rep_)) {
    if (!is_representable(spec, piece.ball)) {
      throw std::invalid_argument("MassProfile::on_grid: a piece is not representable on this grid");
    }
    const GridFunction ind = indicator(spec, piece.ball);
    for (Index a = 0; a < spec.size(); ++a) {
      if (ind[a] != Complex(0.0)) {
        m[a] = piece.value;
        covered[static_cast<std::size_t>(a)] = true;
      }
    }
  }
  for (Index a = 1; a < spec.size(); ++a) {
    if (!covered[static_cast<std::size_t>(a)]) {
      throw std::domain_error("MassProfile::on_grid: grid point " + std::to_string(a) + " is not covered");
    }
  }
  return m;
}

double mass_at(const MassProfile& profile, const PAdicScalar& x, const PrimeContext& ctx) {
  return profile.at(x, ctx);
}

// ---------------------------------------------------------------------------
// Spinors and Pauli matrices

double spinor_norm(const SpinorField& field) {
  const double a = l2_norm(field.up);
  const double b = l2_norm(field.down);
  return std::sqrt(a * a + b * b);
}

const PauliSet& PauliSet::standard() {
  static const PauliSet set = [] {
    PauliSet s;
    s.x << 0.0, 1.0, 1.0, 0.0;
    s.y << 0.0, -kI, kI, 0.0;
    s.z << 1.0, 0.0, 0.0, -1.0;
    return s;
  }();
  return set;
}

double PauliSet::algebra_defect() const {
  const Eigen::Matrix2cd id = Eigen::Matrix2cd::Identity();
  const Eigen::Matrix2cd* s[] = {&x, &y, &z};
  double worst = 0.0;
  for (int a = 0; a < 3; ++a) {
    worst = std::max(worst, ((*s[a]) * (*s[a]) - id).norm());
    for (int b = a + 1; b < 3; ++b) worst = std::max(worst, ((*s[a]) * (*s[b]) + (*s[b]) * (*s[a])).norm());
  }
  worst = std::max(worst, (x * y - kI * z).norm());
  return worst;
}

// ---------------------------------------------------------------------------
// Matching condition and scales

double matching_residual(double E, double m1, double m2, const PhysicalParams& params) {
  params.validate();
  if (!(m1 > 0.0) || !(m2 > 0.0)) throw std::invalid_argument("matching_residual: masses must be positive");
  const double v2 = params.v * params.v;
  const double bound = std::min(m1, m2) * v2;
  if (std::abs(E) > bound) throw std::domain_error("matching_residual: |E| exceeds min(m1, m2) v^2");
  const double left_den = m2 * v2 - E;
  const double right_den = E + m1 * v2;
  if (left_den == 0.0 || right_den == 0.0) throw std::domain_error("matching_residual: E sits on a pole");
  const double left = std::sqrt(m2 * m2 * v2 * v2 - E * E) / left_den;
  const double right = std::sqrt(m1 * m1 * v2 * v2 - E * E) / right_den;
  return left - right;
}

MatchingScan scan_matching(double m1, double m2, const PhysicalParams& params, int samples) {
  if (samples < 2) throw std::invalid_argument("scan_matching: need at least two samples");
  const double bound = std::min(m1, m2) * params.v * params.v;
  MatchingScan scan;
  scan.energies.reserve(static_cast<std::size_t>(samples));
  scan.residuals.reserve(static_cast<std::size_t>(samples));
  const double step = 2.0 * bound / samples;
  for (int k = 0; k < samples; ++k) {
    const double E = -bound + (k + 0.5) * step;
    scan.energies.push_back(E);
    scan.residuals.push_back(matching_residual(E, m1, m2, params));
  }
  for (std::size_t k = 1; k < scan.residuals.size(); ++k) {
    const double a = scan.residuals[k - 1];
    const double b = scan.residuals[k];
    if ((a < 0.0 && b >= 0.0) || (a > 0.0 && b <= 0.0)) scan.sign_changes.emplace_back(scan.energies[k - 1], scan.energies[k]);
  }
  return scan;
}

double mass_of_scale(int r, const PhysicalParams& params, const PrimeContext& ctx) {
  return params.hbar * pow_p(ctx, 1 - r) / params.v;
}

ScaleChoice admissible_scale(double m, const PhysicalParams& params, const PrimeContext& ctx, bool snap) {
  params.validate();
  if (!(m > 0.0)) throw std::invalid_argument("admissible_scale: mass must be positive");
  const double exact = 1.0 - std::log(m * params.v / params.hbar) / std::log(static_cast<double>(ctx.p()));
  const double nearest = std::round(exact);
  const bool off_lattice = std::abs(exact - nearest) > 1e-9;
  if (off_lattice && !snap) {
    throw InadmissibleMass("mass " + std::to_string(m) + " gives m v / hbar = p^" + std::to_string(1.0 - exact) +
                           ", not an integer power of p");
  }
  ScaleChoice choice;
  choice.r = static_cast<int>(nearest);
  choice.effective_mass = mass_of_scale(choice.r, params, ctx);
  choice.snapped = off_lattice;
  return choice;
}

// ---------------------------------------------------------------------------
// 1D states

GridFunction zero_mode_profile(const GridSpec& spec, const ZeroModeIndices& idx) {
  const GridFunction plus = theta(spec, {idx.r_plus, {0, 1}, idx.j_plus});
  const GridFunction minus = theta(spec, {idx.r_minus, {0, 1}, idx.j_minus});
  GridFunction out(spec);
  for (Index a = 1; a < spec.size(); ++a) out[a] = spec.sign_of_index(a) == SignClass::plus ? plus[a] : minus[a];
  // Both branches equal 1 at the origin.
  out[0] = plus[0];
  return out;
}

BoundState build_zero_mode(const GridSpec& spec, const ZeroModeIndices& idx, const PhysicalParams& params,
                           const BuildOptions& options) {
  params.validate();
  const PrimeContext& ctx = spec.context();
  require_representable_scale(spec, idx.r_minus, "build_zero_mode");
  require_representable_scale(spec, idx.r_plus, "build_zero_mode");
  if (idx.j_plus < 1 || idx.j_plus >= ctx.p() || idx.j_minus < 1 || idx.j_minus >= ctx.p()) {
    throw std::invalid_argument("build_zero_mode: digits must lie in 1..p-1");
  }
  if (theta_eigen_sign(ctx, idx.j_plus) != 1) {
    throw std::invalid_argument("build_zero_mode: j_plus must give a positive Theta eigenvalue");
  }
  if (theta_eigen_sign(ctx, idx.j_minus) != -1) {
    throw std::invalid_argument("build_zero_mode: j_minus must give a negative Theta eigenvalue");
  }

  BoundState state(SpinorField{GridFunction(spec), GridFunction(spec)});
  state.E = 0.0;
  state.r_minus = idx.r_minus;
  state.r_plus = idx.r_plus;
  state.j_minus = idx.j_minus;
  state.j_plus = idx.j_plus;
  state.lambda_minus = pow_p(ctx, 1 - idx.r_minus);
  state.lambda_plus = pow_p(ctx, 1 - idx.r_plus);
  state.m1 = mass_of_scale(idx.r_minus, params, ctx);
  state.m2 = mass_of_scale(idx.r_plus, params, ctx);
  // |Theta|^2 over the plus half of B_{r+} plus the minus half of B_{r-}, times two spinor entries.
  state.amplitude = 1.0 / std::sqrt(pow_p(ctx, idx.r_plus) + pow_p(ctx, idx.r_minus));
  state.closed_form_amplitude =
      std::sqrt(ctx.p() * params.hbar / (params.v * (*state.m1 + *state.m2)));

  const GridFunction profile = zero_mode_profile(spec, idx);
  state.field.down = *state.amplitude * profile;
  state.field.up = kI * state.field.down;

  const Eigen::Vector2cd spinor(kI, 1.0);
  state.residual_report.per_region_algebra =
      std::max(region_defect(-*state.m1, -*state.lambda_minus, 0.0, params, spinor),
               region_defect(*state.m2, *state.lambda_plus, 0.0, params, spinor));
  if (options.compute_global_residual) {
    state.residual_report.global_hamiltonian = hamiltonian_residual(
        state.field, 0.0, MassProfile::two_value(*state.m1, *state.m2), params, options.mode);
  }
  return state;
}

std::vector<ZeroModeIndices> default_interface_terms(const PrimeContext& ctx, int r_minus, int r_plus) {
  std::vector<std::uint32_t> positive;
  std::vector<std::uint32_t> negative;
  for (std::uint32_t j = 1; j < ctx.p(); ++j) (theta_eigen_sign(ctx, j) > 0 ? positive : negative).push_back(j);
  std::vector<ZeroModeIndices> terms;
  for (std::size_t k = 0; k < positive.size(); ++k) terms.push_back({r_minus, r_plus, negative[k], positive[k]});
  return terms;
}

SpinorField build_interface_superposition(const GridSpec& spec, const PhysicalParams& params,
                                          const std::vector<ZeroModeIndices>& terms) {
  if (terms.empty()) throw std::invalid_argument("build_interface_superposition: empty term list");
  SpinorField sum{GridFunction(spec), GridFunction(spec)};
  const BuildOptions quiet{DerivativeMode::kernel, false};
  for (const ZeroModeIndices& term : terms) {
    const BoundState s = build_zero_mode(spec, term, params, quiet);
    sum.up += s.field.up;
    sum.down += s.field.down;
  }
  const double norm = spinor_norm(sum);
  if (norm == 0.0) throw std::domain_error("build_interface_superposition: terms cancel");
  sum.up *= 1.0 / norm;
  sum.down *= 1.0 / norm;
  return sum;
}

BoundState build_bulk_state(const GridSpec& spec, const ThetaIndex& idx, const PhysicalParams& params,
                            const MassProfile& profile, int branch, const BuildOptions& options) {
  params.validate();
  if (branch != 1 && branch != -1) throw std::invalid_argument("build_bulk_state: branch must be +1 or -1");
  if (!is_representable(spec, idx)) throw std::invalid_argument("build_bulk_state: index not representable");
  if (idx.n.num == 0) throw std::invalid_argument("build_bulk_state: support ball contains 0");
  const PrimeContext& ctx = spec.context();

  const GridFunction th = theta(spec, idx);
  const Eigen::VectorXd mass = profile.on_grid(spec);
  std::optional<double> m;
  for (Index a = 0; a < spec.size(); ++a) {
    if (th[a] == Complex(0.0)) continue;
    if (!m) m = mass[a];
    if (mass[a] != *m) throw std::invalid_argument("build_bulk_state: mass is not constant on the support ball");
  }

  const double v = params.v;
  const double lambda = pow_p(ctx, 1 - idx.r);
  const double mu = theta_eigen_sign(ctx, idx.j) * lambda;
  const double mv2 = *m * v * v;
  const double kinetic = params.hbar * v * lambda;
  double disc = mv2 * mv2 - kinetic * kinetic;
  if (disc < 0.0) {
    if (disc < -1e-12 * mv2 * mv2) {
      throw std::domain_error("build_bulk_state: m^2 v^4 < hbar^2 v^2 lambda^2, the energy would be imaginary");
    }
    disc = 0.0;
  }
  const double E = branch * std::sqrt(disc);
  const Complex a = kI * params.hbar * v * mu / (mv2 - E);

  BoundState state(SpinorField{a * th, th});
  state.E = E;
  const double norm = spinor_norm(state.field);
  state.field.up *= 1.0 / norm;
  state.field.down *= 1.0 / norm;
  if (*m > 0.0) {
    state.r_plus = idx.r;
    state.j_plus = idx.j;
    state.lambda_plus = lambda;
    state.m2 = *m;
  } else {
    state.r_minus = idx.r;
    state.j_minus = idx.j;
    state.lambda_minus = lambda;
    state.m1 = -*m;
  }
  state.residual_report.per_region_algebra = region_defect(*m, mu, E, params, Eigen::Vector2cd(a, 1.0));
  if (options.compute_global_residual) {
    state.residual_report.global_hamiltonian = hamiltonian_residual(state.field, E, profile, params, options.mode);
  }
  return state;
}

SpinorField apply_hamiltonian_1d(const SpinorField& field, const MassProfile& profile,
                                 const PhysicalParams& params, DerivativeMode mode) {
  params.validate();
  const GridSpec& spec = field.up.spec();
  require_same_spec(spec, field.down.spec(), "apply_hamiltonian_1d");
  const PauliSet& pauli = PauliSet::standard();
  const Eigen::VectorXd mass = profile.on_grid(spec);
  const GridFunction d_up = apply_twisted(field.up, 1.0, mode);
  const GridFunction d_down = apply_twisted(field.down, 1.0, mode);
  const double v2 = params.v * params.v;
  const Complex kinetic = -kI * params.v * params.hbar;

  SpinorField out{GridFunction(spec), GridFunction(spec)};
  for (Index a = 1; a < spec.size(); ++a) {
    const Eigen::Vector2cd psi(field.up[a], field.down[a]);
    const Eigen::Vector2cd dpsi(d_up[a], d_down[a]);
    const Eigen::Vector2cd h = mass[a] * v2 * (pauli.z * psi) + kinetic * (pauli.x * dpsi);
    out.up[a] = h[0];
    out.down[a] = h[1];
  }
  return out;
}

double hamiltonian_residual(const SpinorField& field, double E, const MassProfile& profile,
                            const PhysicalParams& params, DerivativeMode mode) {
  const SpinorField h = apply_hamiltonian_1d(field, profile, params, mode);
  Eigen::VectorXcd ru = h.up.values() - E * field.up.values();
  Eigen::VectorXcd rd = h.down.values() - E * field.down.values();
  ru[0] = 0.0;
  rd[0] = 0.0;
  const double denom = field.up.values().squaredNorm() + field.down.values().squaredNorm();
  return std::sqrt((ru.squaredNorm() + rd.squaredNorm()) / denom);
}

// ---------------------------------------------------------------------------
// 2D

double spinor_norm(const SpinorField2D& field) {
  const double cell = field.spec_x.cell_measure() * field.spec_y.cell_measure();
  return std::sqrt(cell * (field.up.squaredNorm() + field.down.squaredNorm()));
}

double edge_energy(const PrimeContext& ctx, const PhysicalParams& params, int l, std::uint32_t s) {
  const Eigen::Vector2cd spinor(kI, 1.0);
  const double sigma_y_eigen = (spinor.adjoint() * PauliSet::standard().y * spinor)(0, 0).real() / spinor.squaredNorm();
  return params.hbar * params.v * sigma_y_eigen * theta_eigenvalue(ctx, {l, {0, 1}, s}, 1.0);
}

SpinorField2D apply_hamiltonian_2d(const SpinorField2D& field, const MassProfile& profile,
                                   const PhysicalParams& params, DerivativeMode mode) {
  params.validate();
  const PauliSet& pauli = PauliSet::standard();
  const Eigen::VectorXd mass = profile.on_grid(field.spec_x);
  const Eigen::MatrixXcd dx_up = derivative_along_x(field, field.up, mode);
  const Eigen::MatrixXcd dx_down = derivative_along_x(field, field.down, mode);
  const Eigen::MatrixXcd dy_up = derivative_along_y(field, field.up, mode);
  const Eigen::MatrixXcd dy_down = derivative_along_y(field, field.down, mode);
  const double v2 = params.v * params.v;
  const double hv = params.hbar * params.v;

  SpinorField2D out{field.spec_x, field.spec_y, Eigen::MatrixXcd::Zero(field.up.rows(), field.up.cols()),
                    Eigen::MatrixXcd::Zero(field.up.rows(), field.up.cols())};
  for (Index a = 1; a < field.up.rows(); ++a) {
    for (Index b = 0; b < field.up.cols(); ++b) {
      const Eigen::Vector2cd psi(field.up(a, b), field.down(a, b));
      const Eigen::Vector2cd dx(dx_up(a, b), dx_down(a, b));
      const Eigen::Vector2cd dy(dy_up(a, b), dy_down(a, b));
      const Eigen::Vector2cd h = mass[a] * v2 * (pauli.z * psi) - kI * hv * (pauli.x * dx) + hv * (pauli.y * dy);
      out.up(a, b) = h[0];
      out.down(a, b) = h[1];
    }
  }
  return out;
}

BoundState2D solve_2d(const GridSpec& spec_x, const GridSpec& spec_y, const ZeroModeIndices& x_indices,
                      const ThetaIndex& y_index, const PhysicalParams& params, const BuildOptions& options) {
  if (spec_x.p() != spec_y.p()) throw std::invalid_argument("solve_2d: grids use different primes");
  if (!is_representable(spec_y, y_index)) throw std::invalid_argument("solve_2d: Theta_{l,n,s} not representable");
  const BoundState zero = build_zero_mode(spec_x, x_indices, params, {options.mode, false});

  const GridFunction y_theta = theta(spec_y, y_index);
  BoundState2D state(zero.field.down, (1.0 / l2_norm(y_theta)) * y_theta, SpinorField2D{spec_x, spec_y, {}, {}});
  state.x_indices = x_indices;
  state.y_index = y_index;
  state.m1 = *zero.m1;
  state.m2 = *zero.m2;
  state.E = edge_energy(spec_x.context(), params, y_index.r, y_index.j);
  state.field.down = state.x_factor.values() * state.y_factor.values().transpose();
  state.field.up = kI * state.field.down;

  ResidualReport2D& report = state.residual_report;
  report.per_region_algebra = zero.residual_report.per_region_algebra;

  const PauliSet& pauli = PauliSet::standard();
  const double hv = params.hbar * params.v;
  const Eigen::MatrixXcd dy_up = derivative_along_y(state.field, state.field.up, options.mode);
  const Eigen::MatrixXcd dy_down = derivative_along_y(state.field, state.field.down, options.mode);
  double num = 0.0;
  double den = 0.0;
  for (Index a = 0; a < state.field.up.rows(); ++a) {
    for (Index b = 0; b < state.field.up.cols(); ++b) {
      const Eigen::Vector2cd psi(state.field.up(a, b), state.field.down(a, b));
      den += psi.squaredNorm();
      if (a == 0) continue;
      const Eigen::Vector2cd dy(dy_up(a, b), dy_down(a, b));
      num += (hv * (pauli.y * dy) - state.E * psi).squaredNorm();
    }
  }
  report.y_part = std::sqrt(num / den);

  if (options.compute_global_residual) {
    const SpinorField2D h =
        apply_hamiltonian_2d(state.field, MassProfile::two_value(state.m1, state.m2), params, options.mode);
    Eigen::MatrixXcd ru = h.up - state.E * state.field.up;
    Eigen::MatrixXcd rd = h.down - state.E * state.field.down;
    ru.row(0).setZero();
    rd.row(0).setZero();
    report.global_hamiltonian = std::sqrt((ru.squaredNorm() + rd.squaredNorm()) / den);
  }
  return state;
}

}  // namespace qpdirac
