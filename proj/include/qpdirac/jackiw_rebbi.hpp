#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "qpdirac/grid.hpp"
#include "qpdirac/operators.hpp"

namespace qpdirac {

struct PhysicalParams {
  double v = 1.0;
  double hbar = 1.0;

  void validate() const;
};

/// Raised when m v / hbar is not an integer power of p and snapping was not requested.
class InadmissibleMass : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

struct MassPiece {
  Ball ball;
  double value = 0.0;
};

/// Locally constant mass m(x) on Q_p^x: either -m1 on Q_p^- and +m2 on Q_p^+, or a list of
/// disjoint balls, each inside one sign class and carrying a value of that sign.
class MassProfile {
 public:
  static MassProfile two_value(double m1, double m2);
  static MassProfile piecewise(std::vector<MassPiece> pieces, const PrimeContext& ctx);

  bool is_two_value() const { return std::holds_alternative<TwoValue>(rep_); }
  double m1() const;
  double m2() const;
  const std::vector<MassPiece>& pieces() const;

  /// Throws std::domain_error at x = 0 or where no piece covers x.
  double at(const PAdicScalar& x, const PrimeContext& ctx) const;
  /// Values at every grid point, 0 at the origin. Throws if a nonzero point is uncovered.
  Eigen::VectorXd on_grid(const GridSpec& spec) const;

 private:
  struct TwoValue {
    double m1;
    double m2;
  };
  explicit MassProfile(std::variant<TwoValue, std::vector<MassPiece>> rep) : rep_(std::move(rep)) {}
  std::variant<TwoValue, std::vector<MassPiece>> rep_;
};

double mass_at(const MassProfile& profile, const PAdicScalar& x, const PrimeContext& ctx);

struct SpinorField {
  GridFunction up;
  GridFunction down;
};

double spinor_norm(const SpinorField& field);

struct PauliSet {
  Eigen::Matrix2cd x;
  Eigen::Matrix2cd y;
  Eigen::Matrix2cd z;

  static const PauliSet& standard();
  /// max deviation from sigma_i^2 = I, {sigma_i, sigma_j} = 0 and sigma_x sigma_y = i sigma_z.
  double algebra_defect() const;
};

struct ResidualReport {
  /// Worst relative violation of the per-region 2x2 systems and their determinant conditions.
  double per_region_algebra = 0.0;
  /// ||H psi - E psi|| / ||psi|| over the nonzero grid points.
  double global_hamiltonian = 0.0;
};

struct ZeroModeIndices {
  int r_minus = 0;
  int r_plus = 0;
  std::uint32_t j_minus = 0;
  std::uint32_t j_plus = 0;
};

struct BoundState {
  explicit BoundState(SpinorField f) : field(std::move(f)) {}

  double E = 0.0;
  std::optional<int> r_minus;
  std::optional<int> r_plus;
  std::optional<std::uint32_t> j_minus;
  std::optional<std::uint32_t> j_plus;
  std::optional<double> lambda_minus;
  std::optional<double> lambda_plus;
  /// Effective masses implied by the scales (m = hbar lambda / v), or the bulk mass magnitude.
  std::optional<double> m1;
  std::optional<double> m2;
  /// Amplitude of the [i, 1] spinor that gives unit norm (zero modes only).
  std::optional<double> amplitude;
  /// sqrt(p hbar / (v (m1 + m2))), the closed-form amplitude quoted for the interface state.
  std::optional<double> closed_form_amplitude;
  SpinorField field;
  ResidualReport residual_report;
};

double matching_residual(double E, double m1, double m2, const PhysicalParams& params);

struct MatchingScan {
  std::vector<double> energies;
  std::vector<double> residuals;
  /// [E_k, E_{k+1}] intervals across which the residual changes sign.
  std::vector<std::pair<double, double>> sign_changes;
};

/// Samples matching_residual at `samples` midpoints of the open bracket (-min v^2, min v^2).
MatchingScan scan_matching(double m1, double m2, const PhysicalParams& params, int samples);

struct ScaleChoice {
  int r = 0;
  double effective_mass = 0.0;
  bool snapped = false;
};

/// r with p^{1-r} = m v / hbar.
ScaleChoice admissible_scale(double m, const PhysicalParams& params, const PrimeContext& ctx, bool snap);

/// Mass hbar p^{1-r} / v carried by scale r.
double mass_of_scale(int r, const PhysicalParams& params, const PrimeContext& ctx);

struct BuildOptions {
  DerivativeMode mode = DerivativeMode::kernel;
  bool compute_global_residual = true;
};

/// E = 0 interface state: c [i, 1]^T Theta_{r+,0,j+} on Q_p^+ and c [i, 1]^T Theta_{r-,0,j-} on
/// Q_p^-, with m1, m2 fixed by the scales. c is chosen for unit norm.
BoundState build_zero_mode(const GridSpec& spec, const ZeroModeIndices& idx, const PhysicalParams& params,
                           const BuildOptions& options = {});

/// The unnormalized piecewise profile Theta_{r+,0,j+} on Q_p^+, Theta_{r-,0,j-} on Q_p^-, 1 at 0.
GridFunction zero_mode_profile(const GridSpec& spec, const ZeroModeIndices& idx);

/// (p-1)/2 index sets pairing the k-th digit with positive eigenvalue sign with the k-th digit
/// with negative eigenvalue sign, at fixed scales.
std::vector<ZeroModeIndices> default_interface_terms(const PrimeContext& ctx, int r_minus, int r_plus);

SpinorField build_interface_superposition(const GridSpec& spec, const PhysicalParams& params,
                                          const std::vector<ZeroModeIndices>& terms);

/// [a, 1]^T Theta_{r,n,j} on a ball avoiding 0 where the mass is a constant m, with
/// E = branch * sqrt(m^2 v^4 - hbar^2 v^2 lambda^2) and a = i hbar v mu / (m v^2 - E),
/// mu = pi(-j) lambda the Theta eigenvalue.
BoundState build_bulk_state(const GridSpec& spec, const ThetaIndex& idx, const PhysicalParams& params,
                            const MassProfile& profile, int branch, const BuildOptions& options = {});

SpinorField apply_hamiltonian_1d(const SpinorField& field, const MassProfile& profile,
                                 const PhysicalParams& params, DerivativeMode mode);

double hamiltonian_residual(const SpinorField& field, double E, const MassProfile& profile,
                            const PhysicalParams& params, DerivativeMode mode);

// ---------------------------------------------------------------------------
// 2D

/// Components indexed (x, y): row a is x_a on spec_x, column b is y_b on spec_y.
struct SpinorField2D {
  GridSpec spec_x;
  GridSpec spec_y;
  Eigen::MatrixXcd up;
  Eigen::MatrixXcd down;
};

double spinor_norm(const SpinorField2D& field);

struct ResidualReport2D {
  double per_region_algebra = 0.0;
  /// ||hbar v D_y sigma_y psi - E psi|| / ||psi|| over rows with x != 0.
  double y_part = 0.0;
  double global_hamiltonian = 0.0;
};

struct BoundState2D {
  BoundState2D(GridFunction x, GridFunction y, SpinorField2D f)
      : x_factor(std::move(x)), y_factor(std::move(y)), field(std::move(f)) {}

  double E = 0.0;
  ZeroModeIndices x_indices;
  ThetaIndex y_index;
  double m1 = 0.0;
  double m2 = 0.0;
  /// c X(x) with the x spinor c [i, 1]^T X(x) of unit norm.
  GridFunction x_factor;
  /// Theta_{l,n,s}(y) / ||Theta_{l,n,s}||.
  GridFunction y_factor;
  SpinorField2D field;
  ResidualReport2D residual_report;
};

/// Psi(x) Theta_{l,n,s}(y) for the 2D Hamiltonian m(x) v^2 sigma_z - i hbar v D_x sigma_x +
/// hbar v D_y sigma_y.
BoundState2D solve_2d(const GridSpec& spec_x, const GridSpec& spec_y, const ZeroModeIndices& x_indices,
                      const ThetaIndex& y_index, const PhysicalParams& params, const BuildOptions& options = {});

/// Energy of the 2D edge state: hbar v * (sigma_y eigenvalue of [i,1]) * pi(-s) p^{1-l}.
double edge_energy(const PrimeContext& ctx, const PhysicalParams& params, int l, std::uint32_t s);

SpinorField2D apply_hamiltonian_2d(const SpinorField2D& field, const MassProfile& profile,
                                   const PhysicalParams& params, DerivativeMode mode);

}  // namespace qpdirac
