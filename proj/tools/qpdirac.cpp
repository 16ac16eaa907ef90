// qpdirac: verification runs, bound-state solvers, data export and FFT timing.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <string>

#include <CLI11.hpp>

#include "qpdirac/fourier.hpp"
#include "qpdirac/grid.hpp"
#include "qpdirac/io.hpp"
#include "qpdirac/jackiw_rebbi.hpp"
#include "qpdirac/operators.hpp"

namespace fs = std::filesystem;
using namespace qpdirac;

namespace {

constexpr int kOk = 0;
constexpr int kUsage = 2;
constexpr int kInadmissible = 3;
constexpr int kTolerance = 4;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  std::uint32_t p = 5;
  int N = 2;
  int M = 2;
  double alpha = 1.0;
  std::optional<double> m1;
  std::optional<double> m2;
  double v = 1.0;
  double hbar = 1.0;
  std::optional<int> r_minus;
  std::optional<int> r_plus;
  std::optional<std::uint32_t> j_minus;
  std::optional<std::uint32_t> j_plus;
  int l = 1;
  std::optional<std::uint32_t> s;
  bool snap = false;
  std::string out;
  std::string format = "json";

  // gamma
  double exponent = -1.0;
  // export
  std::string what = "theta";
  int r = 0;
  std::string n = "0";
  std::uint32_t j = 1;
  std::string mode = "spectral";
  // bench-fft
  int kmin = 1;
  int kmax = 6;
  std::uint64_t seed = 1;

  PhysicalParams physics() const {
    PhysicalParams params{v, hbar};
    params.validate();
    return params;
  }
};

void add_grid_flags(CLI::App* cmd, RunConfig& cfg) {
  cmd->add_option("--p", cfg.p, "odd prime")->capture_default_str();
  cmd->add_option("--N", cfg.N, "support exponent, grid is p^-N Z_p / p^M Z_p")->capture_default_str();
  cmd->add_option("--M", cfg.M, "resolution exponent (>= 1)")->capture_default_str();
}

void add_physics_flags(CLI::App* cmd, RunConfig& cfg) {
  cmd->add_option("--m1", cfg.m1, "mass magnitude on the negative class");
  cmd->add_option("--m2", cfg.m2, "mass on the positive class");
  cmd->add_option("--v", cfg.v, "velocity")->capture_default_str();
  cmd->add_option("--hbar", cfg.hbar, "reduced Planck constant")->capture_default_str();
  cmd->add_option("--r-minus", cfg.r_minus, "scale on the negative class (overrides --m1)");
  cmd->add_option("--r-plus", cfg.r_plus, "scale on the positive class (overrides --m2)");
  cmd->add_option("--j-minus", cfg.j_minus, "digit for the negative class");
  cmd->add_option("--j-plus", cfg.j_plus, "digit for the positive class");
  cmd->add_flag("--snap", cfg.snap, "round masses to the nearest admissible value");
}

void add_output_flags(CLI::App* cmd, RunConfig& cfg) {
  cmd->add_option("--out", cfg.out, "output path (stdout if omitted)");
  cmd->add_option("--format", cfg.format, "json or csv")
      ->check(CLI::IsMember({"json", "csv"}))
      ->capture_default_str();
}

GridSpec make_grid(const RunConfig& cfg) {
  try {
    return GridSpec(PrimeContext(cfg.p), cfg.N, cfg.M);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
}

std::string stem_of(const std::string& out) {
  const fs::path path(out);
  return (path.parent_path() / path.stem()).string();
}

std::ofstream open_file(const std::string& path) {
  std::ofstream f(path);
  if (!f) throw UsageError("cannot open " + path + " for writing");
  return f;
}

// Writes through fn to --out, or to stdout.
template <typename Fn>
void emit(const RunConfig& cfg, Fn&& fn) {
  if (cfg.out.empty()) {
    fn(std::cout);
    return;
  }
  std::ofstream f = open_file(cfg.out);
  fn(f);
}

std::uint32_t first_digit_with_sign(const PrimeContext& ctx, int sign) {
  for (std::uint32_t j = 1; j < ctx.p(); ++j) {
    if (theta_eigen_sign(ctx, j) == sign) return j;
  }
  throw std::logic_error("no digit with the requested sign");
}

Rational parse_rational(const std::string& text) {
  const auto slash = text.find('/');
  try {
    if (slash == std::string::npos) return make_rational(std::stoll(text), 1);
    return make_rational(std::stoll(text.substr(0, slash)), std::stoll(text.substr(slash + 1)));
  } catch (const std::logic_error&) {
    throw UsageError("cannot parse --n '" + text + "' (expected a or a/b)");
  }
}

// ---------------------------------------------------------------------------

int cmd_verify_eigen(const RunConfig& cfg) {
  const GridSpec spec = make_grid(cfg);
  if (!(cfg.alpha > 0.0)) throw UsageError("--alpha must be positive");
  const PrimeContext& ctx = spec.context();
  const auto indices = enumerate_theta_indices(spec);

  double worst_spectral = 0.0;
  double worst_kernel = 0.0;
  double worst_literal = 0.0;
  auto table = [&](std::ostream& out) {
    out << "r,n,j,eigenvalue,residual_spectral,residual_kernel\n";
    for (const ThetaIndex& idx : indices) {
      const double lambda = theta_eigenvalue(ctx, idx, cfg.alpha);
      const double rs = eigen_residual(spec, idx, cfg.alpha, DerivativeMode::spectral);
      const double rk = eigen_residual(spec, idx, cfg.alpha, DerivativeMode::kernel);
      const double literal = ctx.legendre(idx.j) * std::pow(static_cast<double>(ctx.p()), (1 - idx.r) * cfg.alpha);
      worst_literal = std::max(worst_literal, eigen_residual(spec, idx, cfg.alpha, DerivativeMode::spectral, literal));
      worst_spectral = std::max(worst_spectral, rs);
      worst_kernel = std::max(worst_kernel, rk);
      out << idx.r << ',' << idx.n.num << '/' << idx.n.den << ',' << idx.j << ',' << format_number(lambda) << ','
          << format_number(rs) << ',' << format_number(rk) << '\n';
    }
  };
  if (cfg.out.empty()) {
    table(std::cout);
  } else {
    std::ofstream f = open_file(cfg.out);
    table(f);
  }
  std::cerr << "indices: " << indices.size() << "\n"
            << "max residual spectral: " << format_number(worst_spectral) << "\n"
            << "max residual kernel:   " << format_number(worst_kernel) << "\n"
            << "max residual with eigenvalue pi(j) p^((1-r) alpha): " << format_number(worst_literal) << "\n";
  return std::max(worst_spectral, worst_kernel) < 1e-9 ? kOk : kTolerance;
}

int cmd_gamma(const RunConfig& cfg) {
  PrimeContext ctx = [&] {
    try {
      return PrimeContext(cfg.p);
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
  }();
  const Complex g = gamma_p(cfg.exponent, ctx);
  const double expected = std::pow(static_cast<double>(cfg.p), cfg.exponent - 0.5);
  emit(cfg, [&](std::ostream& out) {
    JsonWriter w(out);
    w.begin_object();
    w.key("p").value(cfg.p).key("s").value(cfg.exponent);
    w.key("re").value(g.real()).key("im").value(g.imag());
    w.key("abs").value(std::abs(g)).key("expected_abs").value(expected);
    w.end_object();
    out << '\n';
  });
  return std::abs(std::abs(g) - expected) <= 1e-12 * expected ? kOk : kTolerance;
}

struct Scales {
  ZeroModeIndices idx;
  double m1 = 0.0;
  double m2 = 0.0;
};

Scales resolve_scales(const RunConfig& cfg, const GridSpec& spec, const PhysicalParams& params) {
  const PrimeContext& ctx = spec.context();
  Scales out;
  auto pick = [&](const std::optional<int>& r, const std::optional<double>& m, const char* name) {
    if (r) return *r;
    if (!m) throw UsageError(std::string("need --") + name + " or the matching --r-* scale");
    const ScaleChoice choice = admissible_scale(*m, params, ctx, cfg.snap);
    if (choice.snapped) {
      std::cerr << name << " = " << format_number(*m) << " snapped to effective mass "
                << format_number(choice.effective_mass) << " (r = " << choice.r << ")\n";
    }
    return choice.r;
  };
  out.idx.r_minus = pick(cfg.r_minus, cfg.m1, "m1");
  out.idx.r_plus = pick(cfg.r_plus, cfg.m2, "m2");
  out.idx.j_minus = cfg.j_minus.value_or(first_digit_with_sign(ctx, -1));
  out.idx.j_plus = cfg.j_plus.value_or(first_digit_with_sign(ctx, 1));
  for (const int r : {out.idx.r_minus, out.idx.r_plus}) {
    if (r < 1 - spec.M() || r > spec.N()) {
      throw UsageError("scale r = " + std::to_string(r) + " does not fit the grid; need " +
                       std::to_string(1 - spec.M()) + " <= r <= " + std::to_string(spec.N()));
    }
  }
  out.m1 = mass_of_scale(out.idx.r_minus, params, ctx);
  out.m2 = mass_of_scale(out.idx.r_plus, params, ctx);
  return out;
}

int cmd_solve_1d(const RunConfig& cfg) {
  const GridSpec spec = make_grid(cfg);
  const PhysicalParams params = cfg.physics();
  const Scales sc = resolve_scales(cfg, spec, params);

  const MatchingScan scan = scan_matching(sc.m1, sc.m2, params, 1000);
  const double at_zero = matching_residual(0.0, sc.m1, sc.m2, params);

  BoundState state = [&] {
    try {
      return build_zero_mode(spec, sc.idx, params);
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
  }();
  const double norm = spinor_norm(state.field);

  if (cfg.format == "json") {
    emit(cfg, [&](std::ostream& out) { write_json(out, state); });
  } else {
    if (cfg.out.empty()) throw UsageError("--format csv needs --out (two component files are written)");
    std::ofstream up = open_file(stem_of(cfg.out) + "_up.csv");
    write_csv(up, state.field.up);
    std::ofstream down = open_file(stem_of(cfg.out) + "_down.csv");
    write_csv(down, state.field.down);
  }
  if (!cfg.out.empty()) {
    std::ofstream f = open_file(stem_of(cfg.out) + "_scan.csv");
    write_scan_csv(f, scan);
  }

  std::cerr << "r_minus " << sc.idx.r_minus << "  r_plus " << sc.idx.r_plus << "  j_minus " << sc.idx.j_minus
            << "  j_plus " << sc.idx.j_plus << "\n"
            << "m1 " << format_number(sc.m1) << "  m2 " << format_number(sc.m2) << "\n"
            << "E 0  norm " << format_number(norm) << "\n"
            << "matching residual at E=0: " << format_number(at_zero) << "  sign changes in scan: "
            << scan.sign_changes.size() << "\n"
            << "residual per_region_algebra " << format_number(state.residual_report.per_region_algebra)
            << "  global_hamiltonian " << format_number(state.residual_report.global_hamiltonian) << "\n";

  const bool ok = std::abs(norm - 1.0) < 1e-12 && std::abs(at_zero) < 1e-14 &&
                  state.residual_report.per_region_algebra < 1e-12;
  return ok ? kOk : kTolerance;
}

int cmd_solve_2d(const RunConfig& cfg) {
  const GridSpec spec = make_grid(cfg);
  const PhysicalParams params = cfg.physics();
  const Scales sc = resolve_scales(cfg, spec, params);
  const PrimeContext& ctx = spec.context();
  const std::uint32_t s = cfg.s.value_or(1);
  if (s < 1 || s >= cfg.p) throw UsageError("--s must lie in 1..p-1");
  const ThetaIndex y_idx{cfg.l, {0, 1}, s};
  if (!is_representable(spec, y_idx)) throw UsageError("--l does not fit the grid");

  const BoundState2D state = solve_2d(spec, spec, sc.idx, y_idx, params);
  if (cfg.format == "json") {
    emit(cfg, [&](std::ostream& out) { write_json(out, state); });
  } else {
    if (cfg.out.empty()) throw UsageError("--format csv needs --out");
    std::ofstream x = open_file(stem_of(cfg.out) + "_x.csv");
    write_csv(x, state.x_factor);
    std::ofstream y = open_file(stem_of(cfg.out) + "_y.csv");
    write_csv(y, state.y_factor);
  }

  // Dispersion over every representable scale, one digit per eigenvalue sign.
  double worst = state.residual_report.y_part;
  auto dispersion = [&](std::ostream& out) {
    out << "l,s,E,y_residual\n";
    for (int l = 1 - spec.M(); l <= spec.N(); ++l) {
      for (const int sign : {1, -1}) {
        const std::uint32_t digit = first_digit_with_sign(ctx, sign);
        const BoundState2D st = solve_2d(spec, spec, sc.idx, {l, {0, 1}, digit}, params, {DerivativeMode::kernel, false});
        worst = std::max(worst, st.residual_report.y_part);
        out << l << ',' << digit << ',' << format_number(st.E) << ',' << format_number(st.residual_report.y_part)
            << '\n';
      }
    }
  };
  if (cfg.out.empty()) {
    dispersion(std::cerr);
  } else {
    std::ofstream f = open_file(stem_of(cfg.out) + "_dispersion.csv");
    dispersion(f);
  }
  std::cerr << "E " << format_number(state.E) << "  norm " << format_number(spinor_norm(state.field)) << "\n"
            << "residual per_region_algebra " << format_number(state.residual_report.per_region_algebra)
            << "  y_part " << format_number(state.residual_report.y_part) << "  global_hamiltonian "
            << format_number(state.residual_report.global_hamiltonian) << "\n";
  return worst < 1e-10 ? kOk : kTolerance;
}

template <typename Fn>
double time_ms(Fn&& fn) {
  using clock = std::chrono::steady_clock;
  int reps = 0;
  const auto start = clock::now();
  auto now = start;
  do {
    fn();
    ++reps;
    now = clock::now();
  } while (now - start < std::chrono::milliseconds(50) && reps < 1000);
  return std::chrono::duration<double, std::milli>(now - start).count() / reps;
}

int cmd_bench_fft(const RunConfig& cfg) {
  if (cfg.kmin < 1 || cfg.kmax < cfg.kmin) throw UsageError("need 1 <= --kmin <= --kmax");
  PrimeContext ctx = [&] {
    try {
      return PrimeContext(cfg.p);
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
  }();
  std::mt19937_64 rng(cfg.seed);
  std::normal_distribution<double> normal;
  bool agree = true;
  auto table = [&](std::ostream& out) {
    out << "size,naive_ms,fft_ms\n";
    for (int k = cfg.kmin; k <= cfg.kmax; ++k) {
      const GridSpec spec = [&] {
        try {
          return GridSpec(ctx, 0, k);
        } catch (const std::invalid_argument& e) {
          throw UsageError(e.what());
        }
      }();
      GridFunction f(spec);
      for (Index a = 0; a < f.size(); ++a) f[a] = {normal(rng), normal(rng)};
      DualGridFunction naive(spec.dual());
      DualGridFunction fast(spec.dual());
      const double naive_ms = time_ms([&] { naive = forward(f); });
      const double fft_ms = time_ms([&] { fast = forward_fft(f); });
      const double diff = (naive.values() - fast.values()).cwiseAbs().maxCoeff();
      if (!(diff < 1e-10)) {
        agree = false;
        std::cerr << "size " << spec.size() << ": max |naive - fft| = " << format_number(diff) << "\n";
      }
      out << spec.size() << ',' << format_number(naive_ms) << ',' << format_number(fft_ms) << '\n';
    }
  };
  if (cfg.out.empty()) {
    table(std::cout);
  } else {
    std::ofstream f = open_file(cfg.out);
    table(f);
  }
  return agree ? kOk : kTolerance;
}

int cmd_export(const RunConfig& cfg) {
  const GridSpec spec = make_grid(cfg);
  const ThetaIndex idx{cfg.r, parse_rational(cfg.n), cfg.j};
  GridFunction f(spec);
  if (cfg.what == "indicator") {
    const Ball ball = centered_ball(spec, cfg.r);
    if (!is_representable(spec, ball)) throw UsageError("ball radius does not fit the grid");
    f = indicator(spec, ball);
  } else {
    if (cfg.j < 1 || cfg.j >= cfg.p) throw UsageError("--j must lie in 1..p-1");
    if (!is_representable(spec, idx)) throw UsageError("Theta index does not fit the grid");
    f = theta(spec, idx);
    if (cfg.what == "dtheta") {
      if (!(cfg.alpha > 0.0)) throw UsageError("--alpha must be positive");
      f = apply_twisted(f, cfg.alpha, cfg.mode == "kernel" ? DerivativeMode::kernel : DerivativeMode::spectral);
    }
  }
  emit(cfg, [&](std::ostream& out) {
    if (cfg.format == "json") {
      write_json(out, f);
    } else {
      write_csv(out, f);
    }
  });
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"p-adic Dirac toolkit: twisted Vladimirov operator, Jackiw-Rebbi states, FFT"};
  app.require_subcommand(1);
  RunConfig cfg;

  auto* verify = app.add_subcommand("verify-eigen", "check D Theta = lambda Theta for every Theta on the grid");
  add_grid_flags(verify, cfg);
  verify->add_option("--alpha", cfg.alpha, "operator order")->capture_default_str();
  verify->add_option("--out", cfg.out, "CSV table path (stdout if omitted)");

  auto* gamma = app.add_subcommand("gamma", "twisted gamma factor Gamma_p(s, pi)");
  gamma->add_option("--p", cfg.p, "odd prime")->capture_default_str();
  gamma->add_option("--exponent", cfg.exponent, "s")->capture_default_str();
  gamma->add_option("--out", cfg.out, "JSON path (stdout if omitted)");

  auto* solve1 = app.add_subcommand("solve-1d", "zero-energy interface state of the 1D Jackiw-Rebbi model");
  add_grid_flags(solve1, cfg);
  add_physics_flags(solve1, cfg);
  add_output_flags(solve1, cfg);

  auto* solve2 = app.add_subcommand("solve-2d", "edge state Psi(x) Theta_{l,0,s}(y) and its dispersion");
  add_grid_flags(solve2, cfg);
  add_physics_flags(solve2, cfg);
  add_output_flags(solve2, cfg);
  solve2->add_option("--l", cfg.l, "scale of the y factor")->capture_default_str();
  solve2->add_option("--s", cfg.s, "digit of the y factor (default 1)");

  auto* bench = app.add_subcommand("bench-fft", "time naive DFT against the radix-p FFT");
  bench->add_option("--p", cfg.p, "odd prime")->capture_default_str();
  bench->add_option("--kmin", cfg.kmin, "smallest exponent")->capture_default_str();
  bench->add_option("--kmax", cfg.kmax, "largest exponent")->capture_default_str();
  bench->add_option("--seed", cfg.seed, "RNG seed")->capture_default_str();
  bench->add_option("--out", cfg.out, "CSV path (stdout if omitted)");

  auto* exp = app.add_subcommand("export", "write Theta, a ball indicator or D Theta on the grid");
  add_grid_flags(exp, cfg);
  add_output_flags(exp, cfg);
  exp->add_option("--what", cfg.what, "theta, indicator or dtheta")
      ->check(CLI::IsMember({"theta", "indicator", "dtheta"}))
      ->capture_default_str();
  exp->add_option("--r", cfg.r, "scale (ball radius p^r)")->capture_default_str();
  exp->add_option("--n", cfg.n, "center class a or a/p^k")->capture_default_str();
  exp->add_option("--j", cfg.j, "digit 1..p-1")->capture_default_str();
  exp->add_option("--alpha", cfg.alpha, "operator order for dtheta")->capture_default_str();
  exp->add_option("--mode", cfg.mode, "spectral or kernel")
      ->check(CLI::IsMember({"spectral", "kernel"}))
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*verify) return cmd_verify_eigen(cfg);
    if (*gamma) return cmd_gamma(cfg);
    if (*solve1) return cmd_solve_1d(cfg);
    if (*solve2) return cmd_solve_2d(cfg);
    if (*bench) return cmd_bench_fft(cfg);
    if (*exp) return cmd_export(cfg);
  } catch (const InadmissibleMass& e) {
    std::cerr << "inadmissible mass: " << e.what() << " (use --snap to round)\n";
    return kInadmissible;
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}
