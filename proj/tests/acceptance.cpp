// Acceptance runner: one PASS/FAIL line per criterion.
//
//   acceptance                 run every criterion
//   acceptance --criterion 4   run one
//
// Exit status is 0 iff every selected criterion passed.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "qpdirac/fourier.hpp"
#include "qpdirac/grid.hpp"
#include "qpdirac/jackiw_rebbi.hpp"
#include "qpdirac/operators.hpp"

using namespace qpdirac;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string sci(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", x);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

GridFunction random_function(const GridSpec& spec, std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  GridFunction f(spec);
  for (Index a = 0; a < f.size(); ++a) f[a] = {normal(rng), normal(rng)};
  return f;
}

// 1 -------------------------------------------------------------------------
// D Theta = pi^{-1}(j) p^{(1-r) alpha} Theta for every representable Theta.
Outcome eigenrelation() {
  const auto t0 = std::chrono::steady_clock::now();
  const std::vector<double> alphas{0.5, 1.0, 2.0};
  double worst_stated = 0.0;
  double worst_exact[2] = {0.0, 0.0};  // spectral, kernel
  long checked = 0;
  std::string grids;
  for (const std::uint32_t p : {3u, 5u, 7u}) {
    const PrimeContext ctx(p);
    const int max_digits = p == 7 ? 4 : 5;
    for (int K = 1; K <= max_digits; ++K) {
      for (int N = 0; N < K; ++N) {
        const GridSpec spec(ctx, N, K - N);
        std::vector<Eigen::VectorXcd> symbols;
        for (const double alpha : alphas) {
          symbols.push_back(TwistedSymbol(alpha, ctx).sample(spec.dual()).cast<Complex>());
        }
        for (const ThetaIndex& idx : enumerate_theta_indices(spec)) {
          const GridFunction th = theta(spec, idx);
          const double th_norm = th.values().norm();
          const DualGridFunction F = forward_fft(th);
          for (std::size_t k = 0; k < alphas.size(); ++k) {
            const double magnitude = std::pow(double(p), (1 - idx.r) * alphas[k]);
            const double stated = ctx.legendre(idx.j) * magnitude;
            const double exact = theta_eigenvalue(ctx, idx, alphas[k]);
            DualGridFunction G = F;
            G.values().array() *= symbols[k].array();
            const GridFunction images[2] = {inverse(G, TransformMethod::fft), apply_kernel(th, alphas[k])};
            for (int mode = 0; mode < 2; ++mode) {
              const auto& v = images[mode].values();
              const double e = (v - exact * th.values()).norm() / th_norm;
              worst_stated = std::max(worst_stated, (v - stated * th.values()).norm() / th_norm);
              worst_exact[mode] = std::max(worst_exact[mode], e);
            }
            ++checked;
          }
        }
      }
    }
    grids += " p=" + std::to_string(p) + ":N+M<=" + std::to_string(max_digits);
  }
  const double elapsed = seconds_since(t0);
  Outcome out;
  out.pass = worst_stated < 1e-9 && elapsed < 60.0;
  out.detail = std::to_string(checked) + " (Theta, alpha) pairs," + grids + "; max residual vs pi(j) p^((1-r)a): " +
               sci(worst_stated) + "; vs pi(-j) p^((1-r)a): spectral " + sci(worst_exact[0]) + ", kernel " +
               sci(worst_exact[1]) + "; " + sci(elapsed) + " s";
  return out;
}

// 2 -------------------------------------------------------------------------
Outcome oracle_equivalence() {
  const auto t0 = std::chrono::steady_clock::now();
  struct Config {
    std::uint32_t p;
    int N;
    int M;
  };
  const std::vector<Config> configs{{3, 1, 1}, {3, 2, 2}, {3, 2, 3}, {5, 1, 1},
                                    {5, 2, 2}, {5, 2, 3}, {7, 1, 1}, {7, 2, 2}};
  const std::vector<double> alphas{0.5, 1.0, 2.0};
  std::mt19937_64 rng(2024);
  double worst = 0.0;
  for (const Config& c : configs) {
    const GridSpec spec(PrimeContext(c.p), c.N, c.M);
    for (int trial = 0; trial < 100; ++trial) {
      GridFunction f = random_function(spec, rng);
      f.values().array() -= f.values().mean();
      const double alpha = alphas[static_cast<std::size_t>(trial) % alphas.size()];
      const GridFunction a = apply_spectral(f, alpha);
      const GridFunction b = apply_kernel(f, alpha);
      worst = std::max(worst, (a.values() - b.values()).norm() / f.values().norm());
    }
  }
  const double elapsed = seconds_since(t0);
  return {worst < 1e-9 && elapsed < 120.0, std::to_string(configs.size()) +
                                               " configurations x 100 mean-zero inputs, P <= 3125; max "
                                               "||spectral - kernel|| / ||f||: " +
                                               sci(worst) + "; " + sci(elapsed) + " s"};
}

// 3 -------------------------------------------------------------------------
Outcome fourier_layer() {
  std::mt19937_64 rng(7);
  double worst_roundtrip = 0.0;
  double worst_fft = 0.0;
  double worst_theta = 0.0;
  struct Config {
    std::uint32_t p;
    int N;
    int M;
  };
  for (const Config& c : std::vector<Config>{{3, 3, 3}, {5, 3, 3}, {5, 0, 6}, {7, 2, 2}, {7, 1, 4}}) {
    const GridSpec spec(PrimeContext(c.p), c.N, c.M);
    const GridFunction f = random_function(spec, rng);
    for (const auto method : {TransformMethod::naive, TransformMethod::fft}) {
      const DualGridFunction F = method == TransformMethod::fft ? forward_fft(f) : forward(f);
      const GridFunction back = inverse(F, method);
      worst_roundtrip = std::max(worst_roundtrip, (back.values() - f.values()).norm() / f.values().norm());
    }
    GridFunction g = f;
    g.values() /= g.values().cwiseAbs().maxCoeff();
    worst_fft = std::max(worst_fft, (forward(g).values() - forward_fft(g).values()).cwiseAbs().maxCoeff());
  }
  // F Theta_{r,n,j}(xi) = p^r chi(p^{-r} n xi) Omega(|p^{-r} xi + p^{-1} j|), i.e. the normalized
  // transform p^{r/2} chi(...) Omega(...) scaled by ||Theta|| = p^{r/2}.
  for (const Config& c : std::vector<Config>{{3, 2, 2}, {5, 1, 2}, {7, 1, 1}}) {
    const GridSpec spec(PrimeContext(c.p), c.N, c.M);
    const GridSpec dual = spec.dual();
    const int K = 14;
    for (const ThetaIndex& idx : enumerate_theta_indices(spec)) {
      const DualGridFunction F = forward_fft(theta(spec, idx));
      const PAdicScalar scale = PAdicScalar::from_unit(-idx.r, 1, c.p, K);
      const PAdicScalar n = PAdicScalar::from_rational(idx.n.num, idx.n.den, c.p, K);
      const PAdicScalar shift = PAdicScalar::from_rational(idx.j, c.p, c.p, K);
      for (Index b = 0; b < dual.size(); ++b) {
        const PAdicScalar xi = PAdicScalar::from_rational(b, ipow(c.p, dual.N()), c.p, K);
        const PAdicScalar z = scale * xi + shift;
        Complex expect = 0.0;
        if (z.is_zero() || ord(z) >= 0) expect = std::pow(double(c.p), idx.r) * chi_p(scale * n * xi).value();
        worst_theta = std::max(worst_theta, std::abs(F[b] - expect));
      }
    }
  }
  const bool pass = worst_roundtrip < 1e-12 && worst_fft < 1e-10 && worst_theta < 1e-12;
  return {pass, "inverse(forward) rel err " + sci(worst_roundtrip) + "; |fft - naive| up to P=5^6 " + sci(worst_fft) +
                    "; Theta transform pointwise " + sci(worst_theta)};
}

// 4 -------------------------------------------------------------------------
Outcome gamma_constant() {
  double worst_modulus = 0.0;
  double worst_phase = 0.0;
  for (const std::uint32_t p : {3u, 5u, 7u, 11u, 13u}) {
    const Complex g = gamma_p(-1.0, PrimeContext(p));
    worst_modulus = std::max(worst_modulus, std::abs(std::abs(g) - std::pow(double(p), -1.5)));
    worst_phase = std::max(worst_phase, p % 4 == 1 ? std::abs(g.imag()) : std::abs(g.real()));
  }
  return {worst_modulus < 1e-12 && worst_phase < 1e-12,
          "p in {3,5,7,11,13}: max ||Gamma| - p^-3/2| " + sci(worst_modulus) +
              "; max stray component (im for p=1 mod 4, re for p=3 mod 4) " + sci(worst_phase)};
}

// 5 -------------------------------------------------------------------------
// int_{Q_p^+-} Omega(p^r |x|) dx = p^{-r} / 2; the ball |x| <= p^{-r}.
Outcome haar_formula() {
  double worst = 0.0;
  int count = 0;
  for (const std::uint32_t p : {3u, 5u, 7u, 11u}) {
    const GridSpec spec(PrimeContext(p), 2, 2);
    for (int r = -spec.N(); r <= spec.M(); ++r) {
      const GridFunction ind = indicator(spec, centered_ball(spec, -r));
      const double expect = 0.5 * std::pow(double(p), -r);
      for (const SignClass s : {SignClass::plus, SignClass::minus}) {
        worst = std::max(worst, std::abs(haar_integral_signed(ind, s).real() - expect) / expect);
        ++count;
      }
    }
  }
  return {worst < 1e-14, std::to_string(count) + " signed integrals; max relative error " + sci(worst)};
}

// 6 -------------------------------------------------------------------------
Outcome matching_condition() {
  const PhysicalParams params{1.0, 1.0};
  double worst_zero = 0.0;
  std::size_t extra = 0;
  struct Masses {
    double m1;
    double m2;
    PhysicalParams params;
  };
  const std::vector<Masses> cases{{5.0, 25.0, params}, {1.0, 1.0, params}, {0.2, 3.0, {2.0, 0.7}}, {9.0, 0.04, {0.5, 3.0}}};
  for (const Masses& c : cases) {
    worst_zero = std::max(worst_zero, std::abs(matching_residual(0.0, c.m1, c.m2, c.params)));
    const MatchingScan scan = scan_matching(c.m1, c.m2, c.params, 10000);
    for (const auto& [lo, hi] : scan.sign_changes) {
      if (!(lo < 0.0 && hi > 0.0)) ++extra;
    }
    if (scan.sign_changes.size() != 1) extra += scan.sign_changes.size() == 0 ? 1 : scan.sign_changes.size() - 1;
  }
  return {worst_zero < 1e-14 && extra == 0,
          std::to_string(cases.size()) + " mass pairs; residual at E=0 " + sci(worst_zero) +
              "; sign changes away from E=0 in 10^4-point scans: " + std::to_string(extra)};
}

// 7 -------------------------------------------------------------------------
// ||Psi|| with the closed-form amplitude sqrt(p hbar / (v (m1 + m2))).
Outcome zero_mode_normalization() {
  const PhysicalParams params{1.0, 1.0};
  struct Config {
    std::uint32_t p;
    int N;
    int M;
    int r_minus;
    int r_plus;
  };
  const std::vector<Config> configs{{5, 2, 2, 0, -1}, {5, 2, 2, 1, -1}, {3, 2, 2, 0, 0}, {3, 2, 2, 2, -1}, {7, 1, 2, 1, 0}};
  double worst_closed = 0.0;
  double worst_unit = 0.0;
  double worst_continuity = 0.0;
  std::string per_config;
  for (const Config& c : configs) {
    const GridSpec spec(PrimeContext(c.p), c.N, c.M);
    const auto terms = default_interface_terms(spec.context(), c.r_minus, c.r_plus);
    const BoundState s = build_zero_mode(spec, terms.front(), params, {DerivativeMode::kernel, false});
    const GridFunction profile = zero_mode_profile(spec, terms.front());
    const double c_closed = *s.closed_form_amplitude;
    // [i, 1] c X has norm sqrt(2) c ||X||.
    const double norm_closed = std::sqrt(2.0) * c_closed * l2_norm(profile);
    worst_closed = std::max(worst_closed, std::abs(norm_closed - 1.0));
    worst_unit = std::max(worst_unit, std::abs(spinor_norm(s.field) - 1.0));
    const Complex plus0 = theta(spec, {c.r_plus, {0, 1}, terms.front().j_plus})[0];
    const Complex minus0 = theta(spec, {c.r_minus, {0, 1}, terms.front().j_minus})[0];
    worst_continuity = std::max(worst_continuity, std::abs(plus0 - minus0));
    per_config += " (p=" + std::to_string(c.p) + ",r-=" + std::to_string(c.r_minus) + ",r+=" +
                  std::to_string(c.r_plus) + "):" + sci(norm_closed);
  }
  return {worst_closed < 1e-12 && worst_continuity == 0.0,
          "||Psi|| with closed-form c:" + per_config + "; max | ||Psi|| - 1 | " + sci(worst_closed) +
              "; with c = (p^r+ + p^r-)^-1/2: " + sci(worst_unit) + "; branch jump at 0: " + sci(worst_continuity)};
}

// 8 -------------------------------------------------------------------------
Outcome bulk_states() {
  std::mt19937_64 rng(88);
  auto uniform = [&](double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); };
  double worst = 0.0;
  int count = 0;
  const std::vector<std::tuple<std::uint32_t, int, int>> grids{{3, 2, 2}, {5, 1, 2}, {5, 2, 2}, {7, 1, 1}, {7, 2, 1}};
  for (int trial = 0; trial < 30; ++trial) {
    const auto& [p, N, M] = grids[static_cast<std::size_t>(trial) % grids.size()];
    const GridSpec spec(PrimeContext(p), N, M);
    const auto indices = enumerate_theta_indices(spec);
    ThetaIndex idx;
    do {
      idx = indices[std::uniform_int_distribution<std::size_t>(0, indices.size() - 1)(rng)];
    } while (idx.n.num == 0);
    const PhysicalParams params{uniform(0.5, 2.0), uniform(0.5, 2.0)};
    const double floor = params.hbar * std::pow(double(p), 1 - idx.r) / params.v;
    const MassProfile mass = MassProfile::two_value(floor * uniform(1.0, 3.0), floor * uniform(1.0, 3.0));
    const int branch = trial % 2 ? 1 : -1;
    const BoundState s = build_bulk_state(spec, idx, params, mass, branch, {DerivativeMode::kernel, true});
    worst = std::max(worst, s.residual_report.global_hamiltonian);
    ++count;
  }
  return {count >= 20 && worst < 1e-10,
          std::to_string(count) + " random (ball, j, branch) configurations; max ||H psi - E psi|| / ||psi|| " +
              sci(worst)};
}

// 9 -------------------------------------------------------------------------
// E = hbar v pi^{-1}(s) p^{1-l} on a p = 3, N = M = 2 tensor grid.
Outcome dispersion_2d() {
  const auto t0 = std::chrono::steady_clock::now();
  const GridSpec spec(PrimeContext(3), 2, 2);
  const PhysicalParams params{1.0, 1.0};
  const ZeroModeIndices x = default_interface_terms(spec.context(), 0, 0).front();
  const PauliSet& pauli = PauliSet::standard();
  double worst = 0.0;
  double worst_residual = 0.0;
  int positive = 0;
  int negative = 0;
  for (int l = 0; l <= 2; ++l) {
    for (const std::uint32_t s : {1u, 2u}) {
      const BoundState2D st = solve_2d(spec, spec, x, {l, {0, 1}, s}, params, {DerivativeMode::kernel, false});
      // Rayleigh quotient of hbar v D_y sigma_y on the constructed state.
      Complex num = 0.0;
      double den = 0.0;
      for (Index a = 0; a < st.field.up.rows(); ++a) {
        const GridFunction up(spec, st.field.up.row(a).transpose());
        const GridFunction down(spec, st.field.down.row(a).transpose());
        const GridFunction d_up = apply_kernel(up, 1.0);
        const GridFunction d_down = apply_kernel(down, 1.0);
        for (Index b = 0; b < st.field.up.cols(); ++b) {
          const Eigen::Vector2cd psi(up[b], down[b]);
          const Eigen::Vector2cd h = params.hbar * params.v * (pauli.y * Eigen::Vector2cd(d_up[b], d_down[b]));
          num += psi.dot(h);
          den += psi.squaredNorm();
        }
      }
      const double measured = num.real() / den;
      const double stated = params.hbar * params.v * spec.context().legendre(s) * std::pow(3.0, 1 - l);
      worst = std::max(worst, std::abs(measured - stated) / std::abs(stated));
      worst_residual = std::max(worst_residual, st.residual_report.y_part);
      (measured > 0 ? positive : negative)++;
    }
  }
  const double elapsed = seconds_since(t0);
  return {worst < 1e-12 && worst_residual < 1e-10 && positive == 3 && negative == 3 && elapsed < 60.0,
          "l in {0,1,2}, s in {1,2}: max rel |E - hbar v pi(s) 3^(1-l)| " + sci(worst) + "; y-part residual " +
              sci(worst_residual) + "; signs +" + std::to_string(positive) + "/-" + std::to_string(negative) + "; " +
              sci(elapsed) + " s"};
}

// 10 ------------------------------------------------------------------------
Outcome interface_report(const std::string& cli) {
  if (cli.empty()) return {false, "no --cli path given"};
  const fs::path dir = fs::temp_directory_path() / ("qpdirac_acceptance_" + std::to_string(::getpid()));
  fs::create_directories(dir);
  std::vector<std::string> runs;
  for (int k = 0; k < 2; ++k) {
    const fs::path out = dir / ("run" + std::to_string(k) + ".json");
    const std::string cmd = "\"" + cli + "\" solve-1d --p 5 --N 2 --M 2 --m1 5 --m2 25 --out \"" + out.string() +
                            "\" 2>/dev/null";
    if (std::system(cmd.c_str()) != 0) {
      fs::remove_all(dir);
      return {false, "solve-1d exited non-zero"};
    }
    std::ifstream in(out);
    std::stringstream ss;
    ss << in.rdbuf();
    runs.push_back(ss.str());
  }
  fs::remove_all(dir);
  const nlohmann::json j = nlohmann::json::parse(runs[0]);
  const auto& g = j["residual_report"]["global_hamiltonian"];
  const bool finite = g.is_number() && std::isfinite(g.get<double>());
  const bool same = runs[0] == runs[1];
  return {finite && same, "global_hamiltonian " + (g.is_number() ? sci(g.get<double>()) : std::string("missing")) +
                              "; byte-identical across two runs: " + (same ? "yes" : "no")};
}

// 11 ------------------------------------------------------------------------
Outcome fft_speed() {
  const GridSpec spec(PrimeContext(5), 0, 6);
  std::mt19937_64 rng(11);
  GridFunction f = random_function(spec, rng);
  f.values() /= f.values().cwiseAbs().maxCoeff();
  using clock = std::chrono::steady_clock;
  auto best_of = [](int reps, const std::function<void()>& fn) {
    double best = 1e300;
    for (int i = 0; i < reps; ++i) {
      const auto t0 = clock::now();
      fn();
      best = std::min(best, std::chrono::duration<double>(clock::now() - t0).count());
    }
    return best;
  };
  DualGridFunction naive(spec.dual());
  DualGridFunction fast(spec.dual());
  const double t_naive = best_of(2, [&] { naive = forward(f); });
  const double t_fft = best_of(20, [&] { fast = forward_fft(f); });
  const double diff = (naive.values() - fast.values()).cwiseAbs().maxCoeff();
  const double ratio = t_naive / t_fft;
  return {ratio > 3.0 && diff < 1e-10, "P = 5^6: naive " + sci(t_naive) + " s, fft " + sci(t_fft) + " s, ratio " +
                                           sci(ratio) + "; max |naive - fft| " + sci(diff)};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"acceptance criteria"};
  int only = 0;
  std::string cli;
  app.add_option("--criterion", only, "run a single criterion (1-11)")->check(CLI::Range(0, 11));
  app.add_option("--cli", cli, "path to the qpdirac executable (criterion 10)");
  CLI11_PARSE(app, argc, argv);

  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"eigenrelation", eigenrelation},
      {"oracle equivalence", oracle_equivalence},
      {"Fourier layer", fourier_layer},
      {"Gamma constant", gamma_constant},
      {"Haar formula", haar_formula},
      {"matching condition", matching_condition},
      {"zero-mode normalization", zero_mode_normalization},
      {"bulk states", bulk_states},
      {"2D dispersion", dispersion_2d},
      {"interface residual report", [&] { return interface_report(cli); }},
      {"FFT speed", fft_speed},
  };

  bool all = true;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    if (only != 0 && static_cast<std::size_t>(only) != k + 1) continue;
    Outcome o;
    try {
      o = criteria[k].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    std::cout << "criterion " << k + 1 << " (" << criteria[k].first << "): " << (o.pass ? "PASS" : "FAIL") << "  "
              << o.detail << std::endl;
    all = all && o.pass;
  }
  return all ? 0 : 1;
}
