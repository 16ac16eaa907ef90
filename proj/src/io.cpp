#include "qpdirac/io.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>

namespace qpdirac {

std::string format_number(double x) {
  if (!std::isfinite(x)) return "null";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

namespace {

void write_escaped(std::ostream& out, std::string_view s) {
  out << '"';
  for (const char c : s) {
    switch (c) {
      case '"': out << "\\\""; break;
      case '\\': out << "\\\\"; break;
      case '\n': out << "\\n"; break;
      default: out << c;
    }
  }
  out << '"';
}

}  // namespace

void JsonWriter::separate() {
  if (after_key_) {
    after_key_ = false;
    return;
  }
  if (first_.empty()) return;
  if (!first_.back()) out_ << ',';
  first_.back() = false;
}

JsonWriter& JsonWriter::begin_object() {
  separate();
  out_ << '{';
  first_.push_back(true);
  return *this;
}

JsonWriter& JsonWriter::end_object() {
  first_.pop_back();
  out_ << '}';
  return *this;
}

JsonWriter& JsonWriter::begin_array() {
  separate();
  out_ << '[';
  first_.push_back(true);
  return *this;
}

JsonWriter& JsonWriter::end_array() {
  first_.pop_back();
  out_ << ']';
  return *this;
}

JsonWriter& JsonWriter::key(std::string_view k) {
  separate();
  write_escaped(out_, k);
  out_ << ':';
  after_key_ = true;
  return *this;
}

JsonWriter& JsonWriter::value(double x) {
  separate();
  out_ << format_number(x);
  return *this;
}

JsonWriter& JsonWriter::value(long long x) {
  separate();
  out_ << x;
  return *this;
}

JsonWriter& JsonWriter::value(bool b) {
  separate();
  out_ << (b ? "true" : "false");
  return *this;
}

JsonWriter& JsonWriter::value(std::string_view s) {
  separate();
  write_escaped(out_, s);
  return *this;
}

JsonWriter& JsonWriter::null() {
  separate();
  out_ << "null";
  return *this;
}

std::string digit_string(const GridSpec& spec, Index a) {
  static constexpr char kDigits[] = "0123456789abcdefghijklmnopqrstuvwxyz";
  const std::uint32_t p = spec.p();
  std::string s;
  // Digits of a, least significant first; digit i is the coefficient of p^{i-N}.
  std::vector<char> d;
  auto u = static_cast<std::uint64_t>(a);
  for (int i = 0; i < spec.digits(); ++i) {
    d.push_back(p <= 36 ? kDigits[u % p] : '?');
    u /= p;
  }
  for (int i = spec.digits() - 1; i >= 0; --i) {
    s += d[static_cast<std::size_t>(i)];
    if (i == spec.N() && spec.N() > 0) s += '.';
  }
  return s;
}

double monna_real(const GridSpec& spec, Index a) {
  const double p = spec.p();
  double x = 0.0;
  auto u = static_cast<std::uint64_t>(a);
  for (int i = 0; i < spec.digits(); ++i) {
    const int exponent = i - spec.N();
    x += static_cast<double>(u % spec.p()) * std::pow(p, -exponent - 1);
    u /= spec.p();
  }
  return x;
}

void write_csv(std::ostream& out, const GridFunction& f) {
  const GridSpec& spec = f.spec();
  out << "index,valuation,digit_string,monna_real,re,im\n";
  for (Index a = 0; a < f.size(); ++a) {
    const int ord = spec.order_of_index(a);
    out << a << ',';
    if (ord == kInfiniteOrder) {
      out << "inf";
    } else {
      out << ord;
    }
    out << ',' << digit_string(spec, a) << ',' << format_number(monna_real(spec, a)) << ','
        << format_number(f[a].real()) << ',' << format_number(f[a].imag()) << '\n';
  }
}

void write_envelope(JsonWriter& w, const GridFunction& f) {
  const GridSpec& spec = f.spec();
  w.begin_object().key("p").value(spec.p()).key("N").value(spec.N()).key("M").value(spec.M());
  w.key("values").begin_array();
  for (Index a = 0; a < f.size(); ++a) w.begin_array().value(f[a].real()).value(f[a].imag()).end_array();
  w.end_array().end_object();
}

void write_envelope(JsonWriter& w, const GridSpec& spec_x, const GridSpec& spec_y, const Eigen::MatrixXcd& m) {
  w.begin_object().key("p").value(spec_x.p()).key("N").value(spec_x.N()).key("M").value(spec_x.M());
  w.key("N_y").value(spec_y.N()).key("M_y").value(spec_y.M());
  w.key("values").begin_array();
  for (Index a = 0; a < m.rows(); ++a) {
    for (Index b = 0; b < m.cols(); ++b) w.begin_array().value(m(a, b).real()).value(m(a, b).imag()).end_array();
  }
  w.end_array().end_object();
}

void write_json(std::ostream& out, const GridFunction& f) {
  JsonWriter w(out);
  write_envelope(w, f);
  out << '\n';
}

void write_json(std::ostream& out, const BoundState& state) {
  const GridSpec& spec = state.field.up.spec();
  JsonWriter w(out);
  w.begin_object();
  w.key("p").value(spec.p()).key("N").value(spec.N()).key("M").value(spec.M());
  w.key("E").value(state.E);
  w.key("r_minus").value(state.r_minus).key("r_plus").value(state.r_plus);
  w.key("j_minus").value(state.j_minus).key("j_plus").value(state.j_plus);
  w.key("lambda_minus").value(state.lambda_minus).key("lambda_plus").value(state.lambda_plus);
  w.key("norm").value(spinor_norm(state.field));
  w.key("residual_report").begin_object();
  w.key("per_region_algebra").value(state.residual_report.per_region_algebra);
  w.key("global_hamiltonian").value(state.residual_report.global_hamiltonian);
  w.end_object();
  w.key("field").begin_object();
  w.key("up");
  write_envelope(w, state.field.up);
  w.key("down");
  write_envelope(w, state.field.down);
  w.end_object();
  w.end_object();
  out << '\n';
}

void write_json(std::ostream& out, const BoundState2D& state) {
  const SpinorField2D& f = state.field;
  JsonWriter w(out);
  w.begin_object();
  w.key("p").value(f.spec_x.p()).key("N").value(f.spec_x.N()).key("M").value(f.spec_x.M());
  w.key("E").value(state.E);
  w.key("r_minus").value(state.x_indices.r_minus).key("r_plus").value(state.x_indices.r_plus);
  w.key("j_minus").value(state.x_indices.j_minus).key("j_plus").value(state.x_indices.j_plus);
  const double p = f.spec_x.p();
  w.key("lambda_minus").value(std::pow(p, 1 - state.x_indices.r_minus));
  w.key("lambda_plus").value(std::pow(p, 1 - state.x_indices.r_plus));
  w.key("l").value(state.y_index.r).key("s").value(state.y_index.j);
  w.key("norm").value(spinor_norm(f));
  w.key("residual_report").begin_object();
  w.key("per_region_algebra").value(state.residual_report.per_region_algebra);
  w.key("y_part").value(state.residual_report.y_part);
  w.key("global_hamiltonian").value(state.residual_report.global_hamiltonian);
  w.end_object();
  w.key("field").begin_object();
  w.key("up");
  write_envelope(w, f.spec_x, f.spec_y, f.up);
  w.key("down");
  write_envelope(w, f.spec_x, f.spec_y, f.down);
  w.key("x_factor");
  write_envelope(w, state.x_factor);
  w.key("y_factor");
  write_envelope(w, state.y_factor);
  w.end_object();
  w.end_object();
  out << '\n';
}

void write_scan_csv(std::ostream& out, const MatchingScan& scan) {
  out << "E,residual\n";
  for (std::size_t k = 0; k < scan.energies.size(); ++k) {
    out << format_number(scan.energies[k]) << ',' << format_number(scan.residuals[k]) << '\n';
  }
}

}  // namespace qpdirac
