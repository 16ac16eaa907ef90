#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qpdirac/grid.hpp"
#include "qpdirac/jackiw_rebbi.hpp"

namespace qpdirac {

/// Shortest round-trip-safe form: printf "%.17g". Non-finite values become null.
std::string format_number(double x);

/// Minimal streaming JSON writer. Keys come out in the order they are written, so the output is
/// byte-stable for a given sequence of calls.
class JsonWriter {
 public:
  explicit JsonWriter(std::ostream& out) : out_(out) {}

  JsonWriter& begin_object();
  JsonWriter& end_object();
  JsonWriter& begin_array();
  JsonWriter& end_array();
  JsonWriter& key(std::string_view k);
  JsonWriter& value(double x);
  JsonWriter& value(long long x);
  JsonWriter& value(int x) { return value(static_cast<long long>(x)); }
  JsonWriter& value(std::uint32_t x) { return value(static_cast<long long>(x)); }
  JsonWriter& value(bool b);
  JsonWriter& value(std::string_view s);
  JsonWriter& value(const char* s) { return value(std::string_view(s)); }
  JsonWriter& null();
  template <typename T>
  JsonWriter& value(const std::optional<T>& x) {
    return x ? value(*x) : null();
  }

 private:
  void separate();
  std::ostream& out_;
  std::vector<bool> first_;
  bool after_key_ = false;
};

/// Base-p digits of x_a, most significant first, with a radix point before the p^{-1} digit.
/// Digits above 9 use letters.
std::string digit_string(const GridSpec& spec, Index a);

/// Monna coordinate sum c_i p^{-i-1} of x_a = sum c_i p^i. A plotting aid only: it places the
/// grid on the real line but carries no metric meaning.
double monna_real(const GridSpec& spec, Index a);

void write_csv(std::ostream& out, const GridFunction& f);
void write_json(std::ostream& out, const GridFunction& f);
void write_envelope(JsonWriter& w, const GridFunction& f);

/// Tensor-grid field flattened row-major (x outer, y inner); carries N_y, M_y as well.
void write_envelope(JsonWriter& w, const GridSpec& spec_x, const GridSpec& spec_y, const Eigen::MatrixXcd& m);

void write_json(std::ostream& out, const BoundState& state);
void write_json(std::ostream& out, const BoundState2D& state);

/// E, residual columns of a matching scan.
void write_scan_csv(std::ostream& out, const MatchingScan& scan);

}  // namespace qpdirac
