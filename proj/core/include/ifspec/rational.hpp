#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <stdexcept>
#include <string>

namespace ifspec {

using Int = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

enum class Errc {
  not_expanding,
  rank_deficient,
  non_unimodular,
  non_integer_result,
  singular_system,
  budget_exceeded,
  not_wb_cycle,
  degenerate_weights,
  not_invariant,
  no_fixed_digit,
  conditions_not_met,
  unequal_fibers,
  inconclusive,
  parse_error,
  validation_error,
  internal_error,
};

const char* errc_name(Errc c);

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}
  Errc code() const { return code_; }

 private:
  Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& what) { throw Error(code, what); }

inline double to_double(const Rat& q) { return q.convert_to<double>(); }
inline double to_double(const Int& n) { return n.convert_to<double>(); }

inline Int num(const Rat& q) { return boost::multiprecision::numerator(q); }
inline Int den(const Rat& q) { return boost::multiprecision::denominator(q); }

inline bool is_integer(const Rat& q) { return den(q) == 1; }

// floor/ceil of a rational as exact integers
Int rat_floor(const Rat& q);
Int rat_ceil(const Rat& q);

// q mod 1, result in [0,1)
Rat rat_frac(const Rat& q);

// "p/q" (or "p" when the denominator is 1); parse accepts both forms
std::string rat_to_string(const Rat& q);
Rat rat_from_string(const std::string& s);

// fixed-point decimal rendering with `digits` fractional digits, round-half-away
std::string rat_to_decimal(const Rat& q, int digits);

}  // namespace ifspec
