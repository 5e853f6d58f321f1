#include "ifspec/rational.hpp"

#include <cstdlib>

namespace ifspec {

const char* errc_name(Errc c) {
  switch (c) {
    case Errc::not_expanding: return "NotExpanding";
    case Errc::rank_deficient: return "RankDeficient";
    case Errc::non_unimodular: return "NonUnimodular";
    case Errc::non_integer_result: return "NonIntegerResult";
    case Errc::singular_system: return "SingularSystem";
    case Errc::budget_exceeded: return "BudgetExceeded";
    case Errc::not_wb_cycle: return "NotWbCycle";
    case Errc::degenerate_weights: return "DegenerateWeights";
    case Errc::not_invariant: return "NotInvariant";
    case Errc::no_fixed_digit: return "NoFixedDigit";
    case Errc::conditions_not_met: return "ConditionsNotMet";
    case Errc::unequal_fibers: return "UnequalFibers";
    case Errc::inconclusive: return "Inconclusive";
    case Errc::parse_error: return "ParseError";
    case Errc::validation_error: return "ValidationError";
    case Errc::internal_error: return "InternalError";
  }
  return "UnknownError";
}

Int rat_floor(const Rat& q) {
  Int n = num(q), d = den(q);
  Int quot = n / d;           // truncates toward zero
  if (n < 0 && quot * d != n) quot -= 1;
  return quot;
}

Int rat_ceil(const Rat& q) { return -rat_floor(-q); }

Rat rat_frac(const Rat& q) { return q - Rat(rat_floor(q)); }

std::string rat_to_string(const Rat& q) {
  if (is_integer(q)) return num(q).str();
  return num(q).str() + "/" + den(q).str();
}

Rat rat_from_string(const std::string& s) {
  auto slash = s.find('/');
  try {
    if (slash == std::string::npos) return Rat(Int(s));
    Int n(s.substr(0, slash));
    Int d(s.substr(slash + 1));
    if (d == 0) fail(Errc::parse_error, "zero denominator in '" + s + "'");
    return Rat(n, d);
  } catch (const std::exception&) {
    fail(Errc::parse_error, "not a rational: '" + s + "'");
  }
}

std::string rat_to_decimal(const Rat& q, int digits) {
  bool neg = q < 0;
  Rat a = neg ? -q : q;
  Int scale = 1;
  for (int i = 0; i < digits; ++i) scale *= 10;
  // round half away from zero
  Int scaled = rat_floor(a * scale + Rat(1, 2));
  Int ip = scaled / scale, fp = scaled % scale;
  std::string frac = fp.str();
  if ((int)frac.size() < digits) frac.insert(frac.begin(), digits - frac.size(), '0');
  std::string out = ip.str();
  if (digits > 0) out += "." + frac;
  return (neg && scaled != 0) ? "-" + out : out;
}

}  // namespace ifspec
