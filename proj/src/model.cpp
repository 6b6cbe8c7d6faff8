#include "adnoma/model.hpp"

#include <cmath>

namespace adnoma {

std::string_view to_string(Scheme s) {
  switch (s) {
    case Scheme::OmaMru: return "oma_mru";
    case Scheme::NomaMr: return "noma_mr";
    case Scheme::IdealPhase2: return "ideal_phase2";
  }
  return "?";
}

Scheme scheme_from_string(std::string_view s) {
  if (s == "oma_mru") return Scheme::OmaMru;
  if (s == "noma_mr") return Scheme::NomaMr;
  if (s == "ideal_phase2") return Scheme::IdealPhase2;
  throw ParameterError("scheme", "unknown scheme '" + std::string(s) +
                                     "' (expected oma_mru, noma_mr or ideal_phase2)");
}

namespace {

void check_probability(const char* key, double v) {
  if (!(v >= 0.0 && v <= 1.0)) throw ParameterError(key, "must lie in [0, 1]");
}

}  // namespace

void ModelParams::validate() const {
  if (users < 1) throw ParameterError("N", "must be >= 1");
  if (relays < 1) throw ParameterError("K", "must be >= 1");
  if (levels < 1) throw ParameterError("L", "must be >= 1");
  check_probability("eps_u", eps_u);
  check_probability("eps_r", eps_r);
  if (!(p > 0.0 && p <= 1.0)) throw ParameterError("p", "must lie in (0, 1]");
  if (delta < 1) throw ParameterError("delta", "must be >= 1");
  if (scheme == Scheme::NomaMr && eps_r != 0.0)
    throw ParameterError("eps_r", "must be 0 for the noma_mr scheme");
}

}  // namespace adnoma
