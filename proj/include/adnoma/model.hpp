#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace adnoma {

/// Phase-2 reception model.
///  - OmaMru:      a slot with two or more forwarders at the sink is lost.
///  - NomaMr:      forwarders pick one of L receive power levels; the sink
///                 decodes everything iff all picked levels are distinct.
///  - IdealPhase2: every forwarded packet is delivered (the L -> inf limit).
enum class Scheme { OmaMru, NomaMr, IdealPhase2 };

std::string_view to_string(Scheme s);
Scheme scheme_from_string(std::string_view s);

/// Raised when a parameter lies outside its domain. `key()` names the
/// offending field so config errors can point at it.
class ParameterError : public std::invalid_argument {
public:
  ParameterError(std::string key, const std::string& what)
      : std::invalid_argument(key + ": " + what), key_(std::move(key)) {}
  const std::string& key() const noexcept { return key_; }

private:
  std::string key_;
};

/// p·q = 0: no packet ever reaches the sink, the average age is infinite.
class UnreachableSinkError : public std::domain_error {
public:
  using std::domain_error::domain_error;
};

/// Exact integer arithmetic would wrap.
class OverflowError : public std::overflow_error {
public:
  using std::overflow_error::overflow_error;
};

struct ModelParams {
  int users = 1;        // N
  int relays = 1;       // K
  int levels = 1;       // L (ignored by OmaMru and IdealPhase2)
  double eps_u = 0.0;   // phase-1 erasure probability
  double eps_r = 0.0;   // phase-2 erasure probability, must be 0 for NomaMr
  double p = 1.0;       // access probability
  int delta = 1;        // age threshold
  Scheme scheme = Scheme::NomaMr;

  /// Throws ParameterError on the first violated invariant.
  void validate() const;
};

}  // namespace adnoma
