#pragma once

#include <stdexcept>
#include <string>

namespace satfront {

// Stable error taxonomy; the C API maps these 1:1 onto status codes.
enum class ErrorCode {
  Domain = 1,       // argument outside the operation's domain
  Validation,       // reaction/flux data fails a structural hypothesis
  Quadrature,       // a quadrature or tail estimate failed to converge
  Seed,             // no admissible departure rate from an equilibrium
  Step,             // integrator step underflow away from the singular ceiling
  Bracket,          // no sign-changing bracket found below the search cap
  LinearBound,      // |f(s)| <= f'(alpha)|s-alpha| fails and an exact value was requested
  Regime,           // requested object does not exist at these parameters
  Window,           // test-function support exceeds the profile window
  Config,           // malformed configuration input
};

class Error : public std::runtime_error {
public:
  Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

private:
  ErrorCode code_;
};

#define SATFRONT_DEFINE_ERROR(Name, Code)                                 \
  struct Name : Error {                                                   \
    explicit Name(const std::string& w) : Error(ErrorCode::Code, w) {}    \
  }

SATFRONT_DEFINE_ERROR(DomainError, Domain);
SATFRONT_DEFINE_ERROR(ValidationError, Validation);
SATFRONT_DEFINE_ERROR(QuadratureError, Quadrature);
SATFRONT_DEFINE_ERROR(SeedError, Seed);
SATFRONT_DEFINE_ERROR(StepError, Step);
SATFRONT_DEFINE_ERROR(BracketError, Bracket);
SATFRONT_DEFINE_ERROR(LinearBoundError, LinearBound);
SATFRONT_DEFINE_ERROR(RegimeError, Regime);
SATFRONT_DEFINE_ERROR(WindowError, Window);
SATFRONT_DEFINE_ERROR(ConfigError, Config);

#undef SATFRONT_DEFINE_ERROR

}  // namespace satfront
