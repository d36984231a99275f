#pragma once

#include <stdexcept>
#include <string>

namespace carroll {

// Base class for everything this library throws.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ParameterError : Error { using Error::Error; };   // argument outside its contract
struct LiquescenceError : Error { using Error::Error; }; // sigma <= 0 (state left the fluid phase)
struct DegeneracyError : Error { using Error::Error; };  // beta == +-sigma^theta, speeds undefined
struct InversionError : Error { using Error::Error; };   // w1 <= w2, no positive sigma exists
struct DataError : Error { using Error::Error; };        // malformed samples or non-finite input
struct GateError : Error { using Error::Error; };        // initial data rejected by the admissibility gate
struct RegionError : Error { using Error::Error; };      // invariant region left at runtime
struct HorizonError : Error { using Error::Error; };     // query at or beyond the blow-up time
struct BracketError : Error { using Error::Error; };     // root bracketing lost
struct IterationError : Error { using Error::Error; };   // fixed-point sweep failed to converge
struct CflError : Error { using Error::Error; };         // time step too large for the grid
struct ConfigError : Error { using Error::Error; };      // unusable run configuration

// Raised when an evaluation runs into a gradient catastrophe; carries the
// catastrophe time so callers can report or re-plan around it.
class BlowupError : public Error {
 public:
  BlowupError(const std::string& what, double t_star)
      : Error(what), t_star_(t_star) {}
  double t_star() const noexcept { return t_star_; }

 private:
  double t_star_;
};

}  // namespace carroll
