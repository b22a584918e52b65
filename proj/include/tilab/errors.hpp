#pragma once

#include <stdexcept>
#include <string>

namespace tilab {

// Error taxonomy. Everything derives from Error so callers can catch the
// whole family, and the CLI can map an exception to a machine-readable
// error record with a stable name.
class Error : public std::runtime_error {
  public:
    Error(std::string name, const std::string& what)
        : std::runtime_error(what), name_(std::move(name)) {}
    const std::string& name() const { return name_; }

  private:
    std::string name_;
};

// Data carries x-mean on a nonzero transverse mode, i.e. it sits outside
// the discrete analogue of the anti-derivative space.
struct ZeroModeViolation : Error {
    explicit ZeroModeViolation(const std::string& what) : Error("ZeroModeViolation", what) {}
};

// Parameter outside the admissible range of a closed-form branch.
struct DomainError : Error {
    explicit DomainError(const std::string& what) : Error("DomainError", what) {}
};

// Requested transverse integer mode is not on the instability branch.
struct NoSuchMode : Error {
    explicit NoSuchMode(const std::string& what) : Error("NoSuchMode", what) {}
};

// No unstable transverse mode exists for the given period parameter.
struct NoUnstableMode : Error {
    explicit NoUnstableMode(const std::string& what) : Error("NoUnstableMode", what) {}
};

// Discrete eigensolve returned more unstable pairs than theory allows.
struct DegenerateSpectrum : Error {
    explicit DegenerateSpectrum(const std::string& what) : Error("DegenerateSpectrum", what) {}
};

// Resolvent system is numerically singular.
struct SingularSystem : Error {
    explicit SingularSystem(const std::string& what) : Error("SingularSystem", what) {}
};

// Time step too large for the explicit part of the scheme.
struct CFLViolation : Error {
    explicit CFLViolation(const std::string& what) : Error("CFLViolation", what) {}
};

// Amplitude guard tripped during NLS evolution.
struct BlowUpSuspected : Error {
    explicit BlowUpSuspected(const std::string& what) : Error("BlowUpSuspected", what) {}
};

// Bad or incomplete run configuration; message names the offending field.
struct ConfigError : Error {
    explicit ConfigError(const std::string& what) : Error("ConfigError", what) {}
};

struct SizeMismatch : Error {
    explicit SizeMismatch(const std::string& what) : Error("SizeMismatch", what) {}
};

} // namespace tilab
