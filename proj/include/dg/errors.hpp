#pragma once

#include <stdexcept>
#include <string>

namespace dg {

/** Base class for all library errors. */
class Error : public std::runtime_error {
  public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/** Two series built against different sessions were combined or paired. */
class SessionMismatch : public Error {
  public:
    explicit SessionMismatch(const std::string& what = "series belong to different sessions")
        : Error(what) {}
};

/** An exact enumeration would exceed the configured bit / support cap. */
class CapExceeded : public Error {
  public:
    explicit CapExceeded(const std::string& what = "exact-mode cap exceeded") : Error(what) {}
};

/** A real-vector operation received a vector with nonzero imaginary parts. */
class NotReal : public Error {
  public:
    explicit NotReal(const std::string& what = "coordinate vector has imaginary parts")
        : Error(what) {}
};

/** sup-norm precondition violated (requires a base vector in the unit cube). */
class SupNormExceeded : public Error {
  public:
    explicit SupNormExceeded(const std::string& what = "sup norm of input exceeds 1")
        : Error(what) {}
};

/** l2-norm precondition violated. */
class NormExceeded : public Error {
  public:
    explicit NormExceeded(const std::string& what = "l2 norm of input exceeds 1") : Error(what) {}
};

/** Scheme parameter t is at or below the admissible endpoint c. */
class TBelowEndpoint : public Error {
  public:
    explicit TBelowEndpoint(const std::string& what = "t must exceed the endpoint c")
        : Error(what) {}
};

/** lp-norm precondition violated. */
class PNormExceeded : public Error {
  public:
    explicit PNormExceeded(const std::string& what = "lp norm of input exceeds 1") : Error(what) {}
};

/** Covering-sequence dimension exceeds the exact-arithmetic cap. */
class DimensionCap : public Error {
  public:
    explicit DimensionCap(const std::string& what = "covering sequence dimension cap exceeded")
        : Error(what) {}
};

/** A brute-force enumeration would exceed the work cap. */
class WorkCap : public Error {
  public:
    explicit WorkCap(const std::string& what = "brute-force work cap exceeded") : Error(what) {}
};

/** Slot tables disagree on registries for a shared coordinate. */
class RegistryMismatch : public Error {
  public:
    explicit RegistryMismatch(const std::string& what = "slot registries inconsistent")
        : Error(what) {}
};

/** Malformed configuration or input text. */
class ConfigError : public Error {
  public:
    explicit ConfigError(const std::string& what = "invalid configuration") : Error(what) {}
};

}  // namespace dg
