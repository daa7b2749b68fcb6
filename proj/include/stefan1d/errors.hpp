#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace stefan1d {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed input: bad ordering, negative density, length mismatch.
/// `index()` names the offending element when there is one.
class ValidationError : public Error {
public:
    static constexpr std::size_t npos = static_cast<std::size_t>(-1);

    explicit ValidationError(const std::string& what, std::size_t index = npos)
        : Error(what), index_(index) {}

    std::size_t index() const noexcept { return index_; }

private:
    std::size_t index_;
};

class RangeError : public Error {
public:
    using Error::Error;
};

/// Mass found outside the open set a measure is supposed to live on.
class SupportError : public Error {
public:
    SupportError(const std::string& what, double leaked_mass)
        : Error(what), leaked_mass_(leaked_mass) {}

    double leaked_mass() const noexcept { return leaked_mass_; }

private:
    double leaked_mass_;
};

/// (k, beta) outside the window attainable by densities <= 1.
class InfeasibleError : public Error {
public:
    using Error::Error;
};

/// Density above the unit cap.
class AdmissibilityError : public Error {
public:
    using Error::Error;
};

class SingularityError : public Error {
public:
    using Error::Error;
};

class SamplingError : public Error {
public:
    using Error::Error;
};

class ParameterError : public Error {
public:
    using Error::Error;
};

/// A constructed object failed its own certificate. The payload is a JSON
/// dump of the failing certificate so the error stays self-contained.
class VerificationError : public Error {
public:
    VerificationError(const std::string& what, std::string certificate_json = {})
        : Error(what), certificate_json_(std::move(certificate_json)) {}

    const std::string& certificate_json() const noexcept { return certificate_json_; }

private:
    std::string certificate_json_;
};

} // namespace stefan1d
