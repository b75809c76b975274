#ifndef OFBM_ERRORS_HPP
#define OFBM_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace ofbm {

// Base class for every numerical / contract failure raised by the library.
// The CLI maps these to exit code 3 with a machine-readable payload.
class Error : public std::runtime_error {
public:
    Error(std::string code, const std::string& what)
        : std::runtime_error(what), code_(std::move(code)) {}
    const std::string& code() const { return code_; }

private:
    std::string code_;
};

struct ShapeError : Error {
    explicit ShapeError(const std::string& what) : Error("ShapeError", what) {}
};

struct UnsupportedSpectrum : Error {
    explicit UnsupportedSpectrum(const std::string& what) : Error("UnsupportedSpectrum", what) {}
};

struct UnsupportedFilter : Error {
    explicit UnsupportedFilter(const std::string& what) : Error("UnsupportedFilter", what) {}
};

struct QuadratureError : Error {
    explicit QuadratureError(const std::string& what) : Error("QuadratureError", what) {}
};

struct EmbeddingError : Error {
    EmbeddingError(const std::string& what, double worst_eigenvalue)
        : Error("EmbeddingError", what), worst_eigenvalue(worst_eigenvalue) {}
    double worst_eigenvalue;
};

struct KindError : Error {
    explicit KindError(const std::string& what) : Error("KindError", what) {}
};

struct InsufficientData : Error {
    InsufficientData(const std::string& what, int achievable_octave)
        : Error("InsufficientData", what), achievable_octave(achievable_octave) {}
    int achievable_octave;
};

struct NonPositiveEigenvalue : Error {
    NonPositiveEigenvalue(const std::string& what, double scale)
        : Error("NonPositiveEigenvalue", what), scale(scale) {}
    double scale;
};

struct DegenerateOffDiagonal : Error {
    explicit DegenerateOffDiagonal(const std::string& what) : Error("DegenerateOffDiagonal", what) {}
};

struct SingularB : Error {
    explicit SingularB(const std::string& what) : Error("SingularB", what) {}
};

struct TailNotConverged : Error {
    TailNotConverged(const std::string& what, int z_max)
        : Error("TailNotConverged", what), z_max(z_max) {}
    int z_max;
};

struct PreconditionViolated : Error {
    explicit PreconditionViolated(const std::string& what) : Error("PreconditionViolated", what) {}
};

struct ConfigError : Error {
    explicit ConfigError(const std::string& what) : Error("ConfigError", what) {}
};

} // namespace ofbm

#endif
