#pragma once

#include <stdexcept>
#include <string>

namespace nk {

enum class ErrorKind {
    Axiom,
    Signature,
    Property,
    Admissibility,
    InconsistentClassification,
    DirectSum,
    RankDeficiency,
    ClassPrecondition,
    Jacobi,
    Parse,
    ResampleExhausted,
    DegenerateSample,
    Dimension,
};

const char* to_string(ErrorKind kind);

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

// Comparison tolerances. Residuals are relative to the norm of the input
// unless that norm is below the absolute floor.
struct Tolerance {
    double rel = 1e-9;
    double abs = 1e-12;
};

}  // namespace nk
