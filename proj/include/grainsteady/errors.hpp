#pragma once

#include <stdexcept>
#include <string>

namespace grainsteady {

// A computation that should have converged did not (quadrature cap,
// root finder iteration limit, non-finite intermediate).
struct NumericalFailure : std::runtime_error {
    explicit NumericalFailure(const std::string& what) : std::runtime_error(what) {}
};

} // namespace grainsteady
