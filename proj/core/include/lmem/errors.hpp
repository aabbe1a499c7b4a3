#pragma once

#include <stdexcept>
#include <string>

namespace lmem {

// Validation failures (bad arguments, malformed input files) throw
// std::invalid_argument.  Failures of the numerics themselves (quadrature
// that will not converge, a grid that exceeds the memory budget) throw
// numerical_error so callers can tell the two apart.  Cache files are
// best-effort: a corrupt or mismatched one is ignored and rebuilt.
class numerical_error : public std::runtime_error {
public:
    explicit numerical_error(const std::string& what) : std::runtime_error(what) {}
};

} // namespace lmem
