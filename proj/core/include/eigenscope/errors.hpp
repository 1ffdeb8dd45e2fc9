#pragma once

#include <stdexcept>
#include <string>

namespace eigenscope {

// Error taxonomy shared by the whole library. The CLI driver maps these
// onto process exit codes: ConfigError -> 2, ResourceError -> 3,
// anything else -> 1.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// invalid point / covector / model combination for an operation
struct DomainError : Error {
    using Error::Error;
};

// malformed configuration or a violated setup rule (quadrature
// resolution, loop-scan step vs tolerance, bad experiment fields)
struct ConfigError : Error {
    using Error::Error;
};

// a quadrature rule too coarse for the requested frequency; refusing is
// the contract, silent aliasing is not
struct ResolutionError : ConfigError {
    using ConfigError::ConfigError;
};

// enumeration or grid size exceeds a configured cap
struct ResourceError : Error {
    using Error::Error;
};

// numerical failure: Newton non-convergence, degenerate Hessian,
// too few usable samples for a fit
struct NumericError : Error {
    using Error::Error;
};

}  // namespace eigenscope
