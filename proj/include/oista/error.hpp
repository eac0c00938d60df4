#pragma once

#include <stdexcept>
#include <string>

namespace oista {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Parse failure with 1-based source position.
struct SyntaxError : Error {
    SyntaxError(const std::string& msg, int line, int col)
        : Error(msg + " at line " + std::to_string(line) + ", column " + std::to_string(col)),
          line(line), col(col) {}
    int line;
    int col;
};

/// A denominator vanished at an evaluation or substitution point.
struct SingularityError : Error {
    using Error::Error;
};

/// The expansion-size guard tripped (term count over the configured limit).
struct ExpansionLimitError : Error {
    using Error::Error;
};

/// No F with F*Jbar + Jtilde == 0 exists.
struct AnnihilatorInfeasibleError : Error {
    using Error::Error;
};

/// Requested an inverse from a run that did not terminate.
struct InversionUnavailableError : Error {
    using Error::Error;
};

/// A caller-supplied value broke a documented contract.
struct ContractError : Error {
    using Error::Error;
};

/// Too many skipped samples for the bound tables to be trusted.
struct UnreliableEstimateError : Error {
    using Error::Error;
};

} // namespace oista
