#pragma once

#include <stdexcept>
#include <string>

namespace specseq {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Input-side failures: malformed documents, broken invariants of supplied data.
struct ParseError : Error {
    using Error::Error;
};
struct ValidationError : Error {
    using Error::Error;
};

// Operation preconditions.
struct NotASubgroup : Error {
    using Error::Error;
};
struct NotInSubgroup : Error {
    using Error::Error;
};
struct NotCompatible : Error {
    using Error::Error;
};
struct InvalidFiltration : Error {
    using Error::Error;
};
struct NotExact : Error {
    using Error::Error;
};
struct NotFiltered : Error {
    using Error::Error;
};
struct NotOpen : Error {
    using Error::Error;
};
struct NotCellular : Error {
    using Error::Error;
};
struct NotMember : Error {
    using Error::Error;
};

}  // namespace specseq
