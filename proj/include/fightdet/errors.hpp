#pragma once

#include <stdexcept>
#include <string>

namespace fightdet {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Shape disagreement between tensors (messages name both shapes).
struct DimensionError : Error {
    using Error::Error;
};

// Invalid argument value (e.g. dropout rate >= 1, zero-sized resize target).
struct ParamError : Error {
    using Error::Error;
};

// Malformed or truncated file contents (PPM, FVS1, FMD1, manifest, TSV).
struct FormatError : Error {
    using Error::Error;
};

// Bad dataset contents; messages name the offending sample id or path.
struct DataError : Error {
    using Error::Error;
};

// Non-finite values where finite ones are required (divergence, NaN payloads).
struct NumericError : Error {
    using Error::Error;
};

// Requested span lies outside the source clip.
struct RangeError : Error {
    using Error::Error;
};

// Required metadata (e.g. fps) is absent.
struct MissingMetadataError : Error {
    using Error::Error;
};

// Model variant and parameter set do not match.
struct ConfigError : Error {
    using Error::Error;
};

} // namespace fightdet
