#pragma once

#include <stdexcept>
#include <string>

namespace upm {

// Error taxonomy mirrors the CLI exit codes: config 2, data 3, numeric 4.
class UpmError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ConfigError : public UpmError {
public:
    using UpmError::UpmError;
};

class DataError : public UpmError {
public:
    using UpmError::UpmError;
};

class NumericError : public UpmError {
public:
    using UpmError::UpmError;
};

enum ExitCode : int {
    kExitOk = 0,
    kExitConfig = 2,
    kExitData = 3,
    kExitNumeric = 4,
};

}  // namespace upm
