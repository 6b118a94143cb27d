#pragma once

#include <stdexcept>
#include <string>

namespace dagas {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct DomainError : Error {
    using Error::Error;
};

struct DimensionError : Error {
    using Error::Error;
};

struct NotStochastic : Error {
    using Error::Error;
};

struct KernelDimension : Error {
    int dimension;
    explicit KernelDimension(int d)
        : Error("kernel dimension " + std::to_string(d)), dimension(d) {}
};

struct NoConvergence : Error {
    using Error::Error;
};

struct SizeCapExceeded : Error {
    using Error::Error;
};

} // namespace dagas
