#pragma once

#include <stdexcept>
#include <string>

namespace ebfdr {

// Argument outside the mathematical domain of an operation (p outside [0,1],
// non-positive variance, invalid bit width, NaN input, ...).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// Data that cannot support the requested computation: zero range, zero IQR,
// too few distinct values.
class DegenerateDataError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A mixture component lost (almost) all posterior mass during an M-step.
class ComponentCollapse : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Every EM start failed.
class FitError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Malformed input file or model file.
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace ebfdr
