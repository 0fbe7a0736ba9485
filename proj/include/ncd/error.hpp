// Error types shared by the modules.
#pragma once

#include <stdexcept>

namespace ncd {

// malformed input file or argument
class FormatError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// well-formed input that violates a structural precondition
class StructuralError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace ncd
