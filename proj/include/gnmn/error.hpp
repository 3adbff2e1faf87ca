#pragma once

#include <stdexcept>
#include <string>

namespace gnmn {

/// Precondition violation by a caller (bad argument, mismatched sizes).
class UsageError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

}  // namespace gnmn
