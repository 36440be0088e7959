#pragma once

#include <stdexcept>
#include <string>

namespace binapprox {

// Non-finite value produced by a generator, integrator or tree.
class NumericFailure : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A caller-side contract that cannot be checked statically (e.g. a Hoelder
// certificate that does not hold).
class PreconditionFailure : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

}  // namespace binapprox
