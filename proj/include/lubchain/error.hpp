#pragma once

#include <stdexcept>
#include <string>

namespace lubchain {

/// Malformed or out-of-contract input (bad profile, unsorted centers, ...).
class InputError : public std::invalid_argument
{
  public:
    using std::invalid_argument::invalid_argument;
};

/// A solve could not be carried out on otherwise well-formed input.
class SolverError : public std::runtime_error
{
  public:
    using std::runtime_error::runtime_error;
};

}  // namespace lubchain
