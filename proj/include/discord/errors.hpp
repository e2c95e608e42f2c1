#pragma once

#include <stdexcept>
#include <string>

namespace discord {

/// Operand shapes do not fit together (square, d_A * d_B, basis size, ...).
class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// An input violates a declared contract: not Hermitian, not unitary, not a
/// density operator, out-of-range parameter.
class ContractError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// The reduced state of the probe has a degenerate spectrum, so its eigenbasis
/// does not single out a dephasing channel. Use the basis-minimized variants.
class DegenerateMarginalError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A quantity is requested for a configuration it is not defined for, such as
/// a degenerate ground state or an unsupported probe dimension.
class UnsupportedError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

}  // namespace discord
