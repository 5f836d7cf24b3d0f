// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace evmg {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// An argument outside the operation's domain (slot out of range, power above
/// the mode rate, negative irradiance, ...).
class InvalidInput : public Error {
public:
    using Error::Error;
};

/// Malformed file contents. `line` is 1-based, 0 when not tied to a line.
class ParseError : public Error {
public:
    ParseError(const std::string& message, std::size_t line = 0)
        : Error(message), line_(line) {}
    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

/// Piecewise definition (profile segments, rate windows) with a gap, an
/// overlap or a boundary that is not on a slot edge.
class DefinitionError : public Error {
public:
    using Error::Error;
};

/// Scenario failed validation. Carries every problem found, not just the first.
class ScenarioError : public Error {
public:
    explicit ScenarioError(std::vector<std::string> problems);
    explicit ScenarioError(const std::string& problem)
        : ScenarioError(std::vector<std::string>{problem}) {}
    const std::vector<std::string>& problems() const noexcept { return problems_; }

private:
    std::vector<std::string> problems_;
};

class InfeasibleError : public Error {
public:
    using Error::Error;
};

/// Truncated-normal acceptance region carries too little probability mass.
class DegenerateWindow : public Error {
public:
    using Error::Error;
};

class SearchSpaceTooLarge : public Error {
public:
    using Error::Error;
};

/// A post-condition of the simulator did not hold. Always a bug.
class InvariantViolation : public Error {
public:
    using Error::Error;
};

} // namespace evmg
