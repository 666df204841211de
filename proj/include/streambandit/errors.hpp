// errors.hpp
#pragma once
#include <stdexcept>
#include <string>

namespace streambandit {

// An algorithm touched an arm it had no right to: neither the arriving arm
// nor one it stored. Always a bug in the algorithm, never in the instance.
class IllegalAccess : public std::logic_error {
public:
    explicit IllegalAccess(const std::string& what) : std::logic_error("illegal access: " + what) {}
};

// Any session call after the algorithm returned its answer.
class SessionClosed : public std::logic_error {
public:
    SessionClosed() : std::logic_error("session closed: answer already returned") {}
};

// A pull budget or counter that does not fit in 64 bits.
class BudgetOverflow : public std::overflow_error {
public:
    explicit BudgetOverflow(const std::string& what) : std::overflow_error(what) {}
};

// The elimination finished without a unique survivor.
class Inconclusive : public std::runtime_error {
public:
    explicit Inconclusive(const std::string& what) : std::runtime_error("inconclusive: " + what) {}
};

class PassCapExceeded : public std::runtime_error {
public:
    explicit PassCapExceeded(const std::string& what) : std::runtime_error("pass cap exceeded: " + what) {}
};

// Two arms share the maximum mean, so there is no best arm to identify.
class AmbiguousBest : public std::runtime_error {
public:
    explicit AmbiguousBest(const std::string& what) : std::runtime_error("ambiguous best arm: " + what) {}
};

} // namespace streambandit
