#pragma once

#include <stdexcept>
#include <string>

namespace dlg {

class error : public std::runtime_error {
public:
    explicit error(const std::string& what) : std::runtime_error(what) {}
};

// Malformed or out-of-contract input: dangling edges, unknown labels,
// disconnected graphs passed to operations that require connectivity, ...
class invalid_input : public error {
public:
    explicit invalid_input(const std::string& what) : error(what) {}
};

// A bounded search hit its step budget before completing.
class budget_exhausted : public error {
public:
    explicit budget_exhausted(const std::string& what) : error(what) {}
};

} // namespace dlg
