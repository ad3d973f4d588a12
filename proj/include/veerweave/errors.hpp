#pragma once

#include <stdexcept>
#include <string>

namespace veerweave {

// Base class of every domain failure raised by the library.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

class ParseError : public Error {
public:
    ParseError(int line, const std::string& msg)
        : Error(line > 0 ? "line " + std::to_string(line) + ": " + msg : msg), line_(line) {}
    int line() const { return line_; }

private:
    int line_;
};

// A violated axiom of the veering structure; `axiom` is a short stable
// tag such as "angle sum" or "veering condition".
class ValidationError : public Error {
public:
    ValidationError(std::string axiom, std::string location)
        : Error(axiom + " violated at " + location), axiom_(std::move(axiom)), location_(std::move(location)) {}
    const std::string& axiom() const { return axiom_; }
    const std::string& location() const { return location_; }

private:
    std::string axiom_;
    std::string location_;
};

// A pipeline stage failed one of its internal invariants.
class StageError : public Error {
public:
    StageError(std::string stage, const std::string& msg) : Error(stage + ": " + msg), stage_(std::move(stage)) {}
    const std::string& stage() const { return stage_; }

private:
    std::string stage_;
};

class BudgetError : public Error {
public:
    explicit BudgetError(const std::string& msg) : Error("budget exceeded: " + msg) {}
};

}  // namespace veerweave
