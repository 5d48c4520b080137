#pragma once

#include <stdexcept>
#include <string>

namespace sgl {

/// Base class for all library errors.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

class InvalidField : public Error {
public:
    using Error::Error;
};

class NotElliptic : public Error {
public:
    NotElliptic(std::size_t node, double eig)
        : Error("symmetric real part not positive definite at node " + std::to_string(node) +
                " (smallest eigenvalue " + std::to_string(eig) + ")"),
          node_(node), eig_(eig) {}
    std::size_t node() const { return node_; }
    double eigenvalue() const { return eig_; }

private:
    std::size_t node_;
    double eig_;
};

class BadExponent : public Error {
public:
    using Error::Error;
};

class NotFormBounded : public Error {
public:
    using Error::Error;
};

class ModeError : public Error {
public:
    using Error::Error;
};

class OutsideInterval : public Error {
public:
    using Error::Error;
};

class BadWeight : public Error {
public:
    using Error::Error;
};

class BadParameter : public Error {
public:
    using Error::Error;
};

class AssemblyError : public Error {
public:
    using Error::Error;
};

class LinAlgError : public Error {
public:
    using Error::Error;
};

class HypothesisUnmet : public Error {
public:
    using Error::Error;
};

class ConfigError : public Error {
public:
    using Error::Error;
};

/// Parse error with 1-based source position.
class SyntaxError : public Error {
public:
    SyntaxError(int line, int col, const std::string& expected)
        : Error("syntax error at " + std::to_string(line) + ":" + std::to_string(col) +
                ": expected " + expected),
          line_(line), col_(col), expected_(expected) {}
    int line() const { return line_; }
    int col() const { return col_; }
    const std::string& expected() const { return expected_; }

private:
    int line_;
    int col_;
    std::string expected_;
};

class UnknownIdent : public Error {
public:
    UnknownIdent(int line, int col, const std::string& name)
        : Error("unknown identifier '" + name + "' at " + std::to_string(line) + ":" +
                std::to_string(col)),
          line_(line), col_(col), name_(name) {}
    int line() const { return line_; }
    int col() const { return col_; }
    const std::string& name() const { return name_; }

private:
    int line_;
    int col_;
    std::string name_;
};

} // namespace sgl
