#pragma once
#include <stdexcept>
#include <string>

namespace r13 {

enum class ErrorKind { Domain, Data, Numerical, Config, Io };

// single exception type; kind drives the cli exit code
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& msg) : std::runtime_error(msg), kind_(kind) {}
    ErrorKind kind() const { return kind_; }

private:
    ErrorKind kind_;
};

[[noreturn]] void fail(ErrorKind kind, const std::string& msg);

} // namespace r13
