#pragma once

#include <stdexcept>
#include <string>

namespace sqa {

enum class ErrorKind {
    invalid_argument,  // caller passed something outside the contract
    data_error,        // malformed or inconsistent input file
    qc_failure,        // generated corpus failed verification
    io_error,          // filesystem trouble
};

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

}  // namespace sqa
