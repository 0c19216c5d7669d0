#ifndef TDS_ERRORS_HPP
#define TDS_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace tds {

// Error categories, mirrored one-to-one by the C API status codes.
enum class ErrorCode {
    Parse = 1,        // malformed expression / JSON / descriptor
    Invalid = 2,      // bad argument, dimension mismatch, schema violation
    Precondition = 3, // f(jw, tau) = 0 on the axis, inadmissible point
    Sweep = 4,        // global minimization could not be certified
    Contour = 5,      // zero on contour / non-integer winding
    Internal = 6,
};

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, std::string message)
        : std::runtime_error(std::move(message)), code_(code) {}
    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

// Expression/descriptor syntax error carrying the byte offset of the
// offending token and the tokens that would have been accepted there.
class ParseError : public Error {
public:
    ParseError(std::size_t offset, std::string expected, const std::string& message)
        : Error(ErrorCode::Parse, message), offset_(offset), expected_(std::move(expected)) {}
    std::size_t offset() const noexcept { return offset_; }
    const std::string& expected() const noexcept { return expected_; }

private:
    std::size_t offset_;
    std::string expected_;
};

} // namespace tds

#endif
