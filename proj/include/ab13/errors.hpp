// Error types shared across the library.
//
// Three failure classes matter to callers:
//   input_error  - malformed or out-of-contract input (CLI exit code 2)
//   verify_error - an exact verification failed; carries a witness string
//                  describing the first offending object (CLI exit code 1)
//   unsupported_error - a request outside the implemented scope (treated as
//                  input_error by the CLI)
#pragma once

#include <stdexcept>
#include <string>

namespace ab13 {

struct error : std::runtime_error {
    explicit error(const std::string& msg) : std::runtime_error(msg) {}
};

struct input_error : error {
    explicit input_error(const std::string& msg) : error(msg) {}
};

struct unsupported_error : input_error {
    explicit unsupported_error(const std::string& msg) : input_error(msg) {}
};

// A failed exact check. `witness` holds a printable counterexample: the
// offending polynomial, sample point, or relation, so reports can show
// *what* broke rather than just that something did.
struct verify_error : error {
    std::string witness;
    verify_error(const std::string& msg, std::string witness_ = {})
        : error(witness_.empty() ? msg : msg + " [witness: " + witness_ + "]"),
          witness(std::move(witness_)) {}
};

}  // namespace ab13
