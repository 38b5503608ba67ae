#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace slln {

/// Machine-readable failure category; the CLI maps each one to an exit code.
enum class ErrorCategory {
    ConfigParse,
    UnknownId,
    Validation,
    NumericDomain,
    InsufficientData,
    UnsupportedModel,
    Io,
};

std::string_view to_string(ErrorCategory category);
int exit_code(ErrorCategory category);

class Error : public std::runtime_error {
public:
    Error(ErrorCategory category, std::string module, std::string parameter, const std::string& message)
        : std::runtime_error(message),
          category_(category),
          module_(std::move(module)),
          parameter_(std::move(parameter)) {}

    ErrorCategory category() const noexcept { return category_; }
    const std::string& module() const noexcept { return module_; }
    const std::string& parameter() const noexcept { return parameter_; }

private:
    ErrorCategory category_;
    std::string module_;
    std::string parameter_;
};

[[noreturn]] inline void fail(ErrorCategory category, std::string module, std::string parameter,
                              const std::string& message) {
    throw Error(category, std::move(module), std::move(parameter), message);
}

}  // namespace slln
