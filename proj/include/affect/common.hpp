#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace affect {

// Error categories map 1:1 onto CLI exit codes (see tools/affect_cli.cpp).
enum class ErrorCategory { config, data, train };

inline std::string_view to_string(ErrorCategory c) {
    switch (c) {
        case ErrorCategory::config: return "config";
        case ErrorCategory::data: return "data";
        case ErrorCategory::train: return "train";
    }
    return "unknown";
}

class Error : public std::runtime_error {
public:
    Error(ErrorCategory category, const std::string& message)
        : std::runtime_error(std::string(to_string(category)) + ": " + message),
          category_(category) {}

    ErrorCategory category() const { return category_; }

private:
    ErrorCategory category_;
};

[[noreturn]] inline void throw_config(const std::string& msg) { throw Error(ErrorCategory::config, msg); }
[[noreturn]] inline void throw_data(const std::string& msg) { throw Error(ErrorCategory::data, msg); }
[[noreturn]] inline void throw_train(const std::string& msg) { throw Error(ErrorCategory::train, msg); }

} // namespace affect
