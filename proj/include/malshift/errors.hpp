#ifndef MALSHIFT_ERRORS_HPP
#define MALSHIFT_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace malshift {

// Bad model name, parameter out of range, malformed config. CLI exit code 2.
class config_error : public std::runtime_error {
public:
    explicit config_error(const std::string& what) : std::runtime_error(what) {}
};

// Enumeration or cap limits exceeded. CLI exit code 3.
class resource_error : public std::runtime_error {
public:
    explicit resource_error(const std::string& what) : std::runtime_error(what) {}
};

// Operation requires an ambient alternative product the model does not have.
class unsupported_model_error : public std::runtime_error {
public:
    explicit unsupported_model_error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace malshift

#endif
