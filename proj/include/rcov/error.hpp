#pragma once

#include <stdexcept>
#include <string>

namespace rcov {

// Malformed or inconsistent input. The CLI maps it to exit code 2.
class ValidationError : public std::runtime_error {
public:
  explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

// Input outside the supported desk-scale range. The CLI maps it to exit code 3.
class UnsupportedError : public std::runtime_error {
public:
  explicit UnsupportedError(const std::string& what) : std::runtime_error(what) {}
};

// A computed certificate failed its own check.
class CertificateError : public std::runtime_error {
public:
  explicit CertificateError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace rcov
