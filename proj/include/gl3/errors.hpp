#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace gl3 {

// Error taxonomy shared by the library and the command-line front end.
// Each class maps to one process exit status in the CLI.
class error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class domain_error : public error {
 public:
  using error::error;
};

class geometry_error : public error {
 public:
  using error::error;
};

class accuracy_error : public error {
 public:
  accuracy_error(const std::string& what, double residual)
      : error(what), residual_(residual) {}
  double residual() const { return residual_; }

 private:
  double residual_;
};

class resource_error : public error {
 public:
  resource_error(const std::string& what, std::uint64_t partial_count = 0)
      : error(what), partial_count_(partial_count) {}
  std::uint64_t partial_count() const { return partial_count_; }

 private:
  std::uint64_t partial_count_;
};

class usage_error : public error {
 public:
  using error::error;
};

}  // namespace gl3
