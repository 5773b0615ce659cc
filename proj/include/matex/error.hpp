#pragma once

#include <sstream>
#include <stdexcept>
#include <string>

namespace matex {

// All recoverable failures throw this; message is the full diagnostic.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// throw Error(msg() << "bad offset " << n)
class msg {
 public:
  template <typename T>
  msg& operator<<(const T& v) {
    out_ << v;
    return *this;
  }
  operator std::string() const { return out_.str(); }

 private:
  std::ostringstream out_;
};

}  // namespace matex
