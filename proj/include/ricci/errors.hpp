#pragma once

#include <stdexcept>
#include <string>

namespace ricci {

/// Rejected input: a precondition or invariant on caller-supplied data failed.
class InvalidInput : public std::runtime_error {
 public:
  explicit InvalidInput(const std::string& what) : std::runtime_error(what) {}
};

/// The numerics produced a non-finite value or could not continue.
class NumericalBreakdown : public std::runtime_error {
 public:
  explicit NumericalBreakdown(const std::string& what, long node = -1)
      : std::runtime_error(what), node_(node) {}
  long node() const { return node_; }

 private:
  long node_;
};

}  // namespace ricci
