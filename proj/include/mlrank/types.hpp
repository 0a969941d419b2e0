#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace mlrank {

using Index = Eigen::Index;
using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using IntVector = Eigen::VectorXi;

// Thrown when an input file cannot be parsed; carries a 1-based location.
class ParseError : public std::runtime_error {
public:
  ParseError(const std::string& what, long line, long column)
      : std::runtime_error(what + " (line " + std::to_string(line) +
                           ", column " + std::to_string(column) + ")"),
        line_(line), column_(column) {}

  long line() const { return line_; }
  long column() const { return column_; }

private:
  long line_;
  long column_;
};

inline double sigmoid(double x) {
  if (x >= 0) {
    return 1.0 / (1.0 + std::exp(-x));
  }
  const double e = std::exp(x);
  return e / (1.0 + e);
}

// log(1 + exp(x)) without overflow for large |x|.
inline double log1pexp(double x) {
  if (x > 0) return x + std::log1p(std::exp(-x));
  return std::log1p(std::exp(x));
}

}  // namespace mlrank
