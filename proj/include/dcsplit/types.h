#pragma once

#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace dcsplit {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;
using Index = Eigen::Index;

// Absolute tolerance on barycentric coordinates for point location.
inline constexpr double kContainmentTol = 1e-12;

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DegenerateDomain : public Error {
 public:
  using Error::Error;
};

class AnchorOutside : public Error {
 public:
  using Error::Error;
};

class OutsideDomain : public Error {
 public:
  using Error::Error;
};

class EvaluationFailure : public Error {
 public:
  using Error::Error;
};

class NotConvexHinge : public Error {
 public:
  using Error::Error;
};

class DegenerateCurve : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

enum class Verdict { kBounded, kConverging, kDiverging, kInconclusive };

inline const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::kBounded:
      return "bounded";
    case Verdict::kConverging:
      return "converging";
    case Verdict::kDiverging:
      return "diverging";
    case Verdict::kInconclusive:
      return "inconclusive";
  }
  return "inconclusive";
}

}  // namespace dcsplit
