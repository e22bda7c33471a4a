#ifndef PHMM_TYPES_HPP_
#define PHMM_TYPES_HPP_

#include <cstdint>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace phmm {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using VectorRef = Eigen::Ref<Vector>;
using ConstVectorRef = Eigen::Ref<const Vector>;
using MatrixRef = Eigen::Ref<Matrix>;

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Bad caller input (non-positive step, empty sample, ...).
class ArgumentError : public Error {
 public:
  using Error::Error;
};

/// Argument outside the mathematical domain of a formula.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A vector field returned a result of the wrong size.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// Statistics could not be formed from the collected samples.
class EstimationError : public Error {
 public:
  using Error::Error;
};

/// A non-finite state appeared during time stepping.
///
/// Fields that do not apply to the failing integrator are left at -1.
class IntegrationError : public Error {
 public:
  IntegrationError(const std::string& what, double time, std::int64_t step,
                   std::int64_t macro_index = -1, std::int64_t micro_index = -1,
                   std::int64_t replica = -1)
      : Error(what),
        time(time),
        step(step),
        macro_index(macro_index),
        micro_index(micro_index),
        replica(replica) {}

  double time;
  std::int64_t step;
  std::int64_t macro_index;
  std::int64_t micro_index;
  std::int64_t replica;
};

}  // namespace phmm

#endif  // PHMM_TYPES_HPP_
