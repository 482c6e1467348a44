#ifndef LBMEQ_ERROR_HPP_
#define LBMEQ_ERROR_HPP_

#include <stdexcept>
#include <string>

namespace lbmeq {

// Root of every error the library raises.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// Errors raised while assembling lattices, moment matrices, equilibria or
// scheme parameters. The CLI maps this family to exit code 3.
class ConstructionError : public Error {
public:
  using Error::Error;
};

class InvalidVelocitySet : public ConstructionError {
public:
  using ConstructionError::ConstructionError;
};

class RankDeficient : public ConstructionError {
public:
  using ConstructionError::ConstructionError;
};

class SingularMomentMatrix : public ConstructionError {
public:
  using ConstructionError::ConstructionError;
};

class InvalidEquilibrium : public ConstructionError {
public:
  using ConstructionError::ConstructionError;
};

class InvalidRelaxation : public ConstructionError {
public:
  using ConstructionError::ConstructionError;
};

class IndexOutOfRange : public Error {
public:
  using Error::Error;
};

class ShapeError : public Error {
public:
  using Error::Error;
};

class NonPositiveDensity : public Error {
public:
  using Error::Error;
};

class GridTooCoarse : public Error {
public:
  using Error::Error;
};

// NaN, overflow or a non-positive density encountered while time stepping.
class SimulationDiverged : public Error {
public:
  using Error::Error;
};

class FitRejected : public Error {
public:
  using Error::Error;
};

} // namespace lbmeq

#endif // LBMEQ_ERROR_HPP_
