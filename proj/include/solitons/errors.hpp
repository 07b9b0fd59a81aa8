#pragma once

#include <stdexcept>
#include <string>

namespace solitons {

// All library failures derive from Error so callers can catch one type.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Argument outside the mathematical domain of a function (e.g. m > 1 for sn).
class DomainError : public Error {
 public:
  using Error::Error;
};

// Invalid physical/model parameters (e.g. c <= 0 for a KdV soliton).
class ParameterError : public Error {
 public:
  using Error::Error;
};

// A parameter constraint that has no real solution (e.g. alpha*beta >= 0).
class ConstraintError : public ParameterError {
 public:
  using ParameterError::ParameterError;
};

class GridError : public Error {
 public:
  using Error::Error;
};

// Evaluation too close to a singularity. Carries the nearest pole.
class PoleError : public Error {
 public:
  PoleError(const std::string& what, double re, double im = 0.0)
      : Error(what), pole_re_(re), pole_im_(im) {}
  double pole_re() const { return pole_re_; }
  double pole_im() const { return pole_im_; }

 private:
  double pole_re_;
  double pole_im_;
};

// Division by (numerically) zero, reported with its location.
class NearZeroError : public Error {
 public:
  NearZeroError(const std::string& what, double where) : Error(what), where_(where) {}
  double where() const { return where_; }

 private:
  double where_;
};

// ODE integration blew up or the step size underflowed.
class DivergenceError : public Error {
 public:
  DivergenceError(const std::string& what, double where) : Error(what), where_(where) {}
  double where() const { return where_; }

 private:
  double where_;
};

// PDE time stepping became unstable.
class BlowUpError : public Error {
 public:
  BlowUpError(const std::string& what, double time) : Error(what), time_(time) {}
  double time() const { return time_; }

 private:
  double time_;
};

class AmbiguityError : public Error {
 public:
  using Error::Error;
};

class IncompleteCollisionError : public Error {
 public:
  using Error::Error;
};

}  // namespace solitons
