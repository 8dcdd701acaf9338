#pragma once

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace magtb {

using cplx = std::complex<double>;
using Vec2 = Eigen::Vector2d;
using MatrixXc = Eigen::MatrixXcd;
using VectorXc = Eigen::VectorXcd;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr cplx kI{0.0, 1.0};

// Planar wedge product n1*m2 - n2*m1.
inline double wedge(const Vec2& n, const Vec2& m) { return n.x() * m.y() - n.y() * m.x(); }

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ArgumentError : public Error {
 public:
  using Error::Error;
};
class EmptySetError : public Error {
 public:
  using Error::Error;
};
class PreconditionError : public Error {
 public:
  using Error::Error;
};
class ResolutionError : public Error {
 public:
  using Error::Error;
};
class LambdaTooSmallError : public Error {
 public:
  using Error::Error;
};
class DefinitenessError : public Error {
 public:
  using Error::Error;
};
class DegenerateGraphError : public Error {
 public:
  using Error::Error;
};
class StructureError : public Error {
 public:
  using Error::Error;
};
class SolverError : public Error {
 public:
  using Error::Error;
};
class GapError : public Error {
 public:
  using Error::Error;
};
class InvalidWindowError : public Error {
 public:
  using Error::Error;
};
class GeometryError : public Error {
 public:
  using Error::Error;
};
class SizeError : public Error {
 public:
  using Error::Error;
};

}  // namespace magtb
