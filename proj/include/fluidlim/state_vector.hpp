#ifndef FLUIDLIM_STATE_VECTOR_HPP
#define FLUIDLIM_STATE_VECTOR_HPP

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace fluidlim {

/// A point of the finite-dimensional state space. Coordinates are always
/// finite; construction from NaN/Inf throws std::invalid_argument.
class StateVector {
 public:
  StateVector() = default;
  explicit StateVector(std::size_t dim, double fill = 0.0);
  explicit StateVector(std::vector<double> coords);
  StateVector(std::initializer_list<double> coords);

  std::size_t dim() const { return coords_.size(); }
  double operator[](std::size_t i) const { return coords_[i]; }
  double& operator[](std::size_t i) { return coords_[i]; }
  std::span<const double> coords() const { return coords_; }

  StateVector& operator+=(const StateVector& other);
  StateVector& operator-=(const StateVector& other);
  StateVector& operator*=(double s);

  double norm() const;
  double squared_norm() const;
  bool is_finite() const;

  friend bool operator==(const StateVector&, const StateVector&) = default;

 private:
  std::vector<double> coords_;
};

StateVector operator+(StateVector a, const StateVector& b);
StateVector operator-(StateVector a, const StateVector& b);
StateVector operator*(double s, StateVector a);
StateVector operator*(StateVector a, double s);

// Euclidean distance; throws on dimension mismatch.
double distance(const StateVector& a, const StateVector& b);

}  // namespace fluidlim

#endif  // FLUIDLIM_STATE_VECTOR_HPP
