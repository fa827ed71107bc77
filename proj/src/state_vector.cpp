#include "fluidlim/state_vector.hpp"

#include <cmath>
#include <stdexcept>

namespace fluidlim {

namespace {

void require_same_dim(const StateVector& a, const StateVector& b) {
  if (a.dim() != b.dim()) {
    throw std::invalid_argument("StateVector dimension mismatch");
  }
}

}  // namespace

StateVector::StateVector(std::size_t dim, double fill) : coords_(dim, fill) {
  if (!std::isfinite(fill)) throw std::invalid_argument("non-finite coordinate");
}

StateVector::StateVector(std::vector<double> coords) : coords_(std::move(coords)) {
  if (!is_finite()) throw std::invalid_argument("non-finite coordinate");
}

StateVector::StateVector(std::initializer_list<double> coords)
    : StateVector(std::vector<double>(coords)) {}

StateVector& StateVector::operator+=(const StateVector& other) {
  require_same_dim(*this, other);
  for (std::size_t i = 0; i < coords_.size(); ++i) coords_[i] += other.coords_[i];
  return *this;
}

StateVector& StateVector::operator-=(const StateVector& other) {
  require_same_dim(*this, other);
  for (std::size_t i = 0; i < coords_.size(); ++i) coords_[i] -= other.coords_[i];
  return *this;
}

StateVector& StateVector::operator*=(double s) {
  for (double& c : coords_) c *= s;
  return *this;
}

double StateVector::squared_norm() const {
  double acc = 0.0;
  for (double c : coords_) acc += c * c;
  return acc;
}

double StateVector::norm() const { return std::sqrt(squared_norm()); }

bool StateVector::is_finite() const {
  for (double c : coords_) {
    if (!std::isfinite(c)) return false;
  }
  return true;
}

StateVector operator+(StateVector a, const StateVector& b) { return a += b; }
StateVector operator-(StateVector a, const StateVector& b) { return a -= b; }
StateVector operator*(double s, StateVector a) { return a *= s; }
StateVector operator*(StateVector a, double s) { return a *= s; }

double distance(const StateVector& a, const StateVector& b) {
  require_same_dim(a, b);
  double acc = 0.0;
  for (std::size_t i = 0; i < a.dim(); ++i) {
    const double d = a[i] - b[i];
    acc += d * d;
  }
  return std::sqrt(acc);
}

}  // namespace fluidlim
