#ifndef FLUIDLIM_ERRORS_HPP
#define FLUIDLIM_ERRORS_HPP

#include <stdexcept>

namespace fluidlim {

// A model or simulation broke one of its own invariants (state left D,
// bookkeeping went negative, jump cap exceeded). Distinct from bad input.
class InvariantBreach : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace fluidlim

#endif  // FLUIDLIM_ERRORS_HPP
