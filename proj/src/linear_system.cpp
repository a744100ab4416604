#include "rbskm/linear_system.hpp"

#include <cmath>

#include "rbskm/error.hpp"

namespace rbskm {

LinearSystem::LinearSystem(SparseMatrix a, Vector b, std::optional<Vector> x_star,
                           std::string label)
    : a_(std::move(a)), b_(std::move(b)), x_star_(std::move(x_star)), label_(std::move(label)) {
  if (b_.size() != a_.rows())
    throw ArgumentError("LinearSystem: b has " + std::to_string(b_.size()) +
                        " entries, A has " + std::to_string(a_.rows()) + " rows");
  if (x_star_) {
    if (x_star_->size() != a_.cols())
      throw ArgumentError("LinearSystem: x_star has the wrong length");
    Vector ax = a_.matvec(*x_star_);
    double res = 0.0;
    for (std::size_t i = 0; i < b_.size(); ++i) res += (b_[i] - ax[i]) * (b_[i] - ax[i]);
    if (std::sqrt(res) > 1e-10 * (1.0 + norm2(b_)))
      throw ArgumentError("LinearSystem: x_star does not satisfy A x_star = b");
  }
}

}  // namespace rbskm
