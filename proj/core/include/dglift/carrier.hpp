#pragma once

#include <cstddef>
#include <string>

#include "dglift/algebra.hpp"
#include "dglift/sparse.hpp"

namespace dglift {

/// A degreewise finite DG B-bimodule Y given by explicit k-bases per degree.
/// Targets of Hom computations are M (x)_B Y for semifree M.
class Carrier {
 public:
  virtual ~Carrier() = default;

  virtual const Algebra& algebra() const = 0;
  virtual std::size_t dim(int d) const = 0;
  /// Y_d -> Y_{d-1}
  virtual SparseMatrix differential(int d) const = 0;
  /// y -> m y, Y_d -> Y_{d+|m|}
  virtual SparseMatrix left_action(const Monomial& m, int d) const = 0;
  /// y -> y m, Y_d -> Y_{d+|m|}
  virtual SparseMatrix right_action(const Monomial& m, int d) const = 0;
  virtual std::string describe() const = 0;
};

/// Y = B as a bimodule over itself.
class AlgebraCarrier final : public Carrier {
 public:
  explicit AlgebraCarrier(Algebra alg, int max_degree);

  const Algebra& algebra() const override { return alg_; }
  std::size_t dim(int d) const override;
  SparseMatrix differential(int d) const override;
  SparseMatrix left_action(const Monomial& m, int d) const override;
  SparseMatrix right_action(const Monomial& m, int d) const override;
  std::string describe() const override { return "B"; }

 private:
  void check(int d) const;
  Algebra alg_;
  int max_degree_;
};

}  // namespace dglift
