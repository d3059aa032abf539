#pragma once

#include <complex>
#include <utility>
#include <vector>

namespace d4 {

using cplx = std::complex<double>;

// coeff * X^x * Z^z * prod CZ: the diagonal part acts first. Qubits are logical ids.
struct OperatorExpr {
  cplx coeff{1.0, 0.0};
  std::vector<int> x;
  std::vector<int> z;
  std::vector<std::pair<int, int>> cz;

  OperatorExpr& X(int q);
  OperatorExpr& Z(int q);
  // i X Z; only meaningful when q carries no other factor yet
  OperatorExpr& Y(int q);
  OperatorExpr& CZ(int a, int b);

  std::vector<int> support() const;
  std::size_t weight() const { return support().size(); }
};

}  // namespace d4
