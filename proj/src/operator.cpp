#include "d4/operator.hpp"

#include <algorithm>
#include <set>

namespace d4 {

namespace {
void toggle(std::vector<int>& v, int q) {
  auto it = std::find(v.begin(), v.end(), q);
  if (it == v.end())
    v.push_back(q);
  else
    v.erase(it);
}
}  // namespace

OperatorExpr& OperatorExpr::X(int q) {
  toggle(x, q);
  return *this;
}

OperatorExpr& OperatorExpr::Z(int q) {
  toggle(z, q);
  return *this;
}

OperatorExpr& OperatorExpr::Y(int q) {
  toggle(x, q);
  toggle(z, q);
  coeff *= cplx(0.0, 1.0);
  return *this;
}

OperatorExpr& OperatorExpr::CZ(int a, int b) {
  cz.emplace_back(a, b);
  return *this;
}

std::vector<int> OperatorExpr::support() const {
  std::set<int> s(x.begin(), x.end());
  s.insert(z.begin(), z.end());
  for (auto [a, b] : cz) {
    s.insert(a);
    s.insert(b);
  }
  return {s.begin(), s.end()};
}

}  // namespace d4
