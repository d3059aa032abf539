#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <unordered_map>
#include <vector>

#include "d4/operator.hpp"

namespace d4 {

enum class Precision { C64, C128 };
enum class Backend { Dense, Sparse };

const char* precision_name(Precision p);
Precision parse_precision(const std::string& s);
const char* backend_name(Backend b);
Backend parse_backend(const std::string& s);

// A gate on a few qubits: a 2^k x 2^k row-major matrix, bit r of the local index is qubits[r].
struct LocalOp {
  std::vector<int> qubits;
  std::vector<cplx> m;
  int dim() const { return 1 << qubits.size(); }
};

// Amplitudes over a dynamic register of logical qubit ids. Register position p is bit p of
// the basis index.
class State {
 public:
  virtual ~State() = default;
  virtual std::unique_ptr<State> clone() const = 0;
  virtual Backend backend() const = 0;
  virtual Precision precision() const = 0;
  virtual std::size_t support_size() const = 0;
  virtual std::size_t bytes() const = 0;

  const std::vector<int>& qubits() const { return qubits_; }
  int num_qubits() const { return static_cast<int>(qubits_.size()); }
  bool has_qubit(int id) const { return pos_.count(id) != 0; }
  int position(int id) const;

  void set_threads(int n) { threads_ = n < 1 ? 1 : n; }
  int threads() const { return threads_; }

  void alloc(int id, bool plus);
  // removes a qubit that is known to be in the basis state |value>
  void drop(int id, int value);
  void apply(const LocalOp& op);
  void apply(const OperatorExpr& op);
  double prob_one(int id) const;
  void project(int id, int value);
  cplx expval(const OperatorExpr& op) const;

  virtual double norm2() const = 0;
  void normalize();
  // this += a * other; other must hold the same qubits (any order)
  void axpy(cplx a, const State& other);
  void scale(cplx a);

  // amplitude of a basis index written in this register's order
  virtual cplx amplitude(std::uint64_t index) const = 0;
  // nonzero amplitudes in increasing index order
  virtual void for_each_nonzero(const std::function<void(std::uint64_t, cplx)>& fn) const = 0;
  virtual void set_amplitude(std::uint64_t index, cplx a) = 0;

  std::uint64_t index_in(const State& other, std::uint64_t index_here) const;

 protected:
  virtual void grow(bool plus) = 0;
  virtual double remove_bit(int pos, int value) = 0;
  virtual void apply_local(const std::vector<int>& pos, const std::vector<cplx>& m) = 0;
  virtual double prob_one_pos(int pos) const = 0;
  virtual void project_pos(int pos, int value, double scale) = 0;
  struct Monomial {
    std::uint64_t xmask = 0;
    std::uint64_t zmask = 0;
    std::vector<std::pair<int, int>> cz;
    cplx coeff{1.0, 0.0};
    double sign(std::uint64_t x) const;
  };
  virtual void apply_monomial(const Monomial& m) = 0;
  virtual cplx expval_monomial(const Monomial& m) const = 0;
  virtual void scale_all(cplx a) = 0;

  Monomial monomial(const OperatorExpr& op) const;

  std::vector<int> qubits_;
  std::unordered_map<int, int> pos_;
  int threads_ = 1;
};

std::unique_ptr<State> make_state(Backend backend, Precision precision = Precision::C128);
std::unique_ptr<State> make_state_like(const State& s);

// <a|b>
cplx overlap(const State& a, const State& b);
double fidelity(const State& a, const State& b);

std::size_t dense_bytes(int num_qubits, Precision p);

}  // namespace d4
