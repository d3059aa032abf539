#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "d4/state.hpp"

namespace d4 {

enum class Op : std::uint8_t {
  Alloc,
  H,
  X,
  Y,
  Z,
  S,
  Sdg,
  CZ,
  CNOT,
  CCZ,
  CCX,
  ZZPhase,   // exp(-i theta/2 Z Z)
  ZZZPhase,  // exp(+i theta Z Z Z)
  MeasureX,
  MeasureZ,
  Drop,
  CondZ,
  CondProgram,
  FeedForward,
  Barrier,
};

const char* op_name(Op op);
Op parse_op(const std::string& name);
bool is_unitary(Op op);

struct ShotRecord {
  std::uint64_t seed = 0;
  std::vector<std::string> order;
  std::map<std::string, int> bits;
  bool herald = false;
  std::map<std::string, std::vector<std::string>> settings;

  bool has(const std::string& label) const { return bits.count(label) != 0; }
  int bit(const std::string& label) const;
  void set(const std::string& label, int value);
};

class Program;
using FeedForwardFn = std::function<Program(ShotRecord&)>;

struct Instruction {
  Op op = Op::Barrier;
  std::vector<int> controls;  // quantum controls added by controlled()
  std::vector<int> qubits;
  double theta = 0.0;
  bool plus = false;                   // Alloc basis
  std::string label;                   // measured bit, barrier or feed-forward name
  std::vector<std::string> condition;  // XOR of measured bits
  std::shared_ptr<const Program> body;
  FeedForwardFn feed;

  std::vector<int> all_qubits() const;
};

class Program {
 public:
  std::vector<Instruction> ins;

  Program& alloc(int q, bool plus = false);
  Program& h(int q) { return gate(Op::H, {q}); }
  Program& x(int q) { return gate(Op::X, {q}); }
  Program& y(int q) { return gate(Op::Y, {q}); }
  Program& z(int q) { return gate(Op::Z, {q}); }
  Program& s(int q) { return gate(Op::S, {q}); }
  Program& sdg(int q) { return gate(Op::Sdg, {q}); }
  Program& cz(int a, int b) { return gate(Op::CZ, {a, b}); }
  Program& cnot(int c, int t) { return gate(Op::CNOT, {c, t}); }
  Program& ccz(int a, int b, int c) { return gate(Op::CCZ, {a, b, c}); }
  Program& ccx(int a, int b, int t) { return gate(Op::CCX, {a, b, t}); }
  Program& zz_phase(int a, int b, double theta);
  Program& zzz_phase(int a, int b, int c, double theta);
  Program& measure_x(int q, const std::string& label);
  Program& measure_z(int q, const std::string& label);
  Program& drop(int q);
  Program& cond_z(int q, std::vector<std::string> bits);
  Program& cond_program(Program body, std::vector<std::string> bits);
  Program& feed_forward(const std::string& name, FeedForwardFn fn);
  Program& barrier(const std::string& label = {});
  Program& gate(Op op, std::vector<int> qubits, double theta = 0.0);
  Program& append(const Program& other);

  std::size_t size() const { return ins.size(); }
  bool empty() const { return ins.empty(); }
};

// ancilla-controlled version of a unitary program
Program controlled(const Program& program, int ancilla);
// U^dagger of a unitary program
Program inverse(const Program& program);

LocalOp gate_matrix(const Instruction& in);

// static peak of the live register; feed-forward bodies are assumed not to allocate
int peak_register(const Program& program, int live_at_start = 0);
int circuit_depth(const Program& program);

}  // namespace d4
