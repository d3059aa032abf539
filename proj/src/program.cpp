#include "d4/program.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>
#include <set>

#include "d4/error.hpp"

namespace d4 {

namespace {

struct OpInfo {
  Op op;
  const char* name;
};

constexpr OpInfo kOps[] = {
    {Op::Alloc, "Alloc"},       {Op::H, "H"},
    {Op::X, "X"},               {Op::Y, "Y"},
    {Op::Z, "Z"},               {Op::S, "S"},
    {Op::Sdg, "Sdg"},           {Op::CZ, "CZ"},
    {Op::CNOT, "CNOT"},         {Op::CCZ, "CCZ"},
    {Op::CCX, "CCX"},           {Op::ZZPhase, "ZZPhase"},
    {Op::ZZZPhase, "ZZZPhase"}, {Op::MeasureX, "MeasureX"},
    {Op::MeasureZ, "MeasureZ"}, {Op::Drop, "Drop"},
    {Op::CondZ, "CondZ"},       {Op::CondProgram, "CondProgram"},
    {Op::FeedForward, "FeedForward"}, {Op::Barrier, "Barrier"},
};

int expected_arity(Op op) {
  switch (op) {
    case Op::H: case Op::X: case Op::Y: case Op::Z: case Op::S: case Op::Sdg:
    case Op::Alloc: case Op::MeasureX: case Op::MeasureZ: case Op::Drop: case Op::CondZ:
      return 1;
    case Op::CZ: case Op::CNOT: case Op::ZZPhase:
      return 2;
    case Op::CCZ: case Op::CCX: case Op::ZZZPhase:
      return 3;
    default:
      return 0;
  }
}

using M = std::vector<cplx>;

M base_matrix(Op op, double theta) {
  const cplx I(0.0, 1.0);
  const double r = 1.0 / std::sqrt(2.0);
  switch (op) {
    case Op::H: return {r, r, r, -r};
    case Op::X: return {0, 1, 1, 0};
    case Op::Y: return {0, -I, I, 0};
    case Op::Z: return {1, 0, 0, -1};
    case Op::S: return {1, 0, 0, I};
    case Op::Sdg: return {1, 0, 0, -I};
    default: break;
  }
  auto diag = [](const std::vector<cplx>& d) {
    const std::size_t n = d.size();
    M m(n * n, 0.0);
    for (std::size_t k = 0; k < n; ++k) m[k * n + k] = d[k];
    return m;
  };
  switch (op) {
    case Op::CZ: return diag({1, 1, 1, -1});
    case Op::CCZ: return diag({1, 1, 1, 1, 1, 1, 1, -1});
    case Op::CNOT: {
      // qubits (c, t): local bit 0 = c, bit 1 = t
      M m(16, 0.0);
      for (int x = 0; x < 4; ++x) {
        int y = (x & 1) ? x ^ 2 : x;
        m[y * 4 + x] = 1.0;
      }
      return m;
    }
    case Op::CCX: {
      M m(64, 0.0);
      for (int x = 0; x < 8; ++x) {
        int y = ((x & 3) == 3) ? x ^ 4 : x;
        m[y * 8 + x] = 1.0;
      }
      return m;
    }
    case Op::ZZPhase: {
      std::vector<cplx> d(4);
      for (int x = 0; x < 4; ++x) {
        double zz = (std::popcount(static_cast<unsigned>(x)) & 1) ? -1.0 : 1.0;
        d[x] = std::exp(-I * (theta / 2.0) * zz);
      }
      return diag(d);
    }
    case Op::ZZZPhase: {
      std::vector<cplx> d(8);
      for (int x = 0; x < 8; ++x) {
        double zzz = (std::popcount(static_cast<unsigned>(x)) & 1) ? -1.0 : 1.0;
        d[x] = std::exp(I * theta * zzz);
      }
      return diag(d);
    }
    default:
      throw Error(ErrorCode::NonUnitaryInstruction, std::string(op_name(op)) + " has no matrix");
  }
}

}  // namespace

const char* op_name(Op op) {
  for (const auto& info : kOps)
    if (info.op == op) return info.name;
  return "?";
}

Op parse_op(const std::string& name) {
  for (const auto& info : kOps)
    if (name == info.name) return info.op;
  throw Error(ErrorCode::InvalidArgument, "unknown instruction '" + name + "'");
}

bool is_unitary(Op op) {
  switch (op) {
    case Op::Alloc: case Op::MeasureX: case Op::MeasureZ: case Op::Drop: case Op::CondZ:
    case Op::CondProgram: case Op::FeedForward:
      return false;
    default:
      return true;
  }
}

int ShotRecord::bit(const std::string& label) const {
  auto it = bits.find(label);
  if (it == bits.end())
    throw Error(ErrorCode::InvalidCondition, "bit '" + label + "' has not been measured");
  return it->second;
}

void ShotRecord::set(const std::string& label, int value) {
  if (!has(label)) order.push_back(label);
  bits[label] = value;
}

std::vector<int> Instruction::all_qubits() const {
  std::vector<int> out = controls;
  out.insert(out.end(), qubits.begin(), qubits.end());
  return out;
}

Program& Program::gate(Op op, std::vector<int> qubits, double theta) {
  if (static_cast<int>(qubits.size()) != expected_arity(op))
    throw Error(ErrorCode::InvalidArgument,
                std::string(op_name(op)) + " takes " + std::to_string(expected_arity(op)) + " qubits");
  if (std::set<int>(qubits.begin(), qubits.end()).size() != qubits.size())
    throw Error(ErrorCode::InvalidArgument, std::string(op_name(op)) + " repeats a qubit");
  Instruction in;
  in.op = op;
  in.qubits = std::move(qubits);
  in.theta = theta;
  ins.push_back(std::move(in));
  return *this;
}

Program& Program::alloc(int q, bool plus) {
  Instruction in;
  in.op = Op::Alloc;
  in.qubits = {q};
  in.plus = plus;
  ins.push_back(std::move(in));
  return *this;
}

Program& Program::zz_phase(int a, int b, double theta) { return gate(Op::ZZPhase, {a, b}, theta); }

Program& Program::zzz_phase(int a, int b, int c, double theta) {
  return gate(Op::ZZZPhase, {a, b, c}, theta);
}

Program& Program::measure_x(int q, const std::string& label) {
  gate(Op::MeasureX, {q});
  ins.back().label = label;
  return *this;
}

Program& Program::measure_z(int q, const std::string& label) {
  gate(Op::MeasureZ, {q});
  ins.back().label = label;
  return *this;
}

Program& Program::drop(int q) { return gate(Op::Drop, {q}); }

Program& Program::cond_z(int q, std::vector<std::string> bits) {
  gate(Op::CondZ, {q});
  ins.back().condition = std::move(bits);
  return *this;
}

Program& Program::cond_program(Program body, std::vector<std::string> bits) {
  Instruction in;
  in.op = Op::CondProgram;
  in.condition = std::move(bits);
  in.body = std::make_shared<const Program>(std::move(body));
  ins.push_back(std::move(in));
  return *this;
}

Program& Program::feed_forward(const std::string& name, FeedForwardFn fn) {
  Instruction in;
  in.op = Op::FeedForward;
  in.label = name;
  in.feed = std::move(fn);
  ins.push_back(std::move(in));
  return *this;
}

Program& Program::barrier(const std::string& label) {
  Instruction in;
  in.op = Op::Barrier;
  in.label = label;
  ins.push_back(std::move(in));
  return *this;
}

Program& Program::append(const Program& other) {
  ins.insert(ins.end(), other.ins.begin(), other.ins.end());
  return *this;
}

Program controlled(const Program& program, int ancilla) {
  Program out;
  for (const Instruction& in : program.ins) {
    if (!is_unitary(in.op))
      throw Error(ErrorCode::NonUnitaryInstruction,
                  std::string("cannot control ") + op_name(in.op));
    for (int q : in.all_qubits())
      if (q == ancilla)
        throw Error(ErrorCode::InvalidArgument, "control qubit is used by the program");
    if (in.op == Op::Barrier) {
      out.ins.push_back(in);
      continue;
    }
    Instruction c = in;
    if (in.controls.empty()) {
      switch (in.op) {
        case Op::X:
          c.op = Op::CNOT;
          c.qubits = {ancilla, in.qubits[0]};
          out.ins.push_back(c);
          continue;
        case Op::Z:
          c.op = Op::CZ;
          c.qubits = {ancilla, in.qubits[0]};
          out.ins.push_back(c);
          continue;
        case Op::CNOT:
          c.op = Op::CCX;
          c.qubits = {ancilla, in.qubits[0], in.qubits[1]};
          out.ins.push_back(c);
          continue;
        case Op::CZ:
          c.op = Op::CCZ;
          c.qubits = {ancilla, in.qubits[0], in.qubits[1]};
          out.ins.push_back(c);
          continue;
        default:
          break;
      }
    }
    c.controls.insert(c.controls.begin(), ancilla);
    out.ins.push_back(c);
  }
  return out;
}

Program inverse(const Program& program) {
  Program out;
  for (auto it = program.ins.rbegin(); it != program.ins.rend(); ++it) {
    if (!is_unitary(it->op))
      throw Error(ErrorCode::NonUnitaryInstruction,
                  std::string("cannot invert ") + op_name(it->op));
    Instruction in = *it;
    switch (in.op) {
      case Op::S: in.op = Op::Sdg; break;
      case Op::Sdg: in.op = Op::S; break;
      case Op::ZZPhase: case Op::ZZZPhase: in.theta = -in.theta; break;
      default: break;
    }
    out.ins.push_back(in);
  }
  return out;
}

LocalOp gate_matrix(const Instruction& in) {
  M base = base_matrix(in.op, in.theta);
  LocalOp op;
  op.qubits = in.all_qubits();
  const int nc = static_cast<int>(in.controls.size());
  const int nt = static_cast<int>(in.qubits.size());
  const int dt = 1 << nt, d = 1 << (nc + nt);
  const int cmask = (1 << nc) - 1;
  op.m.assign(static_cast<std::size_t>(d) * d, 0.0);
  for (int x = 0; x < d; ++x) {
    if ((x & cmask) != cmask) {
      op.m[x * d + x] = 1.0;
      continue;
    }
    for (int r = 0; r < dt; ++r) {
      int y = (x & cmask) | (r << nc);
      op.m[y * d + x] = base[r * dt + (x >> nc)];
    }
  }
  return op;
}

int peak_register(const Program& program, int live_at_start) {
  int live = live_at_start, peak = live_at_start;
  for (const Instruction& in : program.ins) {
    if (in.op == Op::Alloc) peak = std::max(peak, ++live);
    if (in.op == Op::Drop) --live;
    if (in.op == Op::CondProgram && in.body) peak = std::max(peak, peak_register(*in.body, live));
  }
  return peak;
}

int circuit_depth(const Program& program) {
  std::map<int, int> level;
  int depth = 0;
  for (const Instruction& in : program.ins) {
    if (in.op == Op::Barrier || in.op == Op::FeedForward || in.op == Op::CondProgram) continue;
    auto qs = in.all_qubits();
    int l = 0;
    for (int q : qs) l = std::max(l, level[q]);
    if (in.op == Op::Alloc || in.op == Op::Drop) {
      for (int q : qs) level[q] = l;
      continue;
    }
    for (int q : qs) level[q] = l + 1;
    depth = std::max(depth, l + 1);
  }
  return depth;
}

}  // namespace d4
