#include "d4/engine.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "d4/error.hpp"
#include "d4/parallel.hpp"

namespace d4 {

std::size_t available_memory() {
  std::ifstream in("/proc/meminfo");
  std::string line;
  while (std::getline(in, line)) {
    if (line.rfind("MemAvailable:", 0) == 0) {
      std::istringstream ss(line.substr(13));
      std::size_t kb = 0;
      ss >> kb;
      return kb * 1024;
    }
  }
  return std::size_t{8} << 30;
}

namespace {
std::size_t resolve_limit(const RunOptions& o) {
  return o.memory_limit ? o.memory_limit : available_memory();
}
}  // namespace

RunResult run(const Program& program, std::uint64_t seed, const RunOptions& options) {
  const int peak = peak_register(program);
  if (peak > options.register_cap)
    throw Error(ErrorCode::RegisterOverflow, "program needs " + std::to_string(peak) +
                                                 " live qubits, register cap is " +
                                                 std::to_string(options.register_cap));
  if (options.backend == Backend::Dense &&
      dense_bytes(peak, options.precision) > resolve_limit(options))
    throw Error(ErrorCode::MemoryLimit,
                "a dense " + std::to_string(peak) + "-qubit register at " +
                    precision_name(options.precision) + " does not fit in memory");
  RunResult out;
  out.state = make_state(options.backend, options.precision);
  out.state->set_threads(options.threads > 0 ? options.threads : default_threads());
  out.record.seed = seed;
  Rng rng(seed, 0);
  Executor ex(*out.state, out.record, rng, options);
  ex.execute(program);
  return out;
}

Executor::Executor(State& state, ShotRecord& record, Rng& rng, const RunOptions& options)
    : state_(state), record_(record), rng_(rng), options_(options),
      memory_limit_(resolve_limit(options)) {}

void Executor::execute(const Program& program) {
  for (const Instruction& in : program.ins) step(in);
}

bool Executor::condition(const std::vector<std::string>& bits) const {
  int parity = 0;
  for (const auto& b : bits) {
    if (!record_.has(b))
      throw Error(ErrorCode::InvalidCondition, "condition on unmeasured bit '" + b + "'");
    parity ^= record_.bit(b);
  }
  return parity != 0;
}

int Executor::measure(int q, const std::string& label, bool x_basis) {
  if (label.empty()) throw Error(ErrorCode::InvalidArgument, "measurement needs a bit label");
  Instruction h;
  h.op = Op::H;
  h.qubits = {q};
  if (x_basis) state_.apply(gate_matrix(h));
  int outcome;
  auto forced = options_.forced.find(label);
  if (forced != options_.forced.end()) {
    outcome = forced->second ? 1 : 0;
  } else {
    double p1 = state_.prob_one(q);
    outcome = rng_.uniform() < p1 ? 1 : 0;
  }
  state_.project(q, outcome);
  if (x_basis) state_.apply(gate_matrix(h));
  record_.set(label, outcome);
  measured_[q] = {x_basis ? Op::MeasureX : Op::MeasureZ, outcome};
  return outcome;
}

void Executor::check_norm(const Instruction& in) const {
  if (!options_.check_norm) return;
  const double tol = state_.precision() == Precision::C64 ? 1e-6 : 1e-12;
  const double n2 = state_.norm2();
  if (std::abs(n2 - 1.0) > tol * std::max(1.0, static_cast<double>(state_.num_qubits())))
    throw Error(ErrorCode::Internal, std::string("norm drifted to ") + std::to_string(n2) +
                                         " after " + op_name(in.op));
}

void Executor::step(const Instruction& in) {
  switch (in.op) {
    case Op::Barrier:
      return;
    case Op::Alloc: {
      const int n = state_.num_qubits() + 1;
      if (n > options_.register_cap)
        throw Error(ErrorCode::RegisterOverflow,
                    "allocating qubit " + std::to_string(in.qubits[0]) + " exceeds the register cap of " +
                        std::to_string(options_.register_cap));
      if (state_.backend() == Backend::Dense && dense_bytes(n, state_.precision()) > memory_limit_)
        throw Error(ErrorCode::MemoryLimit, "dense register of " + std::to_string(n) +
                                                " qubits does not fit in memory");
      state_.alloc(in.qubits[0], in.plus);
      measured_.erase(in.qubits[0]);
      break;
    }
    case Op::MeasureX:
    case Op::MeasureZ:
      measure(in.qubits[0], in.label, in.op == Op::MeasureX);
      break;
    case Op::Drop: {
      const int q = in.qubits[0];
      auto it = measured_.find(q);
      if (it == measured_.end())
        throw Error(ErrorCode::InvalidArgument,
                    "qubit " + std::to_string(q) + " is dropped without a measurement");
      if (it->second.first == Op::MeasureX) {
        Instruction h;
        h.op = Op::H;
        h.qubits = {q};
        state_.apply(gate_matrix(h));
      }
      state_.drop(q, it->second.second);
      measured_.erase(it);
      break;
    }
    case Op::CondZ:
      if (condition(in.condition)) {
        Instruction z;
        z.op = Op::Z;
        z.qubits = in.qubits;
        state_.apply(gate_matrix(z));
        measured_.erase(in.qubits[0]);
      }
      break;
    case Op::CondProgram:
      if (condition(in.condition) && in.body) execute(*in.body);
      return;
    case Op::FeedForward:
      if (!in.feed) throw Error(ErrorCode::InvalidArgument, "feed-forward step has no callback");
      execute(in.feed(record_));
      return;
    default:
      state_.apply(gate_matrix(in));
      for (int q : in.all_qubits()) measured_.erase(q);
      break;
  }
  if (state_.backend() == Backend::Sparse && state_.bytes() > memory_limit_)
    throw Error(ErrorCode::MemoryLimit, "sparse state outgrew the memory limit");
  check_norm(in);
}

int Samples::value(std::size_t shot, int qubit) const {
  for (std::size_t k = 0; k < qubits.size(); ++k)
    if (qubits[k] == qubit) return static_cast<int>(shots.at(shot) >> k & 1);
  throw Error(ErrorCode::UnknownQubit, "qubit " + std::to_string(qubit) + " was not sampled");
}

std::string Samples::bitstring(std::size_t shot) const {
  std::string s;
  for (std::size_t k = 0; k < qubits.size(); ++k) s.push_back((shots.at(shot) >> k & 1) ? '1' : '0');
  return s;
}

Samples sample(const State& state, const Setting& setting, int shots, std::uint64_t seed) {
  if (shots < 0) throw Error(ErrorCode::InvalidArgument, "negative shot count");
  auto rotated = state.clone();
  for (const auto& [q, basis] : setting) {
    Instruction in;
    in.qubits = {q};
    if (basis == 'X' || basis == 'x') {
      in.op = Op::H;
      rotated->apply(gate_matrix(in));
    } else if (basis == 'Y' || basis == 'y') {
      in.op = Op::Sdg;
      rotated->apply(gate_matrix(in));
      in.op = Op::H;
      rotated->apply(gate_matrix(in));
    } else if (basis == 'Z' || basis == 'z') {
      rotated->position(q);
    } else {
      throw Error(ErrorCode::InvalidArgument, std::string("unknown basis '") + basis + "'");
    }
  }
  std::vector<std::uint64_t> index;
  std::vector<double> cdf;
  double acc = 0.0;
  rotated->for_each_nonzero([&](std::uint64_t x, cplx a) {
    double p = std::norm(a);
    if (p <= 0.0) return;
    acc += p;
    index.push_back(x);
    cdf.push_back(acc);
  });
  Samples out;
  out.qubits = rotated->qubits();
  out.shots.resize(shots);
  for (int s = 0; s < shots; ++s) {
    Rng rng(seed, static_cast<std::uint64_t>(s));
    double u = rng.uniform() * acc;
    auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
    std::size_t k = std::min<std::size_t>(it - cdf.begin(), cdf.size() - 1);
    out.shots[s] = index[k];
  }
  return out;
}

double expval_real(const State& state, const OperatorExpr& op) {
  cplx v = state.expval(op);
  if (std::abs(v.imag()) >= 1e-9)
    throw Error(ErrorCode::InvalidArgument, "expectation value is not real");
  return v.real();
}

}  // namespace d4
