#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "d4/program.hpp"
#include "d4/rng.hpp"
#include "d4/state.hpp"

namespace d4 {

struct RunOptions {
  Backend backend = Backend::Sparse;
  Precision precision = Precision::C128;
  int register_cap = 30;
  std::size_t memory_limit = 0;  // bytes; 0 means the host's available memory
  int threads = 0;               // 0 means default_threads()
  std::map<std::string, int> forced;  // measured bit label -> forced outcome bit
  bool check_norm = true;
};

struct RunResult {
  std::unique_ptr<State> state;
  ShotRecord record;
};

std::size_t available_memory();

// Fresh state, then every instruction in order. Measurement randomness comes from the
// stream (seed, 0).
RunResult run(const Program& program, std::uint64_t seed, const RunOptions& options = {});

class Executor {
 public:
  Executor(State& state, ShotRecord& record, Rng& rng, const RunOptions& options);
  void execute(const Program& program);

 private:
  State& state_;
  ShotRecord& record_;
  Rng& rng_;
  const RunOptions& options_;
  std::size_t memory_limit_;
  std::map<int, std::pair<Op, int>> measured_;  // qubit -> (basis, outcome bit)

  void step(const Instruction& in);
  int measure(int q, const std::string& label, bool x_basis);
  bool condition(const std::vector<std::string>& bits) const;
  void check_norm(const Instruction& in) const;
};

// Measurement setting: basis per qubit id ('X', 'Y' or 'Z'); unlisted qubits use Z.
using Setting = std::map<int, char>;

struct Samples {
  std::vector<int> qubits;  // register order; bit k of a shot word is qubits[k]
  std::vector<std::uint64_t> shots;

  int value(std::size_t shot, int qubit) const;
  std::string bitstring(std::size_t shot) const;
};

Samples sample(const State& state, const Setting& setting, int shots, std::uint64_t seed);

// real part when |Im| is below 1e-9
double expval_real(const State& state, const OperatorExpr& op);

}  // namespace d4
