#include "d4/noise.hpp"

#include <cmath>

#include "d4/error.hpp"

namespace d4 {

NoiseModel NoiseModel::none() {
  NoiseModel m;
  m.p_depol2 = 0.0;
  m.p_read_0given1 = 0.0;
  m.p_read_1given0 = 0.0;
  m.gate_enabled = false;
  m.readout_enabled = false;
  return m;
}

void NoiseModel::validate() const {
  for (double p : {p_depol2, p_read_0given1, p_read_1given0})
    if (!(p >= 0.0 && p <= 1.0))
      throw Error(ErrorCode::OutOfRange, "noise probabilities must lie in [0, 1]");
  if (readout_enabled && 1.0 - p_read_0given1 - p_read_1given0 <= 0.0)
    throw Error(ErrorCode::OutOfRange, "readout transition matrix is not invertible");
}

bool NoiseModel::any() const {
  return (gate_enabled && p_depol2 > 0.0) ||
         (readout_enabled && (p_read_0given1 > 0.0 || p_read_1given0 > 0.0));
}

double NoiseModel::flip_probability(int true_bit) const {
  if (!readout_enabled) return 0.0;
  return true_bit ? p_read_0given1 : p_read_1given0;
}

std::array<double, 4> NoiseModel::readout_matrix() const {
  const double p10 = readout_enabled ? p_read_1given0 : 0.0;
  const double p01 = readout_enabled ? p_read_0given1 : 0.0;
  return {1.0 - p10, p01, p10, 1.0 - p01};
}

int flip_readout(int bit, const NoiseModel& model, Rng& rng) {
  const double p = model.flip_probability(bit);
  if (p > 0.0 && rng.uniform() < p) return bit ^ 1;
  return bit;
}

std::vector<int> apply_readout_noise(const std::vector<int>& bits, const NoiseModel& model,
                                     std::uint64_t seed) {
  model.validate();
  std::vector<int> out(bits.size());
  for (std::size_t k = 0; k < bits.size(); ++k) {
    Rng rng(seed, k);
    out[k] = flip_readout(bits[k] & 1, model, rng);
  }
  return out;
}

MitigatedEstimate mitigate_readout(const std::vector<std::uint32_t>& patterns, int support_size,
                                   const std::function<double(std::uint32_t)>& f,
                                   const NoiseModel& model) {
  if (support_size > 16)
    throw Error(ErrorCode::SupportTooLarge,
                "readout mitigation is exact only for supports of at most 16 qubits");
  if (support_size < 0) throw Error(ErrorCode::InvalidArgument, "negative support size");
  if (patterns.size() < 2) throw Error(ErrorCode::InvalidArgument, "need at least two shots");
  model.validate();
  auto m = model.readout_matrix();
  const double det = m[0] * m[3] - m[1] * m[2];
  const std::array<double, 4> inv = {m[3] / det, -m[1] / det, -m[2] / det, m[0] / det};

  const std::size_t dim = std::size_t{1} << support_size;
  std::vector<double> g(dim), raw(dim);
  for (std::size_t y = 0; y < dim; ++y) raw[y] = g[y] = f(static_cast<std::uint32_t>(y));
  for (int k = 0; k < support_size; ++k) {
    const std::size_t bit = std::size_t{1} << k;
    for (std::size_t x = 0; x < dim; ++x) {
      if (x & bit) continue;
      const double f0 = g[x], f1 = g[x | bit];
      g[x] = inv[0] * f0 + inv[2] * f1;
      g[x | bit] = inv[1] * f0 + inv[3] * f1;
    }
  }
  auto mean_sem = [&](const std::vector<double>& table) {
    double s = 0.0, s2 = 0.0;
    for (auto p : patterns) {
      if (p >= dim) throw Error(ErrorCode::OutOfRange, "pattern exceeds the support");
      s += table[p];
      s2 += table[p] * table[p];
    }
    const double n = static_cast<double>(patterns.size());
    const double mean = s / n;
    const double var = std::max(0.0, (s2 - n * mean * mean) / (n - 1.0));
    return std::pair{mean, std::sqrt(var / n)};
  };
  MitigatedEstimate e;
  std::tie(e.value, e.stderr_) = mean_sem(g);
  std::tie(e.raw, e.raw_stderr) = mean_sem(raw);
  return e;
}

namespace {

void insert_pauli(Program& out, int q, int code) {
  switch (code) {
    case 1: out.x(q); break;
    case 2: out.y(q); break;
    case 3: out.z(q); break;
    default: break;
  }
}

void maybe_fault(Program& out, int a, int b, const NoiseModel& model, Rng& rng) {
  if (rng.uniform() >= model.p_depol2) return;
  const int k = 1 + static_cast<int>(rng.below(15));
  insert_pauli(out, a, k & 3);
  insert_pauli(out, b, k >> 2);
}

Program noisy(const Program& program, const NoiseModel& model, Rng& rng) {
  Program out;
  for (const Instruction& in : program.ins) {
    if (in.op == Op::CondProgram && in.body) {
      Instruction c = in;
      c.body = std::make_shared<const Program>(noisy(*in.body, model, rng));
      out.ins.push_back(std::move(c));
      continue;
    }
    out.ins.push_back(in);
    if (!in.controls.empty()) continue;
    switch (in.op) {
      case Op::CZ:
      case Op::CNOT:
      case Op::ZZPhase:
        maybe_fault(out, in.qubits[0], in.qubits[1], model, rng);
        break;
      case Op::ZZZPhase:
        maybe_fault(out, in.qubits[0], in.qubits[1], model, rng);
        maybe_fault(out, in.qubits[1], in.qubits[2], model, rng);
        maybe_fault(out, in.qubits[0], in.qubits[1], model, rng);
        break;
      default:
        break;
    }
  }
  return out;
}

}  // namespace

Program apply_gate_noise(const Program& program, const NoiseModel& model, std::uint64_t seed) {
  model.validate();
  if (!model.gate_enabled || model.p_depol2 <= 0.0) return program;
  Rng rng(seed, 0x6a7e);
  return noisy(program, model, rng);
}

}  // namespace d4
