#include "d4/state.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <set>

#include "d4/error.hpp"
#include "d4/parallel.hpp"

namespace d4 {

namespace {

constexpr std::size_t kBlock = std::size_t{1} << 14;
constexpr double kPrune = 1e-14;

std::uint64_t bit(int p) { return std::uint64_t{1} << p; }

// spreads the bits of `counter` over the positions not in sorted `pos`
std::uint64_t insert_zeros(std::uint64_t counter, const std::vector<int>& sorted_pos) {
  for (int p : sorted_pos) {
    std::uint64_t low = counter & (bit(p) - 1);
    counter = ((counter >> p) << (p + 1)) | low;
  }
  return counter;
}

std::uint64_t scatter_local(int r, const std::vector<int>& pos) {
  std::uint64_t out = 0;
  for (std::size_t k = 0; k < pos.size(); ++k)
    if (r >> k & 1) out |= bit(pos[k]);
  return out;
}

int gather_local(std::uint64_t x, const std::vector<int>& pos) {
  int c = 0;
  for (std::size_t k = 0; k < pos.size(); ++k)
    if (x >> pos[k] & 1) c |= 1 << k;
  return c;
}

// non-zero entries of each column of a local matrix
struct Columns {
  int dim;
  std::vector<std::vector<std::pair<int, cplx>>> col;
  Columns(const std::vector<cplx>& m, int d) : dim(d), col(d) {
    for (int c = 0; c < d; ++c)
      for (int r = 0; r < d; ++r)
        if (m[r * d + c] != cplx(0.0, 0.0)) col[c].emplace_back(r, m[r * d + c]);
  }
};

template <class T>
class DenseState final : public State {
 public:
  using amp_t = std::complex<T>;

  DenseState() : amps_(1, amp_t(1)) {}

  std::unique_ptr<State> clone() const override { return std::make_unique<DenseState>(*this); }
  Backend backend() const override { return Backend::Dense; }
  Precision precision() const override {
    return sizeof(T) == sizeof(float) ? Precision::C64 : Precision::C128;
  }
  std::size_t support_size() const override {
    std::size_t n = 0;
    for (const auto& a : amps_)
      if (a != amp_t(0)) ++n;
    return n;
  }
  std::size_t bytes() const override { return amps_.size() * sizeof(amp_t); }

  double norm2() const override {
    std::vector<double> part((amps_.size() + kBlock - 1) / kBlock, 0.0);
    parallel_blocks(amps_.size(), kBlock, threads_, [&](std::size_t b, std::size_t lo, std::size_t hi) {
      double s = 0.0;
      for (std::size_t x = lo; x < hi; ++x) s += std::norm(std::complex<double>(amps_[x]));
      part[b] = s;
    });
    return pairwise_sum(std::move(part));
  }

  cplx amplitude(std::uint64_t index) const override {
    if (index >= amps_.size()) return 0.0;
    return cplx(amps_[index]);
  }

  void for_each_nonzero(const std::function<void(std::uint64_t, cplx)>& fn) const override {
    for (std::uint64_t x = 0; x < amps_.size(); ++x)
      if (amps_[x] != amp_t(0)) fn(x, cplx(amps_[x]));
  }

  void set_amplitude(std::uint64_t index, cplx a) override {
    if (index >= amps_.size()) throw Error(ErrorCode::IndexOutOfRange, "basis index out of range");
    amps_[index] = amp_t(a);
  }

 protected:
  void grow(bool plus) override {
    const std::size_t n = amps_.size();
    amps_.resize(2 * n, amp_t(0));
    if (plus) {
      const T r = static_cast<T>(1.0 / std::sqrt(2.0));
      for (std::size_t x = 0; x < n; ++x) {
        amps_[x] *= r;
        amps_[x + n] = amps_[x];
      }
    }
  }

  double remove_bit(int p, int value) override {
    const std::size_t n = amps_.size() / 2;
    std::vector<amp_t> out(n);
    double leaked = 0.0;
    for (std::uint64_t y = 0; y < n; ++y) {
      std::uint64_t low = y & (bit(p) - 1);
      std::uint64_t x = ((y >> p) << (p + 1)) | low | (value ? bit(p) : 0);
      out[y] = amps_[x];
      leaked += std::norm(std::complex<double>(amps_[x ^ bit(p)]));
    }
    amps_.swap(out);
    return leaked;
  }

  void apply_local(const std::vector<int>& pos, const std::vector<cplx>& m) override {
    const int k = static_cast<int>(pos.size());
    const int d = 1 << k;
    Columns cols(m, d);
    std::vector<int> sorted = pos;
    std::sort(sorted.begin(), sorted.end());
    std::vector<std::uint64_t> offs(d);
    for (int r = 0; r < d; ++r) offs[r] = scatter_local(r, pos);
    const std::size_t nbase = amps_.size() >> k;
    parallel_blocks(nbase, kBlock, threads_, [&](std::size_t, std::size_t lo, std::size_t hi) {
      std::vector<cplx> in(d), out(d);
      for (std::size_t c = lo; c < hi; ++c) {
        std::uint64_t base = insert_zeros(c, sorted);
        for (int r = 0; r < d; ++r) {
          in[r] = cplx(amps_[base | offs[r]]);
          out[r] = 0.0;
        }
        for (int cc = 0; cc < d; ++cc) {
          if (in[cc] == cplx(0.0, 0.0)) continue;
          for (const auto& [r, v] : cols.col[cc]) out[r] += v * in[cc];
        }
        for (int r = 0; r < d; ++r) amps_[base | offs[r]] = amp_t(out[r]);
      }
    });
  }

  double prob_one_pos(int p) const override {
    std::vector<double> part((amps_.size() + kBlock - 1) / kBlock, 0.0);
    parallel_blocks(amps_.size(), kBlock, threads_, [&](std::size_t b, std::size_t lo, std::size_t hi) {
      double s = 0.0;
      for (std::size_t x = lo; x < hi; ++x)
        if (x >> p & 1) s += std::norm(std::complex<double>(amps_[x]));
      part[b] = s;
    });
    return pairwise_sum(std::move(part));
  }

  void project_pos(int p, int value, double scale) override {
    parallel_blocks(amps_.size(), kBlock, threads_, [&](std::size_t, std::size_t lo, std::size_t hi) {
      for (std::size_t x = lo; x < hi; ++x) {
        if (static_cast<int>(x >> p & 1) == value)
          amps_[x] *= static_cast<T>(scale);
        else
          amps_[x] = amp_t(0);
      }
    });
  }

  void apply_monomial(const Monomial& mo) override {
    if (mo.xmask == 0) {
      parallel_blocks(amps_.size(), kBlock, threads_, [&](std::size_t, std::size_t lo, std::size_t hi) {
        for (std::size_t x = lo; x < hi; ++x)
          amps_[x] = amp_t(mo.coeff * mo.sign(x) * cplx(amps_[x]));
      });
      return;
    }
    const int top = 63 - std::countl_zero(mo.xmask);
    const std::vector<int> sorted{top};
    parallel_blocks(amps_.size() / 2, kBlock, threads_, [&](std::size_t, std::size_t lo, std::size_t hi) {
      for (std::size_t c = lo; c < hi; ++c) {
        std::uint64_t x = insert_zeros(c, sorted);
        std::uint64_t y = x ^ mo.xmask;
        cplx a(amps_[x]), b(amps_[y]);
        amps_[y] = amp_t(mo.coeff * mo.sign(x) * a);
        amps_[x] = amp_t(mo.coeff * mo.sign(y) * b);
      }
    });
  }

  cplx expval_monomial(const Monomial& mo) const override {
    std::vector<cplx> part((amps_.size() + kBlock - 1) / kBlock, 0.0);
    parallel_blocks(amps_.size(), kBlock, threads_, [&](std::size_t b, std::size_t lo, std::size_t hi) {
      cplx s = 0.0;
      for (std::size_t x = lo; x < hi; ++x) {
        if (amps_[x] == amp_t(0)) continue;
        s += std::conj(cplx(amps_[x ^ mo.xmask])) * mo.sign(x) * cplx(amps_[x]);
      }
      part[b] = s;
    });
    return mo.coeff * pairwise_reduce(std::move(part));
  }

  void scale_all(cplx a) override {
    for (auto& v : amps_) v = amp_t(a * cplx(v));
  }

 private:
  std::vector<amp_t> amps_;
};

class SparseState final : public State {
 public:
  SparseState() { amps_[0] = 1.0; }

  std::unique_ptr<State> clone() const override { return std::make_unique<SparseState>(*this); }
  Backend backend() const override { return Backend::Sparse; }
  Precision precision() const override { return Precision::C128; }
  std::size_t support_size() const override { return amps_.size(); }
  std::size_t bytes() const override { return amps_.size() * (sizeof(std::uint64_t) + sizeof(cplx) + 16); }

  double norm2() const override {
    double s = 0.0;
    for (const auto& x : sorted_keys()) s += std::norm(amps_.at(x));
    return s;
  }

  cplx amplitude(std::uint64_t index) const override {
    auto it = amps_.find(index);
    return it == amps_.end() ? cplx(0.0) : it->second;
  }

  void for_each_nonzero(const std::function<void(std::uint64_t, cplx)>& fn) const override {
    for (auto x : sorted_keys()) fn(x, amps_.at(x));
  }

  void set_amplitude(std::uint64_t index, cplx a) override {
    if (num_qubits() < 64 && index >= bit(num_qubits()))
      throw Error(ErrorCode::IndexOutOfRange, "basis index out of range");
    if (std::abs(a) < kPrune)
      amps_.erase(index);
    else
      amps_[index] = a;
  }

 protected:
  void grow(bool plus) override {
    if (!plus) return;
    const std::uint64_t b = bit(num_qubits());
    const double r = 1.0 / std::sqrt(2.0);
    std::unordered_map<std::uint64_t, cplx> out;
    out.reserve(2 * amps_.size());
    for (const auto& [x, a] : amps_) {
      out[x] = a * r;
      out[x | b] = a * r;
    }
    amps_.swap(out);
  }

  double remove_bit(int p, int value) override {
    std::unordered_map<std::uint64_t, cplx> out;
    out.reserve(amps_.size());
    double leaked = 0.0;
    for (const auto& [x, a] : amps_) {
      if (static_cast<int>(x >> p & 1) != value) {
        leaked += std::norm(a);
        continue;
      }
      std::uint64_t low = x & (bit(p) - 1);
      out[((x >> (p + 1)) << p) | low] = a;
    }
    amps_.swap(out);
    return leaked;
  }

  void apply_local(const std::vector<int>& pos, const std::vector<cplx>& m) override {
    const int d = 1 << pos.size();
    Columns cols(m, d);
    std::uint64_t mask = 0;
    for (int p : pos) mask |= bit(p);
    std::vector<std::uint64_t> offs(d);
    for (int r = 0; r < d; ++r) offs[r] = scatter_local(r, pos);
    std::unordered_map<std::uint64_t, cplx> out;
    out.reserve(amps_.size());
    for (auto x : sorted_keys()) {
      const cplx a = amps_.at(x);
      const int c = gather_local(x, pos);
      const std::uint64_t base = x & ~mask;
      for (const auto& [r, v] : cols.col[c]) out[base | offs[r]] += v * a;
    }
    prune(out);
    amps_.swap(out);
  }

  double prob_one_pos(int p) const override {
    double s = 0.0;
    for (auto x : sorted_keys())
      if (x >> p & 1) s += std::norm(amps_.at(x));
    return s;
  }

  void project_pos(int p, int value, double scale) override {
    for (auto it = amps_.begin(); it != amps_.end();) {
      if (static_cast<int>(it->first >> p & 1) != value) {
        it = amps_.erase(it);
      } else {
        it->second *= scale;
        ++it;
      }
    }
  }

  void apply_monomial(const Monomial& mo) override {
    std::unordered_map<std::uint64_t, cplx> out;
    out.reserve(amps_.size());
    for (const auto& [x, a] : amps_) out[x ^ mo.xmask] = mo.coeff * mo.sign(x) * a;
    amps_.swap(out);
  }

  cplx expval_monomial(const Monomial& mo) const override {
    cplx s = 0.0;
    for (auto x : sorted_keys()) {
      auto it = amps_.find(x ^ mo.xmask);
      if (it == amps_.end()) continue;
      s += std::conj(it->second) * mo.sign(x) * amps_.at(x);
    }
    return mo.coeff * s;
  }

  void scale_all(cplx a) override {
    for (auto& [x, v] : amps_) v *= a;
  }

 private:
  std::unordered_map<std::uint64_t, cplx> amps_;

  std::vector<std::uint64_t> sorted_keys() const {
    std::vector<std::uint64_t> k;
    k.reserve(amps_.size());
    for (const auto& kv : amps_) k.push_back(kv.first);
    std::sort(k.begin(), k.end());
    return k;
  }

  static void prune(std::unordered_map<std::uint64_t, cplx>& m) {
    for (auto it = m.begin(); it != m.end();) {
      if (std::abs(it->second) < kPrune)
        it = m.erase(it);
      else
        ++it;
    }
  }
};

}  // namespace

const char* precision_name(Precision p) { return p == Precision::C64 ? "c64" : "c128"; }

Precision parse_precision(const std::string& s) {
  if (s == "c64") return Precision::C64;
  if (s == "c128") return Precision::C128;
  throw Error(ErrorCode::InvalidArgument, "unknown precision '" + s + "' (use c64 or c128)");
}

const char* backend_name(Backend b) { return b == Backend::Dense ? "dense" : "sparse"; }

Backend parse_backend(const std::string& s) {
  if (s == "dense") return Backend::Dense;
  if (s == "sparse") return Backend::Sparse;
  throw Error(ErrorCode::InvalidArgument, "unknown backend '" + s + "' (use dense or sparse)");
}

double State::Monomial::sign(std::uint64_t x) const {
  int par = std::popcount(x & zmask);
  for (auto [u, w] : cz) par += static_cast<int>((x >> u) & (x >> w) & 1);
  return (par & 1) ? -1.0 : 1.0;
}

int State::position(int id) const {
  auto it = pos_.find(id);
  if (it == pos_.end())
    throw Error(ErrorCode::UnknownQubit, "qubit " + std::to_string(id) + " is not live");
  return it->second;
}

void State::alloc(int id, bool plus) {
  if (has_qubit(id))
    throw Error(ErrorCode::InvalidArgument, "qubit " + std::to_string(id) + " is already live");
  if (num_qubits() >= 63) throw Error(ErrorCode::RegisterOverflow, "register exceeds 63 qubits");
  grow(plus);
  pos_[id] = num_qubits();
  qubits_.push_back(id);
}

void State::drop(int id, int value) {
  const int p = position(id);
  double leaked = remove_bit(p, value);
  if (leaked > 1e-8)
    throw Error(ErrorCode::Internal,
                "dropped qubit " + std::to_string(id) + " was not in a basis state");
  qubits_.erase(qubits_.begin() + p);
  pos_.erase(id);
  for (auto& [q, pp] : pos_)
    if (pp > p) --pp;
}

void State::apply(const LocalOp& op) {
  std::vector<int> pos;
  for (int q : op.qubits) pos.push_back(position(q));
  std::set<int> uniq(pos.begin(), pos.end());
  if (uniq.size() != pos.size())
    throw Error(ErrorCode::InvalidArgument, "gate acts twice on the same qubit");
  if (static_cast<int>(op.m.size()) != op.dim() * op.dim())
    throw Error(ErrorCode::DimensionMismatch, "gate matrix has the wrong size");
  apply_local(pos, op.m);
}

State::Monomial State::monomial(const OperatorExpr& op) const {
  Monomial m;
  m.coeff = op.coeff;
  for (int q : op.x) m.xmask ^= bit(position(q));
  for (int q : op.z) m.zmask ^= bit(position(q));
  for (auto [a, b] : op.cz) {
    int pa = position(a), pb = position(b);
    if (pa == pb)
      m.zmask ^= bit(pa);
    else
      m.cz.emplace_back(pa, pb);
  }
  return m;
}

void State::apply(const OperatorExpr& op) { apply_monomial(monomial(op)); }

cplx State::expval(const OperatorExpr& op) const { return expval_monomial(monomial(op)); }

double State::prob_one(int id) const { return prob_one_pos(position(id)); }

void State::project(int id, int value) {
  const int p = position(id);
  double p1 = prob_one_pos(p);
  double prob = value ? p1 : 1.0 - p1;
  if (prob < 1e-14)
    throw Error(ErrorCode::ZeroNormState,
                "projection of qubit " + std::to_string(id) + " has zero probability");
  project_pos(p, value, 1.0 / std::sqrt(prob));
}

void State::normalize() {
  double n2 = norm2();
  if (n2 < 1e-28) throw Error(ErrorCode::ZeroNormState, "state has zero norm");
  scale_all(1.0 / std::sqrt(n2));
}

void State::scale(cplx a) { scale_all(a); }

std::uint64_t State::index_in(const State& other, std::uint64_t index_here) const {
  std::uint64_t out = 0;
  for (int p = 0; p < num_qubits(); ++p)
    if (index_here >> p & 1) out |= bit(other.position(qubits_[p]));
  return out;
}

namespace {
void require_same_register(const State& a, const State& b) {
  if (a.num_qubits() != b.num_qubits())
    throw Error(ErrorCode::DimensionMismatch, "states hold different registers");
  for (int q : a.qubits())
    if (!b.has_qubit(q)) throw Error(ErrorCode::DimensionMismatch, "states hold different registers");
}
}  // namespace

void State::axpy(cplx a, const State& other) {
  require_same_register(*this, other);
  other.for_each_nonzero([&](std::uint64_t x, cplx v) {
    std::uint64_t y = other.index_in(*this, x);
    set_amplitude(y, amplitude(y) + a * v);
  });
}

std::unique_ptr<State> make_state(Backend backend, Precision precision) {
  if (backend == Backend::Sparse) return std::make_unique<SparseState>();
  if (precision == Precision::C64) return std::make_unique<DenseState<float>>();
  return std::make_unique<DenseState<double>>();
}

std::unique_ptr<State> make_state_like(const State& s) {
  auto out = make_state(s.backend(), s.precision());
  out->set_threads(s.threads());
  return out;
}

cplx overlap(const State& a, const State& b) {
  require_same_register(a, b);
  cplx s = 0.0;
  a.for_each_nonzero([&](std::uint64_t x, cplx v) { s += std::conj(v) * b.amplitude(a.index_in(b, x)); });
  return s;
}

double fidelity(const State& a, const State& b) { return std::norm(overlap(a, b)); }

std::size_t dense_bytes(int num_qubits, Precision p) {
  std::size_t amp = p == Precision::C64 ? 8 : 16;
  if (num_qubits >= 60) return ~std::size_t{0};
  return amp << num_qubits;
}

}  // namespace d4
