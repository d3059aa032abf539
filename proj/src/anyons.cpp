#include "d4/anyons.hpp"

#include <bit>
#include <cmath>
#include <map>

#include "d4/error.hpp"

namespace d4::anyons {

std::string GroupElement::name() const {
  if (bits == 0) return "1";
  std::string s;
  if (rho()) s += 'R';
  if (gamma()) s += 'G';
  if (beta()) s += 'B';
  return s;
}

int cocycle_alpha(GroupElement a, GroupElement b, GroupElement c) {
  return (a.rho() & b.gamma() & c.beta()) ? -1 : 1;
}

int cocycle_omega(GroupElement a, GroupElement b, GroupElement c) {
  int e = a.rho() * b.gamma() * c.beta() + a.gamma() * b.rho() * c.beta() +
          a.beta() * b.rho() * c.gamma();
  return (e & 1) ? -1 : 1;
}

std::string to_string(Gauss g) {
  if (g.im == 0) return std::to_string(g.re);
  std::string im = g.im == 1 ? "i" : g.im == -1 ? "-i" : std::to_string(g.im) + "i";
  if (g.re == 0) return im;
  return std::to_string(g.re) + (g.im > 0 ? "+" : "") + im;
}

GMatrix GMatrix::identity(int d) {
  GMatrix m;
  m.dim = d;
  m.m.assign(static_cast<std::size_t>(d) * d, Gauss{});
  for (int k = 0; k < d; ++k) m.m[k * d + k] = Gauss{1, 0};
  return m;
}

GMatrix GMatrix::operator*(const GMatrix& o) const {
  if (dim != o.dim) throw Error(ErrorCode::DimensionMismatch, "matrix dimensions differ");
  GMatrix r;
  r.dim = dim;
  r.m.assign(static_cast<std::size_t>(dim) * dim, Gauss{});
  for (int i = 0; i < dim; ++i)
    for (int k = 0; k < dim; ++k)
      for (int j = 0; j < dim; ++j) r.m[i * dim + j] = r.m[i * dim + j] + at(i, k) * o.at(k, j);
  return r;
}

GMatrix GMatrix::scaled(Gauss s) const {
  GMatrix r = *this;
  for (auto& x : r.m) x = x * s;
  return r;
}

Gauss GMatrix::trace() const {
  Gauss t;
  for (int k = 0; k < dim; ++k) t = t + at(k, k);
  return t;
}

GMatrix pauli(char p) {
  GMatrix m;
  m.dim = 2;
  switch (p) {
    case 'I': m.m = {{1, 0}, {0, 0}, {0, 0}, {1, 0}}; break;
    case 'X': m.m = {{0, 0}, {1, 0}, {1, 0}, {0, 0}}; break;
    case 'Y': m.m = {{0, 0}, {0, -1}, {0, 1}, {0, 0}}; break;
    case 'Z': m.m = {{1, 0}, {0, 0}, {0, 0}, {-1, 0}}; break;
    default: throw Error(ErrorCode::InvalidArgument, std::string("unknown Pauli '") + p + "'");
  }
  return m;
}

GMatrix kron(const GMatrix& a, const GMatrix& b) {
  GMatrix r;
  r.dim = a.dim * b.dim;
  r.m.assign(static_cast<std::size_t>(r.dim) * r.dim, Gauss{});
  for (int i = 0; i < a.dim; ++i)
    for (int j = 0; j < a.dim; ++j)
      for (int k = 0; k < b.dim; ++k)
        for (int l = 0; l < b.dim; ++l)
          r.m[(i * b.dim + k) * r.dim + (j * b.dim + l)] = a.at(i, j) * b.at(k, l);
  return r;
}

namespace {

GMatrix adjoint(const GMatrix& a) {
  GMatrix r = a;
  for (int i = 0; i < a.dim; ++i)
    for (int j = 0; j < a.dim; ++j) r.m[i * a.dim + j] = a.at(j, i).conj();
  return r;
}

struct Entry {
  AnyonLabel label;
  const char* name;
};

std::vector<Entry> build_table() {
  std::vector<Entry> t;
  const char* charges[] = {"1", "e_R", "e_G", "e_RG", "e_B", "e_RB", "e_GB", "e_RGB"};
  for (int s : {0, 1, 2, 4, 3, 6, 5, 7}) t.push_back({{kOne, s}, charges[s]});
  t.push_back({{kR, 1}, "m_R"});
  t.push_back({{kR, -1}, "f_R"});
  t.push_back({{kG, 1}, "m_G"});
  t.push_back({{kG, -1}, "f_G"});
  t.push_back({{kB, 1}, "m_B"});
  t.push_back({{kB, -1}, "f_B"});
  t.push_back({{kR * kG, 1}, "m_RG"});
  t.push_back({{kR * kG, -1}, "f_RG"});
  t.push_back({{kG * kB, 1}, "m_GB"});
  t.push_back({{kG * kB, -1}, "f_GB"});
  t.push_back({{kR * kB, 1}, "m_RB"});
  t.push_back({{kR * kB, -1}, "f_RB"});
  t.push_back({{kR * kG * kB, 1}, "s_RGB"});
  t.push_back({{kR * kG * kB, -1}, "sbar_RGB"});
  return t;
}

const std::vector<Entry>& table() {
  static const std::vector<Entry> t = build_table();
  return t;
}

// generator images Gamma(R), Gamma(G), Gamma(B) for a non-trivial flux
std::array<GMatrix, 3> generators(const AnyonLabel& a) {
  const Gauss s{a.sigma, 0};
  const GMatrix I = pauli('I'), X = pauli('X'), Y = pauli('Y'), Z = pauli('Z');
  switch (a.flux.bits) {
    case 1: return {I.scaled(s), X, Z};                    // R
    case 2: return {Z, I.scaled(s), X};                    // G
    case 4: return {X, Z, I.scaled(s)};                    // B
    case 3: return {X.scaled(s), X, Z};                    // RG
    case 6: return {Z, X.scaled(s), X};                    // GB
    case 5: return {X.scaled(s), Z, X};                    // RB
    case 7: return {X.scaled(-s), Y.scaled(-s), Z.scaled(-s)};  // RGB
    default: break;
  }
  throw Error(ErrorCode::InvalidArgument, "flux has no projective representation");
}

void check_label(const AnyonLabel& a) {
  if (a.flux.bits < 0 || a.flux.bits > 7)
    throw Error(ErrorCode::InvalidArgument, "flux out of range");
  if (a.flux.bits == 0 ? (a.sigma < 0 || a.sigma > 7) : (a.sigma != 1 && a.sigma != -1))
    throw Error(ErrorCode::InvalidArgument, "invalid representation label");
}

}  // namespace

const std::vector<AnyonLabel>& all_anyons() {
  static const std::vector<AnyonLabel> out = [] {
    std::vector<AnyonLabel> v;
    for (const auto& e : table()) v.push_back(e.label);
    return v;
  }();
  return out;
}

std::string anyon_name(const AnyonLabel& a) {
  for (const auto& e : table())
    if (e.label == a) return e.name;
  throw Error(ErrorCode::InvalidArgument, "not an anyon label");
}

int anyon_index(const AnyonLabel& a) {
  const auto& t = table();
  for (std::size_t k = 0; k < t.size(); ++k)
    if (t[k].label == a) return static_cast<int>(k);
  throw Error(ErrorCode::InvalidArgument, "not an anyon label");
}

AnyonLabel parse_anyon(const std::string& name) {
  for (const auto& e : table())
    if (name == e.name) return e.label;
  throw Error(ErrorCode::InvalidArgument, "unknown anyon '" + name + "'");
}

AnyonLabel charge(GroupElement sigma) { return {kOne, sigma.bits}; }

GMatrix rep(const AnyonLabel& a, GroupElement b) {
  check_label(a);
  if (a.flux.bits == 0) {
    GMatrix m;
    m.m = {Gauss{(std::popcount(static_cast<unsigned>(a.sigma & b.bits)) & 1) ? -1 : 1, 0}};
    return m;
  }
  const auto gens = generators(a);
  const GroupElement gen_el[3] = {kR, kG, kB};
  GMatrix m = GMatrix::identity(2);
  GroupElement cur = kOne;
  for (int k = 0; k < 3; ++k) {
    if (!(b.bits >> k & 1)) continue;
    m = (m * gens[k]).scaled(Gauss{cocycle_omega(a.flux, cur, gen_el[k]), 0});
    cur = cur * gen_el[k];
  }
  return m;
}

Gauss character(const AnyonLabel& a, GroupElement b) { return rep(a, b).trace(); }

ModularData modular_data() {
  ModularData md;
  const auto& labels = all_anyons();
  const std::size_t n = labels.size();
  md.s8.assign(n, std::vector<Gauss>(n));
  for (std::size_t i = 0; i < n; ++i) {
    md.names.push_back(anyon_name(labels[i]));
    md.dims.push_back(labels[i].dim());
    Gauss chi_a = character(labels[i], labels[i].flux);
    md.t.push_back({chi_a.re / labels[i].dim(), chi_a.im / labels[i].dim()});
    for (std::size_t j = 0; j < n; ++j)
      md.s8[i][j] = character(labels[i], labels[j].flux).conj() *
                    character(labels[j], labels[i].flux).conj();
  }
  return md;
}

FusionTensor verlinde(const ModularData& md) {
  const std::size_t n = md.s8.size();
  FusionTensor N(n, std::vector<std::vector<int>>(n, std::vector<int>(n, 0)));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = 0; k < n; ++k) {
        // N = sum_L S_iL S_jL conj(S_kL) / S_1L = sum_L s_iL s_jL conj(s_kL) (2 / s_1L) / 128
        Gauss acc;
        for (std::size_t l = 0; l < n; ++l) {
          const Gauss s1 = md.s8[0][l];
          if (s1.im != 0 || (s1.re != 1 && s1.re != 2))
            throw Error(ErrorCode::NonIntegerMultiplicity, "unexpected first row of S");
          Gauss term = md.s8[i][l] * md.s8[j][l] * md.s8[k][l].conj();
          acc = acc + term * Gauss{2 / s1.re, 0};
        }
        if (acc.im != 0 || acc.re % 128 != 0 || acc.re < 0)
          throw Error(ErrorCode::NonIntegerMultiplicity,
                      "Verlinde multiplicity for (" + md.names[i] + ", " + md.names[j] + ", " +
                          md.names[k] + ") is " + to_string(acc) + "/128");
        N[i][j][k] = static_cast<int>(acc.re / 128);
      }
  return N;
}

std::vector<FusionTerm> fuse(const AnyonLabel& i, const AnyonLabel& j) {
  static const FusionTensor N = verlinde(modular_data());
  const auto& labels = all_anyons();
  const int a = anyon_index(i), b = anyon_index(j);
  std::vector<FusionTerm> out;
  for (std::size_t k = 0; k < labels.size(); ++k)
    if (N[a][b][k] > 0) out.push_back({labels[k], N[a][b][k]});
  return out;
}

std::string fusion_string(const std::vector<FusionTerm>& terms) {
  std::string s;
  for (const auto& t : terms) {
    if (!s.empty()) s += " + ";
    if (t.multiplicity > 1) s += std::to_string(t.multiplicity) + " ";
    s += anyon_name(t.label);
  }
  return s;
}

// ---- internal flux space ----

InternalState::InternalState(std::vector<AnyonLabel> sites) : sites_(std::move(sites)) {
  for (const auto& a : sites_) {
    check_label(a);
    if (a.dim() != 2)
      throw Error(ErrorCode::DimensionMismatch, "internal states hold non-Abelian fluxes only");
  }
  if (sites_.size() > 20) throw Error(ErrorCode::InvalidArgument, "too many internal sites");
  amp_.assign(std::size_t{1} << sites_.size(), 0.0);
  amp_[0] = 1.0;
}

void InternalState::apply(int site, const GMatrix& m) {
  if (site < 0 || site >= static_cast<int>(sites_.size()))
    throw Error(ErrorCode::IndexOutOfRange, "internal site out of range");
  if (m.dim != 2) throw Error(ErrorCode::DimensionMismatch, "site operators are 2x2");
  const std::size_t bit = std::size_t{1} << site;
  for (std::size_t x = 0; x < amp_.size(); ++x) {
    if (x & bit) continue;
    const auto a0 = amp_[x], a1 = amp_[x | bit];
    amp_[x] = m.at(0, 0).value() * a0 + m.at(0, 1).value() * a1;
    amp_[x | bit] = m.at(1, 0).value() * a0 + m.at(1, 1).value() * a1;
  }
}

void InternalState::create_pair(int i, int j) {
  if (!(sites_.at(i) == sites_.at(j)))
    throw Error(ErrorCode::InvalidArgument, "a pair from the vacuum carries one flux type");
  for (int seed = 0; seed < 4; ++seed) {
    InternalState trial = *this;
    if (seed & 1) trial.apply(i, pauli('X'));
    if (seed & 2) trial.apply(j, pauli('X'));
    std::vector<std::complex<double>> acc(amp_.size(), 0.0);
    for (int b = 0; b < 8; ++b) {
      InternalState t = trial;
      t.apply(i, rep(sites_[i], {b}));
      t.apply(j, rep(sites_[j], {b}));
      for (std::size_t x = 0; x < acc.size(); ++x) acc[x] += t.amp_[x] / 8.0;
    }
    double n2 = 0.0;
    for (auto a : acc) n2 += std::norm(a);
    if (n2 < 1e-12) continue;
    for (auto& a : acc) a /= std::sqrt(n2);
    amp_ = std::move(acc);
    return;
  }
  throw Error(ErrorCode::Internal, "no invariant pair state found");
}

void InternalState::braid_full(int i, int j) {
  apply(i, rep(sites_.at(i), sites_.at(j).flux));
  apply(j, rep(sites_.at(j), sites_.at(i).flux));
}

void InternalState::braid_full_inverse(int i, int j) {
  apply(j, adjoint(rep(sites_.at(j), sites_.at(i).flux)));
  apply(i, adjoint(rep(sites_.at(i), sites_.at(j).flux)));
}

std::complex<double> InternalState::expval(
    const std::vector<std::pair<int, GMatrix>>& ops) const {
  InternalState t = *this;
  for (const auto& [site, m] : ops) t.apply(site, m);
  return overlap(t);
}

std::complex<double> InternalState::overlap(const InternalState& other) const {
  if (other.amp_.size() != amp_.size())
    throw Error(ErrorCode::DimensionMismatch, "internal states have different sizes");
  std::complex<double> s = 0.0;
  for (std::size_t x = 0; x < amp_.size(); ++x) s += std::conj(amp_[x]) * other.amp_[x];
  return s;
}

AnyonLabel InternalState::fusion_channel(int i, int j) const {
  if (!(sites_.at(i) == sites_.at(j)))
    throw Error(ErrorCode::InvalidArgument, "fusion back to the vacuum flux needs a pair");
  int sigma = 0;
  const GroupElement gens[3] = {kR, kG, kB};
  for (int k = 0; k < 3; ++k) {
    auto v = expval({{i, rep(sites_[i], gens[k])}, {j, rep(sites_[j], gens[k])}});
    if (std::abs(v.imag()) > 1e-9 || std::abs(std::abs(v.real()) - 1.0) > 1e-9)
      throw Error(ErrorCode::DimensionMismatch, "pair is not in a definite fusion channel");
    if (v.real() < 0) sigma |= gens[k].bits;
  }
  return charge({sigma});
}

GMatrix braid_operator(const AnyonLabel& i, const AnyonLabel& j) {
  return kron(rep(i, j.flux), rep(j, i.flux));
}

BraidPrediction braid_and_fuse(const AnyonLabel& mover, const AnyonLabel& target) {
  InternalState st({mover, mover, target, target});
  st.create_pair(0, 1);
  st.create_pair(2, 3);
  st.braid_full(1, 2);
  return {st.fusion_channel(0, 1), st.fusion_channel(2, 3)};
}

std::complex<double> borromean_phase() {
  const AnyonLabel mR{kR, 1}, mG{kG, 1}, mB{kB, 1};
  InternalState st({mR, mR, mG, mG, mB, mB});
  st.create_pair(0, 1);
  st.create_pair(2, 3);
  st.create_pair(4, 5);
  InternalState start = st;
  st.braid_full(1, 3);
  st.braid_full(1, 5);
  st.braid_full_inverse(1, 3);
  st.braid_full_inverse(1, 5);
  return start.overlap(st);
}

const std::vector<D4Row>& d4_dictionary() {
  static const std::vector<D4Row> rows = {
      {"1", "D4", "1", "1", 1, {1, 0}},          {"1", "D4", "s1", "e_RG", 1, {1, 0}},
      {"1", "D4", "s2", "e_R", 1, {1, 0}},       {"1", "D4", "s3", "e_G", 1, {1, 0}},
      {"1", "D4", "2", "m_B", 2, {1, 0}},        {"r2", "D4", "1", "e_RGB", 1, {1, 0}},
      {"r2", "D4", "s1", "e_B", 1, {1, 0}},      {"r2", "D4", "s2", "e_GB", 1, {1, 0}},
      {"r2", "D4", "s3", "e_RB", 1, {1, 0}},     {"r2", "D4", "2", "f_B", 2, {-1, 0}},
      {"r", "Z4", "1", "m_RG", 2, {1, 0}},       {"r", "Z4", "w", "s_RGB", 2, {0, 1}},
      {"r", "Z4", "w2", "f_RG", 2, {-1, 0}},     {"r", "Z4", "wbar", "sbar_RGB", 2, {0, -1}},
      {"s", "Z2xZ2", "1", "m_GB", 2, {1, 0}},    {"s", "Z2xZ2", "(-1,1)", "m_G", 2, {1, 0}},
      {"s", "Z2xZ2", "(1,-1)", "f_G", 2, {-1, 0}}, {"s", "Z2xZ2", "(-1,-1)", "f_GB", 2, {-1, 0}},
      {"rs", "Z2xZ2", "1", "m_RB", 2, {1, 0}},   {"rs", "Z2xZ2", "(-1,1)", "m_R", 2, {1, 0}},
      {"rs", "Z2xZ2", "(1,-1)", "f_R", 2, {-1, 0}}, {"rs", "Z2xZ2", "(-1,-1)", "f_RB", 2, {-1, 0}},
  };
  return rows;
}

GroupElement permute(GroupElement g, const std::array<int, 3>& perm) {
  int out = 0;
  for (int c = 0; c < 3; ++c)
    if (g.bits >> c & 1) out |= 1 << perm[c];
  return {out};
}

AnyonLabel permute(const AnyonLabel& a, const std::array<int, 3>& perm) {
  if (a.flux.bits == 0) return {kOne, permute(GroupElement{a.sigma}, perm).bits};
  return {permute(a.flux, perm), a.sigma};
}

}  // namespace d4::anyons
