#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <string>
#include <vector>

namespace d4::anyons {

// a = R^rho G^gamma B^beta stored as rho | gamma << 1 | beta << 2
struct GroupElement {
  int bits = 0;
  int rho() const { return bits & 1; }
  int gamma() const { return bits >> 1 & 1; }
  int beta() const { return bits >> 2 & 1; }
  GroupElement operator*(GroupElement o) const { return {bits ^ o.bits}; }
  friend bool operator==(GroupElement, GroupElement) = default;
  std::string name() const;  // "1", "R", "GB", ...
};

inline constexpr GroupElement kOne{0}, kR{1}, kG{2}, kB{4};

int cocycle_alpha(GroupElement a, GroupElement b, GroupElement c);
int cocycle_omega(GroupElement a, GroupElement b, GroupElement c);  // omega_a(b, c)

// exact Gaussian integer
struct Gauss {
  std::int64_t re = 0, im = 0;
  Gauss operator+(Gauss o) const { return {re + o.re, im + o.im}; }
  Gauss operator-(Gauss o) const { return {re - o.re, im - o.im}; }
  Gauss operator*(Gauss o) const { return {re * o.re - im * o.im, re * o.im + im * o.re}; }
  Gauss operator-() const { return {-re, -im}; }
  Gauss conj() const { return {re, -im}; }
  friend bool operator==(Gauss, Gauss) = default;
  std::complex<double> value() const { return {double(re), double(im)}; }
};
std::string to_string(Gauss g);

// small square matrix over Gaussian integers, row-major
struct GMatrix {
  int dim = 1;
  std::vector<Gauss> m{Gauss{1, 0}};
  static GMatrix identity(int d);
  Gauss at(int r, int c) const { return m[r * dim + c]; }
  GMatrix operator*(const GMatrix& o) const;
  GMatrix scaled(Gauss s) const;
  Gauss trace() const;
  friend bool operator==(const GMatrix&, const GMatrix&) = default;
};

GMatrix pauli(char p);  // 'I', 'X', 'Y', 'Z'
GMatrix kron(const GMatrix& a, const GMatrix& b);

// (a, sigma): sigma is a charge in A when a = 1, else +1 / -1
struct AnyonLabel {
  GroupElement flux;
  int sigma = 0;
  friend bool operator==(const AnyonLabel&, const AnyonLabel&) = default;
  int dim() const { return flux.bits == 0 ? 1 : 2; }
};

// The 22 labels in the tabulated order: 1, e_R, e_G, e_B, e_RG, e_GB, e_RB, e_RGB, m_R, f_R,
// m_G, f_G, m_B, f_B, m_RG, f_RG, m_GB, f_GB, m_RB, f_RB, s_RGB, sbar_RGB
const std::vector<AnyonLabel>& all_anyons();
std::string anyon_name(const AnyonLabel& a);
int anyon_index(const AnyonLabel& a);
AnyonLabel parse_anyon(const std::string& name);
AnyonLabel charge(GroupElement sigma);

// Gamma^sigma_a(b)
GMatrix rep(const AnyonLabel& a, GroupElement b);
Gauss character(const AnyonLabel& a, GroupElement b);

struct ModularData {
  std::vector<std::string> names;
  std::vector<std::vector<Gauss>> s8;  // 8 S
  std::vector<Gauss> t;
  std::vector<int> dims;
  std::complex<double> S(int i, int j) const { return s8[i][j].value() / 8.0; }
};

ModularData modular_data();

// N[i][j][k] by the Verlinde formula in exact arithmetic (NonIntegerMultiplicity otherwise)
using FusionTensor = std::vector<std::vector<std::vector<int>>>;
FusionTensor verlinde(const ModularData& md);

struct FusionTerm {
  AnyonLabel label;
  int multiplicity = 0;
};
std::vector<FusionTerm> fuse(const AnyonLabel& i, const AnyonLabel& j);
std::string fusion_string(const std::vector<FusionTerm>& terms);

// ---- internal flux space ----

// Fluxes of dimension 2 on numbered sites; site k is qubit k of the internal state.
class InternalState {
 public:
  explicit InternalState(std::vector<AnyonLabel> sites);
  const std::vector<AnyonLabel>& sites() const { return sites_; }
  const std::vector<std::complex<double>>& amplitudes() const { return amp_; }

  // pair (i, j) created from the vacuum: invariant under Gamma(b) x Gamma(b) for every b
  void create_pair(int i, int j);
  void apply(int site, const GMatrix& m);
  // full braid of the anyon at site i around the one at site j
  void braid_full(int i, int j);
  void braid_full_inverse(int i, int j);
  std::complex<double> expval(const std::vector<std::pair<int, GMatrix>>& ops) const;
  std::complex<double> overlap(const InternalState& other) const;
  // total charge of a created pair; DimensionMismatch if the pair is not in a definite channel
  AnyonLabel fusion_channel(int i, int j) const;

 private:
  std::vector<AnyonLabel> sites_;
  std::vector<std::complex<double>> amp_;
};

// Gamma^sigma_a(b) (x) Gamma^tau_b(a) on the tensor product of the two internal spaces
GMatrix braid_operator(const AnyonLabel& i, const AnyonLabel& j);

struct BraidPrediction {
  AnyonLabel first_pair;
  AnyonLabel second_pair;
};
// create pairs of `mover` (sites 0,1) and `target` (sites 2,3), full braid of 1 around 2, fuse
BraidPrediction braid_and_fuse(const AnyonLabel& mover, const AnyonLabel& target);

// value of the Borromean operator (Z2 X6)^-1 (X2 Z4)^-1 (Z2 X6)(X2 Z4) on m_R, m_G, m_B pairs
std::complex<double> borromean_phase();

struct D4Row {
  std::string conjugacy_class;
  std::string centralizer;
  std::string irrep;
  std::string label;
  int dim;
  Gauss t;
};
const std::vector<D4Row>& d4_dictionary();

// permutation of colours: perm[c] is the image of colour c (0 = R, 1 = G, 2 = B)
GroupElement permute(GroupElement g, const std::array<int, 3>& perm);
AnyonLabel permute(const AnyonLabel& a, const std::array<int, 3>& perm);

}  // namespace d4::anyons
