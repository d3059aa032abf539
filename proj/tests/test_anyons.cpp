#include <gtest/gtest.h>

#include <set>

#include "d4/anyons.hpp"
#include "d4/error.hpp"
#include "tabulated.hpp"

using namespace d4::anyons;

namespace {

std::vector<std::string> names(const std::vector<FusionTerm>& terms) {
  std::vector<std::string> out;
  for (const auto& t : terms) out.push_back(anyon_name(t.label));
  return out;
}

GroupElement el(int b) { return {b}; }

}  // namespace

TEST(Cocycle, AlphaAndOmegaValues) {
  EXPECT_EQ(cocycle_alpha(kR, kG, kB), -1);
  for (int b = 0; b < 8; ++b)
    for (int c = 0; c < 8; ++c) EXPECT_EQ(cocycle_alpha(kOne, el(b), el(c)), 1);
  EXPECT_EQ(cocycle_omega(kR, kG, kB), -1);
  EXPECT_EQ(cocycle_omega(kR, kB, kG), 1);
}

TEST(Cocycle, ThreeCocycleCondition) {
  for (int a = 0; a < 8; ++a)
    for (int b = 0; b < 8; ++b)
      for (int c = 0; c < 8; ++c)
        for (int d = 0; d < 8; ++d) {
          int lhs = cocycle_alpha(el(b), el(c), el(d)) * cocycle_alpha(el(a), el(b ^ c), el(d)) *
                    cocycle_alpha(el(a), el(b), el(c));
          int rhs = cocycle_alpha(el(a ^ b), el(c), el(d)) * cocycle_alpha(el(a), el(b), el(c ^ d));
          ASSERT_EQ(lhs, rhs);
        }
}

TEST(Cocycle, OmegaIsTwoCocycleAndMatchesSlantProduct) {
  for (int a = 0; a < 8; ++a)
    for (int b = 0; b < 8; ++b)
      for (int c = 0; c < 8; ++c) {
        int slant = cocycle_alpha(el(a), el(b), el(c)) * cocycle_alpha(el(b), el(c), el(a)) *
                    cocycle_alpha(el(b), el(a), el(c));
        ASSERT_EQ(cocycle_omega(el(a), el(b), el(c)), slant);
        for (int d = 0; d < 8; ++d)
          ASSERT_EQ(cocycle_omega(el(a), el(b), el(c)) * cocycle_omega(el(a), el(b ^ c), el(d)),
                    cocycle_omega(el(a), el(b), el(c ^ d)) * cocycle_omega(el(a), el(c), el(d)));
      }
}

TEST(Reps, PrintedMatrices) {
  const AnyonLabel mR{kR, 1}, fR{kR, -1}, mG{kG, 1};
  EXPECT_EQ(rep(mR, kR), pauli('I'));
  EXPECT_EQ(rep(fR, kR), pauli('I').scaled({-1, 0}));
  EXPECT_EQ(rep(mR, kG), pauli('X'));
  EXPECT_EQ(rep(mR, kB), pauli('Z'));
  EXPECT_EQ(rep(mG, kR), pauli('Z'));
  EXPECT_EQ(rep(mG, kB), pauli('X'));
  EXPECT_EQ(rep(mR, kG) * rep(mR, kB), rep(mR, kG * kB).scaled({-1, 0}));
}

TEST(Reps, ProjectivityForEveryLabel) {
  for (const auto& a : all_anyons())
    for (int b = 0; b < 8; ++b)
      for (int c = 0; c < 8; ++c)
        ASSERT_EQ(rep(a, el(b)) * rep(a, el(c)),
                  rep(a, el(b ^ c)).scaled({cocycle_omega(a.flux, el(b), el(c)), 0}))
            << anyon_name(a) << " " << b << " " << c;
}

TEST(Modular, MatchesTabulatedMatrices) {
  auto md = modular_data();
  ASSERT_EQ(md.s8.size(), 22u);
  for (int i = 0; i < 22; ++i) {
    EXPECT_EQ(md.t[i], kTabulatedT[i]) << md.names[i];
    for (int j = 0; j < 22; ++j)
      EXPECT_EQ(md.s8[i][j], (Gauss{kTabulated8S[i][j], 0})) << md.names[i] << "," << md.names[j];
  }
}

TEST(Modular, UnitarySymmetricAndDimensions) {
  auto md = modular_data();
  int sum_d2 = 0;
  for (int i = 0; i < 22; ++i) {
    sum_d2 += md.dims[i] * md.dims[i];
    EXPECT_EQ(md.s8[0][i], (Gauss{md.dims[i], 0}));
    EXPECT_EQ(std::norm(md.t[i].value()), 1.0);
    for (int j = 0; j < 22; ++j) {
      EXPECT_EQ(md.s8[i][j], md.s8[j][i]);
      Gauss acc;
      for (int k = 0; k < 22; ++k) acc = acc + md.s8[i][k] * md.s8[j][k].conj();
      EXPECT_EQ(acc, (Gauss{i == j ? 64 : 0, 0}));
    }
  }
  EXPECT_EQ(sum_d2, 64);
}

TEST(Fusion, VerlindeIsIntegralAndSymmetric) {
  auto md = modular_data();
  auto N = verlinde(md);
  for (int i = 0; i < 22; ++i) {
    int duals = 0;
    for (int j = 0; j < 22; ++j) {
      if (N[i][j][0] == 1) ++duals;
      for (int k = 0; k < 22; ++k) {
        ASSERT_GE(N[i][j][k], 0);
        ASSERT_EQ(N[i][j][k], N[j][i][k]);
      }
    }
    EXPECT_EQ(duals, 1) << md.names[i];
  }
}

TEST(Fusion, TabulatedRules) {
  using V = std::vector<std::string>;
  EXPECT_EQ(names(fuse(parse_anyon("m_B"), parse_anyon("m_B"))), (V{"1", "e_R", "e_G", "e_RG"}));
  EXPECT_EQ(names(fuse(parse_anyon("s_RGB"), parse_anyon("s_RGB"))),
            (V{"1", "e_RG", "e_GB", "e_RB"}));
  EXPECT_EQ(names(fuse(parse_anyon("m_G"), parse_anyon("m_G"))), (V{"1", "e_R", "e_B", "e_RB"}));
  EXPECT_EQ(names(fuse(parse_anyon("f_R"), parse_anyon("m_G"))), (V{"m_RG", "f_RG"}));
  for (const auto& j : all_anyons()) EXPECT_EQ(names(fuse(parse_anyon("1"), j)), (V{anyon_name(j)}));
}

TEST(Braid, GreenAroundBlueFusesToRedCharges) {
  auto p = braid_and_fuse(parse_anyon("m_G"), parse_anyon("m_B"));
  EXPECT_EQ(anyon_name(p.first_pair), "e_R");
  EXPECT_EQ(anyon_name(p.second_pair), "e_R");
  EXPECT_EQ(braid_operator(parse_anyon("m_G"), parse_anyon("m_B")),
            kron(pauli('X'), pauli('Z')));
}

TEST(Braid, BorromeanPhaseIsMinusOne) {
  auto v = borromean_phase();
  EXPECT_NEAR(v.real(), -1.0, 1e-12);
  EXPECT_NEAR(v.imag(), 0.0, 1e-12);
}

TEST(Braid, VacuumBraidIsTrivial) {
  for (const auto& a : all_anyons()) {
    auto op = braid_operator(a, parse_anyon("1"));
    EXPECT_EQ(op, GMatrix::identity(a.dim())) << anyon_name(a);
  }
}

TEST(Dictionary, DimsAndTwistsAgree) {
  auto md = modular_data();
  std::set<std::string> seen;
  for (const auto& row : d4_dictionary()) {
    int k = anyon_index(parse_anyon(row.label));
    EXPECT_EQ(md.dims[k], row.dim) << row.label;
    EXPECT_EQ(md.t[k], row.t) << row.label;
    seen.insert(row.label);
  }
  EXPECT_EQ(seen.size(), 22u);
}

TEST(Modular, ColourPermutationCovariance) {
  auto md = modular_data();
  const std::array<std::array<int, 3>, 5> perms = {
      {{1, 2, 0}, {2, 0, 1}, {1, 0, 2}, {0, 2, 1}, {2, 1, 0}}};
  for (const auto& p : perms)
    for (int i = 0; i < 22; ++i) {
      int pi = anyon_index(permute(all_anyons()[i], p));
      EXPECT_EQ(md.t[pi], md.t[i]);
      for (int j = 0; j < 22; ++j) {
        int pj = anyon_index(permute(all_anyons()[j], p));
        EXPECT_EQ(md.s8[pi][pj], md.s8[i][j]);
      }
    }
}
