// Copyright 2026 The StencilSmith Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <cmath>
#include <cstdlib>
#include <vector>

#include "oracles.hpp"
#include "stencilsmith/detail/stencil_ops.hpp"
#include "stencilsmith/kernels.hpp"
#include "stencilsmith/rng.hpp"

using namespace stencilsmith;

namespace {

using oracle::Counted;

}  // namespace

// --- laplacian and hdiff -----------------------------------------------------

TEST(Laplacian, Examples) {
  const Grid3D c = make_grid({5, 5, 1}, kStencilHalo, ConstantInit{3.25}, Precision::f64);
  EXPECT_EQ(laplacian(c, 2, 2, 0), 0.0);
  const Grid3D l = make_grid({5, 5, 1}, kStencilHalo, LinearInit{2, -3, 0}, Precision::f64);
  EXPECT_EQ(laplacian(l, 2, 2, 0), 0.0);
  const Grid3D p = make_grid({5, 5, 1}, kStencilHalo, ImpulseInit{{2, 2, 0}, 1.0}, Precision::f64);
  EXPECT_EQ(laplacian(p, 2, 2, 0), 4.0);
  EXPECT_EQ(laplacian(p, 1, 2, 0), -1.0);
  EXPECT_THROW(laplacian(p, 0, 2, 0), IndexError);
  EXPECT_THROW(laplacian(p, 2, 4, 0), IndexError);
}

class HdiffPrecision : public ::testing::TestWithParam<Precision> {};

TEST_P(HdiffPrecision, ConstantFieldPassesThrough) {
  const Grid3D src = make_grid({12, 10, 3}, kStencilHalo, ConstantInit{0.7}, GetParam());
  EXPECT_TRUE(compare(hdiff_reference(src), src).bitwise_equal());
}

TEST_P(HdiffPrecision, LinearFieldPassesThrough) {
  const Grid3D src = make_grid({12, 10, 3}, kStencilHalo, LinearInit{3, -2, 5}, GetParam());
  EXPECT_TRUE(compare(hdiff_reference(src), src).bitwise_equal());
}

INSTANTIATE_TEST_SUITE_P(Precisions, HdiffPrecision,
                         ::testing::Values(Precision::f32, Precision::f64));

TEST(Hdiff, ImpulseResponseMatchesBiharmonicOracle) {
  const HdiffParams p{0.025};
  for (std::size_t n : {7u, 9u}) {
    const std::size_t c = n / 2;
    const Grid3D src =
        make_grid({n, n, 1}, kStencilHalo, ImpulseInit{{c, c, 0}, 1.0}, Precision::f64);
    const Grid3D out = hdiff_reference(src, p);
    std::size_t affected = 0;
    for (std::size_t j = 2; j < n - 2; ++j)
      for (std::size_t i = 2; i < n - 2; ++i) {
        const auto di = static_cast<long long>(i) - static_cast<long long>(c);
        const auto dj = static_cast<long long>(j) - static_cast<long long>(c);
        const double s = src.at(i, j, 0);
        const double expected = s - p.c1 * static_cast<double>(oracle::biharmonic_response(di, dj));
        EXPECT_EQ(out.at(i, j, 0), expected) << i << "," << j;
        if (out.at(i, j, 0) != 0.0) ++affected;
      }
    EXPECT_EQ(affected, n == 7 ? 9u : 13u);
  }
  // Closed-form values of the 13-point response.
  const Grid3D src = make_grid({9, 9, 1}, kStencilHalo, ImpulseInit{{4, 4, 0}, 1.0}, Precision::f64);
  const Grid3D out = hdiff_reference(src, p);
  EXPECT_DOUBLE_EQ(out.at(4, 4, 0), 1.5);
  EXPECT_DOUBLE_EQ(out.at(5, 4, 0), -0.2);
  EXPECT_DOUBLE_EQ(out.at(5, 5, 0), 0.05);
  EXPECT_DOUBLE_EQ(out.at(4, 6, 0), 0.025);
}

TEST(Hdiff, SupportIsChebyshevTwo) {
  const Grid3D base = make_grid({15, 15, 2}, kStencilHalo, PseudoRandomInit{5}, Precision::f64);
  const Grid3D ref = hdiff_reference(base);
  Grid3D bumped = base;
  bumped.set(7, 7, 1, base.at(7, 7, 1) + 1.0);
  const Grid3D out = hdiff_reference(bumped);
  for (std::size_t k = 0; k < 2; ++k)
    for (std::size_t j = 2; j < 13; ++j)
      for (std::size_t i = 2; i < 13; ++i) {
        const bool near = k == 1 && std::abs(static_cast<int>(i) - 7) <= 2 &&
                          std::abs(static_cast<int>(j) - 7) <= 2;
        if (!near) EXPECT_EQ(out.at(i, j, k), ref.at(i, j, k)) << i << "," << j << "," << k;
      }
}

TEST(Hdiff, KPlanePermutationEquivariance) {
  const Grid3D src = make_grid({10, 10, 4}, kStencilHalo, PseudoRandomInit{8}, Precision::f64);
  Grid3D perm(src.dims(), src.halo(), src.precision());
  const std::size_t order[] = {2, 0, 3, 1};
  for (std::size_t k = 0; k < 4; ++k)
    for (std::size_t j = 0; j < 10; ++j)
      for (std::size_t i = 0; i < 10; ++i) perm.set(i, j, k, src.at(i, j, order[k]));
  const Grid3D a = hdiff_reference(src);
  const Grid3D b = hdiff_reference(perm);
  for (std::size_t k = 0; k < 4; ++k)
    for (std::size_t j = 0; j < 10; ++j)
      for (std::size_t i = 0; i < 10; ++i) EXPECT_EQ(b.at(i, j, k), a.at(i, j, order[k]));
}

TEST(Hdiff, IntegerInputsAgreeAcrossPrecisions) {
  SplitMix64 rng(17);
  Grid3D s32({10, 9, 2}, kStencilHalo, Precision::f32);
  Grid3D s64({10, 9, 2}, kStencilHalo, Precision::f64);
  for (std::size_t k = 0; k < 2; ++k)
    for (std::size_t j = 0; j < 9; ++j)
      for (std::size_t i = 0; i < 10; ++i) {
        const double v = static_cast<double>(rng.next_below(64));
        s32.set(i, j, k, v);
        s64.set(i, j, k, v);
      }
  const HdiffParams p{0.125};  // dyadic, so every intermediate is exact
  const Grid3D a = hdiff_reference(s32, p);
  const Grid3D b = hdiff_reference(s64, p);
  for (std::size_t k = 0; k < 2; ++k)
    for (std::size_t j = 0; j < 9; ++j)
      for (std::size_t i = 0; i < 10; ++i) EXPECT_EQ(a.at(i, j, k), b.at(i, j, k));
}

TEST(Hdiff, MatchesLongDoubleEvaluation) {
  const Grid3D src = make_grid({12, 11, 3}, kStencilHalo, PseudoRandomInit{21}, Precision::f64);
  const Grid3D out = hdiff_reference(src);
  auto s = [&](std::size_t i, std::size_t j, std::size_t k) -> long double { return src.at(i, j, k); };
  auto lap = [&](std::size_t i, std::size_t j, std::size_t k) {
    return 4 * s(i, j, k) - s(i - 1, j, k) - s(i + 1, j, k) - s(i, j - 1, k) - s(i, j + 1, k);
  };
  for (std::size_t k = 0; k < 3; ++k)
    for (std::size_t j = 2; j < 9; ++j)
      for (std::size_t i = 2; i < 10; ++i) {
        const long double n = lap(i + 1, j, k) + lap(i - 1, j, k) + lap(i, j + 1, k) +
                              lap(i, j - 1, k) - 4 * lap(i, j, k);
        EXPECT_NEAR(out.at(i, j, k), static_cast<double>(s(i, j, k) - 0.025L * n), 1e-14);
      }
}

TEST(Hdiff, HaloCopiedVerbatim) {
  const Grid3D src = make_grid({9, 8, 2}, kStencilHalo, PseudoRandomInit{4}, Precision::f32);
  const Grid3D out = hdiff_reference(src);
  const Box3 inner = src.interior();
  for (std::size_t k = 0; k < 2; ++k)
    for (std::size_t j = 0; j < 8; ++j)
      for (std::size_t i = 0; i < 9; ++i)
        if (!inner.contains({i, j, k})) EXPECT_EQ(out.at(i, j, k), src.at(i, j, k));
}

TEST(Hdiff, RejectsBadInput) {
  const Grid3D thin = make_grid({8, 8, 1}, {1, 2, 0}, ConstantInit{1}, Precision::f64);
  EXPECT_THROW(hdiff_reference(thin), KernelError);
  Grid3D nan = make_grid({8, 8, 1}, kStencilHalo, ConstantInit{1}, Precision::f64);
  nan.set(3, 3, 0, std::nan(""));
  EXPECT_THROW(hdiff_reference(nan), KernelError);
}

// --- copy --------------------------------------------------------------------

TEST(Copy, IsBitwiseIdentity) {
  for (Precision p : {Precision::f32, Precision::f64}) {
    const Grid3D src = make_grid({7, 6, 5}, kStencilHalo, PseudoRandomInit{3}, p);
    const CompareResult r = compare(copy_reference(src), src);
    EXPECT_EQ(r.max_ulp_diff, 0u);
    EXPECT_TRUE(r.bitwise_equal());
  }
}

// --- thomas ------------------------------------------------------------------

TEST(Thomas, IdentitySystem) {
  const std::vector<double> z(5, 0.0), one(5, 1.0), d{1, -2, 3, -4, 5};
  EXPECT_EQ(thomas_solve<double>(z, one, z, d), d);
}

TEST(Thomas, SmallExample) {
  const std::vector<double> a{0, 1, 1}, b{2, 2, 2}, c{1, 1, 0}, d{3, 4, 3};
  const std::vector<double> x = thomas_solve<double>(a, b, c, d);
  for (double v : x) EXPECT_DOUBLE_EQ(v, 1.0);
}

TEST(Thomas, ResidualOnDiagonallyDominantSystems) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    SplitMix64 rng(seed);
    const std::size_t n = 16;
    std::vector<double> a(n), b(n), c(n), d(n);
    for (std::size_t k = 0; k < n; ++k) {
      a[k] = rng.next_double() - 0.5;
      c[k] = rng.next_double() - 0.5;
      b[k] = 1.0 + std::abs(a[k]) + std::abs(c[k]) + rng.next_double();
      d[k] = 10.0 * (rng.next_double() - 0.5);
    }
    const std::vector<double> x = thomas_solve<double>(a, b, c, d);
    double res = 0.0, dn = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      long double r = static_cast<long double>(b[k]) * x[k] - d[k];
      if (k > 0) r += static_cast<long double>(a[k]) * x[k - 1];
      if (k + 1 < n) r += static_cast<long double>(c[k]) * x[k + 1];
      res = std::max(res, static_cast<double>(std::fabs(r)));
      dn = std::max(dn, std::abs(d[k]));
    }
    EXPECT_LE(res, 1e-12 * dn) << "seed " << seed;
  }
}

TEST(Thomas, SingularPivotThrows) {
  const std::vector<double> a{0, 1}, b{1, 1}, c{1, 0}, d{1, 1};
  EXPECT_THROW(thomas_solve<double>(a, b, c, d), SingularSystemError);
  const std::vector<float> fa{0}, fb{1e-21f}, fc{0}, fd{1};
  EXPECT_THROW(thomas_solve<float>(fa, fb, fc, fd), SingularSystemError);
  EXPECT_THROW(thomas_solve<double>({}, {}, {}, {}), ConfigError);
}

// --- vadvc -------------------------------------------------------------------

class VadvcPrecision : public ::testing::TestWithParam<Precision> {};

TEST_P(VadvcPrecision, MatchesDenseOracle) {
  const double tol = GetParam() == Precision::f64 ? 1e-12 : 1e-6;
  for (std::size_t nz : {3u, 8u, 64u}) {
    const FieldSet f = make_vadvc_fields({7, 6, nz}, kStencilHalo, GetParam(), 7);
    const Grid3D out = vadvc_reference(f);
    for (std::size_t j = 2; j < 4; ++j)
      for (std::size_t i = 2; i < 5; ++i)
        EXPECT_LE(oracle::column_error(out, oracle::vadvc_column(f, i, j), i, j), tol)
            << "nz " << nz << " column " << i << "," << j;
  }
}

TEST_P(VadvcPrecision, AssembledSystemAgreesWithOracleAssembly) {
  const FieldSet f = make_vadvc_fields({5, 5, 8}, kStencilHalo, GetParam(), 7);
  const TridiagonalSystem sys = vadvc_column_system(f, 2, 2);
  const std::vector<double> x = thomas_solve<double>(sys.lower, sys.diag, sys.upper, sys.rhs);
  const std::vector<long double> expected = oracle::vadvc_column(f, 2, 2);
  const double dtr = GetParam() == Precision::f32
                         ? static_cast<double>(static_cast<float>(f.dtr_stage))
                         : f.dtr_stage;
  for (std::size_t k = 0; k < 8; ++k)
    EXPECT_NEAR(dtr * (x[k] - f.upos.at(2, 2, k)), static_cast<double>(expected[k]), 1e-6);
}

// Without velocity or forcing the output is dtr·((dtr·upos)/dtr - upos),
// which vanishes up to one rounding of upos.
TEST_P(VadvcPrecision, ZeroVelocityLeavesOnlyRounding) {
  FieldSet f = make_vadvc_fields({6, 6, 5}, kStencilHalo, GetParam(), 2);
  f.wcon = make_grid({6, 6, 5}, kStencilHalo, ConstantInit{0.0}, GetParam());
  f.utens = make_grid({6, 6, 5}, kStencilHalo, ConstantInit{0.0}, GetParam());
  f.utensstage = make_grid({6, 6, 5}, kStencilHalo, ConstantInit{0.0}, GetParam());
  const Grid3D out = vadvc_reference(f);
  const double eps = GetParam() == Precision::f32 ? 0x1p-23 : 0x1p-52;
  for (std::size_t k = 0; k < 5; ++k)
    for (std::size_t j = 2; j < 4; ++j)
      for (std::size_t i = 2; i < 4; ++i)
        EXPECT_LE(std::fabs(out.at(i, j, k)), f.dtr_stage * eps * std::fabs(f.upos.at(i, j, k)));
}

INSTANTIATE_TEST_SUITE_P(Precisions, VadvcPrecision,
                         ::testing::Values(Precision::f32, Precision::f64));

TEST(Vadvc, ZeroVelocityIntegerInputsWithDyadicStep) {
  const Dims3 d{6, 6, 8};
  FieldSet f = make_vadvc_fields(d, kStencilHalo, Precision::f64, 0);
  f.wcon = make_grid(d, kStencilHalo, ConstantInit{0.0}, Precision::f64);
  f.dtr_stage = 0.25;
  SplitMix64 rng(9);
  for (Grid3D* g : {&f.upos, &f.utens, &f.utensstage})
    for (std::size_t k = 0; k < d.nz; ++k)
      for (std::size_t j = 0; j < d.ny; ++j)
        for (std::size_t i = 0; i < d.nx; ++i)
          g->set(i, j, k, static_cast<double>(rng.next_below(2001)) - 1000.0);
  const Grid3D out = vadvc_reference(f);
  for (std::size_t k = 0; k < d.nz; ++k)
    for (std::size_t j = 2; j < 4; ++j)
      for (std::size_t i = 2; i < 4; ++i)
        EXPECT_EQ(out.at(i, j, k), f.utens.at(i, j, k) + f.utensstage.at(i, j, k));
}

TEST(Vadvc, ColumnDependsOnOwnAndEastColumnOnly) {
  const Dims3 d{9, 7, 6};
  const FieldSet base = make_vadvc_fields(d, kStencilHalo, Precision::f64, 12);
  const Grid3D ref = vadvc_reference(base);
  FieldSet f = base;
  f.wcon.set(4, 3, 2, f.wcon.at(4, 3, 2) + 0.01);
  f.ustage.set(4, 3, 2, f.ustage.at(4, 3, 2) + 0.5);
  const Grid3D out = vadvc_reference(f);
  for (std::size_t j = 2; j < 5; ++j)
    for (std::size_t i = 2; i < 7; ++i) {
      bool same = true;
      for (std::size_t k = 0; k < d.nz; ++k) same = same && out.at(i, j, k) == ref.at(i, j, k);
      const bool touched = j == 3 && (i == 4 || i == 3);  // wcon(4) feeds columns 3 and 4
      EXPECT_EQ(same, !touched) << i << "," << j;
    }
}

TEST(Vadvc, HaloCopiedFromUtensstage) {
  const FieldSet f = make_vadvc_fields({7, 7, 4}, kStencilHalo, Precision::f32, 1);
  const Grid3D out = vadvc_reference(f);
  EXPECT_EQ(out.at(0, 0, 0), f.utensstage.at(0, 0, 0));
  EXPECT_EQ(out.at(6, 3, 3), f.utensstage.at(6, 3, 3));
  EXPECT_EQ(out.at(3, 1, 2), f.utensstage.at(3, 1, 2));
}

TEST(Vadvc, ValidationErrors) {
  FieldSet shallow = make_vadvc_fields({6, 6, 2}, kStencilHalo, Precision::f64, 1);
  EXPECT_THROW(vadvc_reference(shallow), KernelError);
  FieldSet mixed = make_vadvc_fields({6, 6, 4}, kStencilHalo, Precision::f64, 1);
  mixed.upos = make_grid({6, 6, 4}, kStencilHalo, ConstantInit{0}, Precision::f32);
  EXPECT_THROW(vadvc_reference(mixed), KernelError);
  FieldSet weights = make_vadvc_fields({6, 6, 4}, kStencilHalo, Precision::f64, 1);
  weights.bet_m = 0.9;
  EXPECT_THROW(vadvc_reference(weights), KernelError);
}

TEST(Vadvc, SingularPivotThrows) {
  FieldSet f = make_vadvc_fields({5, 5, 4}, kStencilHalo, Precision::f64, 1);
  f.wcon = make_grid({5, 5, 4}, kStencilHalo, ConstantInit{0.0}, Precision::f64);
  f.dtr_stage = 0.0;
  EXPECT_THROW(vadvc_reference(f), SingularSystemError);
}

TEST(Vadvc, OffCenteringWeights) {
  FieldSet f;
  f.set_off_centering(0.2);
  EXPECT_DOUBLE_EQ(f.bet_m, 0.4);
  EXPECT_DOUBLE_EQ(f.bet_p, 0.6);
}

// --- flop counts -------------------------------------------------------------

TEST(Flops, HdiffInstrumentedMatchesTally) {
  const Grid3D src = make_grid({6, 6, 1}, kStencilHalo, PseudoRandomInit{1}, Precision::f64);
  Counted::reset();
  for (std::size_t j = 2; j < 4; ++j)
    for (std::size_t i = 2; i < 4; ++i) {
      auto at = [&](int di, int dj) {
        return Counted(src.at(i + static_cast<std::size_t>(di), j + static_cast<std::size_t>(dj), 0));
      };
      detail::hdiff_point<Counted>(at, Counted(0.025));
    }
  // 5 laplacians of 1 mul + 4 subs, 4 flux subs, 3 adds + 1 mul + 1 sub.
  const std::uint64_t tally_adds = 4 * (5 * 4 + 4 + 4), tally_muls = 4 * (5 + 1);
  EXPECT_EQ(Counted::adds, tally_adds);
  EXPECT_EQ(Counted::muls, tally_muls);
  EXPECT_EQ(Counted::divs, 0u);
  EXPECT_EQ(Counted::adds + Counted::muls, 136u);
  const FlopCount f = count_flops(Kernel::hdiff, {6, 6, 1});
  EXPECT_EQ(f.total, 136u);
  EXPECT_EQ(f.adds, tally_adds);
  EXPECT_EQ(f.muls, tally_muls);
}

TEST(Flops, VadvcInstrumentedMatchesTally) {
  for (std::size_t nz : {3u, 4u, 8u, 64u}) {
    std::vector<Counted> ccol(nz), dcol(nz);
    SplitMix64 rng(nz);
    std::vector<double> vals(6 * nz);
    for (double& v : vals) v = rng.next_double();
    auto in = [&](detail::ColumnField f, std::size_t k) {
      return Counted(vals[static_cast<std::size_t>(f) * nz + k] + 1.0);
    };
    Counted::reset();
    detail::vadvc_column<Counted>(
        nz, in, [](std::size_t, Counted) {}, Counted(0.15), Counted(0.5), Counted(0.5),
        ccol.data(), dcol.data(), [](Counted, std::size_t) {});
    // top 6/5/2, inner 12/13/1, bottom 8/8/1, 1+1 per back-substituted
    // level, 1+1 per output level.
    const std::uint64_t inner = nz - 2;
    const std::uint64_t adds = 6 + 12 * inner + 8 + (nz - 1) + nz;
    const std::uint64_t muls = 5 + 13 * inner + 8 + (nz - 1) + nz;
    const std::uint64_t divs = 2 + inner + 1;
    EXPECT_EQ(Counted::adds, adds) << nz;
    EXPECT_EQ(Counted::muls, muls) << nz;
    EXPECT_EQ(Counted::divs, divs) << nz;
    const FlopCount fc = vadvc_column_flops(nz);
    EXPECT_EQ(fc.adds, adds);
    EXPECT_EQ(fc.muls, muls);
    EXPECT_EQ(fc.divs, divs);
    if (nz == 4) {
      EXPECT_EQ(fc.total, 96u);
      EXPECT_EQ(fc, (FlopCount{45, 46, 5, 96}));
    }
  }
  EXPECT_EQ(count_flops(Kernel::vadvc, {6, 6, 4}).total, 4u * 96u);
  EXPECT_EQ(count_flops(Kernel::copy, {64, 64, 64}).total, 0u);
}
