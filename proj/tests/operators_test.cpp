#include <gtest/gtest.h>

#include <cmath>

#include "scswalk/operators.hpp"

namespace scswalk {
namespace {

constexpr double kQuarter = kPi / 4;

// Position <- number change of basis, <n|m> = e^{-2 pi i n m / d} / sqrt d,
// tensored with the coin identity; built without any library helper.
ComplexMatrix fourier_oracle(std::size_t d) {
  ComplexMatrix t(2 * d, 2 * d);
  for (std::size_t n = 0; n < d; ++n)
    for (std::size_t m = 0; m < d; ++m) {
      const Complex w = std::exp(Complex(0.0, -2.0 * kPi * n * m / d)) / std::sqrt(double(d));
      t(2 * n, 2 * m) = w;
      t(2 * n + 1, 2 * m + 1) = w;
    }
  return t;
}

ComplexMatrix block_diag(const std::vector<ComplexMatrix>& blocks) {
  ComplexMatrix out(2 * blocks.size(), 2 * blocks.size());
  for (std::size_t m = 0; m < blocks.size(); ++m)
    for (std::size_t a = 0; a < 2; ++a)
      for (std::size_t b = 0; b < 2; ++b) out(2 * m + a, 2 * m + b) = blocks[m](a, b);
  return out;
}

ComplexMatrix taylor_exp(const ComplexMatrix& a) {
  ComplexMatrix term = ComplexMatrix::identity(a.rows());
  ComplexMatrix sum = term;
  for (int k = 1; k < 60; ++k) {
    term = term * a * Complex(1.0 / k);
    sum += term;
  }
  return sum;
}

TEST(Coin, ClosedForms) {
  const double r = 1.0 / std::sqrt(2.0);
  const ComplexMatrix hadamard_like{{r, Complex(0, -r)}, {Complex(0, -r), r}};
  EXPECT_LT(max_abs_diff(build_coin(kQuarter), hadamard_like), 1e-15);
  EXPECT_LT(max_abs_diff(build_coin(0.0), ComplexMatrix::identity(2)), 1e-15);
  EXPECT_LT(max_abs_diff(build_coin(kPi / 2), pauli::x() * Complex(0, -1)), 1e-15);
}

TEST(Shift, PermutationStructure) {
  EXPECT_EQ(build_shift(1), ComplexMatrix::identity(2));
  const ComplexMatrix s = build_shift(3);
  const auto col = s.column(0);  // (n=0, s=0)
  for (std::size_t r = 0; r < 6; ++r) EXPECT_EQ(col[r], r == 2 ? Complex(1.0) : Complex(0.0));
  // (n=0, s=1) wraps to (n=2, s=1)
  EXPECT_EQ(s(5, 1), Complex(1.0));
  EXPECT_THROW(build_shift(0), ValidationError);
}

TEST(Shift, FourierConjugationIsBlockDiagonal) {
  for (std::size_t d : {1u, 3u, 5u, 31u}) {
    const ComplexMatrix t = fourier_oracle(d);
    const ComplexMatrix k_space = t.adjoint() * build_shift(d) * t;
    std::vector<ComplexMatrix> expected;
    for (std::size_t m = 0; m < d; ++m) {
      const double k = 2.0 * kPi * m / d;
      expected.push_back(ComplexMatrix{{std::polar(1.0, k), 0.0}, {0.0, std::polar(1.0, -k)}});
    }
    EXPECT_LT(max_abs_diff(k_space, block_diag(expected)), 1e-10) << "d=" << d;
  }
}

TEST(Dtqw, PositionSpaceAction) {
  const std::size_t d = 7;
  for (double theta : {0.1, kQuarter, 1.3}) {
    const ComplexMatrix u = build_dtqw({d, theta});
    const double c = std::cos(theta), s = std::sin(theta);
    for (std::size_t n = 0; n < d; ++n) {
      const std::size_t up = (n + 1) % d, down = (n + d - 1) % d;
      for (std::size_t r = 0; r < 2 * d; ++r) {
        Complex e0{}, e1{};
        if (r == 2 * up) e0 = c, e1 = Complex(0, -s);
        if (r == 2 * down + 1) e0 = Complex(0, -s), e1 = c;
        EXPECT_EQ(u(r, 2 * n), e0);
        EXPECT_EQ(u(r, 2 * n + 1), e1);
      }
    }
  }
}

TEST(Dtqw, ZeroAngleIsTheShiftAndColumnsHaveTwoEntries) {
  EXPECT_LT(max_abs_diff(build_dtqw({5, 0.0}), build_shift(5)), 1e-15);
  const std::size_t d = 31;
  const ComplexMatrix u = build_dtqw({d, kQuarter});
  for (std::size_t c = 0; c < 2 * d; ++c) {
    int nonzero = 0;
    for (std::size_t r = 0; r < 2 * d; ++r) nonzero += std::abs(u(r, c)) > 1e-15;
    EXPECT_EQ(nonzero, 2);
  }
  // Column n = (d+1)/2, s = 0: two spikes of 1/2.
  const std::size_t n = (d + 1) / 2;
  EXPECT_NEAR(std::norm(u(2 * (n + 1), 2 * n)), 0.5, 1e-15);
  EXPECT_NEAR(std::norm(u(2 * (n - 1) + 1, 2 * n)), 0.5, 1e-15);
}

TEST(Scs, DecoupledLimits) {
  const std::size_t d = 7;
  EXPECT_LT(max_abs_diff(build_scs(d, {0.0, 0.7}),
                         kron(ComplexMatrix::identity(d), build_coin(0.7))),
            1e-12);
  // u2 = 0 with u1 = 2 pi / d reproduces the shift.
  EXPECT_LT(max_abs_diff(build_scs(d, {2 * kPi / d, 0.0}), build_shift(d)), 1e-12);
  // General u1: diagonal in the number basis with blocks e^{i u1 m sigma_z}.
  const double u1 = 0.37;
  const ComplexMatrix t = fourier_oracle(d);
  std::vector<ComplexMatrix> blocks;
  for (std::size_t m = 0; m < d; ++m)
    blocks.push_back(ComplexMatrix{{std::polar(1.0, u1 * m), 0.0}, {0.0, std::polar(1.0, -u1 * m)}});
  EXPECT_LT(max_abs_diff(t.adjoint() * build_scs(d, {u1, 0.0}) * t, block_diag(blocks)), 1e-12);
}

TEST(Scs, MatchesTaylorExponentialOfGenerator) {
  const std::size_t d = 5;
  const ScsParams p{0.9, 2.3};
  const ComplexMatrix t = fourier_oracle(d);
  std::vector<ComplexMatrix> blocks;
  for (std::size_t m = 0; m < d; ++m) {
    const ComplexMatrix gen = pauli::z() * Complex(0, p.u1 * m) + pauli::x() * Complex(0, -p.u2);
    blocks.push_back(taylor_exp(gen));
  }
  EXPECT_LT(max_abs_diff(build_scs(d, p), t * block_diag(blocks) * t.adjoint()), 1e-10);
}

TEST(Scs, DenseAndConcentratedNearDiagonal) {
  const std::size_t d = 31;
  const ComplexMatrix u = build_scs(d, {2 * kPi / d, kQuarter});
  for (const auto& x : u.entries()) ASSERT_GT(std::abs(x), 1e-12);

  // Column (n, s=0): the dominant element sits at n+1 on the same coin state.
  const std::size_t n = (d + 1) / 2;
  const auto col = u.column(2 * n);
  std::size_t arg = 0;
  for (std::size_t r = 0; r < col.size(); ++r)
    if (std::norm(col[r]) > std::norm(col[arg])) arg = r;
  EXPECT_EQ(arg, 2 * (n + 1));
  double near = 0.0;
  for (std::size_t r = 2 * (n - 2); r < 2 * (n + 3); ++r) near += std::norm(col[r]);
  EXPECT_GT(near, 0.9);
}

TEST(Operators, AllBuildersAreUnitary) {
  for (std::size_t d : {1u, 3u, 5u, 31u}) {
    EXPECT_LT(unitarity_defect(build_shift(d)), 1e-10);
    EXPECT_LT(unitarity_defect(build_dtqw({d, 0.3})), 1e-10);
    EXPECT_LT(unitarity_defect(build_scs(d, {2 * kPi / d, kQuarter})), 1e-10);
    EXPECT_LT(unitarity_defect(build_scs(d, {1.3650 * 2 * kPi / d, 15.9462 * kQuarter})), 1e-10);
    const ComplexMatrix f = phase_distribution_basis(d);
    EXPECT_LT(unitarity_defect(f), 1e-12);
  }
}

TEST(PhaseBasis, DirectEvaluation) {
  EXPECT_EQ(phase_distribution_basis(1), ComplexMatrix{{1.0}});
  const ComplexMatrix f = phase_distribution_basis(4);
  for (std::size_t n = 0; n < 4; ++n)
    for (std::size_t m = 0; m < 4; ++m)
      EXPECT_LT(std::abs(f(n, m) - std::exp(Complex(0, 2 * kPi * n * m / 4.0)) / 2.0), 1e-15);
}

TEST(CoherentState, VacuumAndNormalization) {
  const auto vac = coherent_state(0.0, 5, 1);
  EXPECT_EQ(vac.retained_weight, 1.0);
  const auto expected = number_state(0, 5, 1);
  EXPECT_LT(max_abs_diff(vac.state.amplitudes(), expected.amplitudes()), 1e-15);

  for (Complex alpha : {Complex(0.3, 0.1), Complex(-5.0, 0.0), Complex(2.0, -3.0), Complex(9.0, 0.0)}) {
    const auto cs = coherent_state(alpha, 31);
    EXPECT_NEAR(norm2(cs.state.amplitudes()), 1.0, 1e-12);
  }
}

TEST(CoherentState, RetainedWeightIsPoissonCdf) {
  // Poisson(25) CDF at 30 by term recursion.
  double term = std::exp(-25.0), cdf = 0.0;
  for (int m = 0; m <= 30; ++m) {
    cdf += term;
    term *= 25.0 / (m + 1);
  }
  const auto cs = coherent_state(std::polar(5.0, kPi), 31);
  EXPECT_NEAR(cs.retained_weight, cdf, 1e-12);
  EXPECT_FALSE(cs.heavily_truncated);

  // Number-basis amplitudes: renormalized alpha^m / sqrt(m!).
  const ComplexMatrix t = fourier_oracle(31);
  const auto number = t.adjoint() * cs.state.amplitudes();
  Complex c = 1.0;
  double norm = 0.0;
  ComplexVector expect(62);
  for (int m = 0; m < 31; ++m) {
    expect[2 * m] = c;
    norm += std::norm(c);
    c *= Complex(-5.0) / std::sqrt(double(m + 1));
  }
  for (auto& x : expect) x /= std::sqrt(norm);
  EXPECT_LT(max_abs_diff(number, expect), 1e-12);
}

TEST(CoherentState, WarnsWhenMostWeightIsTruncated) {
  const auto cs = coherent_state(8.0, 31);
  EXPECT_TRUE(cs.heavily_truncated);
  EXPECT_LT(cs.retained_weight, 0.5);
  EXPECT_NEAR(norm2(cs.state.amplitudes()), 1.0, 1e-12);
  EXPECT_THROW(coherent_state(1.0, 5, 2), ValidationError);
}

TEST(StateVector, RejectsBadInput) {
  EXPECT_THROW(StateVector(2, ComplexVector(3)), ValidationError);
  EXPECT_THROW(StateVector(2, ComplexVector(4)), ToleranceError);
}

TEST(Trotter, CommutingTermsHaveNoDefect) {
  for (std::size_t n : {1u, 3u, 10u}) EXPECT_LT(trotter_defect({5, 0.0}, n), 1e-12);
  EXPECT_THROW(trotter_defect({5, kQuarter}, 0), ValidationError);
}

TEST(Trotter, DirectProductOracle) {
  // Block-wise Taylor exponentials in k-space, rotated to position space.
  const std::size_t d = 5;
  const double theta = kQuarter;
  const std::size_t n = 2;
  std::vector<ComplexMatrix> slice, exact;
  for (std::size_t m = 0; m < d; ++m) {
    const double k = 2 * kPi * m / d;
    const ComplexMatrix hs = pauli::z() * Complex(-k), hc = pauli::x() * Complex(theta);
    const ComplexMatrix step = taylor_exp(hs * Complex(0, -1.0 / n)) * taylor_exp(hc * Complex(0, -1.0 / n));
    slice.push_back(step * step);
    exact.push_back(taylor_exp((hs + hc) * Complex(0, -1)));
  }
  const ComplexMatrix t = fourier_oracle(d);
  const double oracle = max_abs_diff(t * block_diag(slice) * t.adjoint(), t * block_diag(exact) * t.adjoint());
  EXPECT_NEAR(trotter_defect({d, theta}, n), oracle, 1e-10);
  // Frozen from the oracle above (cross-checked with an independent scipy expm run).
  EXPECT_NEAR(oracle, 0.24896153460692, 1e-10);
}

TEST(Trotter, DefectDecaysMonotonically) {
  double prev = std::numeric_limits<double>::infinity();
  for (std::size_t n = 1; n <= 128; n *= 2) {
    const double defect = trotter_defect({5, kQuarter}, n);
    EXPECT_LE(defect, prev + 1e-9) << "n=" << n;
    prev = defect;
  }
  EXPECT_LT(trotter_defect({5, kQuarter}, 64), trotter_defect({5, kQuarter}, 8));
}

}  // namespace
}  // namespace scswalk
