#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "wgporo/spectrum.hpp"

namespace wgporo {
namespace {

AssembledBlocks blocks_for(int n, double lambda, double c0, double dt, int dim = 2) {
  const Mesh mesh(n, dim);
  const DofMap dofs(mesh);
  return assemble_blocks(mesh, dofs, ProblemParams::make(dim, 1.0, lambda, 1.0, c0, 1.0, dt));
}

std::string describe(const SpectralReport& r) {
  std::string s = r.tag + " n=" + std::to_string(r.n) + " lambda=" + shortest(r.lambda) +
                  " c0=" + shortest(r.c0) + " dt=" + shortest(r.dt);
  for (const BoundCheck& c : r.checks)
    s += "; " + c.name + " " + shortest(c.value) + (c.at_least ? " >= " : " <= ") + shortest(c.limit);
  return s;
}

/// Greedy multiset distance between two complex spectra of equal size.
double multiset_distance(std::vector<std::complex<double>> a, std::vector<std::complex<double>> b) {
  EXPECT_EQ(a.size(), b.size());
  double worst = 0.0;
  for (const auto& x : a) {
    auto it = std::min_element(b.begin(), b.end(),
                               [&](const auto& p, const auto& q) { return std::abs(p - x) < std::abs(q - x); });
    worst = std::max(worst, std::abs(*it - x));
    b.erase(it);
  }
  return worst;
}

double max_imag(const std::vector<std::complex<double>>& v) {
  double m = 0.0;
  for (const auto& z : v) m = std::max(m, std::abs(z.imag()));
  return m;
}

TEST(Spectrum, OperatorInequality) {
  for (int n : {4, 8, 16}) {
    const SpectralReport r = operator_inequality(blocks_for(n, 1.4286, 1.0, 1e-3));
    EXPECT_TRUE(r.pass) << describe(r);
    EXPECT_LE(r.max_eig, 2.0 + 1e-10);
  }
  for (int n : {2, 4}) {
    const SpectralReport r = operator_inequality(blocks_for(n, 1.4286, 1.0, 1e-3, 3));
    EXPECT_TRUE(r.pass) << describe(r);
    EXPECT_LE(r.max_eig, 3.0 + 1e-10);
  }
}

TEST(Spectrum, TwoFieldBoundsOnGrid) {
  for (int n : {4, 8})
    for (double lambda : {1.4286, 1.6667e3, 1.6667e6})
      for (double c0 : {0.0, 1.0})
        for (double dt : {1e-3, 1e-6}) {
          const SpectralReport r = dense_schur_two_field(blocks_for(n, lambda, c0, dt));
          EXPECT_TRUE(r.pass) << describe(r);
          EXPECT_GE(r.min_eig, 1.0 - 1e-8);
        }
}

TEST(Spectrum, TwoFieldExampleBound) {
  const AssembledBlocks b = blocks_for(8, 1.4286, 1.0, 1e-3);
  const SpectralReport r = dense_schur_two_field(b);
  EXPECT_NEAR(r.bound, 1.0 + b.params.eps / b.params.mu, 1e-12);
  EXPECT_NEAR(r.bound, 1.56, 0.01);
  EXPECT_LE(r.max_eig, r.bound + 1e-8);
}

TEST(Spectrum, TwoFieldLockingLimitSpread) {
  const SpectralReport r = dense_schur_two_field(blocks_for(8, 1.6667e6, 1.0, 1e-3));
  EXPECT_LE(r.max_eig - 1.0, 1e-3);
}

TEST(Spectrum, ElasticityStructure) {
  for (int n : {4, 8})
    for (double lambda : {1.4286, 1.6667e3, 1.6667e6}) {
      const AssembledBlocks b = blocks_for(n, lambda, 1.0, 1e-3);
      const SpectralReport r = dense_schur_elasticity(b);
      EXPECT_TRUE(r.pass) << describe(r);
      EXPECT_NEAR(r.min_eig / b.params.eps, 1.0, 1e-6);
      EXPECT_LE(r.max_eig, 2.0 + b.params.eps + 1e-8);
      const double gap = (b.params.eps + r.beta * r.beta) / 2;
      EXPECT_EQ(std::count_if(r.eigenvalues.begin(), r.eigenvalues.end(), [&](double x) { return x < gap; }), 1);
    }
}

TEST(Spectrum, InfSupRobust) {
  std::vector<double> betas;
  for (int n : {4, 8, 16}) {
    const InfSup s = compute_infsup(blocks_for(n, 1.4286, 1.0, 1e-3));
    EXPECT_EQ(s.near_zero, 1);
    EXPECT_GT(s.beta, 0.0);
    EXPECT_LE(s.beta * s.beta, 2.0);
    betas.push_back(s.beta);
  }
  EXPECT_GE(betas[1] / betas[0], 0.8);
  EXPECT_LE(betas[1] / betas[0], 1.25);
  EXPECT_LE(*std::max_element(betas.begin(), betas.end()) / *std::min_element(betas.begin(), betas.end()), 1.25);
}

TEST(Spectrum, ThreeFieldSchurBoundsOnGrid) {
  for (int n : {4, 8})
    for (double lambda : {1.4286, 1.6667e3, 1.6667e6})
      for (double c0 : {0.0, 1.0})
        for (double dt : {1e-3, 1e-6}) {
          const SpectralReport r = dense_schur_three_field(blocks_for(n, lambda, c0, dt));
          EXPECT_TRUE(r.pass) << describe(r);
        }
}

TEST(Spectrum, ThreeFieldOutlierAndLimit) {
  for (double c0 : {0.0, 1.0}) {
    const AssembledBlocks lock = blocks_for(4, 1.6667e6, c0, 1e-3);
    const SpectralReport p = preconditioned_three_field(lock);
    EXPECT_TRUE(p.pass) << describe(p);
    const SpectralReport l = three_field_limit(lock);
    EXPECT_TRUE(l.pass) << describe(l);
    const SpectralReport mid = preconditioned_three_field(blocks_for(4, 1.6667e3, c0, 1e-6));
    EXPECT_TRUE(mid.pass) << describe(mid);
  }
}

TEST(Spectrum, SymmetricInputsHaveRealEigenvalues) {
  const AssembledBlocks b = blocks_for(4, 1.4286, 1.0, 1e-3);
  const DenseMatrix a1 = to_dense(b.A1);
  const auto eig = preconditioned_eigenvalues({a1, DenseMatrix::Identity(a1.rows(), a1.cols())});
  EXPECT_LE(max_imag(eig), 1e-10);
}

TEST(Spectrum, ElasticityPairMatchesClosedForm) {
  for (double lambda : {1.4286, 1.6667e3}) {
    const AssembledBlocks b = blocks_for(4, lambda, 1.0, 1e-3);
    const auto eig = preconditioned_eigenvalues(dense_elasticity_pair(b));
    const SpectralReport r = dense_schur_elasticity(b);
    // r.eigenvalues is the closed form {1}^nu u {eps + sigma^2} from the SVD.
    std::vector<std::complex<double>> expected;
    for (double x : r.eigenvalues) expected.emplace_back(x, 0.0);
    EXPECT_LE(multiset_distance(eig, expected), 1e-8) << lambda;
    EXPECT_NEAR(eig.front().real(), b.params.eps, 1e-8 * b.params.eps + 1e-12);
  }
}

TEST(Spectrum, TwoFieldFullEqualsOneUnionReduced) {
  // eig(P2^{-1} A2) = {1}^(nu + facets) u eig(reduced pair).
  for (double lambda : {1.4286, 1.6667e3, 1.6667e6})
    for (double c0 : {0.0, 1.0})
      for (double dt : {1e-3, 1e-6}) {
        const AssembledBlocks b = blocks_for(4, lambda, c0, dt);
        const auto full = preconditioned_eigenvalues(dense_two_field_pair(b));
        auto expected = preconditioned_eigenvalues(dense_reduced_two_field_pair(b));
        const size_t ones = full.size() - expected.size();
        EXPECT_EQ(ones, static_cast<size_t>(b.np - b.nel));
        expected.insert(expected.end(), ones, 1.0);
        EXPECT_LE(multiset_distance(full, expected), 1e-8) << lambda << " " << c0 << " " << dt;
      }
}

TEST(Spectrum, ThreeFieldFullEqualsOneUnionSchur) {
  for (double lambda : {1.4286, 1.6667e6}) {
    const AssembledBlocks b = blocks_for(4, lambda, 1.0, 1e-3);
    const auto full = preconditioned_eigenvalues(dense_three_field_pair(b));
    const SpectralReport s = dense_schur_three_field(b);
    std::vector<std::complex<double>> expected(static_cast<size_t>(b.nu + b.np - b.nel), 1.0);
    for (double x : s.eigenvalues) expected.emplace_back(x, 0.0);
    EXPECT_LE(multiset_distance(full, expected), 1e-8) << lambda;
  }
}

TEST(LemmaSuite, PassesForSeveralSeeds) {
  for (std::uint64_t seed : {1u, 2u, 42u}) {
    const LemmaSuiteReport r = lemma_a1_suite(seed, 50);
    EXPECT_EQ(r.trials, 50);
    EXPECT_LE(r.multiset_error, 1e-8);
    EXPECT_LE(r.exact_schur_error, 1e-10);
    EXPECT_LE(r.c0_poly_error, 1e-8);
    EXPECT_LE(r.general_poly_error, 1e-8);
    EXPECT_LE(r.pinv_error, 1e-8);
    EXPECT_LE(r.norm_identity_error, 1e-8);
    EXPECT_TRUE(r.pass);
  }
}

TEST(SpectralCsv, RowShape) {
  const SpectralReport r = operator_inequality(blocks_for(4, 1.4286, 1.0, 1e-3));
  EXPECT_EQ(spectral_csv_header(), "tag,n,lambda,c0,dt,min_eig,max_eig,bound,pass");
  const std::string row = to_csv_row(r);
  EXPECT_EQ(std::count(row.begin(), row.end(), ','), 8);
  EXPECT_EQ(row.substr(0, 7), "A0A1,4,");
}

}  // namespace
}  // namespace wgporo
