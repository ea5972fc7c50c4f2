#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "kacz/error.hpp"
#include "kacz/kaczmarz.hpp"
#include "kacz/spectral.hpp"
#include "oracles.hpp"

using namespace kacz;

TEST(Spectral, OrthogonalRowsHaveZeroRadius)
{
    const Matrix a = (Matrix(2, 2) << 1, 2, -2, 1).finished();
    const SpectralDiagnostics d = spectral_diagnostics(LinearSystem(RowMatrix::dense(a), Vector::Ones(2)));
    EXPECT_LT(d.spectral_radius, 1e-15);
}

TEST(Spectral, IdentityHasZeroRadiusAndMeany)
{
    const SpectralDiagnostics d =
        spectral_diagnostics(LinearSystem(RowMatrix::dense(Matrix::Identity(4, 4)), Vector::Ones(4)));
    EXPECT_EQ(d.spectral_radius, 0.0);
    EXPECT_NEAR(d.meany_constant, 0.0, 1e-15);
    EXPECT_NEAR(d.condition_number, 1.0, 1e-14);
}

TEST(Spectral, IterationMatrixMatchesProjectorProduct)
{
    std::mt19937_64 gen(11);
    const Matrix a = oracle::random_well_conditioned(7, gen);
    const LinearSystem s = oracle::dense_system(a);
    EXPECT_LT((iteration_matrix(s) - oracle::sweep_matrix(a)).norm(), 1e-13);
}

TEST(Spectral, RadiusBelowOneAndSorted)
{
    for (auto kind : {GalleryKind::parter, GalleryKind::toeppen, GalleryKind::lesp}) {
        const SpectralDiagnostics d = spectral_diagnostics(precondition_rows(build_gallery(kind, 40)));
        EXPECT_LT(d.spectral_radius, 1.0) << to_string(kind);
        for (Index i = 1; i < d.eigenvalues.size(); ++i)
            EXPECT_LE(std::abs(d.eigenvalues[i]), std::abs(d.eigenvalues[i - 1]) + 1e-15);
    }
}

TEST(Spectral, RowScalingLeavesSpectrumUnchanged)
{
    const LinearSystem s = build_gallery(GalleryKind::lesp, 30);
    const auto raw = spectral_diagnostics(s);
    const auto scaled = spectral_diagnostics(precondition_rows(s));
    EXPECT_NEAR(raw.spectral_radius, scaled.spectral_radius, 1e-10);
    EXPECT_NEAR(raw.meany_constant, scaled.meany_constant, 1e-10);
}

TEST(Spectral, MeanyMatchesDeterminant)
{
    std::mt19937_64 gen(12);
    const Matrix a = oracle::random_well_conditioned(6, gen);
    double rows = 1.0;
    for (Index i = 0; i < 6; ++i) rows *= a.row(i).squaredNorm();
    const double det = a.determinant();
    EXPECT_NEAR(meany_constant(oracle::dense_system(a)), 1.0 - det * det / rows, 1e-13);
}

TEST(Spectral, MinimalPolynomialDegree)
{
    std::mt19937_64 gen(13);
    const Matrix a = oracle::random_well_conditioned(8, gen);
    const LinearSystem s = oracle::dense_system(a);
    SpectralOptions opts;
    opts.eigenvectors = true;
    const SpectralDiagnostics d = spectral_diagnostics(s, opts);
    EXPECT_EQ(d.minimal_polynomial_degree, 8);

    // Start at x - v with v a real eigenvector of a real eigenvalue: degree 1.
    for (Index i = 0; i < 8; ++i) {
        if (std::abs(d.eigenvalues[i].imag()) > 1e-12 || std::abs(d.eigenvalues[i]) < 1e-8) continue;
        const Vector v = d.eigenvectors.col(i).real();
        opts.initial_guess = *s.solution() - v / v.norm();
        EXPECT_EQ(spectral_diagnostics(s, opts).minimal_polynomial_degree, 1);
        break;
    }
}

TEST(Spectral, Guard)
{
    SpectralOptions opts;
    opts.max_order = 10;
    EXPECT_THROW(spectral_diagnostics(build_gallery(GalleryKind::lesp, 11), opts), CapabilityError);
}
