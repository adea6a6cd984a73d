#include <cmath>
#include <numbers>
#include <vector>

#include <gtest/gtest.h>

#include "modval/faux_qubit.hpp"
#include "modval/modular_dynamics.hpp"
#include "oracles.hpp"

using namespace modval;

namespace {

std::vector<double> forward_profile(const PpsEnsemble& ens, const Projector& A, const PointerState& phi,
                                    double gamma) {
    return spatial_profile(apply_modular_operator(ens, A, phi, gamma));
}

}  // namespace

TEST(FauxBasis, Examples) {
    const auto phi = gaussian_pointer(Grid::for_shifts(1.0, 0.0, 12.0), 1.0);
    const auto b0 = faux_basis(phi, 0.0);
    EXPECT_NEAR(b0.overlap_01.real(), 1.0, 1e-13);

    const auto b2 = faux_basis(phi, 2.0);
    EXPECT_NEAR(b2.overlap_01.real(), 0.606531, 1e-6);
    EXPECT_NEAR(b2.overlap_01.real(), std::exp(-0.5), 1e-8);
    EXPECT_NEAR(b2.overlap_01.imag(), 0.0, 1e-10);
    EXPECT_NEAR(b2.zero.norm_squared(), 1.0, 1e-12);
    EXPECT_NEAR(b2.one.norm_squared(), 1.0, 1e-12);
    EXPECT_EQ(b2.overlap_01, overlap(phi, translate(phi, 2.0)));

    const auto b12 = faux_basis(phi, 12.0);
    EXPECT_LT(std::abs(b12.overlap_01), 1e-7);
    EXPECT_NEAR(std::abs(b12.overlap_01), std::exp(-18.0), 1e-10);
}

TEST(FauxBasis, WraparoundRisk) {
    const auto phi = gaussian_pointer(Grid(-16, 16, 512), 1.0);
    EXPECT_THROW(faux_basis(phi, 12.0), WraparoundRisk);
}

TEST(OrthogonalityScan, Examples) {
    const auto phi = gaussian_pointer(Grid::for_shifts(1.0, 0.0, 6.0), 1.0);
    const std::vector<double> zero{0.0};
    EXPECT_NEAR(orthogonality_scan(phi, zero).front().abs_overlap, 1.0, 1e-13);

    const std::vector<double> gammas{2.0, 4.0, 6.0};
    const auto rows = orthogonality_scan(phi, gammas);
    ASSERT_EQ(rows.size(), 3u);
    EXPECT_NEAR(rows[0].abs_overlap, std::exp(-0.5), 1e-8);
    EXPECT_NEAR(rows[1].abs_overlap, std::exp(-2.0), 1e-8);
    EXPECT_NEAR(rows[2].abs_overlap, std::exp(-4.5), 1e-8);
}

TEST(OrthogonalityScan, StrictlyDecreasing) {
    std::vector<double> gammas;
    for (double g = 0.0; g <= 12.0; g += 0.25) gammas.push_back(g);
    const auto phi = gaussian_pointer(Grid::for_shifts(1.0, 0.0, 12.0), 1.0);
    const auto rows = orthogonality_scan(phi, gammas);
    for (std::size_t i = 1; i < rows.size(); ++i) EXPECT_LT(rows[i].abs_overlap, rows[i - 1].abs_overlap);
}

TEST(ReadFauxQubit, WeakValueOneIsDegenerate) {
    const auto phi = gaussian_pointer(Grid::for_shifts(1.0, 0.0, 8.0), 1.0);
    const auto ens = oracle::ensemble_with_real_weak_value(1.0);
    const auto est = read_faux_qubit(forward_profile(ens, Projector::onto_basis(2, 1), phi, 8.0), phi.grid(), 8.0, 1.0);
    EXPECT_TRUE(est.degenerate());
    EXPECT_EQ(est.missing, MissingPeak::Zero);
    EXPECT_EQ(est.candidate, 1.0);
}

TEST(ReadFauxQubit, WeakValueZeroIsDegenerate) {
    const auto phi = gaussian_pointer(Grid::for_shifts(1.0, 0.0, 8.0), 1.0);
    const auto ens = oracle::ensemble_with_real_weak_value(0.0);
    const auto est = read_faux_qubit(forward_profile(ens, Projector::onto_basis(2, 1), phi, 8.0), phi.grid(), 8.0, 1.0);
    EXPECT_EQ(est.missing, MissingPeak::One);
    EXPECT_EQ(est.candidate, 0.0);
}

TEST(ReadFauxQubit, EqualPeaks) {
    const auto phi = gaussian_pointer(Grid::for_shifts(1.0, 0.0, 8.0), 1.0);
    const auto ens = oracle::ensemble_with_real_weak_value(0.5);
    const auto est = read_faux_qubit(forward_profile(ens, Projector::onto_basis(2, 1), phi, 8.0), phi.grid(), 8.0, 1.0);
    EXPECT_NEAR(est.peak_ratio, 1.0, 1e-3);
    EXPECT_NEAR(est.candidate, 0.5, 1e-3);
    EXPECT_NEAR(est.interference_bound, std::exp(-8.0), 1e-15);
    EXPECT_NEAR(est.zero_peak_q, 0.0, phi.grid().dq());
    EXPECT_NEAR(est.one_peak_q, 8.0, phi.grid().dq());
}

TEST(ReadFauxQubit, RecoversPointThree) {
    const auto phi = gaussian_pointer(Grid::for_shifts(1.0, 0.0, 8.0), 1.0);
    const auto ens = oracle::ensemble_with_real_weak_value(0.3);
    const auto A = Projector::onto_basis(2, 1);
    ASSERT_NEAR(weak_value(ens, A).value.real(), 0.3, 1e-15);
    const auto est = read_faux_qubit(forward_profile(ens, A, phi, 8.0), phi.grid(), 8.0, 1.0);
    EXPECT_NEAR(est.candidate, 0.3, 5e-3);
    ASSERT_TRUE(est.alt_candidate.has_value());
    // the other real branch, -sqrt(r)/(1 - sqrt(r)) with sqrt(r) = 3/7
    EXPECT_NEAR(*est.alt_candidate, -0.75, 2e-2);
}

TEST(ReadFauxQubit, NegativeWeakValueAppearsInSecondBranch) {
    // psi_i = (cos a, sin a), psi_f = (cos b, sin b), A = |1><1|:
    // A_w = sin a sin b / cos(a - b) = -1/sqrt(2) for a = pi/4, b = -pi/8
    const double a = std::numbers::pi / 4, b = -std::numbers::pi / 8;
    const PpsEnsemble ens(SystemState({std::cos(a), std::sin(a)}), SystemState({std::cos(b), std::sin(b)}));
    const auto A = Projector::onto_basis(2, 1);
    const double aw = weak_value(ens, A).value.real();
    EXPECT_NEAR(aw, -std::numbers::sqrt2 / 2, 1e-14);
    const auto phi = gaussian_pointer(Grid::for_shifts(1.0, 0.0, 8.0), 1.0);
    const auto est = read_faux_qubit(forward_profile(ens, A, phi, 8.0), phi.grid(), 8.0, 1.0);
    ASSERT_TRUE(est.alt_candidate.has_value());
    EXPECT_NEAR(*est.alt_candidate, aw, 1e-2);
}

TEST(ReadFauxQubit, NegativeCouplingMirrorsSides) {
    const auto phi = gaussian_pointer(Grid::for_shifts(1.0, -8.0, 0.0), 1.0);
    const auto ens = oracle::ensemble_with_real_weak_value(0.3);
    const auto est = read_faux_qubit(forward_profile(ens, Projector::onto_basis(2, 1), phi, -8.0), phi.grid(), -8.0, 1.0);
    EXPECT_NEAR(est.candidate, 0.3, 5e-3);
    EXPECT_NEAR(est.one_peak_q, -8.0, phi.grid().dq());
}

TEST(ReadFauxQubit, RoundTripAcrossWeakValues) {
    const auto phi = gaussian_pointer(Grid::for_shifts(1.0, 0.0, 8.0), 1.0);
    const auto A = Projector::onto_basis(2, 1);
    for (int i = 1; i <= 9; ++i) {
        const double aw = 0.1 * i;
        const auto est =
            read_faux_qubit(forward_profile(oracle::ensemble_with_real_weak_value(aw), A, phi, 8.0), phi.grid(), 8.0, 1.0);
        EXPECT_NEAR(est.candidate, aw, 1e-2) << "A_w = " << aw;
    }
}

TEST(ReadFauxQubit, Errors) {
    const auto phi = gaussian_pointer(Grid::for_shifts(1.0, 0.0, 8.0), 1.0);
    const auto profile = forward_profile(oracle::ensemble_with_real_weak_value(0.5), Projector::onto_basis(2, 1), phi, 3.0);
    EXPECT_THROW(read_faux_qubit(profile, phi.grid(), 3.0, 1.0), InterferenceTooLarge);
    ReadoutOptions relaxed;
    relaxed.min_separation = 2.0;
    EXPECT_NO_THROW(read_faux_qubit(profile, phi.grid(), 3.0, 1.0, relaxed));

    const std::vector<double> flat(phi.size(), 0.0);
    EXPECT_THROW(read_faux_qubit(flat, phi.grid(), 8.0, 1.0), PeakNotFound);
    EXPECT_THROW(read_faux_qubit(std::vector<double>(10, 0.0), phi.grid(), 8.0, 1.0), DimensionMismatch);
}
