#include "fractal_tube/checks.hpp"
#include "fractal_tube/error.hpp"
#include "fractal_tube/oracle.hpp"
#include "fractal_tube/spec_io.hpp"
#include "fractal_tube/tube.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>

using namespace fractal_tube;

namespace {

ErrorCode code_of(auto&& fn)
{
    try {
        fn();
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("expected an error");
    return ErrorCode::InvalidArgument;
}

// Closed form for a two-map string with one gap of length l.
double string_content(double r1, double r2, double l)
{
    const IfsSystem s = ratio_system({r1, r2}, 1);
    const double D = moran_dimension(s);
    const double weight = std::pow(r1, D) * std::log(1 / r1) + std::pow(r2, D) * std::log(1 / r2);
    return std::pow(2.0, 1 - D) * std::pow(l, D) / (D * (1 - D) * weight);
}

}  // namespace

TEST_CASE("residue sum with the dominant pole only")
{
    const SystemSpec cantor = parse_system_spec(cantor_spec());
    const IfsSystem& sys = cantor.system;
    const LatticeClass cls = lattice_of(cantor);
    const double D = moran_dimension(sys);
    const auto only_d = lattice_poles(sys, cls, 0);
    const double eps = 0.01;
    const TubeEstimate v = residue_tube_volume(sys, cantor.profiles, only_d, eps);

    const FourierCoeffs fc = lattice_fourier_coeffs(sys, cls, cantor.profiles, 20);
    const double zeta0 = 1.0 / (1.0 - 2.0);
    const double expected = std::pow(eps, 1 - D) * fc.at(0).real() * fc.prefactor + zeta0 * 2.0 * eps;
    CHECK(v.value == doctest::Approx(expected).epsilon(1e-13));
    CHECK(std::isinf(v.error_bar));

    double tail = 0.0;
    for (int n = 1; n <= 20; ++n) {
        tail += 2.0 * std::abs(fc.at(n));
    }
    // |a_n| ~ 1/n^2: bound the rest of the tail by the last term times n
    tail += 2.0 * std::abs(fc.at(20)) * 20;
    tail *= fc.prefactor * std::pow(eps, 1 - D);
    const double direct = tiling_volume_direct(sys, cantor.profiles, eps);
    CHECK(std::abs(v.value - direct) <= tail);
}

TEST_CASE("residue sum edge cases")
{
    const SystemSpec gasket = parse_system_spec(gasket_spec());
    const IfsSystem& sys = gasket.system;
    const LatticeClass cls = lattice_of(gasket);
    const auto poles = lattice_poles(sys, cls, 5);

    CHECK(residue_tube_volume(sys, {}, poles, 0.01).value == 0.0);

    // eps above the inradius: the contour shift still works while eps < g / r_min
    const double g = gasket.profiles[0].inradius;
    for (double eps : {1.2 * g, 1.5 * g, 1.9 * g}) {
        const double direct = tiling_volume_direct(sys, gasket.profiles, eps);
        CHECK(residue_tube_volume(sys, gasket.profiles, poles, eps).value == doctest::Approx(direct).epsilon(1e-5));
    }
    // past g / r_min the left remainder no longer vanishes
    const double far = tiling_volume_direct(sys, gasket.profiles, 3.0 * g);
    CHECK(std::abs(residue_tube_volume(sys, gasket.profiles, poles, 3.0 * g).value - far) > 0.01 * far);

    std::vector<ComplexDimension> missing(poles.begin(), poles.end());
    missing.erase(missing.begin() + 5);  // drops D
    CHECK(code_of([&] { residue_tube_volume(sys, gasket.profiles, missing, 0.01); }) ==
          ErrorCode::MissingDominantPole);

    std::vector<ComplexDimension> lopsided(poles.begin(), poles.end());
    lopsided.erase(lopsided.begin());
    CHECK(code_of([&] { residue_tube_volume(sys, gasket.profiles, lopsided, 0.01); }) ==
          ErrorCode::ConjugateMismatch);

    std::vector<ComplexDimension> collide(poles.begin(), poles.end());
    collide.push_back({cplx(1.0, 0.0), cplx(1.0, 0.0), true});
    CHECK(code_of([&] { residue_tube_volume(sys, gasket.profiles, collide, 0.01); }) == ErrorCode::PoleCollision);
}

TEST_CASE("oracle equivalence on a log grid")
{
    for (const auto& doc : {gasket_spec(), orthic_spec(50, 60, 70)}) {
        const SystemSpec spec = parse_system_spec(doc);
        const auto poles = tube_poles(spec.system, lattice_of(spec), 50.0);
        const GridComparison c =
            compare_residue_direct(spec.system, spec.profiles, poles, 1e-4, spec.profiles[0].inradius, 50);
        CHECK(c.max_rel_error < 1e-3);
    }
    // within the empirical error bar where the truncation error is larger
    for (const auto& doc : {cantor_spec(), string_spec()}) {
        const SystemSpec spec = parse_system_spec(doc);
        const auto poles = tube_poles(spec.system, lattice_of(spec), 50.0);
        for (double eps : log_epsilon_grid(1e-4, spec.profiles[0].inradius, 50)) {
            const TubeEstimate v = residue_tube_volume(spec.system, spec.profiles, poles, eps);
            const double direct = tiling_volume_direct(spec.system, spec.profiles, eps);
            CHECK(std::abs(v.value - direct) <= v.error_bar);
            CHECK(v.imag_residual <= 1e-8);
        }
    }
}

TEST_CASE("Minkowski content closed forms")
{
    const SystemSpec str = parse_system_spec(string_spec());
    const double M = minkowski_content(str.system, str.profiles);
    CHECK(M == doctest::Approx(string_content(0.5, 1.0 / 3, 1.0 / 6)).epsilon(1e-12));
    CHECK(M == doctest::Approx(average_content(str.system, str.profiles)));

    const OrthicGeometry geo = orthic_geometry(50, 60, 70);
    const GeneratorProfile pedal = profile_triangle(geo.feet[0], geo.feet[1], geo.feet[2]);
    const SystemSpec orthic = parse_system_spec(orthic_spec(50, 60, 70));
    const std::vector<GeneratorProfile> from_feet{pedal};
    CHECK(minkowski_content(orthic.system, orthic.profiles) ==
          doctest::Approx(minkowski_content(orthic.system, from_feet)).epsilon(1e-12));
    CHECK(minkowski_content(orthic.system, orthic.profiles) > 0.0);

    const SystemSpec gasket = parse_system_spec(gasket_spec());
    CHECK(code_of([&] { minkowski_content(gasket.system, gasket.profiles); }) == ErrorCode::LatticeSystem);
}

TEST_CASE("average content")
{
    const SystemSpec cantor = parse_system_spec(cantor_spec());
    const double D = std::log(2.0) / std::log(3.0);
    const double closed = std::pow(2.0, 1 - D) * std::pow(1.0 / 3, D) / (D * (1 - D) * std::log(3.0));
    CHECK(average_content(cantor.system, cantor.profiles) == doctest::Approx(closed).epsilon(1e-12));
    CHECK(closed == doctest::Approx(2.52).epsilon(1e-2));

    const SystemSpec gasket = parse_system_spec(gasket_spec());
    const GeneratorProfile& p = gasket.profiles[0];
    const double Dg = std::log(3.0) / std::log(2.0);
    const double g = p.inradius;
    const double sum = p.kappa[0] * std::pow(g, Dg) / Dg + p.kappa[1] * std::pow(g, Dg - 1) / (Dg - 1) +
                       p.kappa[2] * std::pow(g, Dg - 2) / (Dg - 2);
    CHECK(average_content(gasket.system, gasket.profiles) == doctest::Approx(sum / std::log(2.0)).epsilon(1e-12));
    CHECK(average_content(gasket.system, gasket.profiles) == doctest::Approx(1.81).epsilon(1e-2));
}

TEST_CASE("lattice Fourier coefficients")
{
    const SystemSpec gasket = parse_system_spec(gasket_spec());
    const LatticeClass cls = lattice_of(gasket);
    const FourierCoeffs fc = lattice_fourier_coeffs(gasket.system, cls, gasket.profiles, 30);
    const double D = moran_dimension(gasket.system);
    CHECK(fc.at(0).real() == doctest::Approx(content_numerator(gasket.profiles[0], D)).epsilon(1e-12));
    CHECK(fc.at(0).real() == doctest::Approx(1.2563).epsilon(1e-3));
    for (int n = 1; n <= 30; ++n) {
        CHECK(std::abs(fc.at(-n) - std::conj(fc.at(n))) == 0.0);
    }
    for (int n = 6; n <= 30; ++n) {
        CHECK(std::abs(fc.at(n)) <= fc.envelope_k / std::norm(cplx(D, n * fc.period)) * (1 + 1e-12));
    }
    bool nonzero = false;
    for (int n = 1; n <= 10; ++n) {
        nonzero = nonzero || std::abs(fc.at(n)) > 0.0;
    }
    CHECK(nonzero);

    const double amp = oscillation_amplitude(lattice_fourier_coeffs(gasket.system, cls, gasket.profiles, 10), 1000);
    CHECK(amp > 10.0 * lattice_fourier_coeffs(gasket.system, cls, gasket.profiles, 10).truncation_bound());
    CHECK(oscillation_amplitude(lattice_fourier_coeffs(gasket.system, cls, gasket.profiles, 0), 1000) == 0.0);

    // the non-constant terms average out over a period
    double mean = 0.0;
    const int n = 4096;
    for (int i = 0; i < n; ++i) {
        mean += fc.eval(2 * M_PI / fc.period * i / n);
    }
    CHECK(mean / n == doctest::Approx(average_content(gasket.system, gasket.profiles)).epsilon(1e-12));

    const SystemSpec str = parse_system_spec(string_spec());
    CHECK(code_of([&] { lattice_fourier_coeffs(str.system, lattice_of(str), str.profiles, 5); }) ==
          ErrorCode::NotLattice);
}

TEST_CASE("lattice periodicity of the scaled direct volume")
{
    for (const auto& doc : {cantor_spec(), gasket_spec()}) {
        const SystemSpec spec = parse_system_spec(doc);
        const LatticeClass cls = lattice_of(spec);
        const double D = moran_dimension(spec.system);
        const int d = spec.system.ambient_dim();
        const double span = 2 * M_PI / cls.period;
        for (double x : {12.0, 15.3, 20.7}) {
            const auto scaled = [&](double y) {
                return std::exp(-y * (D - d)) * tiling_volume_direct(spec.system, spec.profiles, std::exp(-y));
            };
            CHECK(scaled(x + span) == doctest::Approx(scaled(x)).epsilon(5e-3));
        }
    }
}

TEST_CASE("scaling limit of the direct volume for a non-lattice string")
{
    const SystemSpec str = parse_system_spec(string_spec());
    const double M = minkowski_content(str.system, str.profiles);
    std::vector<int> ks;
    for (int k = 1; k <= 16; ++k) {
        ks.push_back(k);
    }
    const std::vector<double> seq = scaled_direct_sequence(str.system, str.profiles, ks);
    const auto [lo, hi] = std::minmax_element(seq.end() - 3, seq.end());
    CHECK((*hi - *lo) / M < 0.01);
    CHECK(seq.back() == doctest::Approx(M).epsilon(0.01));
}

TEST_CASE("fractal volume adds the hull excess")
{
    const SystemSpec gasket = parse_system_spec(gasket_spec());
    const auto poles = tube_poles(gasket.system, lattice_of(gasket), 50.0);
    for (double eps : {0.05, 0.01, 0.001}) {
        const double vt = residue_tube_volume(gasket.system, gasket.profiles, poles, eps).value;
        const double vf = fractal_volume(gasket.system, gasket.profiles, *gasket.hull, eps, poles).value;
        CHECK(vf - vt == doctest::Approx(3 * eps + M_PI * eps * eps).epsilon(1e-9));
    }
    const SystemSpec cantor = parse_system_spec(cantor_spec());
    const auto cpoles = tube_poles(cantor.system, lattice_of(cantor), 50.0);
    const double vt = residue_tube_volume(cantor.system, cantor.profiles, cpoles, 0.01).value;
    CHECK(fractal_volume(cantor.system, cantor.profiles, *cantor.hull, 0.01, cpoles).value ==
          doctest::Approx(vt + 0.02).epsilon(1e-12));
}

TEST_CASE("content positivity on random strings")
{
    for (int i = 1; i <= 20; ++i) {
        const double r1 = 0.1 + 0.02 * i;
        const double r2 = 0.05 + 0.013 * i;
        const SystemSpec s{"", ratio_system({r1, r2}, 1), {profile_interval(1 - r1 - r2)}, {}, {}};
        CHECK(average_content(s.system, s.profiles) > 0.0);
        CHECK(average_content(s.system, s.profiles) ==
              doctest::Approx(string_content(r1, r2, 1 - r1 - r2)).epsilon(1e-12));
    }
}

TEST_CASE("log grid")
{
    const auto grid = log_epsilon_grid(1e-4, 0.1, 4);
    REQUIRE(grid.size() == 4);
    CHECK(grid.front() == 0.1);
    CHECK(grid.back() == 1e-4);
    CHECK(grid[1] == doctest::Approx(0.01));
    CHECK(code_of([] { log_epsilon_grid(0.1, 0.01, 5); }) == ErrorCode::InvalidArgument);
}
