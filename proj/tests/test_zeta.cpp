#include "fractal_tube/error.hpp"
#include "fractal_tube/zeta.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

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

IfsSystem random_system(std::mt19937_64& rng)
{
    std::uniform_int_distribution<int> count(2, 5);
    std::uniform_real_distribution<double> ratio(0.05, 0.7);
    std::vector<double> r(count(rng));
    for (double& x : r) {
        x = ratio(rng);
    }
    return ratio_system(r, 2);
}

}  // namespace

TEST_CASE("zeta_value examples")
{
    const IfsSystem cantor = ratio_system({1.0 / 3, 1.0 / 3}, 1);
    CHECK(std::abs(zeta_value(cantor, 1.0) - cplx(3.0, 0.0)) < 1e-14);
    CHECK(code_of([&] { zeta_value(cantor, moran_dimension(cantor)); }) == ErrorCode::AtPole);
    const IfsSystem s = ratio_system({0.5, 1.0 / 3}, 1);
    CHECK(std::abs(zeta_value(s, 2.0) - cplx(36.0 / 23.0, 0.0)) < 1e-14);
    // f' is the derivative of f
    const cplx z(0.3, 2.1);
    const double h = 1e-6;
    const cplx numeric = (dirichlet_f(s, z + h) - dirichlet_f(s, z - h)) / (2 * h);
    CHECK(std::abs(numeric - dirichlet_f_prime(s, z)) < 1e-8);
}

TEST_CASE("find_poles on the Cantor string")
{
    const IfsSystem cantor = ratio_system({1.0 / 3, 1.0 / 3}, 1);
    const double D = moran_dimension(cantor);
    const double p = 2 * M_PI / std::log(3.0);
    const PoleSearchResult res = find_poles(cantor, {0.5, 0.7, 12.0});
    REQUIRE(res.poles.size() == 5);
    for (int i = 0; i < 5; ++i) {
        CHECK(std::abs(res.poles[i].omega - cplx(D, (i - 2) * p)) < 1e-9);
        CHECK(std::abs(res.poles[i].residue - cplx(1.0 / std::log(3.0), 0.0)) < 1e-9);
        CHECK(res.poles[i].simple);
    }
    CHECK(res.poles[2].omega.imag() == 0.0);
}

TEST_CASE("find_poles isolates D for ratios 1/2, 1/3")
{
    const IfsSystem s = ratio_system({0.5, 1.0 / 3}, 1);
    const double D = moran_dimension(s);
    const PoleSearchResult res = find_poles(s, {0.78, 0.79, 1.0});
    REQUIRE(res.poles.size() == 1);
    CHECK(res.poles[0].omega.real() == doctest::Approx(D).epsilon(1e-12));
    CHECK(res.poles[0].omega.imag() == 0.0);
    const double expected = 1.0 / (std::pow(0.5, D) * std::log(2.0) + std::pow(1.0 / 3, D) * std::log(3.0));
    CHECK(res.poles[0].residue.real() == doctest::Approx(expected).epsilon(1e-10));
    CHECK(res.poles[0].residue.real() > 0.0);
}

TEST_CASE("no poles right of D")
{
    std::mt19937_64 rng(2);
    for (int trial = 0; trial < 10; ++trial) {
        const IfsSystem s = random_system(rng);
        const double D = moran_dimension(s);
        CHECK(find_poles(s, {D + 0.01, D + 1.0, 20.0}).poles.empty());
    }
}

TEST_CASE("pole search invariants on random systems")
{
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 12; ++trial) {
        const IfsSystem s = random_system(rng);
        const double D = moran_dimension(s);
        const PoleWindow window = full_strip_window(s, 20.0);
        const PoleSearchResult res = find_poles(s, window);
        const double bound = pole_real_part_lower_bound(s);
        int upper = 0;
        for (const ComplexDimension& p : res.poles) {
            CHECK(std::abs(dirichlet_f(s, p.omega)) <= 1e-10);
            CHECK(p.omega.real() <= D + 1e-10);
            CHECK(p.omega.real() >= bound - 1e-9);
            if (p.simple) {
                CHECK(std::abs(p.residue - 1.0 / dirichlet_f_prime(s, p.omega)) < 1e-12 * std::abs(p.residue));
            }
            // conjugate partner with conjugate residue
            bool partner = false;
            for (const ComplexDimension& q : res.poles) {
                partner = partner || (std::abs(q.omega - std::conj(p.omega)) < 1e-12 &&
                                      std::abs(q.residue - std::conj(p.residue)) < 1e-12);
            }
            CHECK(partner);
            upper += p.omega.imag() >= 0.0 ? 1 : 0;
        }
        // every terminal rectangle holds exactly the zero attributed to it
        for (const RectangleCount& r : res.rectangles) {
            CHECK(r.winding == r.zeros);
            CHECK(winding_number(s, r.re_lo, r.re_hi, r.im_lo, r.im_hi) == r.zeros);
        }
        CHECK(static_cast<int>(res.rectangles.size()) == res.total_winding);
        CHECK(upper <= res.total_winding);
        // sorted by (Im, Re)
        for (std::size_t i = 1; i < res.poles.size(); ++i) {
            const cplx a = res.poles[i - 1].omega;
            const cplx b = res.poles[i].omega;
            CHECK((a.imag() < b.imag() || (a.imag() == b.imag() && a.real() <= b.real())));
        }
    }
}

TEST_CASE("residue bound in the simple-pole strip")
{
    std::mt19937_64 rng(23);
    for (int trial = 0; trial < 10; ++trial) {
        const IfsSystem s = random_system(rng);
        const double D = moran_dimension(s);
        const double lower = dtilde(s).value;
        const double cap = 1.0 / std::log(1.0 / s.ratios().front()) + 1e-9;
        for (const ComplexDimension& p : find_poles(s, full_strip_window(s, 30.0)).poles) {
            if (p.omega.real() > lower && p.omega.real() < D) {
                CHECK(p.simple);
                CHECK(std::abs(p.residue) <= cap);
            }
        }
    }
}

TEST_CASE("lattice poles agree with the search")
{
    SUBCASE("Cantor ladder")
    {
        const IfsSystem cantor = ratio_system({1.0 / 3, 1.0 / 3}, 1);
        const LatticeClass cls = classify_lattice(cantor);
        const auto ladder = lattice_poles(cantor, cls, 2);
        REQUIRE(ladder.size() == 5);
        CHECK(ladder[3].omega.imag() == doctest::Approx(5.7192).epsilon(1e-4));
        CHECK(ladder[4].omega.imag() == doctest::Approx(11.4383).epsilon(1e-4));
        CHECK(ladder[0].residue.real() == doctest::Approx(0.91024).epsilon(1e-5));
        CHECK(lattice_poles(cantor, cls, 0).size() == 1);
    }
    SUBCASE("gasket ladder")
    {
        const IfsSystem gasket = ratio_system({0.5, 0.5, 0.5}, 2);
        const auto ladder = lattice_poles(gasket, classify_lattice(gasket), 1);
        REQUIRE(ladder.size() == 3);
        CHECK(ladder[2].omega.imag() == doctest::Approx(2 * M_PI / std::log(2.0)).epsilon(1e-12));
        CHECK(ladder[1].residue.real() == doctest::Approx(1.44270).epsilon(1e-5));
    }
    SUBCASE("unequal lattice ratios near Re = D")
    {
        const IfsSystem s = ratio_system({0.5, 0.25}, 1);
        const LatticeClass cls = classify_lattice(s);
        const double D = moran_dimension(s);
        const auto ladder = lattice_poles(s, cls, 3);
        const auto found = find_poles(s, {D - 0.05, D + 0.05, 3.5 * cls.period}).poles;
        REQUIRE(found.size() == ladder.size());
        for (std::size_t i = 0; i < found.size(); ++i) {
            CHECK(std::abs(found[i].omega - ladder[i].omega) < 1e-10);
            CHECK(std::abs(found[i].residue - ladder[i].residue) < 1e-10);
        }
    }
    CHECK(code_of([] {
              const IfsSystem s = ratio_system({0.5, 1.0 / 3}, 1);
              lattice_poles(s, classify_lattice(s), 2);
          }) == ErrorCode::NotLattice);
}

TEST_CASE("non-lattice: D is alone near Re = D at small height")
{
    const IfsSystem s = ratio_system({0.5, 1.0 / 3}, 1);
    const double D = moran_dimension(s);
    const auto found = find_poles(s, {D - 0.02, D + 0.01, 10.0}).poles;
    REQUIRE(found.size() == 1);
    CHECK(found[0].omega.real() == doctest::Approx(D).epsilon(1e-12));
}

TEST_CASE("dtilde")
{
    const DTilde cantor = dtilde(ratio_system({1.0 / 3, 1.0 / 3}, 1));
    CHECK(cantor.value == 0.0);
    CHECK(cantor.degenerate);
    const DTilde gasket = dtilde(ratio_system({0.5, 0.5, 0.5}, 2));
    CHECK(gasket.value == doctest::Approx(1.0).epsilon(1e-13));
    CHECK_FALSE(gasket.degenerate);

    const double a = std::cos(50 * M_PI / 180), b = 0.5, c = std::cos(70 * M_PI / 180);
    const IfsSystem orthic = ratio_system({a, b, c}, 2);
    const DTilde o = dtilde(orthic);
    CHECK(std::abs(std::pow(a, o.value) + std::pow(b, o.value) - 1.0) < 1e-12);
    CHECK(o.value < moran_dimension(orthic));
    CHECK(o.value == doctest::Approx(1.2427).epsilon(1e-4));
}

TEST_CASE("winding numbers and reported failures")
{
    const IfsSystem cantor = ratio_system({1.0 / 3, 1.0 / 3}, 1);
    CHECK(winding_number(cantor, 0.5, 0.7, -1.0, 1.0) == 1);
    CHECK(winding_number(cantor, 0.5, 0.7, -6.0, 6.0) == 3);
    CHECK(winding_number(cantor, 0.7, 1.5, -6.0, 6.0) == 0);
    const double D = moran_dimension(cantor);
    CHECK(code_of([&] { winding_number(cantor, D, 1.0, -1.0, 1.0); }) == ErrorCode::ContourThroughZero);

    PoleSearchOptions coarse;
    coarse.min_diameter = 100.0;
    CHECK(code_of([&] { find_poles(cantor, {0.5, 0.7, 12.0}, coarse); }) == ErrorCode::MultiplicitySuspected);
    CHECK(code_of([&] { find_poles(cantor, {0.7, 0.5, 12.0}); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("pole strip lower bound")
{
    CHECK(pole_real_part_lower_bound(ratio_system({1.0 / 3, 1.0 / 3}, 1)) ==
          doctest::Approx(std::log(2.0) / std::log(3.0)));
    // 1 = 1/2^s + 1/4^s: second root family at Re = -log(golden ratio)/log 2
    const double expected = -std::log((1 + std::sqrt(5.0)) / 2) / std::log(2.0);
    const IfsSystem s = ratio_system({0.5, 0.25}, 1);
    const double bound = pole_real_part_lower_bound(s);
    CHECK(bound <= expected + 1e-12);
    const auto found = find_poles(s, full_strip_window(s, 10.0)).poles;
    bool reached = false;
    for (const ComplexDimension& p : found) {
        reached = reached || std::abs(p.omega.real() - expected) < 1e-9;
    }
    CHECK(reached);
}
