#include "fractal_tube/error.hpp"
#include "fractal_tube/ifs.hpp"
#include "fractal_tube/spec_io.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
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

double partition_mass(const IfsSystem& sys, double cutoff)
{
    const int d = sys.ambient_dim();
    const double sum_rd = sys.ratio_power_sum(d);
    const WordEnumeration e = enumerate_words(sys, cutoff);
    double mass = 0.0;
    for (const WordEntry& w : e.words) {
        mass += std::pow(w.scale, d);
    }
    for (const WordEntry& w : e.pruned) {
        mass += std::pow(w.scale, d) / (1.0 - sum_rd);
    }
    return mass;
}

}  // namespace

TEST_CASE("build_system validates and sorts")
{
    const IfsSystem cantor = ratio_system({1.0 / 3, 1.0 / 3}, 1);
    CHECK(cantor.size() == 2);
    CHECK_FALSE(cantor.realized());

    CHECK(code_of([] { ratio_system({0.5}, 1); }) == ErrorCode::EmptySystem);
    CHECK(code_of([] { ratio_system({0.5, 1.0}, 1); }) == ErrorCode::BadRatio);
    CHECK(code_of([] { ratio_system({0.5, 0.0}, 1); }) == ErrorCode::BadRatio);
    CHECK(code_of([] { ratio_system({0.5, -0.2}, 1); }) == ErrorCode::BadRatio);
    CHECK(code_of([] {
              build_system({Similitude{0.5, 0, false, {0.0, 0.0}}, Similitude{0.5, 0, false, {0.5}}}, 2);
          }) == ErrorCode::DimMismatch);

    const double h = std::sqrt(3.0) / 4.0;
    const IfsSystem gasket = build_system({Similitude{0.5, 0, false, {0.0, 0.0}}, Similitude{0.5, 0, false, {0.5, 0.0}},
                                           Similitude{0.5, 0, false, {0.25, h}}},
                                          2);
    CHECK(gasket.planar());

    const IfsSystem mixed = ratio_system({0.2, 0.5, 0.3}, 1);
    CHECK(std::is_sorted(mixed.ratios().rbegin(), mixed.ratios().rend()));
    CHECK(mixed.ratios().front() == 0.5);
}

TEST_CASE("moran_dimension closed forms and residual")
{
    CHECK(moran_dimension(ratio_system({1.0 / 3, 1.0 / 3}, 1)) == doctest::Approx(std::log(2.0) / std::log(3.0)).epsilon(1e-14));
    CHECK(moran_dimension(ratio_system({0.5, 0.5, 0.5}, 2)) == doctest::Approx(std::log(3.0) / std::log(2.0)).epsilon(1e-14));
    const IfsSystem s = ratio_system({0.5, 1.0 / 3}, 1);
    const double D = moran_dimension(s);
    CHECK(D == doctest::Approx(0.7879).epsilon(1e-4));
    CHECK(std::abs(s.ratio_power_sum(D) - 1.0) < 1e-12);
}

TEST_CASE("moran residual and monotonicity on random systems")
{
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> ratio(0.01, 0.95);
    std::uniform_int_distribution<int> count(2, 7);
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<double> r(count(rng));
        for (double& x : r) {
            x = ratio(rng);
        }
        const IfsSystem s = ratio_system(r, 2);
        const double D = moran_dimension(s, 1e-13);
        CHECK(D > 0.0);
        CHECK(std::abs(s.ratio_power_sum(D) - 1.0) <= 1e-13);
        r.push_back(ratio(rng));
        CHECK(moran_dimension(ratio_system(r, 2)) > D);
    }
}

TEST_CASE("classify_lattice examples")
{
    const LatticeClass cantor = classify_lattice(ratio_system({1.0 / 3, 1.0 / 3}, 1));
    REQUIRE(cantor.lattice());
    CHECK(cantor.base_r == doctest::Approx(1.0 / 3).epsilon(1e-12));
    CHECK(cantor.multipliers == std::vector<int>{1, 1});
    CHECK(cantor.period == doctest::Approx(2 * M_PI / std::log(3.0)).epsilon(1e-12));
    CHECK(cantor.period == doctest::Approx(5.71917).epsilon(1e-5));

    // ratios are stored descending: [1/2, 1/4]
    const LatticeClass quarter = classify_lattice(ratio_system({0.25, 0.5}, 1));
    REQUIRE(quarter.lattice());
    CHECK(quarter.base_r == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(quarter.multipliers == std::vector<int>{1, 2});

    CHECK_FALSE(classify_lattice(ratio_system({0.5, 1.0 / 3}, 1)).lattice());
}

TEST_CASE("lattice round trip and permutation invariance")
{
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> base(0.2, 0.9);
    std::uniform_int_distribution<int> expo(1, 6);
    std::uniform_int_distribution<int> count(2, 5);
    for (int trial = 0; trial < 200; ++trial) {
        const double b = base(rng);
        std::vector<int> k(count(rng));
        for (int& x : k) {
            x = expo(rng);
        }
        std::vector<double> r;
        for (int x : k) {
            r.push_back(std::pow(b, x));
        }
        const IfsSystem s = ratio_system(r, 1);
        const LatticeClass cls = classify_lattice(s);
        REQUIRE(cls.lattice());

        int g = 0;
        for (int x : k) {
            g = std::gcd(g, x);
        }
        std::vector<int> expected = k;
        for (int& x : expected) {
            x /= g;
        }
        std::sort(expected.begin(), expected.end());
        CHECK(cls.multipliers == expected);
        CHECK(cls.base_r == doctest::Approx(std::pow(b, g)).epsilon(1e-9));
        for (std::size_t j = 0; j < r.size(); ++j) {
            CHECK(std::abs(std::log(s.ratios()[j]) - cls.multipliers[j] * std::log(cls.base_r)) < 1e-9);
        }

        std::shuffle(r.begin(), r.end(), rng);
        const LatticeClass again = classify_lattice(ratio_system(r, 1));
        CHECK(again.multipliers == cls.multipliers);
        CHECK(again.base_r == doctest::Approx(cls.base_r).epsilon(1e-12));
    }
}

TEST_CASE("declared_lattice follows the caller's map order")
{
    const IfsSystem s = ratio_system({0.25, 0.5}, 1);
    const LatticeClass cls = declared_lattice(s, 0.5, {2, 1});
    CHECK(cls.lattice());
    CHECK(cls.multipliers == std::vector<int>{1, 2});
    CHECK(code_of([&] { declared_lattice(s, 0.5, {3, 1}); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("enumerate_words examples")
{
    SUBCASE("Cantor ratios, cutoff 0.2")
    {
        const WordEnumeration e = enumerate_words(ratio_system({1.0 / 3, 1.0 / 3}, 1), 0.2);
        REQUIRE(e.words.size() == 3);
        CHECK(e.words[0].word.empty());
        CHECK(e.words[0].scale == 1.0);
        CHECK(e.words[1].scale == doctest::Approx(1.0 / 3));
        CHECK(e.words[2].scale == doctest::Approx(1.0 / 3));
        REQUIRE(e.pruned.size() == 4);
        for (const WordEntry& w : e.pruned) {
            CHECK(w.word.size() == 2);
            CHECK(w.scale == doctest::Approx(1.0 / 9));
        }
    }
    SUBCASE("ratios 1/2 and 1/3, cutoff 0.3")
    {
        const WordEnumeration e = enumerate_words(ratio_system({0.5, 1.0 / 3}, 1), 0.3);
        CHECK(e.words.size() == 3);
        std::vector<double> scales;
        for (const WordEntry& w : e.pruned) {
            scales.push_back(w.scale);
        }
        std::sort(scales.begin(), scales.end());
        REQUIRE(scales.size() == 4);
        CHECK(scales[0] == doctest::Approx(1.0 / 9));
        CHECK(scales[1] == doctest::Approx(1.0 / 6));
        CHECK(scales[2] == doctest::Approx(1.0 / 6));
        CHECK(scales[3] == doctest::Approx(1.0 / 4));
    }
    SUBCASE("cutoff 1 prunes at the root")
    {
        const WordEnumeration e = enumerate_words(ratio_system({0.5, 1.0 / 3}, 1), 1.0);
        CHECK(e.words.empty());
        REQUIRE(e.pruned.size() == 1);
        CHECK(e.pruned[0].word.empty());
    }
    CHECK(code_of([] { enumerate_words(ratio_system({0.5, 0.5}, 2), 1e-9, 1000); }) == ErrorCode::BudgetExceeded);
    CHECK(code_of([] { enumerate_words(ratio_system({0.5, 0.5}, 2), 0.0); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("word tree partition conserves geometric mass")
{
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> ratio(0.05, 0.6);
    std::uniform_real_distribution<double> cutoff(1e-3, 1.0);
    for (int trial = 0; trial < 100; ++trial) {
        const IfsSystem s = ratio_system({ratio(rng), ratio(rng), ratio(rng)}, 2);
        if (s.ratio_power_sum(2) >= 1.0) {
            continue;
        }
        const double expected = 1.0 / (1.0 - s.ratio_power_sum(2));
        CHECK(partition_mass(s, cutoff(rng)) == doctest::Approx(expected).epsilon(1e-10));
    }
    // the cutoff 1 case is covered by the same identity
    const IfsSystem s = ratio_system({0.5, 1.0 / 3}, 2);
    CHECK(partition_mass(s, 1.0) == doctest::Approx(1.0 / (1.0 - s.ratio_power_sum(2))).epsilon(1e-12));
}

TEST_CASE("condition_report")
{
    const SystemSpec gasket = parse_system_spec(gasket_spec());
    const ConditionReport g = condition_report(gasket.system, 100'000, 3);
    CHECK(g.tileset);
    CHECK(g.nontrivial);
    CHECK(g.pearse_winter);
    CHECK(g.hull_area == doctest::Approx(std::sqrt(3.0) / 4).epsilon(1e-9));
    CHECK(g.notes.front().find("HEURISTIC") != std::string::npos);

    const SystemSpec orthic = parse_system_spec(orthic_spec(50, 60, 70));
    const ConditionReport o = condition_report(orthic.system, 100'000, 3);
    CHECK(o.tileset);
    CHECK(o.nontrivial);
    CHECK(o.pearse_winter);

    // a repeated map: two copies of the same corner triangle overlap completely
    const double h = std::sqrt(3.0) / 4.0;
    const IfsSystem doubled = build_system({Similitude{0.5, 0, false, {0.0, 0.0}}, Similitude{0.5, 0, false, {0.5, 0.0}},
                                            Similitude{0.5, 0, false, {0.25, h}}, Similitude{0.5, 0, false, {0.25, h}}},
                                           2);
    const ConditionReport d = condition_report(doubled, 100'000, 3);
    CHECK_FALSE(d.tileset);
    CHECK(d.overlap_area == doctest::Approx(0.25 * d.hull_area).epsilon(0.05));

    // three maps onto one point: the attractor is a single point
    const IfsSystem collapsed = build_system({Similitude{0.5, 0, false, {0.1, 0.1}}, Similitude{0.5, 0, false, {0.1, 0.1}},
                                              Similitude{0.5, 0, false, {0.1, 0.1}}},
                                             2);
    const ConditionReport c = condition_report(collapsed, 10'000, 3);
    CHECK_FALSE(c.tileset);
    CHECK_FALSE(c.nontrivial);
    CHECK(c.notes.size() >= 2);

    CHECK(code_of([] { condition_report(ratio_system({0.5, 0.5}, 2), 100, 1); }) == ErrorCode::NoRealization);
}
