#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "fraclab/exterior_data.hpp"
#include "fraclab/moduli.hpp"

using namespace fraclab;

TEST_CASE("cutoff values and smoothness") {
    const CutoffFunction eta;
    CHECK(cutoff_eval(eta, 1.0) == 1.0);
    CHECK(cutoff_eval(eta, 4.0) == 1.0);
    CHECK(cutoff_eval(eta, 4.25) == doctest::Approx(0.5));
    CHECK(cutoff_eval(eta, 4.5) == 0.0);
    CHECK(cutoff_eval(eta, 10.0) == 0.0);
    CHECK_THROWS_AS(cutoff_eval(eta, -1.0), InvalidInput);
    double prev = 1.0;
    for (int i = 0; i <= 1000; ++i) {
        const double v = cutoff_eval(eta, 3.9 + 0.7 * i / 1000.0);
        CHECK(v <= prev);
        prev = v;
    }
    // First and second one-sided differences vanish at both junctions.
    const double h = 1e-4;
    for (double r : {4.0, 4.5}) {
        const double f0 = cutoff_eval(eta, r);
        const double fp = cutoff_eval(eta, r + h);
        const double fm = cutoff_eval(eta, r - h);
        CHECK(std::abs(fp - f0) / h <= 1e-6);
        CHECK(std::abs(f0 - fm) / h <= 1e-6);
        CHECK(std::abs(fp - 2.0 * f0 + fm) / (h * h) <= 0.2);
    }
    // Largest slope 15/8 per unit width, at the midpoint.
    CHECK((cutoff_eval(eta, 4.25 - h) - cutoff_eval(eta, 4.25 + h)) / (2.0 * h) ==
          doctest::Approx(15.0 / 8.0 / eta.width).epsilon(1e-6));
}

TEST_CASE("dimension and modulus checks") {
    const ModulusFunction w = ModulusFunction::power(0.5);
    CHECK_THROWS_AS(datum_thm15(w, 1), DimensionError);
    CHECK_THROWS_AS(datum_thm15(w, 4), DimensionError);
    CHECK_THROWS_AS(datum_ex43(0.5, 1), DimensionError);
    CHECK_THROWS_AS(datum_constant(1.0, 0), DimensionError);
    CHECK_THROWS_AS(datum_thm15(ModulusFunction::custom("one", [](double) { return 1.0; }), 2), InvalidModulus);
    CHECK_THROWS_AS(datum_ex43(1.0, 2), InvalidInput);
    CHECK_THROWS_AS(datum_cex14(ModulusFunction::log_inverse(1.0), 0.0, 2), InvalidInput);
}

TEST_CASE("thm15 datum") {
    const ModulusFunction w = ModulusFunction::power(0.5);
    for (int d = 2; d <= 3; ++d) {
        const ExteriorDatum g = datum_thm15(w, d);
        CHECK(g(unit(0)) == 0.0);
        CHECK(g({1.0, 2.0, 0.0}) == doctest::Approx(std::sqrt(2.0)));
        CHECK(g({0.0, 4.6, 0.0}) == 0.0);
        CHECK(g.support_radius == 4.5);
        std::mt19937_64 rng(3);
        std::uniform_real_distribution<double> u(-5.0, 5.0);
        for (int i = 0; i < 2000; ++i) {
            Point y{u(rng), u(rng), d == 3 ? u(rng) : 0.0};
            if (norm(y) < 1.0) continue;
            CHECK(g(y) >= 0.0);
            CHECK(g(y) == g(mirror_y2(y)));
        }
    }
}

TEST_CASE("prop42 datum") {
    const ExteriorDatum g = datum_prop42(ModulusFunction::power(0.5));
    CHECK(g({1.0, 0.0, 0.0}) == 0.0);
    CHECK(g({2.0, 0.0, 0.0}) == 1.0);
    CHECK(g({3.0, 0.0, 0.0}) == doctest::Approx(std::sqrt(2.0)));
    CHECK(g({3.5, 0.0, 0.0}) == 0.0);
    CHECK(g({-2.0, 0.0, 0.0}) == 0.0);
    CHECK(g.closed_form_oscillation(0.25) == 0.5);
    CHECK(g.closed_form_oscillation(5.0) == doctest::Approx(std::sqrt(2.0)));
}

TEST_CASE("ex43 datum is odd in y2") {
    for (int d = 2; d <= 3; ++d) {
        const ExteriorDatum g = datum_ex43(0.5, d);
        std::mt19937_64 rng(5);
        std::uniform_real_distribution<double> u(-5.0, 5.0);
        for (int i = 0; i < 2000; ++i) {
            Point y{u(rng), u(rng), d == 3 ? u(rng) : 0.0};
            if (norm(y) < 1.0) continue;
            CHECK(g(mirror_y2(y)) == -g(y));
        }
        CHECK(g({2.0, 0.0, 0.0}) == 0.0);
        CHECK(g({0.0, 2.0, 0.0}) == doctest::Approx(std::sqrt(2.0)));
        // The attached modulus dominates the datum's own oscillation.
        const HoelderEstimate h = seminorm_ext(g, *g.modulus, 4000, 11);
        CHECK(h.seminorm <= 1.0);
        CHECK(h.seminorm > 0.0);
    }
}

TEST_CASE("cex14 datum uses t^s iota") {
    const ExteriorDatum g = datum_cex14(ModulusFunction::log_inverse(1.0), 0.5, 2);
    const double t = 0.01;
    CHECK(g({1.0, t, 0.0}) == doctest::Approx(std::sqrt(t) / std::log(std::exp(1.0) / t)));
    CHECK(g.id == "cex14");
    const ExteriorDatum g1 = datum_cex14(ModulusFunction::log_inverse(1.0), 0.5, 1);
    CHECK(g1.dim == 1);
}

TEST_CASE("radial indicator and constant") {
    const ExteriorDatum ind = datum_radial_indicator(0.5, 2);
    CHECK(ind({1.2, 0.0, 0.0}) == 0.0);
    CHECK(ind({0.0, 1.5, 0.0}) == 1.0);
    CHECK(ind.closed_form_oscillation(0.49) == 0.0);
    CHECK(ind.closed_form_oscillation(0.5) == 1.0);
    const ExteriorDatum c = datum_constant(-2.0, 3);
    CHECK(c({0.0, 0.0, 7.0}) == -2.0);
    CHECK(c.boundary_bound == 2.0);
}

TEST_CASE("thm15 oscillation at e1 against brute force") {
    const ModulusFunction w = ModulusFunction::power(0.5);
    const CutoffFunction eta;
    const ExteriorDatum g = datum_thm15(w, 2);
    for (double t : {0.1, 1.0, 3.0, 3.9, 4.5, 5.2}) {
        // Largest |g(w)| over exterior w with |w - e1| <= t, on a polar grid.
        double brute = 0.0;
        const int nr = 600;
        const int na = 1200;
        for (int i = 0; i <= nr; ++i) {
            const double r = t * i / nr;
            for (int j = 0; j < na; ++j) {
                const double a = 2.0 * std::numbers::pi * j / na;
                const Point y{1.0 + r * std::cos(a), r * std::sin(a), 0.0};
                if (norm(y) < 1.0) continue;
                brute = std::max(brute, g(y));
            }
        }
        const double exact = thm15_oscillation_e1(w, eta, t);
        CAPTURE(t);
        CHECK(brute <= exact + 1e-12);
        CHECK(brute >= exact * (1.0 - 5e-3));
    }
}
