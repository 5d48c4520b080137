#include <doctest.h>

#include <cmath>
#include <random>

#include <nlohmann/json.hpp>

#include "sgl/intervals.hpp"

using namespace sgl;

namespace {

StructuralConstants counterexample_constants() {
    StructuralConstants c;
    c.set("alpha_s", 1.0, Provenance::Declared);
    c.set("B_prime", 1.0, Provenance::Declared);
    return c;
}

} // namespace

TEST_SUITE("intervals") {

TEST_CASE("exponent duality") {
    Exponent e = Exponent::from_p(3.0);
    CHECK(e.dual().p() == doctest::Approx(1.5));
    CHECK(std::abs(e.dual().dual().s - e.s) <= 1e-16);
    CHECK(Exponent::from_p(std::numeric_limits<double>::infinity()).s == 0.0);
    CHECK(Exponent::from_s(0.0).dual().p() == doctest::Approx(1.0));
    CHECK_THROWS_AS(Exponent::from_p(0.5), BadExponent);
}

TEST_CASE("eps_p closed forms") {
    SUBCASE("alpha_s = 1, rest zero, p = 2") {
        StructuralConstants c;
        c.set("alpha_s", 1.0, Provenance::Declared);
        CHECK(eps_p(c, Exponent::from_p(2.0)) == doctest::Approx(1.0));
    }
    SUBCASE("counterexample family: eps_p = 1 - 2 (1 - 2/p)^2") {
        StructuralConstants c = counterexample_constants();
        for (double p : {1.3, 2.0, 3.7, 5.0, 9.0}) {
            double expect = 1.0 - 2.0 * std::pow(1.0 - 2.0 / p, 2);
            CHECK(eps_p(c, Exponent::from_p(p)) == doctest::Approx(expect).epsilon(1e-14));
        }
    }
    SUBCASE("endpoints p = 1 and p = infinity give -alpha_s^2") {
        StructuralConstants c;
        c.set("alpha_s", 0.8, Provenance::Declared);
        CHECK(eps_p(c, Exponent::from_p(1.0)) == doctest::Approx(-0.64));
        CHECK(eps_p(c, Exponent{0.0}) == doctest::Approx(-0.64));
    }
}

TEST_CASE("interval endpoints") {
    SUBCASE("counterexample endpoints 4 -+ 2 sqrt(2)") {
        StructuralConstants c = counterexample_constants();
        PInterval iv = interval_I(c);
        REQUIRE(!iv.empty);
        CHECK(iv.p_lo == doctest::Approx(4.0 - 2.0 * std::sqrt(2.0)).epsilon(1e-12));
        CHECK(iv.p_hi == doctest::Approx(4.0 + 2.0 * std::sqrt(2.0)).epsilon(1e-12));
        CHECK(std::abs(iv.eps_at_lo) <= 1e-12);
        CHECK(std::abs(iv.eps_at_hi) <= 1e-12);
    }
    SUBCASE("no constants: [1, infinity) sentinel") {
        StructuralConstants c;
        PInterval iv = interval_I(c);
        REQUIRE(!iv.empty);
        CHECK(iv.p_lo == doctest::Approx(1.0));
        CHECK(iv.unbounded);
        CHECK(!iv.contains(std::numeric_limits<double>::infinity()));
        CHECK(iv.contains(1000.0));
    }
    SUBCASE("dissipativity-condition cross-check at alpha_s = 1") {
        StructuralConstants c;
        c.set("alpha_s", 1.0, Provenance::Declared);
        PInterval iv = interval_I(c);
        CHECK(iv.p_lo == doctest::Approx(4.0 - 2.0 * std::sqrt(2.0)).epsilon(1e-12));
        CHECK(iv.p_hi == doctest::Approx(4.0 + 2.0 * std::sqrt(2.0)).epsilon(1e-12));
    }
    SUBCASE("empty when the potential slope eats everything") {
        StructuralConstants c;
        c.set("gamma", 2.0, Provenance::Declared);
        CHECK(interval_I(c).empty);
    }
}

TEST_CASE("sign equivalence with the dissipativity condition") {
    // over sampled (alpha_s, p): eps_p >= 0 iff alpha_s |p-2| <= 2 sqrt(p-1)
    std::mt19937_64 rng(42);
    std::uniform_real_distribution<double> ua(1e-3, 5.0), up(1.0 + 1e-6, 50.0);
    int agreements = 0, total = 0;
    for (int k = 0; k < 20000; ++k) {
        double a = ua(rng), p = up(rng);
        StructuralConstants c;
        c.set("alpha_s", a, Provenance::Declared);
        double e = eps_p(c, Exponent::from_p(p));
        double d = 2.0 * std::sqrt(p - 1.0) - a * std::abs(p - 2.0);
        if (std::abs(e) <= 1e-10 || std::abs(d) <= 1e-10) continue; // ties excluded
        ++total;
        if ((e > 0) == (d > 0)) ++agreements;
    }
    CHECK(agreements == total);
    CHECK(total > 19000);
}

TEST_CASE("omega_hat branches") {
    SUBCASE("all offsets zero") {
        StructuralConstants c;
        for (double p : {1.0, 2.0, 7.0}) CHECK(omega_hat(c, Exponent::from_p(p)) == 0.0);
    }
    SUBCASE("B' = 1 with beta' = 0 and alpha_s = 0 gives 1/4") {
        StructuralConstants c;
        c.set("B_prime", 1.0, Provenance::Declared);
        CHECK(omega_hat(c, Exponent::from_p(3.0)) == doctest::Approx(0.25));
    }
    SUBCASE("mode guard") {
        StructuralConstants c = counterexample_constants();
        CHECK_THROWS_AS(omega_hat(c, Exponent::from_p(2.0), GrowthMode::Strict), ModeError);
        CHECK(omega_hat(c, Exponent::from_p(2.0), GrowthMode::Audit) == doctest::Approx(0.25));
    }
    SUBCASE("large-p limit of the drift regime") {
        StructuralConstants c;
        c.set("B1", 0.5, Provenance::Declared);
        c.set("B2", 1.5, Provenance::Declared);
        c.set("Gamma", 0.25, Provenance::Declared);
        c.set("B_prime", 1.0, Provenance::Declared);
        double lim = omega_hat(c, Exponent{0.0});
        CHECK(lim == doctest::Approx(2.0 * 1.5 + 0.25 + 0.25));
    }
}

TEST_CASE("coercivity pair selection") {
    SUBCASE("degenerate constraint caps at 0.999") {
        StructuralConstants c; // eps_2 = 1, delta = 0, B_hat = 0
        MuOmega mo = mu_omega_for(c, Exponent::from_p(2.0));
        CHECK(mo.mu == doctest::Approx(0.999));
        CHECK(mo.omega == doctest::Approx(0.0));
    }
    SUBCASE("counterexample constants at p = 2") {
        StructuralConstants c = counterexample_constants();
        MuOmega mo = mu_omega_for(c, Exponent::from_p(2.0), std::nullopt, GrowthMode::Audit);
        CHECK(mo.mu == doctest::Approx(0.999));
        CHECK(mo.omega ==
              doctest::Approx(0.25 + 0.999 / (1.0 - 0.999) * 0.25).epsilon(1e-9));
    }
    SUBCASE("boundary p is rejected") {
        StructuralConstants c = counterexample_constants();
        CHECK_THROWS_AS(
            mu_omega_for(c, Exponent::from_p(4.0 + 2.0 * std::sqrt(2.0)), std::nullopt,
                         GrowthMode::Audit),
            OutsideInterval);
        CHECK_THROWS_AS(
            mu_omega_for(c, Exponent::from_p(20.0), std::nullopt, GrowthMode::Audit),
            OutsideInterval);
    }
    SUBCASE("explicit eps choice is validated") {
        StructuralConstants c;
        c.set("alpha_s", 1.0, Provenance::Declared);
        Exponent e = Exponent::from_p(4.0); // eps_4 = 3/4 - 1/4 = 1/2, delta = 1/2
        double emax = eps_choice_max(c, e);
        CHECK(emax > 0.0);
        CHECK(emax + emax / (1 - emax) * 0.25 <= 0.5 + 1e-12);
        CHECK_THROWS_AS(mu_omega_for(c, e, 0.99), BadParameter);
        MuOmega mo = mu_omega_for(c, e, emax / 2);
        CHECK(mo.mu == doctest::Approx(emax / 2));
    }
}

TEST_CASE("extended endpoints") {
    SUBCASE("hardy-style inputs") {
        auto [pmin, pmax] = extended_endpoints(4.0 / 3.0, 4.0, 5);
        CHECK(pmax == doctest::Approx(20.0 / 3.0).epsilon(1e-14));
        CHECK(pmin == doctest::Approx(20.0 / 17.0).epsilon(1e-14));
    }
    SUBCASE("large N shrinks to the base interval") {
        auto [pmin, pmax] = extended_endpoints(2.0, 2.0, 2000002);
        CHECK(pmax == doctest::Approx(2.0).epsilon(1e-5));
        CHECK(pmin == doctest::Approx(2.0).epsilon(1e-5));
    }
    SUBCASE("N < 3 is rejected") {
        CHECK_THROWS_AS(extended_endpoints(1.5, 3.0, 2), BadParameter);
    }
    SUBCASE("dual-symmetric inputs keep p_min = p_max / (p_max - 1)") {
        for (double plo : {4.0 / 3.0, 1.5, 1.9}) {
            double phi = plo / (plo - 1.0);
            auto [pmin, pmax] = extended_endpoints(plo, phi, 7);
            CHECK(pmin == doctest::Approx(pmax / (pmax - 1.0)).epsilon(1e-12));
        }
    }
}

TEST_CASE("concavity of s -> eps on a fine sample") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int trial = 0; trial < 10; ++trial) {
        StructuralConstants c;
        c.set("alpha_s", 2.0 * u(rng), Provenance::Declared);
        c.set("beta_prime", u(rng), Provenance::Declared);
        c.set("beta1", u(rng), Provenance::Declared);
        c.set("beta2", u(rng), Provenance::Declared);
        c.set("gamma", u(rng), Provenance::Declared);
        for (int k = 1; k < 999; ++k) {
            double s = double(k) / 1000.0;
            double mid = eps_p(c, Exponent{s});
            double avg = 0.5 * (eps_p(c, Exponent{s - 1e-3}) + eps_p(c, Exponent{s + 1e-3}));
            CHECK(mid >= avg - 1e-12);
        }
    }
}

TEST_CASE("drift-pair swap is the duality map") {
    StructuralConstants c;
    c.set("alpha_s", 0.7, Provenance::Declared);
    c.set("beta1", 0.2, Provenance::Declared);
    c.set("B1", 0.4, Provenance::Declared);
    c.set("beta2", 0.5, Provenance::Declared);
    c.set("B2", 0.1, Provenance::Declared);
    StructuralConstants cs_swapped = c;
    cs_swapped.set("beta1", 0.5, Provenance::Declared);
    cs_swapped.set("B1", 0.1, Provenance::Declared);
    cs_swapped.set("beta2", 0.2, Provenance::Declared);
    cs_swapped.set("B2", 0.4, Provenance::Declared);
    // dyadic s keeps 1 - s exactly representable: the swap is bit-exact there
    for (double s : {0.125, 0.25, 0.5, 0.75, 0.875}) {
        Exponent e{s};
        CHECK(eps_p(c, e) == eps_p(cs_swapped, e.dual()));
    }
    for (double s : {0.1, 0.33, 0.61, 0.9}) {
        Exponent e{s};
        CHECK(eps_p(c, e) ==
              doctest::Approx(eps_p(cs_swapped, e.dual())).epsilon(1e-14));
    }
    PInterval a = interval_I(c);
    PInterval b = interval_I(cs_swapped);
    // I maps to the dual interval
    CHECK(1.0 / a.p_hi + 1.0 / b.p_lo == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(1.0 / a.p_lo + 1.0 / b.p_hi == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("membership of p = 2 matches the direct substitution identity") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(0.0, 0.8);
    for (int trial = 0; trial < 200; ++trial) {
        StructuralConstants c;
        c.set("beta1", u(rng), Provenance::Declared);
        c.set("beta2", u(rng), Provenance::Declared);
        c.set("beta_prime", u(rng), Provenance::Declared);
        c.set("gamma", u(rng), Provenance::Declared);
        double eps2 = 1.0 - c.beta1 - c.beta2 - std::pow(c.beta_prime / 2.0, 2) - c.gamma;
        CHECK(eps_p(c, Exponent::from_p(2.0)) == doctest::Approx(eps2).epsilon(1e-13));
        if (std::abs(eps2) > 1e-9) CHECK(interval_I(c).contains(2.0) == (eps2 >= 0));
    }
}

TEST_CASE("report serialization carries the table") {
    StructuralConstants c = counterexample_constants();
    IntervalReport rep = build_interval_report(c, {2.0, 4.0, 10.0}, 5, GrowthMode::Audit);
    CHECK(rep.rows.size() == 3);
    CHECK(rep.rows[0].in_interval);
    CHECK(!rep.rows[2].in_interval);
    CHECK(rep.extended);
    auto j = rep.to_json();
    CHECK(j.contains("interval"));
    CHECK(j["rows"].size() == 3);
}

} // TEST_SUITE
