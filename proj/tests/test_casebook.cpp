#include <doctest.h>

#include <cmath>

#include <nlohmann/json.hpp>

#include "sgl/casebook.hpp"

using namespace sgl;

TEST_SUITE("casebook") {

TEST_CASE("hardy thresholds") {
    SUBCASE("beta = 3/4, N = 5") {
        HardyThresholds h = hardy(0.75, 5);
        CHECK(h.p_minus == doctest::Approx(4.0 / 3.0).epsilon(1e-15));
        CHECK(h.p_plus == doctest::Approx(4.0).epsilon(1e-15));
        CHECK(h.p_max == doctest::Approx(20.0 / 3.0).epsilon(1e-15));
        CHECK(h.p_min == doctest::Approx(20.0 / 17.0).epsilon(1e-15));
    }
    SUBCASE("beta -> 0 pushes p_plus to the sentinel") {
        // tiny but representable beta: enormous finite endpoint
        HardyThresholds big = hardy(1e-14, 4);
        CHECK(big.p_minus == doctest::Approx(1.0).epsilon(1e-7));
        CHECK(big.p_plus > 1e13);
        // beta below the rounding threshold of 1 - beta: exact sentinel
        HardyThresholds h = hardy(1e-17, 4);
        CHECK(h.p_minus == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(std::isinf(h.p_plus));
        CHECK(std::isinf(h.p_max));
        CHECK(h.p_min == doctest::Approx(1.0));
    }
    SUBCASE("duality identities across the beta grid") {
        for (double beta = 0.1; beta < 0.95; beta += 0.1) {
            for (int N : {3, 5, 11}) {
                HardyThresholds h = hardy(beta, N);
                // p_-, p_+ are Hoelder-dual about 2
                CHECK(1.0 / h.p_minus + 1.0 / h.p_plus == doctest::Approx(1.0).epsilon(1e-12));
                // consistency of the two endpoint-extension routes
                auto [pmin, pmax] = extended_endpoints(h.p_minus, h.p_plus, N);
                CHECK(pmax == doctest::Approx(h.p_max).epsilon(1e-12));
                CHECK(pmin == doctest::Approx(h.p_max / (h.p_max - 1.0)).epsilon(1e-12));
                CHECK(pmin == doctest::Approx(h.p_min).epsilon(1e-12));
            }
        }
    }
    SUBCASE("domain errors") {
        CHECK_THROWS_AS(hardy(0.0, 5), BadParameter);
        CHECK_THROWS_AS(hardy(1.0, 5), BadParameter);
        CHECK_THROWS_AS(hardy(0.5, 2), BadParameter);
    }
}

TEST_CASE("drift counterexample limit") {
    NeumannCounterexampleReport rep = neumann_counterexample({1.0, 10.0}, std::nullopt, 513);
    CHECK(rep.p == doctest::Approx(4.0 + 2.0 * std::sqrt(2.0)));
    const double limit = -1.0 / std::sqrt(8.0);
    // frozen closed form at lambda = 10: (1/sqrt8)(exp(-sqrt8*10) - 1)
    const double frozen = (std::exp(-std::sqrt(8.0) * 10.0) - 1.0) / std::sqrt(8.0);
    CHECK(rep.rows[1].closed_form == doctest::Approx(frozen).epsilon(1e-14));
    CHECK(std::abs(rep.rows[1].closed_form - limit) <= 1e-10);
    // quadrature and discrete values track the closed form
    CHECK(std::abs(rep.rows[1].quadrature - rep.rows[1].closed_form) <= 1e-8);
    CHECK(std::abs(rep.rows[1].discrete - rep.rows[1].closed_form) <= 1e-3);
    CHECK(rep.norms_decreasing);
    // the declared constants reproduce the interval endpoints
    PInterval iv = interval_I(neumann_counterexample_constants());
    CHECK(iv.p_lo == doctest::Approx(4.0 - 2.0 * std::sqrt(2.0)).epsilon(1e-12));
    CHECK(iv.p_hi == doctest::Approx(4.0 + 2.0 * std::sqrt(2.0)).epsilon(1e-12));
}

TEST_CASE("interior p keeps the pairing above the growth bound") {
    NeumannCounterexampleReport rep = neumann_counterexample({1.0, 5.0, 10.0}, 4.0, 513);
    StructuralConstants c = neumann_counterexample_constants();
    double omega4 = omega_hat(c, Exponent::from_p(4.0), GrowthMode::Audit);
    for (const auto& row : rep.rows) {
        CAPTURE(row.lambda);
        CHECK(row.discrete >= -omega4 * std::pow(row.norm_p, 4.0) - 1e-6);
    }
}

TEST_CASE("divergence-free invariance") {
    auto rows = divergence_free_invariance({0.0, 1.0, 5.0}, 17, 25, 42, Bc::Dirichlet);
    REQUIRE(rows.size() == 3);
    CHECK(rows[0].max_deviation == 0.0);
    for (const auto& row : rows) {
        CAPTURE(row.c);
        CHECK(row.max_deviation <= 1e-10 * std::max(row.scale, 1e-300));
        CHECK(!row.expected_nonzero);
    }
    // the Neumann variant keeps a boundary term
    auto neumann = divergence_free_invariance({5.0}, 17, 25, 42, Bc::Neumann);
    CHECK(neumann[0].expected_nonzero);
    CHECK(neumann[0].max_deviation > 1e-6 * neumann[0].scale);
}

TEST_CASE("drift synthesis demo") {
    auto [b0, B0] = drift_synthesis_demo(0.0, 2.0, 4.0);
    CHECK(b0 == doctest::Approx(2.0));
    CHECK(B0 == doctest::Approx(4.0));
    auto [b1, B1] = drift_synthesis_demo(1.0, 2.0, 4.0);
    CHECK(b1 == doctest::Approx(4.0));
    CHECK(B1 == doctest::Approx(8.0));
    auto [b2, B2] = drift_synthesis_demo(1.0, 0.0, 0.0);
    CHECK(b2 == doctest::Approx(2.0));
    CHECK(B2 == 0.0);
    CHECK_THROWS_AS(drift_synthesis_demo(1.0, 0.0, 3.0), BadParameter);
}

TEST_CASE("json emission") {
    HardyThresholds h = hardy(0.75, 5);
    auto j = hardy_to_json(h);
    CHECK(j["p_minus"].get<double>() == doctest::Approx(4.0 / 3.0));
    NeumannCounterexampleReport rep = neumann_counterexample({1.0}, std::nullopt, 65);
    auto jn = neumann_to_json(rep);
    CHECK(jn["rows"].size() == 1);
}

} // TEST_SUITE
