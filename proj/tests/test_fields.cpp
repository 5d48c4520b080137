#include <doctest.h>

#include <random>

#include "sgl/fields.hpp"

using namespace sgl;

namespace {

Grid line9() { return Grid::line(0.0, 1.0, 9, Bc::Dirichlet); }

} // namespace

TEST_SUITE("fields") {

TEST_CASE("decompose 1x1 complex") {
    Grid g = line9();
    MatrixField A = MatrixField::scaled_identity(g, cplx(1.0, 1.0));
    Decomposition dec = decompose(A);
    for (std::size_t i = 0; i < g.num_nodes(); ++i) {
        CHECK(dec.A0s.at(i, 0, 0) == 1.0);
        CHECK(dec.A1s.at(i, 0, 0) == 1.0);
        CHECK(dec.A0a.at(i, 0, 0) == 0.0);
        CHECK(dec.A1a.at(i, 0, 0) == 0.0);
    }
}

TEST_CASE("decompose the rotation-like 2x2 example") {
    Grid g = Grid::box(0, 1, 0, 1, 5, 5, Bc::Dirichlet);
    MatrixField A(g);
    for (std::size_t i = 0; i < g.num_nodes(); ++i) {
        A.at(i, 0, 0) = 1.0;
        A.at(i, 0, 1) = cplx(0, 1);
        A.at(i, 1, 0) = cplx(0, -1);
        A.at(i, 1, 1) = 1.0;
    }
    Decomposition dec = decompose(A);
    for (std::size_t i = 0; i < g.num_nodes(); ++i) {
        CHECK(dec.A0s.at(i, 0, 0) == 1.0);
        CHECK(dec.A0s.at(i, 0, 1) == 0.0);
        CHECK(dec.A0a.at(i, 0, 1) == 0.0);
        CHECK(dec.A1s.at(i, 0, 1) == 0.0);
        CHECK(dec.A1a.at(i, 0, 1) == 1.0);
        CHECK(dec.A1a.at(i, 1, 0) == -1.0);
    }
}

TEST_CASE("random decompose/reassemble round-trip") {
    Grid g = Grid::box(0, 1, 0, 1, 4, 3, Bc::Neumann);
    std::mt19937_64 rng(42);
    std::normal_distribution<double> gauss;
    MatrixField A(g);
    for (std::size_t i = 0; i < g.num_nodes(); ++i)
        for (int r = 0; r < 2; ++r)
            for (int c = 0; c < 2; ++c) A.at(i, r, c) = cplx(gauss(rng), gauss(rng));
    Decomposition dec = decompose(A);
    MatrixField back = reassemble(dec);
    for (std::size_t i = 0; i < g.num_nodes(); ++i)
        for (int r = 0; r < 2; ++r)
            for (int c = 0; c < 2; ++c)
                CHECK(std::abs(back.at(i, r, c) - A.at(i, r, c)) <=
                      1e-14 * (1.0 + std::abs(A.at(i, r, c))));
    // projection property: decomposing the reassembled matrix returns identical fields
    Decomposition dec2 = decompose(back);
    for (std::size_t i = 0; i < g.num_nodes(); ++i)
        for (int r = 0; r < 2; ++r)
            for (int c = 0; c < 2; ++c) {
                CHECK(dec2.A0s.at(i, r, c) ==
                      doctest::Approx(dec.A0s.at(i, r, c)).epsilon(1e-14));
                CHECK(dec2.A1a.at(i, r, c) ==
                      doctest::Approx(dec.A1a.at(i, r, c)).epsilon(1e-14));
            }
}

TEST_CASE("one-dimensional matrices have no anti-symmetric part") {
    Grid g = line9();
    MatrixField A = MatrixField::scaled_identity(g, cplx(2.0, -3.0));
    Decomposition dec = decompose(A);
    for (std::size_t i = 0; i < g.num_nodes(); ++i) {
        CHECK(dec.A0a.at(i, 0, 0) == 0.0);
        CHECK(dec.A1a.at(i, 0, 0) == 0.0);
    }
}

TEST_CASE("non-finite entries are rejected") {
    Grid g = line9();
    MatrixField A = MatrixField::scaled_identity(g, 1.0);
    A.at(3, 0, 0) = cplx(std::numeric_limits<double>::infinity(), 0.0);
    CHECK_THROWS_AS(decompose(A), InvalidField);
}

TEST_CASE("ellipticity bounds") {
    Grid g = Grid::box(0, 1, 0, 1, 4, 4, Bc::Dirichlet);
    SUBCASE("identity") {
        MatrixField A = MatrixField::scaled_identity(g, 1.0);
        auto [c1, c2] = validate_ellipticity(decompose(A));
        CHECK(c1 == doctest::Approx(1.0));
        CHECK(c2 == doctest::Approx(1.0));
    }
    SUBCASE("diag(1,4)") {
        MatrixField A(g);
        for (std::size_t i = 0; i < g.num_nodes(); ++i) {
            A.at(i, 0, 0) = 1.0;
            A.at(i, 1, 1) = 4.0;
        }
        auto [c1, c2] = validate_ellipticity(decompose(A));
        CHECK(c1 == doctest::Approx(1.0));
        CHECK(c2 == doctest::Approx(4.0));
    }
    SUBCASE("a negative eigenvalue flags the node") {
        MatrixField A = MatrixField::scaled_identity(g, 1.0);
        A.at(7, 0, 0) = -0.1;
        try {
            validate_ellipticity(decompose(A));
            FAIL_CHECK("expected NotElliptic");
        } catch (const NotElliptic& e) {
            CHECK(e.node() == 7);
        }
    }
    SUBCASE("scaled identity gives (c, c)") {
        for (double c : {0.5, 2.0, 7.25}) {
            MatrixField A = MatrixField::scaled_identity(g, c);
            auto [c1, c2] = validate_ellipticity(decompose(A));
            CHECK(c1 == doctest::Approx(c).epsilon(1e-14));
            CHECK(c2 == doctest::Approx(c).epsilon(1e-14));
        }
    }
}

TEST_CASE("grid invariants") {
    CHECK_THROWS_AS(Grid::line(0, 1, 2, Bc::Dirichlet), BadParameter);
    CHECK_THROWS_AS(Grid::line(1, 1, 9, Bc::Dirichlet), BadParameter);
    CHECK_THROWS_AS(Grid::box(0, 1, 0, 1, 1001, 1001, Bc::Dirichlet), BadParameter);
    Grid g = Grid::line(0, 2, 5, Bc::Neumann);
    CHECK(g.h(0) == doctest::Approx(0.5));
    // trapezoid weights sum to the box volume
    double total = 0.0;
    for (std::size_t i = 0; i < g.num_nodes(); ++i) total += g.quad_weight(i);
    CHECK(total == doctest::Approx(2.0));
}

} // TEST_SUITE
