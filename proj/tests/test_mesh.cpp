#include <doctest.h>

#include <cmath>
#include <sstream>

#include "sgl/mesh.hpp"

using namespace sgl;

namespace {

constexpr double kPi = 3.14159265358979323846;

GridFunction sample(const Grid& g, cplx (*f)(double)) {
    GridFunction u(g);
    for (std::size_t i = 0; i < g.num_nodes(); ++i) u[i] = f(g.x_of(i));
    return u;
}

double max_interior_error(const Grid& g, const DiscreteGradient& got, double (*want)(double)) {
    double err = 0.0;
    for (std::size_t i = 1; i + 1 < g.num_nodes(); ++i)
        err = std::max(err, std::abs(got.at(i, 0) - cplx(want(g.x_of(i)), 0.0)));
    return err;
}

} // namespace

TEST_SUITE("mesh") {

TEST_CASE("gradient basics") {
    Grid g = Grid::line(0, 1, 33, Bc::Neumann);
    GridFunction ones(g, cplx(1.0, 0.0));
    DiscreteGradient d1 = grad(ones);
    for (std::size_t i = 0; i < g.num_nodes(); ++i) CHECK(std::abs(d1.at(i, 0)) == 0.0);

    GridFunction lin = sample(g, [](double x) { return cplx(x, 0); });
    DiscreteGradient d2 = grad(lin);
    CHECK(max_interior_error(g, d2, [](double) { return 1.0; }) <= 1e-12);
}

TEST_CASE("gradient is second order on smooth data") {
    double errs[3];
    int k = 0;
    for (std::size_t n : {33, 65, 129}) {
        Grid g = Grid::line(0, 1, n, Bc::Dirichlet);
        GridFunction u = sample(g, [](double x) { return cplx(std::sin(kPi * x), 0); });
        DiscreteGradient du = grad(u);
        errs[k++] = max_interior_error(g, du,
                                       [](double x) { return kPi * std::cos(kPi * x); });
    }
    double order = std::log2(errs[0] / errs[2]) / 2.0;
    CHECK(order >= 1.9);
}

TEST_CASE("norms and inner products") {
    Grid g = Grid::line(0, 1, 257, Bc::Dirichlet);
    GridFunction ones(g, cplx(1.0, 0.0));
    for (double p : {1.0, 2.0, 3.5}) CHECK(lp_norm(ones, p) == doctest::Approx(1.0));
    CHECK(lp_norm(ones, std::numeric_limits<double>::infinity()) == doctest::Approx(1.0));

    GridFunction u = sample(g, [](double x) { return cplx(x, 0.5 * x); });
    double n2 = lp_norm(u, 2.0);
    CHECK(n2 * n2 == doctest::Approx(inner(u, u).real()).epsilon(1e-13));
    CHECK(inner(u, u).imag() == doctest::Approx(0.0));

    GridFunction lin = sample(g, [](double x) { return cplx(x, 0); });
    // exact integral of x^2 is 1/3; trapezoid error O(h^2)
    CHECK(lp_norm(lin, 2.0) ==
          doctest::Approx(std::sqrt(1.0 / 3.0)).epsilon(1e-5));
}

TEST_CASE("signum maps") {
    Grid g = Grid::line(0, 1, 65, Bc::Neumann);
    SUBCASE("real nonnegative input has vanishing eta") {
        GridFunction u = sample(g, [](double x) { return cplx(1.0 + x * x, 0); });
        SignumMaps m = signum_maps(u, 3.0);
        for (std::size_t i = 0; i < g.num_nodes(); ++i)
            CHECK(std::abs(m.eta.at(i, 0)) <= 1e-15);
    }
    SUBCASE("p = 2 collapses the powers") {
        GridFunction u = sample(g, [](double x) { return cplx(std::sin(x), std::cos(3 * x)); });
        SignumMaps m = signum_maps(u, 2.0);
        for (std::size_t i = 0; i < g.num_nodes(); ++i) {
            CHECK(m.v_p[i] == u[i]);
            CHECK(m.w_p[i] == u[i]);
        }
    }
    SUBCASE("constant phase leaves absu and |v_p| unchanged") {
        const double p = 2.6;
        GridFunction gpos = sample(g, [](double x) { return cplx(1.0 + 0.5 * std::sin(x), 0); });
        GridFunction rotated(g);
        cplx phase = std::exp(cplx(0, 0.7));
        for (std::size_t i = 0; i < g.num_nodes(); ++i) rotated[i] = phase * gpos[i];
        SignumMaps m0 = signum_maps(gpos, p);
        SignumMaps m1 = signum_maps(rotated, p);
        for (std::size_t i = 0; i < g.num_nodes(); ++i) {
            CHECK(std::abs(m1.absu[i] - m0.absu[i]) <= 1e-15);
            CHECK(std::abs(m1.sgnu[i] - phase * m0.sgnu[i]) <= 1e-15);
            CHECK(std::abs(std::abs(m1.v_p[i]) - std::pow(std::abs(gpos[i]), p / 2.0)) <= 1e-13);
            CHECK(std::abs(m1.eta.at(i, 0) - m0.eta.at(i, 0)) <= 1e-13);
        }
    }
    SUBCASE("exponent domain") {
        GridFunction u(g, cplx(1, 0));
        CHECK_THROWS_AS(signum_maps(u, 1.0), BadExponent);
        CHECK_THROWS_AS(signum_maps(u, 0.5), BadExponent);
    }
}

TEST_CASE("pointwise duality identity |v_p|^2 = Re(u conj(w_p))") {
    Grid g = Grid::line(0, 1, 65, Bc::Neumann);
    GridFunction u = sample(g, [](double x) {
        return std::exp(cplx(0.3 * std::sin(2 * x), 0.8 * x));
    });
    for (double p : {1.5, 2.0, 4.0}) {
        SignumMaps m = signum_maps(u, p);
        for (std::size_t i = 0; i < g.num_nodes(); ++i) {
            double lhs = std::norm(m.v_p[i]);
            double rhs = (u[i] * std::conj(m.w_p[i])).real();
            CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
        }
    }
}

TEST_CASE("chain rule consistency under refinement") {
    // grad|u| vs Re(conj(sgn u) grad u) converges at second order
    double errs[3];
    int k = 0;
    for (std::size_t n : {65, 129, 257}) {
        Grid g = Grid::line(0, 1, n, Bc::Neumann);
        GridFunction u = sample(g, [](double x) {
            return std::exp(cplx(std::sin(2.0 * x), std::cos(x)));
        });
        SignumMaps m = signum_maps(u, 3.0);
        DiscreteGradient dabs = grad(m.absu);
        DiscreteGradient du = grad(u);
        double err = 0.0;
        for (std::size_t i = 1; i + 1 < g.num_nodes(); ++i) {
            double chain = (std::conj(m.sgnu[i]) * du.at(i, 0)).real();
            err = std::max(err, std::abs(dabs.at(i, 0).real() - chain));
        }
        errs[k++] = err;
    }
    double order = std::log2(errs[0] / errs[2]) / 2.0;
    CHECK(order >= 1.9);
}

TEST_CASE("csv export") {
    Grid g = Grid::line(0, 1, 3, Bc::Neumann);
    GridFunction u = sample(g, [](double x) { return cplx(x, -x); });
    std::ostringstream os;
    write_csv(os, u);
    CHECK(os.str() == "x,re,im\n0,0,-0\n0.5,0.5,-0.5\n1,1,-1\n");
}

} // TEST_SUITE
