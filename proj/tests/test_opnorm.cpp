#include <doctest.h>

#include <random>

#include "sgl/opnorm.hpp"

using namespace sgl;

namespace {

Eigen::MatrixXcd random_complex(int n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss;
    Eigen::MatrixXcd S(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) S(i, j) = std::complex<double>(gauss(rng), gauss(rng));
    return S;
}

Eigen::VectorXd random_weights(int n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(0.5, 2.0);
    Eigen::VectorXd w(n);
    for (int i = 0; i < n; ++i) w[i] = u(rng);
    return w;
}

double dual_exponent(double p) { return p / (p - 1.0); }

} // namespace

TEST_SUITE("opnorm") {

TEST_CASE("identity and diagonal matrices") {
    Eigen::VectorXd w = Eigen::VectorXd::Ones(8);
    Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(8, 8);
    for (double p : {1.0, 1.5, 2.0, 4.0, std::numeric_limits<double>::infinity()})
        CHECK(opnorm_p(id, w, p).value == doctest::Approx(1.0).epsilon(1e-9));
    Eigen::MatrixXcd d = id;
    d(3, 3) = 2.0;
    for (double p : {1.0, 1.4, 2.0, 7.0, std::numeric_limits<double>::infinity()})
        CHECK(opnorm_p(d, w, p).value == doctest::Approx(2.0).epsilon(1e-9));
}

TEST_CASE("p = 2 matches the singular value oracle") {
    // nonnegative matrix, unit weights
    std::mt19937_64 rng(42);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    Eigen::MatrixXcd S(50, 50);
    for (int i = 0; i < 50; ++i)
        for (int j = 0; j < 50; ++j) S(i, j) = u(rng);
    Eigen::VectorXd w = Eigen::VectorXd::Ones(50);
    double got = opnorm_p(S, w, 2.0).value;
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(S);
    CHECK(got == doctest::Approx(svd.singularValues()[0]).epsilon(1e-8));

    // weighted complex case: oracle on the symmetrized matrix
    Eigen::MatrixXcd C = random_complex(40, 7);
    Eigen::VectorXd wc = random_weights(40, 8);
    Eigen::VectorXd ws = wc.cwiseSqrt();
    Eigen::MatrixXcd B = ws.asDiagonal() * C * ws.cwiseInverse().asDiagonal();
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd2(B);
    CHECK(opnorm_p(C, wc, 2.0).value ==
          doctest::Approx(svd2.singularValues()[0]).epsilon(1e-8));
}

TEST_CASE("exact p = 1 and p = inf formulas against brute force") {
    Eigen::MatrixXcd S = random_complex(12, 3);
    Eigen::VectorXd w = random_weights(12, 4);
    // p = 1: extreme points of the weighted ball are e_j / w_j
    double brute1 = 0.0;
    for (int j = 0; j < 12; ++j) {
        double colnorm = 0.0;
        for (int i = 0; i < 12; ++i) colnorm += w[i] * std::abs(S(i, j));
        brute1 = std::max(brute1, colnorm / w[j]);
    }
    CHECK(opnorm_p(S, w, 1.0).value == doctest::Approx(brute1).epsilon(1e-13));
    // p = inf: unweighted absolute row sums
    double bruteInf = 0.0;
    for (int i = 0; i < 12; ++i) bruteInf = std::max(bruteInf, S.row(i).cwiseAbs().sum());
    CHECK(opnorm_p(S, w, std::numeric_limits<double>::infinity()).value ==
          doctest::Approx(bruteInf).epsilon(1e-13));
}

TEST_CASE("monotone lower bounds and duality") {
    // Dense Gaussian matrices have many competitive stationary points; a wide
    // restart budget is what makes the lower bound sharp enough for the duality
    // comparison (the default budget is sized for structured kernels).
    Eigen::MatrixXcd S = random_complex(100, 11);
    Eigen::VectorXd w = random_weights(100, 12);
    OpNormOptions opts;
    opts.restarts = 32;
    for (double p : {1.5, 2.0, 3.0}) {
        OpNormResult a = opnorm_p(S, w, p, opts);
        OpNormResult b = opnorm_p(weighted_adjoint(S, w), w, dual_exponent(p), opts);
        CHECK(a.value == doctest::Approx(b.value).epsilon(1e-6));
        CHECK((b.value >= a.value * (1.0 - 1e-9) || a.value >= b.value * (1.0 - 1e-9)));
    }
}

TEST_CASE("2 -> inf equals the weighted row norm") {
    Eigen::MatrixXcd S = random_complex(30, 21);
    Eigen::VectorXd w = random_weights(30, 22);
    double brute = 0.0;
    for (int i = 0; i < 30; ++i) {
        double s = 0.0;
        for (int j = 0; j < 30; ++j) s += std::norm(S(i, j)) / w[j];
        brute = std::max(brute, std::sqrt(s));
    }
    CHECK(opnorm_mixed(S, w, 2.0, std::numeric_limits<double>::infinity()).value ==
          doctest::Approx(brute).epsilon(1e-12));
}

TEST_CASE("mixed-norm iteration is a lower bound and tight on rank one") {
    // S = a b^T: |S|_{p->r} = |a|_r |b|_{p'} for unit weights
    int n = 25;
    Eigen::VectorXd w = Eigen::VectorXd::Ones(n);
    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> u(0.1, 1.0);
    Eigen::VectorXcd a(n), b(n);
    for (int i = 0; i < n; ++i) {
        a[i] = u(rng);
        b[i] = u(rng);
    }
    Eigen::MatrixXcd S = a * b.transpose();
    double p = 1.7, r = 3.1;
    double pd = dual_exponent(p);
    double na = 0.0, nb = 0.0;
    for (int i = 0; i < n; ++i) {
        na += std::pow(std::abs(a[i]), r);
        nb += std::pow(std::abs(b[i]), pd);
    }
    double expect = std::pow(na, 1.0 / r) * std::pow(nb, 1.0 / pd);
    OpNormResult res = opnorm_mixed(S, w, p, r);
    CHECK(res.value == doctest::Approx(expect).epsilon(1e-8));
    CHECK(res.value <= expect * (1.0 + 1e-12)); // lower-bound semantics
}

} // TEST_SUITE
