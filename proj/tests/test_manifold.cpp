#include "hrp/error.hpp"
#include "hrp/manifold.hpp"
#include "hrp/synth.hpp"

#include "oracles.hpp"

#include <doctest.h>

#include <cmath>

using namespace hrp;
using hrp::testing::random_matrix;

TEST_CASE("polar of identity and SPD matrices")
{
    CHECK(polar(Matrix::Identity(3, 3)).matrix().isApprox(Matrix::Identity(3, 3), 1e-14));
    Matrix spd(2, 2);
    spd << 2, 0, 0, 5;
    CHECK((polar(spd).matrix() - Matrix::Identity(2, 2)).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("polar matches frozen reference factors")
{
    Matrix c(2, 2);
    c << 1, 2, 3, 4;
    Matrix expect(2, 2);
    expect << -0.5144957554275266, 0.8574929257125443, 0.8574929257125443, 0.5144957554275266;
    CHECK((polar(c).matrix() - expect).cwiseAbs().maxCoeff() < 1e-13);
    CHECK(std::abs((polar(c).matrix().array() * c.array()).sum() - 5.8309518948453) < 1e-12);

    Matrix c3(3, 3);
    c3 << 2, -1, 0.5, 0, 1, 3, 1, 1, 1;
    Matrix e3(3, 3);
    e3 << 0.7831649330763074, -0.587169761022765, 0.20465668652661081, -0.18218998797836558,
        0.09800327157134778, 0.9783670921702936, 0.5945245965307284, 0.8035091975215853,
        0.03022372608056346;
    CHECK((polar(c3).matrix() - e3).cwiseAbs().maxCoeff() < 1e-13);
}

TEST_CASE("polar attains the nuclear norm")
{
    const Matrix c = random_matrix(8, 8, 17);
    const double inner = (polar(c).matrix().array() * c.array()).sum();
    const double nuclear = hrp::testing::singular_value_sum(c);
    CHECK(std::abs(inner - nuclear) <= 1e-8 * (nuclear + 1.0));
}

TEST_CASE("polar rejects non-finite input and is deterministic")
{
    Matrix bad = Matrix::Identity(3, 3);
    bad(1, 2) = std::nan("");
    CHECK_THROWS_AS(polar(bad), InvalidInput);
    bad(1, 2) = INFINITY;
    CHECK_THROWS_AS(polar(bad), InvalidInput);

    Matrix singular = random_matrix(5, 5, 3);
    singular.col(2).setZero();
    const Matrix a = polar(singular).matrix();
    const Matrix b = polar(singular).matrix();
    CHECK(a == b);
    CHECK(orthogonality_residual(a) < 1e-10);
}

TEST_CASE("polar is maximal against sampled orthogonal matrices")
{
    for (std::uint64_t s = 0; s < 5; ++s) {
        const Matrix c = random_matrix(6, 6, 100 + s);
        const double best = (polar(c).matrix().array() * c.array()).sum();
        for (std::uint64_t q = 0; q < 100; ++q) {
            const Matrix other = gen_random_orthogonal(6, 1000 * s + q).matrix();
            CHECK((other.array() * c.array()).sum() <= best + 1e-10);
        }
    }
}

TEST_CASE("project_orthogonal fixed point, scaling, and nearest distance")
{
    const OrthoDict q = gen_random_orthogonal(5, 9);
    CHECK((project_orthogonal(q.matrix()).matrix() - q.matrix()).cwiseAbs().maxCoeff() < 1e-12);
    CHECK((project_orthogonal(2.0 * q.matrix()).matrix() - q.matrix()).cwiseAbs().maxCoeff()
          < 1e-12);

    const Matrix d = q.matrix() + 0.01 * random_matrix(5, 5, 10);
    const Matrix nearest = hrp::testing::nearest_orthogonal_eig(d);
    const double ours = (project_orthogonal(d).matrix() - q.matrix()).norm();
    const double oracle = (nearest - q.matrix()).norm();
    CHECK(ours <= oracle + 1e-9);
    // Also nearest to D itself.
    CHECK((project_orthogonal(d).matrix() - d).norm() <= (nearest - d).norm() + 1e-9);
}

TEST_CASE("OrthoDict certification")
{
    CHECK_NOTHROW(OrthoDict::certify(Matrix::Identity(4, 4)));
    CHECK_THROWS_AS(OrthoDict::certify(2.0 * Matrix::Identity(4, 4)), InvalidInput);
    CHECK_THROWS_AS(OrthoDict::certify(Matrix::Identity(3, 4)), InvalidInput);
    Matrix nearly = Matrix::Identity(3, 3);
    nearly(0, 1) = 1e-9;
    CHECK_THROWS_AS(OrthoDict::certify(nearly), InvalidInput);
    CHECK_NOTHROW(OrthoDict::certify(nearly, 1e-8));
}

TEST_CASE("tangent_project formula, tangent fixed points and constraint")
{
    const Matrix a = random_matrix(4, 4, 21);
    const Matrix at_identity = tangent_project(OrthoDict::identity(4), a);
    CHECK((at_identity - 0.5 * (a - a.transpose())).cwiseAbs().maxCoeff() < 1e-15);

    const OrthoDict r = gen_random_orthogonal(6, 22);
    const Matrix tangent = r.matrix() * hrp::testing::random_skew(6, 23);
    CHECK((tangent_project(r, tangent) - tangent).cwiseAbs().maxCoeff() < 1e-12);

    const Matrix p = tangent_project(r, random_matrix(6, 6, 24));
    const Matrix moved = r.matrix() + p;
    const Matrix lhs = r.matrix().transpose() * moved + moved.transpose() * r.matrix();
    CHECK((lhs - 2.0 * Matrix::Identity(6, 6)).cwiseAbs().maxCoeff() < 1e-12);

    CHECK_THROWS_AS(tangent_project(r, Matrix::Zero(5, 5)), DimensionMismatch);
}

TEST_CASE("tangent_project is linear and idempotent")
{
    const OrthoDict r = gen_random_orthogonal(5, 30);
    const Matrix a = random_matrix(5, 5, 31);
    const Matrix b = random_matrix(5, 5, 32);
    const Matrix lin = tangent_project(r, 2.0 * a - 3.0 * b);
    CHECK((lin - (2.0 * tangent_project(r, a) - 3.0 * tangent_project(r, b))).cwiseAbs().maxCoeff()
          < 1e-12);
    const Matrix p = tangent_project(r, a);
    CHECK((tangent_project(r, p) - p).cwiseAbs().maxCoeff() < 1e-12);
    const Matrix skew = r.matrix().transpose() * p + p.transpose() * r.matrix();
    CHECK(skew.cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("sphere_tangent_project")
{
    const UnitVector e1 = UnitVector::certify(Vector::Unit(3, 0));
    Vector a(3);
    a << 1, 2, 3;
    Vector expect(3);
    expect << 0, 2, 3;
    CHECK((sphere_tangent_project(e1, a) - expect).norm() == 0.0);
    CHECK(sphere_tangent_project(e1, e1.vector()).norm() == 0.0);

    const UnitVector r = gen_random_unit_vector(7, 40);
    const Vector v = random_matrix(7, 1, 41).col(0);
    const Vector p = sphere_tangent_project(r, v);
    CHECK(std::abs(p.dot(r.vector())) < 1e-12);
    CHECK((sphere_tangent_project(r, p) - p).norm() < 1e-12);
    CHECK((sphere_tangent_project(r, p) - p).norm() < 1e-12);
    CHECK_THROWS_AS(sphere_tangent_project(r, Vector::Zero(3)), DimensionMismatch);
}

TEST_CASE("normalize_to_sphere")
{
    Vector v(2);
    v << 3, 4;
    const UnitVector u = normalize_to_sphere(v);
    CHECK(u[0] == doctest::Approx(0.6).epsilon(1e-15));
    CHECK(u[1] == doctest::Approx(0.8).epsilon(1e-15));
    const UnitVector again = normalize_to_sphere(u.vector());
    CHECK((again.vector() - u.vector()).norm() < 1e-15);
    CHECK_THROWS_AS(normalize_to_sphere(Vector::Zero(2)), DegenerateInput);
    CHECK_THROWS_AS(normalize_to_sphere(Vector::Constant(2, 1e-310)), DegenerateInput);
}

TEST_CASE("in_good_subset")
{
    const UnitVector e3 = UnitVector::certify(Vector::Unit(4, 2));
    CHECK(in_good_subset(e3, {2, Sign::Positive, 1.0}));
    const UnitVector neg_e3 = UnitVector::certify(-Vector::Unit(4, 2));
    CHECK_FALSE(in_good_subset(neg_e3, {2, Sign::Positive, 1.0}));
    CHECK(in_good_subset(neg_e3, {2, Sign::Negative, 1.0}));

    Vector half = Vector::Zero(3);
    half[0] = half[1] = 1.0 / std::sqrt(2.0);
    CHECK_FALSE(in_good_subset(normalize_to_sphere(half), {0, Sign::Positive, 0.5}));

    CHECK_THROWS_AS(in_good_subset(e3, {4, Sign::Positive, 1.0}), InvalidInput);
    CHECK_THROWS_AS(in_good_subset(e3, {0, Sign::Positive, 0.0}), InvalidInput);
}

TEST_CASE("good subsets partition points with a unique dominant coordinate")
{
    for (std::uint64_t s = 0; s < 200; ++s) {
        const Eigen::Index n = 2 + static_cast<Eigen::Index>(s % 9);
        const UnitVector d = gen_random_unit_vector(n, 500 + s);
        Vector mags = d.vector().cwiseAbs();
        std::sort(mags.data(), mags.data() + n, std::greater<>());
        if (mags[0] == mags[1]) {
            continue;
        }
        const double zeta = 0.5 * ((mags[0] * mags[0]) / (mags[1] * mags[1]) - 1.0);
        int hits = 0;
        for (std::size_t k = 0; k < static_cast<std::size_t>(n); ++k) {
            hits += in_good_subset(d, {k, Sign::Positive, zeta});
            hits += in_good_subset(d, {k, Sign::Negative, zeta});
        }
        CHECK(hits == 1);
    }
}

TEST_CASE("polar fuzz keeps orthogonality including singular inputs")
{
    int checked = 0;
    for (std::uint64_t s = 0; s < 1000; ++s) {
        const Eigen::Index n = 2 + static_cast<Eigen::Index>(s % 15);
        Matrix c = random_matrix(n, n, 7000 + s);
        if (s % 5 == 0) {
            c.col(0) = c.col(1);  // rank deficient
        } else if (s % 7 == 0) {
            c = c.col(0) * c.row(0);  // rank one
        }
        const OrthoDict q = polar(c);
        CHECK(q.ortho_residual() <= 1e-10);
        ++checked;
    }
    CHECK(checked == 1000);
}
