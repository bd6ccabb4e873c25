#include "sympb/ellipsoid.hpp"

#include "support/checks.hpp"

#include <catch2/catch_amalgamated.hpp>

using namespace sympb;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {
constexpr std::uint64_t SEED = 0x5eed5caff01d0002ull;

Ellipsoid polterovich_ball(double alpha) { return Ellipsoid(polterovich_matrix(alpha)); }
}  // namespace

TEST_CASE("ellipsoid construction validates the generator") {
    REQUIRE_THROWS_AS(Ellipsoid(Mat::Zero(4, 4)), std::invalid_argument);
    REQUIRE_THROWS_AS(Ellipsoid(Mat::Identity(3, 3)), std::invalid_argument);
    Mat rank_deficient = Mat::Identity(4, 4);
    rank_deficient(3, 3) = 0.0;
    REQUIRE_THROWS_AS(Ellipsoid(rank_deficient), std::invalid_argument);
}

TEST_CASE("support of the unit ball is one in every direction") {
    const Ellipsoid ball{Mat::Identity(4, 4)};
    auto rng = std::mt19937_64(SEED);
    for (int it = 0; it < 100; ++it) {
        const Vec u = sympb::testing::random_unit_vector(rng, 4);
        REQUIRE_THAT(support(ball, u), WithinAbs(1.0, 1e-12));
    }
    Vec not_unit = Vec::Zero(4);
    not_unit[0] = 1.5;
    REQUIRE_THROWS_AS(support(ball, not_unit), std::invalid_argument);
}

TEST_CASE("width_min equals the support minimum over dense sphere samples") {
    const Ellipsoid E{scaling_map(2.0, 2) * polterovich_matrix(0.5)};
    // Frozen anchor: smallest singular value of the generator.
    REQUIRE_THAT(width_min(E), WithinRel(0.48485864200309226, 1e-9));

    // Every direction supports at least the width, and random directions get
    // close (the approach is quadratic in the angular gap, so the closeness
    // tolerance reflects the sampling resolution, not the width accuracy).
    auto rng = std::mt19937_64(SEED + 1);
    double lo = std::numeric_limits<double>::infinity();
    for (int it = 0; it < 100000; ++it) {
        const double h = support(E, sympb::testing::random_unit_vector(rng, 4));
        REQUIRE(h >= width_min(E) - 1e-12);
        lo = std::min(lo, h);
    }
    REQUIRE_THAT(lo, WithinAbs(width_min(E), 5e-3));

    // Inverse power iteration on G G^T recovers the minimizing direction by a
    // route independent of the decomposition inside width_min.
    const Mat G = E.generator();
    const auto lu = Mat(G * G.transpose()).fullPivLu();
    Vec v = Vec::Ones(4).normalized();
    for (int it = 0; it < 200; ++it) v = lu.solve(v).normalized();
    REQUIRE_THAT(support(E, v), WithinRel(width_min(E), 1e-9));
}

TEST_CASE("membership matches the generator preimage") {
    const Ellipsoid ball{Mat::Identity(4, 4)};
    Vec x = Vec::Zero(4);
    x[0] = 1.0 + 1e-7;
    REQUIRE_FALSE(membership(ball, x, 0.0));
    REQUIRE(membership(ball, x, 1e-6));

    const Ellipsoid E = polterovich_ball(0.7);
    auto rng = std::mt19937_64(SEED + 2);
    for (int it = 0; it < 200; ++it) {
        const Vec u = sympb::testing::random_unit_vector(rng, 4);
        REQUIRE(membership(E, E.generator() * u, 1e-12));
        REQUIRE_FALSE(membership(E, 1.001 * (E.generator() * u), 1e-6));
    }
}

TEST_CASE("slice area closed computation matches the frozen oracle values") {
    // pi * alpha / sqrt(alpha^2 + 1), confirmed independently by Monte Carlo.
    REQUIRE_THAT(slice_area(polterovich_ball(0.5), Vec2::Zero()),
                 WithinRel(1.4049629462081454, 1e-9));
    REQUIRE_THAT(slice_area(polterovich_ball(0.25), Vec2::Zero()),
                 WithinRel(0.7619481378, 1e-9));
    REQUIRE_THAT(slice_area(polterovich_ball(1.0), Vec2::Zero()),
                 WithinRel(2.2214414690791831, 1e-9));
}

TEST_CASE("slice area agrees with the Monte Carlo oracle within one percent") {
    for (double alpha : {0.25, 0.5, 1.0}) {
        const Ellipsoid E = polterovich_ball(alpha);
        const double closed = slice_area(E, Vec2::Zero());
        const double mc = slice_area_monte_carlo(E, Vec2::Zero(), 2000000, SEED + 3);
        REQUIRE_THAT(mc, WithinRel(closed, 0.01));
    }
}

TEST_CASE("monte carlo slice area is reproducible and thread-count independent") {
    const Ellipsoid E = polterovich_ball(0.5);
    const double a1 = slice_area_monte_carlo(E, Vec2::Zero(), 500000, 42, 1);
    const double a4 = slice_area_monte_carlo(E, Vec2::Zero(), 500000, 42, 4);
    REQUIRE(a1 == a4);
}

TEST_CASE("slices outside the shadow have zero area and the ball slice is exact") {
    const Ellipsoid ball{Mat::Identity(4, 4)};
    REQUIRE(slice_area(ball, Vec2(2.0, 0.0)) == 0.0);
    // B^4(1) cap {z_2 = (b, 0)}: disk of radius sqrt(1 - b^2).
    REQUIRE_THAT(slice_area(ball, Vec2(0.6, 0.0)), WithinRel(M_PI * (1.0 - 0.36), 1e-12));
}

TEST_CASE("slice area is maximized at the origin offset") {
    for (double alpha : {0.25, 0.5, 1.0}) {
        const auto sup = slice_area_sup(polterovich_ball(alpha), 41);
        REQUIRE_THAT(sup.area, WithinRel(slice_area(polterovich_ball(alpha), Vec2::Zero()), 1e-9));
        REQUIRE(sup.argmax.norm() < 0.05);
    }
}

TEST_CASE("slice area grows with alpha and vanishes as alpha goes to zero") {
    REQUIRE(slice_area(polterovich_ball(0.25), Vec2::Zero()) <
            slice_area(polterovich_ball(0.5), Vec2::Zero()));
    REQUIRE(slice_area(polterovich_ball(0.5), Vec2::Zero()) <
            slice_area(polterovich_ball(1.0), Vec2::Zero()));
    double prev = std::numeric_limits<double>::infinity();
    for (int k = 1; k <= 3; ++k) {
        const double a = slice_area(polterovich_ball(std::pow(10.0, -k)), Vec2::Zero());
        REQUIRE(a < prev);
        prev = a;
    }
    REQUIRE(prev < 0.005);
}

TEST_CASE("grid inflation anchors and limits") {
    const Ellipsoid D = polterovich_ball(0.5);
    REQUIRE_THAT(grid_inflation(1.0, 2.0, D), WithinAbs(6.833508737848075, 1e-3));
    REQUIRE(grid_inflation(1e-8, 2.0, D) < 1.0 + 1e-6);
    REQUIRE(grid_inflation(0.0, 2.0, D) == 1.0);
    REQUIRE_THROWS_AS(grid_inflation(0.1, 0.5, D), std::domain_error);
}

TEST_CASE("grid inflation is exactly affine invariant") {
    auto rng = std::mt19937_64(SEED + 4);
    std::uniform_real_distribution<double> unif(0.2, 4.0);
    for (int it = 0; it < 50; ++it) {
        const Ellipsoid D{sympb::testing::random_symplectic(rng, 2)};
        const double eps = unif(rng) * 0.1, L = 1.0 + unif(rng), c = unif(rng);
        REQUIRE_THAT(grid_inflation(c * eps, L, D.scaled(c)),
                     WithinRel(grid_inflation(eps, L, D), 1e-12));
    }
}

TEST_CASE("grid cells partition the plane with the half-open convention") {
    const GridCellFamily cells(0.25);
    auto rng = std::mt19937_64(SEED + 5);
    std::uniform_real_distribution<double> unif(-3.0, 3.0);
    for (int it = 0; it < 1000; ++it) {
        const Vec2 p(unif(rng), unif(rng));
        const auto idx = cells.cell_index(p);
        const Vec2 u = cells.local_coordinate(p);
        REQUIRE(u[0] >= -0.5);
        REQUIRE(u[0] < 0.5);
        REQUIRE(u[1] >= -0.5);
        REQUIRE(u[1] < 0.5);
        REQUIRE((cells.cell_center(idx) + 0.25 * u - p).norm() < 1e-12);
    }
    // Seam points belong to the cell on their right/top.
    REQUIRE(cells.cell_index(Vec2(0.125, 0.0))[0] == 1);
    REQUIRE(cells.cell_index(Vec2(-0.125, 0.0))[0] == 0);
}

TEST_CASE("scaled grid outer approximation stays inside the inflated ellipsoid") {
    // Sample the grid thickening of A^L D: take x in D, replace its z_2 part
    // by an arbitrary point of the same grid square, scale by A^L, and check
    // membership in (1 + sqrt(2) eps L / lambda) A^L D.
    const double eps = 0.05, L = 2.0;
    const Ellipsoid D = polterovich_ball(0.5);
    const double infl = grid_inflation(eps, L, D);
    const Mat A = scaling_map(L, 2);
    const Ellipsoid target = D.mapped(A).scaled(infl);
    const GridCellFamily cells(eps);
    auto rng = std::mt19937_64(SEED + 6);
    std::uniform_real_distribution<double> unif(-0.5, 0.5);
    for (int it = 0; it < 10000; ++it) {
        const Vec x = D.generator() * sympb::testing::random_ball_point(rng, 4);
        const Vec2 z2(x[2], x[3]);
        const Vec2 q = cells.cell_center(cells.cell_index(z2)) + eps * Vec2(unif(rng), unif(rng));
        Vec y = x;
        y[2] = q[0];
        y[3] = q[1];
        REQUIRE(membership(target, A * y, 1e-9));
    }
}
