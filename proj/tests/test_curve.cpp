#include <doctest.h>

#include <cmath>
#include <cstring>

#include "curvn/curve.hpp"
#include "oracles.hpp"

using namespace curvn;

namespace {
bool bits_equal(double a, double b) { return std::memcmp(&a, &b, sizeof a) == 0; }
}

TEST_CASE("evaluate: built-in kinds at reference parameters") {
    const CurveSample c = Curve::circle({}, 1.0).at(0.0);
    CHECK(c.position.x == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(c.position.y == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(c.velocity.x == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(c.velocity.y == doctest::Approx(1.0).epsilon(1e-15));

    const CurveSample l = Curve::line({}, {1, 0, 0}).at(3.0);
    CHECK(l.position.x == 3.0);
    CHECK(l.position.y == 0.0);
    CHECK(l.velocity.x == 1.0);

    const CurveSample e = Curve::ellipse(1.0, 0.5).at(0.0);
    CHECK(e.position.x == doctest::Approx(1.0));
    CHECK(e.velocity.x == doctest::Approx(0.0));
    CHECK(e.velocity.y == doctest::Approx(std::sqrt(0.75)).epsilon(1e-14));
}

TEST_CASE("evaluate: rejects non-finite parameters") {
    const Curve c = Curve::circle({}, 1.0);
    CHECK_THROWS_AS(c.at(std::nan("")), std::invalid_argument);
    CHECK_THROWS_AS(c.at(std::numeric_limits<double>::infinity()), std::invalid_argument);
}

TEST_CASE("curvature: circle, line, ellipse vertex") {
    CHECK(curvature(Curve::circle({}, 1.0), 1.3) == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(curvature(Curve::circle({}, 7.0), 0.4) == doctest::Approx(1.0 / 7.0).epsilon(1e-13));
    CHECK(curvature(Curve::line({}, {2, 1, 0}), 5.0) == doctest::Approx(0.0));
    // vertex curvature a/b^2 with b^2 = a^2 (1 - ecc^2)
    CHECK(curvature(Curve::ellipse(1.0, 0.5), 0.0) ==
          doctest::Approx(1.0 / 0.75).epsilon(1e-13));
}

TEST_CASE("finite-difference velocity matches analytic with O(h^2) decay") {
    std::vector<Vec> knots;
    for (int i = 0; i < 24; ++i) {
        const double s = kTwoPi * i / 24;
        knots.push_back({1.2 * std::cos(s), 0.8 * std::sin(s), 0});
    }
    const Curve curves[] = {
        Curve::circle({0.3, -0.2, 0}, 2.0), Curve::ellipse(1.0, 0.7),
        Curve::open_bump(1.0, 1.0), Curve::fourier(oracle::sample_loop()),
        fit_spline(knots, true)};
    for (const Curve& c : curves) {
        const double s0 = 0.7;
        double errs[2];
        for (int k = 0; k < 2; ++k) {
            const double h = (k == 0) ? 1e-3 : 5e-4;
            const Vec fd = (c.at(s0 + h).position - c.at(s0 - h).position) / (2.0 * h);
            errs[k] = norm(fd - c.at(s0).velocity);
        }
        CHECK(errs[0] / errs[1] == doctest::Approx(4.0).epsilon(0.15));
    }
}

TEST_CASE("closed-curve evaluation is exactly periodic for analytic kinds") {
    const Curve curves[] = {Curve::circle({}, 1.0), Curve::ellipse(1.0, 0.9),
                            Curve::fourier(oracle::sample_loop())};
    for (const Curve& c : curves) {
        int verified = 0;
        for (int i = 0; i < 64; ++i) {
            const double s = 0.09375 * i;
            // only parameters whose shift by one period is exact in binary
            const double shifted = s + kTwoPi;
            if (shifted - kTwoPi != s) continue;
            const CurveSample a = c.at(s);
            const CurveSample b = c.at(shifted);
            CHECK(bits_equal(a.position.x, b.position.x));
            CHECK(bits_equal(a.position.y, b.position.y));
            CHECK(bits_equal(a.velocity.x, b.velocity.x));
            CHECK(bits_equal(a.velocity.y, b.velocity.y));
            ++verified;
        }
        CHECK(verified > 10);
    }
}

TEST_CASE("validate: unit circle passes all checks") {
    const ValidationReport r = validate(Curve::circle({}, 1.0));
    CHECK(r.passed());
    CHECK(r.checks.size() == 3);  // regularity, seam, simpleness
}

TEST_CASE("validate: open spline with bent end tangents fails the asymptote check") {
    // end tangents roughly 30 degrees apart
    const Vec pts[] = {{-3, 0, 0}, {-2, 0, 0}, {-1, 0, 0}, {0, 0, 0},
                       {1, 0.5, 0}, {2, 1.1, 0}, {3, 1.7, 0}};
    const Curve c = fit_spline(pts, false);
    const ValidationReport r = validate(c);
    CHECK_FALSE(r.passed());
    bool asymptote_failed = false;
    for (const auto& check : r.checks)
        if (check.name == "asymptote-direction") asymptote_failed = !check.passed;
    CHECK(asymptote_failed);
}

TEST_CASE("validate: figure-eight loop fails the simpleness check") {
    FourierLoop eight;
    eight.cos_coeffs = {{0, 0, 0}, {0, 0, 0}};
    eight.sin_coeffs = {{0, 1, 0}, {0.5, 0, 0}};
    const Curve c = Curve::fourier(eight);

    // dense-sampling oracle: well-separated parameters land on nearby points
    double min_dist = 1e300;
    const int n = 4096;
    for (int i = 0; i < n; ++i) {
        const double s = kTwoPi * i / n;
        const double u = s + 0.5 * kTwoPi;  // opposite parameter
        min_dist = std::min(min_dist, norm(c.at(s).position - c.at(u).position));
    }
    CHECK(min_dist < 1e-3);  // genuinely self-intersecting

    const ValidationReport r = validate(c);
    CHECK_FALSE(r.passed());
    bool simpleness_failed = false;
    for (const auto& check : r.checks)
        if (check.name == "simpleness") simpleness_failed = !check.passed;
    CHECK(simpleness_failed);
}

TEST_CASE("fit_spline: 64 circle points reproduce the circle to 1e-6") {
    std::vector<Vec> pts;
    for (int i = 0; i < 64; ++i) {
        const double s = kTwoPi * i / 64;
        pts.push_back({std::cos(s), std::sin(s), 0});
    }
    const Curve spline = fit_spline(pts, true);
    double worst = 0.0;
    for (int i = 0; i < 2000; ++i) {
        const double s = kTwoPi * i / 2000;
        const Vec p = spline.at(s).position;
        // knots sit at uniform parameters, so the spline parameter tracks the angle
        worst = std::max(worst, norm(p - Vec{std::cos(s), std::sin(s), 0}));
    }
    CHECK(worst < 1e-6);
}

TEST_CASE("fit_spline: collinear points give a straight spline") {
    const Vec pts[] = {{0, 0, 0}, {1, 0.5, 0}, {2, 1.0, 0}, {3, 1.5, 0}};
    const Curve c = fit_spline(pts, false);
    for (double s : {-2.0, -0.4, 0.0, 0.7, 1.9}) {
        CHECK(curvature(c, s) == doctest::Approx(0.0).epsilon(1e-12));
    }
}

TEST_CASE("fit_spline: rejects bad input") {
    const Vec three[] = {{0, 0, 0}, {1, 0, 0}, {2, 1, 0}};
    CHECK_THROWS_AS(fit_spline(three, false), std::invalid_argument);
    const Vec dup[] = {{0, 0, 0}, {1, 0, 0}, {1, 0, 0}, {2, 1, 0}, {3, 0, 0}};
    CHECK_THROWS_AS(fit_spline(dup, false), std::invalid_argument);
}

TEST_CASE("fit_spline: deviation decreases monotonically as samples double") {
    const Curve target = Curve::ellipse(1.0, 0.5);
    double prev = 1e300;
    for (int count : {16, 32, 64, 128}) {
        std::vector<Vec> pts;
        for (int i = 0; i < count; ++i)
            pts.push_back(target.at(kTwoPi * i / count).position);
        const Curve spline = fit_spline(pts, true);
        double worst = 0.0;
        for (int i = 0; i < 1000; ++i) {
            const double s = kTwoPi * i / 1000;
            worst = std::max(worst, norm(spline.at(s).position - target.at(s).position));
        }
        CHECK(worst < prev);
        prev = worst;
    }
    CHECK(prev < 1e-6);
}

TEST_CASE("combinators transform positions as expected") {
    const Curve c = Curve::ellipse(1.0, 0.5);
    const double s = 1.1;
    const Vec p = c.at(s).position;

    CHECK(norm(c.translated({2, -1, 0.5}).at(s).position - (p + Vec{2, -1, 0.5})) < 1e-15);
    CHECK(norm(c.scaled(3.0).at(s).position - p * 3.0) < 1e-15);

    const Vec q = c.rotated(0.7).at(s).position;
    CHECK(q.x == doctest::Approx(p.x * std::cos(0.7) - p.y * std::sin(0.7)).epsilon(1e-14));
    CHECK(q.y == doctest::Approx(p.x * std::sin(0.7) + p.y * std::cos(0.7)).epsilon(1e-14));

    CHECK(norm(c.reversed().at(-s).position - p) < 1e-15);
    CHECK(norm(c.reversed().at(-s).velocity + c.at(s).velocity) < 1e-15);

    // reparameterization keeps the point set; derivatives follow the chain rule
    const Curve r = c.reparameterized(0.3, 1);
    const double phi = s + 0.3 * std::sin(s);
    CHECK(norm(r.at(s).position - c.at(phi).position) < 1e-14);
    const double dphi = 1.0 + 0.3 * std::cos(s);
    CHECK(norm(r.at(s).velocity - c.at(phi).velocity * dphi) < 1e-13);
}

TEST_CASE("validation report summary names failing checks") {
    FourierLoop eight;
    eight.cos_coeffs = {{0, 0, 0}, {0, 0, 0}};
    eight.sin_coeffs = {{0, 1, 0}, {0.5, 0, 0}};
    const ValidationReport r = validate(Curve::fourier(eight));
    CHECK(r.summary().find("simpleness FAILED") != std::string::npos);
}
