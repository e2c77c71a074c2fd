#include "adr/tdist.hpp"

#include <cmath>
#include <limits>
#include <vector>

#include "adr/error.hpp"
#include "doctest.h"
#include "oracles.hpp"

using adr::Error;
using adr::log_beta;
using adr::regularized_incomplete_beta;
using adr::t_survival;

namespace {
const std::vector<double> kTGrid = {0.0,  0.01, 0.1, 0.5,  1.0,  2.0,
                                    3.46, 5.0,  10.0, 25.0, 50.0, 200.0};
}

TEST_CASE("exact symmetry point") {
    CHECK(t_survival(0.0, 1.0) == 0.5);
    CHECK(t_survival(0.0, 70.0) == 0.5);
    CHECK(t_survival(-0.0, 7.5) == 0.5);
}

TEST_CASE("closed forms match to 1e-12 absolute") {
    for (double t : kTGrid) {
        CHECK(std::fabs(t_survival(t, 1.0) - oracle::t_survival_df1(t)) < 1e-12);
        CHECK(std::fabs(t_survival(t, 2.0) - oracle::t_survival_df2(t)) < 1e-12);
    }
    CHECK(std::fabs(t_survival(1.0, 1.0) - 0.25) < 1e-14);
}

TEST_CASE("quadrature oracle across the df grid") {
    for (double df : {1.0, 2.0, 5.0, 30.0, 170.0}) {
        for (double t : {0.0, 0.5, 1.0, 2.0, 3.4641, 10.0, 50.0}) {
            const double expected = oracle::t_survival_quadrature(t, df);
            CHECK(std::fabs(t_survival(t, df) - expected) < 1e-10);
        }
    }
}

TEST_CASE("negative tail complements the positive tail") {
    for (double df : {1.0, 3.0, 17.0, 171.0}) {
        for (double t : kTGrid) {
            CHECK(std::fabs(t_survival(-t, df) - (1.0 - t_survival(t, df))) < 1e-12);
        }
    }
}

TEST_CASE("strictly decreasing in t") {
    // Range where neighboring values stay representably distinct.
    for (double df : {1.0, 2.0, 12.0, 170.0}) {
        double prev = t_survival(-8.25, df);
        for (double t = -8.0; t <= 8.0; t += 0.25) {
            const double s = t_survival(t, df);
            CHECK(s < prev);
            prev = s;
        }
    }
}

TEST_CASE("stays accurate over the stated domain corners") {
    // df <= 1e4, |t| <= 1e3: finite, in range, tiny but not negative.
    const double corner = t_survival(1000.0, 10000.0);
    CHECK(corner >= 0.0);
    CHECK(corner < 1e-300);
    const double wide = t_survival(1000.0, 1.0);
    CHECK(wide == doctest::Approx(oracle::t_survival_df1(1000.0)).epsilon(1e-9));
    CHECK(t_survival(std::numeric_limits<double>::infinity(), 5.0) == 0.0);
    CHECK(t_survival(-std::numeric_limits<double>::infinity(), 5.0) == 1.0);
}

TEST_CASE("invalid degrees of freedom") {
    for (double df : {0.0, -1.0, std::numeric_limits<double>::infinity(),
                      std::numeric_limits<double>::quiet_NaN()}) {
        try {
            t_survival(1.0, df);
            FAIL("expected InvalidDf for df=" << df);
        } catch (const Error& e) {
            CHECK(e.tag() == "InvalidDf");
        }
    }
    CHECK_THROWS_AS(t_survival(std::numeric_limits<double>::quiet_NaN(), 3.0), Error);
}

TEST_CASE("incomplete beta reference points") {
    // I_x(1,1) = x; I_x(1,b) = 1-(1-x)^b; I_x(a,1) = x^a.
    for (double x : {0.0, 0.25, 0.5, 0.75, 1.0}) {
        CHECK(regularized_incomplete_beta(1.0, 1.0, x) == doctest::Approx(x).epsilon(1e-14));
        CHECK(regularized_incomplete_beta(1.0, 3.0, x) ==
              doctest::Approx(1.0 - std::pow(1.0 - x, 3.0)).epsilon(1e-13));
        CHECK(regularized_incomplete_beta(2.5, 1.0, x) ==
              doctest::Approx(std::pow(x, 2.5)).epsilon(1e-13));
    }
    CHECK(regularized_incomplete_beta(0.5, 0.5, 0.5) == doctest::Approx(0.5).epsilon(1e-13));
    CHECK_THROWS_AS(regularized_incomplete_beta(0.0, 1.0, 0.5), Error);
    CHECK_THROWS_AS(regularized_incomplete_beta(1.0, 1.0, 1.5), Error);
}

TEST_CASE("log_beta agrees with lgamma directly") {
    CHECK(log_beta(1.0, 1.0) == doctest::Approx(0.0));
    CHECK(log_beta(0.5, 0.5) == doctest::Approx(std::log(oracle::kPi)).epsilon(1e-14));
    CHECK_THROWS_AS(log_beta(-1.0, 2.0), Error);
}
