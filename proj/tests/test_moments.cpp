#include <cmath>
#include <vector>

#include "doctest.h"

#include "bayestree/engine.hpp"
#include "bayestree/errors.hpp"
#include "bayestree/moments.hpp"

using namespace bayestree;

namespace {

const ModelParams focal = ModelParams::create(0.5, 1.0);

double mirror_point(double x) { return (1.0 - 0x1.0p-53) - x; }

}  // namespace

TEST_CASE("prior moments are the uniform moments") {
    const Dataset empty{std::vector<double>{}};
    CHECK(moment(empty, MomentSpec::power(0), focal) == 1.0);
    CHECK(moment(empty, MomentSpec::power(1), focal) == 0.5);
    CHECK(moment(empty, MomentSpec::power(2), focal) ==
          doctest::Approx(1.0 / 3.0).epsilon(1e-14));
    CHECK(moment(empty, MomentSpec::indicator(0.25), focal) == 0.25);
    CHECK(moment(empty, MomentSpec::indicator(0.0), focal) == 0.0);
    CHECK(moment(empty, MomentSpec::indicator(1.0), focal) == 1.0);
}

TEST_CASE("single observation shifts the posterior mean toward it") {
    const Dataset d({0.9});
    const double m = moment(d, MomentSpec::power(1), focal);
    CHECK(m > 0.5);
    CHECK(m < 0.9);
    EngineOptions deep;
    deep.truncate_depth = 40;
    CHECK(m == doctest::Approx(moment(d, MomentSpec::power(1), focal, deep))
                   .epsilon(1e-9));

    const Dataset low({0.1});
    CHECK(moment(low, MomentSpec::power(1), focal) < 0.5);
}

TEST_CASE("moments stay finite on divergent datasets") {
    const Dataset heavy({0.3, 0.3, 0.3});
    const double m1 = moment(heavy, MomentSpec::power(1), focal);
    CHECK(m1 > 0.3);
    CHECK(m1 < 0.5);
    EngineOptions deep;
    deep.truncate_depth = 200;
    // a triple sits exactly on the heaviness boundary (wbar == 1 at these
    // parameters), so truncation error decays only like Theta(1/m); check the
    // algebraic approach instead of a tight match
    const double gap200 =
        std::fabs(m1 - moment(heavy, MomentSpec::power(1), focal, deep));
    EngineOptions deeper;
    deeper.truncate_depth = 400;
    const double gap400 =
        std::fabs(m1 - moment(heavy, MomentSpec::power(1), focal, deeper));
    CHECK(gap200 < 1e-2);
    CHECK(gap400 < 0.6 * gap200);
    CHECK(std::fabs(moment(heavy, MomentSpec::power(0), focal) - 1.0) <= 1e-13);

    const Dataset heavier({0.3, 0.3, 0.3, 0.3, 0.8});
    const double m1b = moment(heavier, MomentSpec::power(1), focal);
    CHECK(m1b > 0.0);
    CHECK(m1b < 1.0);
    CHECK(m1b ==
          doctest::Approx(moment(heavier, MomentSpec::power(1), focal, deep))
              .epsilon(1e-9));
}

TEST_CASE("truncated moment fold matches the explicit expansion") {
    // min_depth >= truncate_depth disables the uniform-cell fold, forcing the
    // full 2^m expansion; both paths must produce the same numbers
    const Dataset d({0.3, 0.3, 0.3, 0.9});
    const std::vector<MomentSpec> specs = {
        MomentSpec::power(1), MomentSpec::power(2), MomentSpec::indicator(0.3)};
    const std::vector<ModelParams> grid = {focal, ModelParams::create(0.3, 0.5)};
    for (const auto& p : grid) {
        for (const auto& spec : specs) {
            EngineOptions folded;
            folded.truncate_depth = 14;
            EngineOptions expanded;
            expanded.truncate_depth = 14;
            expanded.min_depth = 14;
            CHECK(std::fabs(moment(d, spec, p, folded) -
                            moment(d, spec, p, expanded)) <= 1e-12);
        }
    }
}

TEST_CASE("indicator moments form a cdf") {
    const Dataset d({0.2, 0.2, 0.61, 0.84});
    double prev = 0.0;
    for (int i = 0; i <= 16; ++i) {
        const double a = i / 16.0;
        const double v = moment(d, MomentSpec::indicator(a), focal);
        CHECK(v >= prev - 1e-13);
        prev = v;
    }
    CHECK(moment(d, MomentSpec::indicator(0.0), focal) == 0.0);
    CHECK(moment(d, MomentSpec::indicator(1.0), focal) ==
          doctest::Approx(1.0).epsilon(1e-13));
    // more of the posterior mass sits below 1/2 than the prior puts there
    const Dataset skewed({0.2, 0.2, 0.3, 0.84});
    CHECK(moment(skewed, MomentSpec::indicator(0.5), focal) > 0.5);
}

TEST_CASE("moments are independent of the forced minimal depth") {
    const Dataset d({0.2, 0.2, 0.8});
    const double base = moment(d, MomentSpec::power(1), focal);
    const double base_ind = moment(d, MomentSpec::indicator(0.37), focal);
    for (int m : {2, 5}) {
        EngineOptions opts;
        opts.min_depth = m;
        CHECK(moment(d, MomentSpec::power(1), focal, opts) ==
              doctest::Approx(base).epsilon(1e-12));
        CHECK(moment(d, MomentSpec::indicator(0.37), focal, opts) ==
              doctest::Approx(base_ind).epsilon(1e-12));
    }
}

TEST_CASE("first moment respects reflection") {
    const std::vector<double> pts = {0.125, 0.125, 0.40625, 0.875};
    std::vector<double> mirrored;
    for (double x : pts) mirrored.push_back(mirror_point(x));
    const double m = moment(Dataset(pts), MomentSpec::power(1), focal);
    const double mm = moment(Dataset(mirrored), MomentSpec::power(1), focal);
    CHECK(m + mm == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("moment spec validation") {
    const Dataset d({0.3});
    CHECK_THROWS_AS(moment(d, MomentSpec::power(-1), focal), std::domain_error);
    CHECK_THROWS_AS(moment(d, MomentSpec::power(101), focal), std::domain_error);
    CHECK_THROWS_AS(moment(d, MomentSpec::indicator(1.5), focal),
                    std::domain_error);
    CHECK_THROWS_AS(moment(d, MomentSpec::indicator(-0.5), focal),
                    std::domain_error);
}
