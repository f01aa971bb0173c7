#include <cmath>
#include <vector>

#include "doctest.h"

#include "bayestree/distributions.hpp"
#include "bayestree/engine.hpp"
#include "bayestree/errors.hpp"
#include "bayestree/index.hpp"
#include "bayestree/moments.hpp"

using namespace bayestree;

namespace {
const ModelParams focal = ModelParams::create(0.5, 1.0);
}

TEST_CASE("augmented evidence equals a full re-evaluation") {
    const std::vector<double> pts = sample(RefDist::linear, 40, 7);
    const Dataset d(pts);
    const EvidenceIndex idx = EvidenceIndex::build(d, focal);
    CHECK(idx.log_evidence().log() ==
          evaluate(d, std::nullopt, focal).log_evidence.log());
    for (int i = 0; i < 37; ++i) {
        const double x = (i + 0.5) / 37.0;
        for (int copies : {1, 2}) {
            const LogValue walk = idx.augmented_log_evidence(x, copies);
            Dataset aug = d;
            for (int c = 0; c < copies; ++c) aug = aug.with_inserted(x);
            const LogValue full = evaluate(aug, std::nullopt, focal).log_evidence;
            REQUIRE(walk.is_finite());
            REQUIRE(full.is_finite());
            CHECK(walk.log() == doctest::Approx(full.log()).epsilon(1e-13));
        }
    }
    // inserting at an existing data point exercises the group-join path
    const double x0 = pts[3];
    const LogValue walk = idx.augmented_log_evidence(x0, 1);
    const LogValue full =
        evaluate(d.with_inserted(x0), std::nullopt, focal).log_evidence;
    CHECK(walk.log() == doctest::Approx(full.log()).epsilon(1e-13));
}

TEST_CASE("augmented evidence within a divergence class stays comparable") {
    const Dataset d({0.2, 0.2, 0.2, 0.9});  // heavy triple at 0.2
    const EvidenceIndex idx = EvidenceIndex::build(d, focal);
    REQUIRE(idx.log_evidence().is_divergent());
    const LogValue walk = idx.augmented_log_evidence(0.55, 1);
    const LogValue full =
        evaluate(d.with_inserted(0.55), std::nullopt, focal).log_evidence;
    REQUIRE(walk.is_divergent());
    REQUIRE(full.is_divergent());
    CHECK(walk.scaled_log() ==
          doctest::Approx(full.scaled_log()).epsilon(1e-12));
    // the ratio for the predictive density is finite and positive
    const LogValue dens = idx.query_density(0.55);
    REQUIRE(dens.is_finite());
    CHECK(std::exp(dens.log()) > 0.0);
}

TEST_CASE("predictive density closed forms") {
    const EvidenceIndex empty = EvidenceIndex::build(Dataset(std::vector<double>{}), focal);
    CHECK(empty.query_density(0.3).log() == 0.0);  // E[q(x)] = 1
    CHECK(empty.query_variance(0.3).value ==
          doctest::Approx(0.5).epsilon(1e-13));

    const EvidenceIndex one = EvidenceIndex::build(Dataset({0.3}), focal);
    CHECK(std::exp(one.query_density(0.3).log()) ==
          doctest::Approx(1.5).epsilon(1e-13));
}

TEST_CASE("variance diverges exactly at observed points") {
    const Dataset d({0.3, 0.7});
    const EvidenceIndex idx = EvidenceIndex::build(d, focal);
    CHECK(idx.query_variance(0.3).divergent);
    CHECK(idx.query_variance(0.7).divergent);
    CHECK(!idx.query_variance(0.5).divergent);
    CHECK(idx.query_variance(0.5).value > 0.0);
    CHECK(!posterior_variance(d, 0.11, focal).divergent);
    CHECK(posterior_variance(d, 0.7, focal).divergent);
}

TEST_CASE("density at lightly observed points of a divergent dataset") {
    const Dataset d({0.4, 0.4, 0.4, 0.9});
    const EvidenceIndex idx = EvidenceIndex::build(d, focal);
    const LogValue at_witness = idx.query_density(0.9);  // count 1 -> pair
    REQUIRE(at_witness.is_finite());
    // both datasets share the divergence class, so the scaled surrogates give
    // the exact ratio of regularized evidences
    const double scaled_base =
        evaluate(d, std::nullopt, focal).log_evidence.scaled_log();
    const double scaled_aug = evaluate(d.with_inserted(0.9), std::nullopt, focal)
                                  .log_evidence.scaled_log();
    CHECK(at_witness.log() ==
          doctest::Approx(scaled_aug - scaled_base).epsilon(1e-12));
    const LogValue fresh = idx.query_density(0.123);
    REQUIRE(fresh.is_finite());
    const LogValue at_group = idx.query_density(0.4);  // count 3 -> 4, heavier
    CHECK(at_group.is_divergent());
}

TEST_CASE("posterior cdf walk") {
    const EvidenceIndex empty = EvidenceIndex::build(Dataset(std::vector<double>{}), focal);
    CHECK(empty.query_cdf(0.25) == 0.25);  // prior mean cdf is the identity
    CHECK(empty.query_cdf(0.0) == 0.0);
    CHECK(empty.query_cdf(1.0) == 1.0);

    const std::vector<double> pts = sample(RefDist::jump_half, 60, 3);
    const Dataset d(pts);
    const EvidenceIndex idx = EvidenceIndex::build(d, focal);
    double prev = 0.0;
    for (int i = 0; i <= 20; ++i) {
        const double a = i / 20.0;
        const double v = idx.query_cdf(a);
        CHECK(v >= prev - 1e-12);
        CHECK(v >= -1e-12);
        CHECK(v <= 1.0 + 1e-12);
        prev = v;
        // cross-check against the full-recursion indicator moment
        const double ind = moment(d, MomentSpec::indicator(a), focal);
        CHECK(v == doctest::Approx(ind).epsilon(1e-12));
    }
    CHECK_THROWS_AS(idx.query_cdf(1.5), std::domain_error);
}

TEST_CASE("height queries agree with the full evaluation") {
    const std::vector<double> pts = sample(RefDist::beta36, 30, 9);
    const Dataset d(pts);
    const EvidenceIndex idx = EvidenceIndex::build(d, focal);
    for (double x : {0.11, 0.5, pts[0], pts[7]}) {
        const ScalarOrDivergent walk = idx.query_height(x);
        const InferenceResult full = evaluate(d, x, focal);
        REQUIRE(walk.divergent == full.height_at_x->divergent);
        if (!walk.divergent)
            CHECK(walk.value ==
                  doctest::Approx(full.height_at_x->value).epsilon(1e-12));
    }
    // heavy group: expected height at the group point diverges
    const EvidenceIndex heavy = EvidenceIndex::build(Dataset({0.6, 0.6, 0.6}), focal);
    CHECK(heavy.query_height(0.6).divergent);
    CHECK(!heavy.query_height(0.2).divergent);
}

TEST_CASE("index construction rejects truncated mode") {
    EngineOptions opts;
    opts.truncate_depth = 5;
    CHECK_THROWS_AS(EvidenceIndex::build(Dataset({0.3}), focal, opts), error);
}

TEST_CASE("divergence class bookkeeping") {
    const EvidenceIndex idx =
        EvidenceIndex::build(Dataset({0.25, 0.25, 0.25, 0.25, 0.8}), focal);
    REQUIRE(idx.log_evidence().is_divergent());
    REQUIRE(idx.div_class().heavy.size() == 1);
    CHECK(idx.div_class().heavy[0].value == 0.25);
    CHECK(idx.div_class().heavy[0].multiplicity == 4);
}
