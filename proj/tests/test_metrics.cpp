#include <doctest.h>

#include <cmath>

#include "hag/errors.h"
#include "hag/metrics.h"

using namespace hag;

namespace {

Distribution dist(const std::string& dim, std::map<std::string, double> entries) {
    return Distribution{dim, std::move(entries)};
}

PersonaRecord record_with(const std::string& gender, const std::string& age) {
    PersonaRecord r;
    r.values = {{"country", "India"},
                {"language", "Hindi"},
                {"gender", gender},
                {"age", age},
                {"marital_status", "Single"},
                {"education", "Bachelor"},
                {"occupation", "Clerk"},
                {"income_level", "Middle"},
                {"financial_status", "Just got by"},
                {"social_class", "Working class"},
                {"religion", "Hindu"},
                {"ethnicity", "Asian"}};
    return r;
}

}  // namespace

TEST_CASE("jsd matches the worked example and is a bounded symmetric metric") {
    Distribution p = dist("gender", {{"Male", 0.5}, {"Female", 0.5}});
    Distribution q = dist("gender", {{"Male", 1.0}});
    // H(0.75,0.25) - (1 + 0) / 2
    CHECK(jsd(p, q) == doctest::Approx(0.311278124459).epsilon(1e-9));
    CHECK(jsd(q, p) == doctest::Approx(jsd(p, q)).epsilon(1e-12));
    CHECK(jsd(p, p) == doctest::Approx(0.0));

    // disjoint supports hit the upper bound
    Distribution a = dist("gender", {{"Male", 1.0}});
    Distribution b = dist("gender", {{"Female", 1.0}});
    CHECK(jsd(a, b) == doctest::Approx(1.0));
}

TEST_CASE("jsd requires matching dimensions and non-empty inputs") {
    Distribution p = dist("gender", {{"Male", 1.0}});
    Distribution q = dist("age", {{"65+", 1.0}});
    CHECK_THROWS_AS(jsd(p, q), HagError);
    Distribution empty = dist("gender", {});
    CHECK_THROWS_AS(jsd(p, empty), HagError);
}

TEST_CASE("kl matches the worked example with mild smoothing distortion") {
    Distribution p = dist("gender", {{"Male", 1.0}});
    Distribution q = dist("gender", {{"Male", 0.5}, {"Female", 0.5}});
    // exact answer 1 bit; epsilon smoothing perturbs ~1e-6
    CHECK(kl(p, q) == doctest::Approx(1.0).epsilon(1e-5));
    CHECK(kl(q, q) == doctest::Approx(0.0).epsilon(1e-5));
}

TEST_CASE("kl stays finite when q misses support p has") {
    Distribution p = dist("gender", {{"Male", 0.5}, {"Female", 0.5}});
    Distribution q = dist("gender", {{"Male", 1.0}});
    double v = kl(p, q);
    CHECK(std::isfinite(v));
    CHECK(v > 5.0);  // log2(0.5 / ~1e-6) / 2 is large but bounded
    CHECK(kl(p, q, 1e-3) < v);  // heavier smoothing shrinks it
    CHECK_THROWS_AS(kl(p, q, 0.0), HagError);
    CHECK_THROWS_AS(kl(p, q, -1.0), HagError);
}

TEST_CASE("kl is asymmetric") {
    Distribution p = dist("x", {{"a", 0.8}, {"b", 0.2}});
    Distribution q = dist("x", {{"a", 0.5}, {"b", 0.5}});
    CHECK(kl(p, q) != doctest::Approx(kl(q, p)));
}

TEST_CASE("gini_simpson matches the worked example") {
    CHECK(gini_simpson(dist("x", {{"a", 0.7}, {"b", 0.3}})) == doctest::Approx(0.42));
    CHECK(gini_simpson(dist("x", {{"a", 1.0}})) == doctest::Approx(0.0));
    CHECK(gini_simpson(dist("x", {})) == 0.0);
    // uniform over k labels: 1 - 1/k
    CHECK(gini_simpson(dist("x", {{"a", 0.25}, {"b", 0.25}, {"c", 0.25}, {"d", 0.25}})) ==
          doctest::Approx(0.75));
}

TEST_CASE("dist_fidelity averages per-dimension divergences and lists exclusions") {
    Population gen, gt;
    for (int i = 0; i < 4; ++i) {
        gen.members.push_back(record_with(i < 2 ? "Male" : "Female", "25-34"));
        gt.members.push_back(record_with(i < 3 ? "Male" : "Female", "25-34"));
    }
    // religion entirely unknown on the generated side -> excluded
    for (auto& r : gen.members) r.values["religion"] = kUnknownLabel;

    FidelityResult f = dist_fidelity(gen, gt, default_schema(), DivergenceMetric::Jsd);
    CHECK(f.per_dimension.count("gender") == 1);
    CHECK(f.per_dimension.count("religion") == 0);
    CHECK(std::find(f.excluded.begin(), f.excluded.end(), "religion") != f.excluded.end());
    CHECK(f.per_dimension.at("age") == doctest::Approx(0.0));
    CHECK(f.per_dimension.at("gender") > 0.0);

    double sum = 0;
    for (const auto& [dim, v] : f.per_dimension) sum += v;
    CHECK(f.mean == doctest::Approx(sum / f.per_dimension.size()));

    FidelityResult k = dist_fidelity(gen, gt, default_schema(), DivergenceMetric::Kl);
    CHECK(k.per_dimension.at("gender") > 0.0);
}

TEST_CASE("dist_fidelity rejects empty populations and all-excluded schemas") {
    Population empty, gt;
    gt.members.push_back(record_with("Male", "25-34"));
    CHECK_THROWS_AS(dist_fidelity(empty, gt, default_schema(), DivergenceMetric::Jsd), HagError);

    Population unknowns;
    PersonaRecord r = record_with("Male", "25-34");
    for (auto& [k, v] : r.values) v = kUnknownLabel;
    unknowns.members.push_back(r);
    try {
        dist_fidelity(unknowns, gt, default_schema(), DivergenceMetric::Jsd);
        FAIL("expected NoEvaluableDimensions");
    } catch (const HagError& e) {
        CHECK(e.code() == Errc::NoEvaluableDimensions);
    }
}

TEST_CASE("diversity_error is the mean absolute Gini-Simpson gap") {
    Population gen, gt;
    // gen gender 50/50 (GS 0.5), gt all Male (GS 0); other dims identical
    gen.members.push_back(record_with("Male", "25-34"));
    gen.members.push_back(record_with("Female", "25-34"));
    gt.members.push_back(record_with("Male", "25-34"));
    gt.members.push_back(record_with("Male", "25-34"));

    DiversityResult d = diversity_error(gen, gt, default_schema());
    CHECK(d.gs_gen.at("gender") == doctest::Approx(0.5));
    CHECK(d.gs_gt.at("gender") == doctest::Approx(0.0));
    CHECK(d.mean == doctest::Approx(0.5 / 12.0));  // only gender differs
}

TEST_CASE("joint_distribution multiplies out path keys and skips unknowns") {
    Population pop;
    pop.members.push_back(record_with("Male", "25-34"));
    pop.members.push_back(record_with("Male", "65+"));
    pop.members.push_back(record_with("Female", "65+"));
    pop.members.push_back(record_with("Female", kUnknownLabel));  // skipped

    Distribution joint = joint_distribution(pop, {"gender", "age"}, default_schema());
    CHECK(joint.dimension_id == "joint:gender:age");
    CHECK(joint.probability("gender=Male|age=25-34") == doctest::Approx(1.0 / 3.0));
    CHECK(joint.probability("gender=Male|age=65+") == doctest::Approx(1.0 / 3.0));
    CHECK(joint.probability("gender=Female|age=65+") == doctest::Approx(1.0 / 3.0));
    joint.validate();
}

TEST_CASE("adaptive sample sizes reproduce the published grid") {
    const std::vector<std::pair<std::size_t, std::size_t>> grid{
        {20, 20},   {30, 30},   {31, 30},  {100, 50},  {101, 50},
        {500, 81},  {501, 81},  {1000, 88}, {1001, 88}, {2000, 92}};
    for (const auto& [M, n] : grid) CHECK(adaptive_sample_size(M) == n);
}

TEST_CASE("adaptive sample size grows monotonically and respects bounds") {
    std::size_t prev = 0;
    for (std::size_t M : {1, 5, 29, 30, 50, 200, 800, 5000, 100000}) {
        std::size_t n = adaptive_sample_size(M);
        CHECK(n <= M);
        CHECK(n >= std::min<std::size_t>(M, 30));
        CHECK(n >= prev * 0 + (M >= 31 ? 30 : M));  // floor after the cap
        prev = n;
    }
    // asymptote: n0 = 96.04 -> never beyond 97
    CHECK(adaptive_sample_size(100000000) <= 97);
    CHECK_THROWS_AS(adaptive_sample_size(0), HagError);
    CHECK_THROWS_AS(adaptive_sample_size(100, 1.96, 1.0, 0.0), HagError);
}

TEST_CASE("sampling_plan echoes its inputs") {
    SamplingPlan plan = sampling_plan(1000);
    CHECK(plan.population == 1000);
    CHECK(plan.sample == 88);
    CHECK(plan.z == doctest::Approx(1.96));
    CHECK(plan.error == doctest::Approx(0.2));
}
