#include <doctest.h>

#include <memory>
#include <set>

#include "hag/baselines.h"
#include "hag/errors.h"
#include "hag/mock_backend.h"
#include "hag/tree.h"

using namespace hag;

namespace {

PersonaRecord stock_record(int i) {
    static const char* genders[] = {"Male", "Female"};
    static const char* ages[] = {"18-24", "25-34", "45-54", "65+"};
    static const char* religions[] = {"No religion", "Muslim", "Hindu"};
    PersonaRecord r;
    r.values = {{"country", "India"},
                {"language", "Hindi"},
                {"gender", genders[i % 2]},
                {"age", ages[i % 4]},
                {"marital_status", "Single"},
                {"education", "Bachelor"},
                {"occupation", i % 3 == 0 ? "Farmer" : "Teacher"},
                {"income_level", "Middle"},
                {"financial_status", "Just got by"},
                {"social_class", "Working class"},
                {"religion", religions[i % 3]},
                {"ethnicity", "Asian"}};
    r.source_id = "b" + std::to_string(i);
    return r;
}

PersonaDatabase stock_db(int n) {
    std::vector<PersonaRecord> records;
    for (int i = 0; i < n; ++i) records.push_back(stock_record(i));
    return PersonaDatabase(std::move(records), default_schema());
}

}  // namespace

TEST_CASE("method names round-trip and reject strangers") {
    for (Method m : {Method::RandomSelect, Method::TopicRetrieval, Method::LlmGenerate,
                     Method::HagFlat, Method::Hag})
        CHECK(method_from_name(method_name(m)) == m);
    CHECK(method_from_name("HAG") == Method::Hag);
    CHECK_THROWS_AS(method_from_name("astrology"), HagError);
}

TEST_CASE("random_select without replacement when supply suffices") {
    PersonaDatabase db = stock_db(50);
    Population pop = random_select(db, 20, 3);
    CHECK(pop.size() == 20);
    CHECK(pop.meta.generator == "random_select");
    CHECK(pop.meta.extra["with_replacement"] == false);
    std::set<std::string> ids;
    for (const auto& r : pop.members) {
        ids.insert(*r.source_id);
        CHECK(r.provenance == Provenance::Real);
    }
    CHECK(ids.size() == 20);

    Population again = random_select(db, 20, 3);
    CHECK(again.to_json() == pop.to_json());
    Population other = random_select(db, 20, 4);
    CHECK(other.to_json() != pop.to_json());
}

TEST_CASE("random_select falls back to replacement on a short database") {
    PersonaDatabase db = stock_db(5);
    Population pop = random_select(db, 12, 1);
    CHECK(pop.size() == 12);
    CHECK(pop.meta.extra["with_replacement"] == true);

    CHECK_THROWS_AS(random_select(PersonaDatabase{}, 5, 0), HagError);
    CHECK_THROWS_AS(random_select(db, 0, 0), HagError);
}

TEST_CASE("topic_retrieval ranks by similarity to the topic text") {
    std::vector<PersonaRecord> records;
    for (int i = 0; i < 8; ++i) {
        PersonaRecord r = stock_record(i);
        r.free_text = i < 3 ? "organic farming crops harvest soil irrigation"
                            : "urban nightlife concerts clubs city entertainment";
        records.push_back(r);
    }
    PersonaDatabase db(std::move(records), default_schema());
    HashEmbedder embedder(64);
    Population pop = topic_retrieval(db, "organic farming crops soil", 3, embedder);
    CHECK(pop.size() == 3);
    CHECK(pop.meta.generator == "topic_retrieval");
    for (const auto& r : pop.members) {
        CHECK(r.free_text->find("farming") != std::string::npos);
    }
    // similarity report is sorted descending
    const auto& sim = pop.meta.extra["similarity"];
    REQUIRE(sim.size() == 3);
    CHECK(sim[0]["similarity"].get<double>() >= sim[2]["similarity"].get<double>());
}

TEST_CASE("topic_retrieval needs enough records") {
    PersonaDatabase db = stock_db(3);
    HashEmbedder embedder(32);
    CHECK_THROWS_AS(topic_retrieval(db, "anything", 10, embedder), HagError);
    CHECK_THROWS_AS(topic_retrieval(db, "anything", 0, embedder), HagError);
}

TEST_CASE("llm_generate accumulates exactly N valid records") {
    auto backend = std::make_shared<MockChatBackend>(7);
    WkmProvider provider(backend);
    Population pop = llm_generate(provider, "amateur astronomy", 23, default_schema());
    CHECK(pop.size() == 23);
    CHECK(pop.meta.generator == "llm_generate");
    for (const auto& r : pop.members) {
        CHECK(validate_record(r, default_schema()).empty());
        CHECK(r.provenance == Provenance::Augmented);
    }
    CHECK(backend->calls(RequestKind::PersonaBatch) >= 3);  // ceil(23/10)
}

TEST_CASE("llm_generate stops when the call budget runs out") {
    auto backend = std::make_shared<MockChatBackend>(8);
    // every batch comes back empty of valid personas
    backend->set_override(RequestKind::PersonaBatch, "", R"({"personas": []})");
    WkmProvider provider(backend);
    try {
        llm_generate(provider, "x", 10, default_schema());
        FAIL("expected GenerationBudgetExceeded");
    } catch (const HagError& e) {
        CHECK(e.code() == Errc::GenerationBudgetExceeded);
    }
}

TEST_CASE("flat trees are exact outer products of their marginals") {
    auto backend = std::make_shared<MockChatBackend>(9);
    backend->set_dim_sequence("handicrafts", {"gender", "age"});
    backend->set_conditional("handicrafts", "gender", "", {{"Male", 0.3}, {"Female", 0.7}});
    backend->set_conditional("handicrafts", "age", "", {{"18-24", 0.4}, {"65+", 0.6}});
    WkmProvider provider(backend);
    ProviderParams params;
    params.max_depth = 2;
    DistributionTree tree = build_flat_tree(provider, "handicrafts", default_schema(), params);
    validate_tree(tree);
    CHECK(tree.meta["flat"] == true);
    // exactly one conditional call per dimension, regardless of branching
    CHECK(backend->calls(RequestKind::InferConditional) == 2);

    auto leaves = enumerate_leaves(tree);
    REQUIRE(leaves.size() == 4);
    std::map<std::string, double> probs;
    for (const auto& leaf : leaves) probs[leaf.persona.key()] = leaf.path_prob;
    CHECK(probs["gender=Male|age=18-24"] == doctest::Approx(0.12));
    CHECK(probs["gender=Male|age=65+"] == doctest::Approx(0.18));
    CHECK(probs["gender=Female|age=18-24"] == doctest::Approx(0.28));
    CHECK(probs["gender=Female|age=65+"] == doctest::Approx(0.42));
}

TEST_CASE("hag_flat grounds the product tree through the shared path") {
    PersonaDatabase db = stock_db(60);
    auto backend = std::make_shared<MockChatBackend>(10);
    WkmProvider provider(backend);
    ProviderParams params;
    params.max_depth = 3;
    Population pop = hag_flat(provider, "street markets", 30, default_schema(), db, 2, params);
    CHECK(pop.size() == 30);
    CHECK(pop.meta.generator == "hag_flat");
    CHECK(pop.meta.extra.contains("allocation"));
    for (const auto& r : pop.members) CHECK(validate_record(r, default_schema()).empty());
}

TEST_CASE("cosine similarity is 1 for identical unit vectors and 0 on zeros") {
    HashEmbedder embedder(32);
    auto vecs = embedder.embed({"apples and oranges", "apples and oranges", "quantum flux"});
    CHECK(cosine_similarity(vecs[0], vecs[1]) == doctest::Approx(1.0));
    CHECK(cosine_similarity(vecs[0], vecs[2]) < 0.9);
    std::vector<double> zero(32, 0.0);
    CHECK(cosine_similarity(vecs[0], zero) == 0.0);
    std::vector<double> shorter(16, 0.1);
    CHECK_THROWS_AS(cosine_similarity(vecs[0], shorter), HagError);
}

TEST_CASE("hash embeddings are unit-norm, deterministic and dimension-stable") {
    HashEmbedder a(64), b(64);
    auto va = a.embed({"a quick brown fox"});
    auto vb = b.embed({"a quick brown fox"});
    CHECK(va == vb);
    REQUIRE(va[0].size() == 64);
    double norm = 0;
    for (double x : va[0]) norm += x * x;
    CHECK(norm == doctest::Approx(1.0));
    CHECK(a.fingerprint() == b.fingerprint());
}
