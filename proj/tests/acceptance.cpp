// Release gate: nine criteria, one verdict line each, nonzero exit when any
// fails. Runs offline against in-memory fixtures, bundled assets, and temp
// files; criteria with a pinned runtime budget enforce it with a wall clock.

#include <unistd.h>

#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <iterator>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "hag/baselines.h"
#include "hag/bench.h"
#include "hag/database.h"
#include "hag/embedder.h"
#include "hag/errors.h"
#include "hag/grounding.h"
#include "hag/http_backend.h"
#include "hag/metrics.h"
#include "hag/mock_backend.h"
#include "hag/persona.h"
#include "hag/provider.h"
#include "hag/schema.h"
#include "hag/tree.h"
#include "hag/util.h"

using namespace hag;

namespace {

struct CheckFailure {
    std::string message;
};

void require(bool ok, const std::string& message) {
    if (!ok) throw CheckFailure{message};
}

int g_failed = 0;

// Runs one criterion body, times it, and prints exactly one verdict line.
// budget_seconds == 0 means the criterion carries no runtime bound. The body
// returns a short note appended to a passing line.
void criterion(int number, const char* name, double budget_seconds,
               const std::function<std::string()>& body) {
    const auto start = std::chrono::steady_clock::now();
    std::string note;
    std::string failure;
    try {
        note = body();
    } catch (const CheckFailure& f) {
        failure = f.message;
    } catch (const std::exception& e) {
        failure = std::string("unexpected exception: ") + e.what();
    }
    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (failure.empty() && budget_seconds > 0.0 && elapsed > budget_seconds) {
        char over[64];
        std::snprintf(over, sizeof over, "exceeded the %.0fs budget", budget_seconds);
        failure = over;
    }
    if (failure.empty()) {
        std::printf("PASS  %d/9  %s (%.2fs)%s%s\n", number, name, elapsed,
                    note.empty() ? "" : "  ", note.c_str());
    } else {
        ++g_failed;
        std::printf("FAIL  %d/9  %s (%.2fs)  %s\n", number, name, elapsed, failure.c_str());
    }
    std::fflush(stdout);
}

const std::string& scratch_dir() {
    static const std::string dir = [] {
        std::string d = "/tmp/hag_acceptance_" + std::to_string(::getpid());
        std::filesystem::create_directories(d);
        return d;
    }();
    return dir;
}

// ---- planted two-dimension world -------------------------------------------
// Education drives income hard: the joint is far from the product of its
// marginals, so conditioned construction and flat products are separable by
// joint divergence alone. All numbers chosen so N = 1000 seat targets land on
// integers.

const char* kPlantedTopic = "night shift staffing";
const std::vector<std::string> kEdu = {"Primary", "Upper secondary", "Bachelor"};
const std::vector<double> kEduWeights = {0.2, 0.3, 0.5};
const std::vector<std::string> kIncome = {"Low", "Middle", "High"};
const double kIncomeGivenEdu[3][3] = {
    {0.95, 0.04, 0.01},
    {0.10, 0.80, 0.10},
    {0.01, 0.09, 0.90},
};

double true_joint(std::size_t e, std::size_t i) { return kEduWeights[e] * kIncomeGivenEdu[e][i]; }

// What a provider answers for income without conditioning context: the three
// education rows blended evenly, far from the true mixture (0.225/0.293/0.482).
std::vector<WeightedValue> flat_income_answer() {
    std::vector<WeightedValue> out;
    for (std::size_t i = 0; i < kIncome.size(); ++i) {
        double w = 0.0;
        for (std::size_t e = 0; e < kEdu.size(); ++e) w += kIncomeGivenEdu[e][i];
        out.push_back({kIncome[i], w / 3.0});
    }
    return out;
}

std::shared_ptr<MockChatBackend> planted_backend() {
    auto mock = std::make_shared<MockChatBackend>(17);
    mock->set_dim_sequence(kPlantedTopic, {"education", "income_level"});
    std::vector<WeightedValue> edu;
    for (std::size_t e = 0; e < kEdu.size(); ++e) edu.push_back({kEdu[e], kEduWeights[e]});
    mock->set_conditional(kPlantedTopic, "education", "", edu);
    for (std::size_t e = 0; e < kEdu.size(); ++e) {
        std::vector<WeightedValue> row;
        for (std::size_t i = 0; i < kIncome.size(); ++i)
            row.push_back({kIncome[i], kIncomeGivenEdu[e][i]});
        mock->set_conditional(kPlantedTopic, "income_level", "education=" + kEdu[e], row);
    }
    mock->set_conditional(kPlantedTopic, "income_level", "", flat_income_answer());
    return mock;
}

PersonaRecord planted_record(const std::string& education, const std::string& income,
                             const std::string& id) {
    PersonaRecord r;
    r.values = {{"country", "Brazil"},
                {"language", "Portuguese"},
                {"gender", "Female"},
                {"age", "25-34"},
                {"marital_status", "Single"},
                {"education", education},
                {"occupation", "Technician"},
                {"income_level", income},
                {"financial_status", "Just got by"},
                {"social_class", "Working class"},
                {"religion", "No religion"},
                {"ethnicity", "Mixed"}};
    r.source_id = id;
    return r;
}

PersonaDatabase planted_database(const std::size_t counts[3][3]) {
    std::vector<PersonaRecord> records;
    std::size_t k = 0;
    for (std::size_t e = 0; e < 3; ++e)
        for (std::size_t i = 0; i < 3; ++i)
            for (std::size_t j = 0; j < counts[e][i]; ++j)
                records.push_back(planted_record(kEdu[e], kIncome[i], "db" + std::to_string(k++)));
    return PersonaDatabase(std::move(records), default_schema());
}

const DistributionTree& planted_tree() {
    static const DistributionTree tree = [] {
        auto backend = planted_backend();
        WkmProvider provider(backend);
        return build_tree(kPlantedTopic, default_schema(), provider, ProviderParams{});
    }();
    return tree;
}

// Ground truth: a seeded multinomial sample from the true joint, so every
// comparison carries realistic sampling noise rather than exact masses.
const Population& planted_gt() {
    static const Population pop = [] {
        Population p;
        p.topic = kPlantedTopic;
        p.meta.generator = "planted-ground-truth";
        Rng rng(99);
        for (int n = 0; n < 2000; ++n) {
            const double r = rng.next_double();
            double acc = 0.0;
            std::size_t cell = 8;
            for (std::size_t c = 0; c < 9; ++c) {
                acc += true_joint(c / 3, c % 3);
                if (r < acc) {
                    cell = c;
                    break;
                }
            }
            p.members.push_back(
                planted_record(kEdu[cell / 3], kIncome[cell % 3], "gt" + std::to_string(n)));
        }
        return p;
    }();
    return pop;
}

const Population& planted_conditioned() {
    static const Population pop = [] {
        auto backend = planted_backend();
        WkmProvider provider(backend);
        PersonaDatabase empty_db;
        return instantiate(planted_tree(), empty_db, 2000, provider, 11, default_schema());
    }();
    return pop;
}

const Population& planted_product() {
    static const Population pop = [] {
        auto backend = planted_backend();
        WkmProvider provider(backend);
        PersonaDatabase empty_db;
        return hag_flat(provider, kPlantedTopic, 2000, default_schema(), empty_db, 11);
    }();
    return pop;
}

// Education mass reversed against the planted truth; income within each block
// follows the row from the opposite end, which leaves the income marginal
// untouched. Unconditioned sampling from this pool therefore errs on the
// education dimension alone.
PersonaDatabase skewed_database() {
    const std::size_t block[3] = {1500, 900, 600};
    std::vector<PersonaRecord> records;
    std::size_t k = 0;
    for (std::size_t e = 0; e < 3; ++e) {
        const double* row = kIncomeGivenEdu[2 - e];
        std::size_t placed = 0;
        for (std::size_t i = 0; i < 3; ++i) {
            const std::size_t count =
                i + 1 == 3 ? block[e] - placed
                           : static_cast<std::size_t>(std::llround(block[e] * row[i]));
            placed += count;
            for (std::size_t j = 0; j < count; ++j)
                records.push_back(planted_record(kEdu[e], kIncome[i], "sk" + std::to_string(k++)));
        }
    }
    return PersonaDatabase(std::move(records), default_schema());
}

// ---- independent metric oracles ---------------------------------------------

double entropy_bits(const std::map<std::string, double>& dist) {
    double h = 0.0;
    for (const auto& [label, v] : dist) {
        if (v > 0.0) h -= v * std::log2(v);
    }
    return h;
}

std::set<std::string> union_labels(const Distribution& p, const Distribution& q) {
    std::set<std::string> labels;
    for (const auto& [l, v] : p.entries) labels.insert(l);
    for (const auto& [l, v] : q.entries) labels.insert(l);
    return labels;
}

// Entropy formulation H(M) - (H(P) + H(Q)) / 2, a different decomposition
// than the divergence-sum form in the library.
double oracle_jsd(const Distribution& p, const Distribution& q) {
    std::map<std::string, double> pp, qq, mm;
    for (const auto& l : union_labels(p, q)) {
        pp[l] = p.probability(l);
        qq[l] = q.probability(l);
        mm[l] = 0.5 * (pp[l] + qq[l]);
    }
    double v = entropy_bits(mm) - 0.5 * (entropy_bits(pp) + entropy_bits(qq));
    if (v < 0.0) v = 0.0;
    if (v > 1.0) v = 1.0;
    return v;
}

double oracle_kl(const Distribution& p, const Distribution& q, double epsilon) {
    double denom = 0.0;
    const auto labels = union_labels(p, q);
    for (const auto& l : labels) denom += q.probability(l) + epsilon;
    double total = 0.0;
    for (const auto& l : labels) {
        const double pi = p.probability(l);
        if (pi > 0.0) total += pi * std::log2(pi * denom / (q.probability(l) + epsilon));
    }
    return total < 0.0 ? 0.0 : total;
}

// Distinct-pair mass: the chance two independent draws differ. Equals
// 1 - sum p^2 for a normalized distribution but is computed without the
// complement, so shared bugs with the library form are unlikely.
double oracle_diversity(const Distribution& p) {
    double cross = 0.0;
    for (auto a = p.entries.begin(); a != p.entries.end(); ++a)
        for (auto b = std::next(a); b != p.entries.end(); ++b)
            cross += 2.0 * a->second * b->second;
    return cross;
}

// ---- criteria ---------------------------------------------------------------

std::string check_sampling_grid() {
    const std::pair<std::size_t, std::size_t> grid[] = {
        {20, 20},   {30, 30},   {31, 30},    {100, 50},   {101, 50},
        {500, 81},  {501, 81},  {1000, 88},  {1001, 88},  {2000, 92},
    };
    for (const auto& [population, expected] : grid) {
        const std::size_t got = adaptive_sample_size(population);
        require(got == expected, "sample size for M=" + std::to_string(population) + " is " +
                                     std::to_string(got) + ", pinned " + std::to_string(expected));
    }
    require(sampling_plan(1000).sample == 88, "sampling plan disagrees with the direct call");
    return "[10 population sizes exact]";
}

std::string check_metric_oracles() {
    const std::vector<std::string> pool = {"L01", "L02", "L03", "L04", "L05", "L06",
                                           "L07", "L08", "L09", "L10", "L11", "L12"};
    Rng rng(20240819);
    auto draw = [&](std::size_t support) {
        std::vector<std::string> labels = pool;
        shuffle(labels, rng);
        labels.resize(support);
        std::vector<double> weights;
        double total = 0.0;
        for (std::size_t i = 0; i < support; ++i) {
            weights.push_back(rng.next_double() + 1e-3);
            total += weights.back();
        }
        Distribution d;
        d.dimension_id = "synthetic";
        for (std::size_t i = 0; i < support; ++i) d.entries[labels[i]] = weights[i] / total;
        return d;
    };

    for (int trial = 0; trial < 1000; ++trial) {
        const Distribution p = draw(1 + rng.next_index(8));
        const Distribution q = draw(1 + rng.next_index(8));
        const double epsilon = trial % 2 == 0 ? 1e-6 : 1e-4;

        const double lib_jsd = jsd(p, q);
        require(std::fabs(lib_jsd - oracle_jsd(p, q)) <= 1e-9,
                "jsd disagrees with the entropy oracle at trial " + std::to_string(trial));
        require(std::fabs(lib_jsd - jsd(q, p)) <= 1e-12,
                "jsd is asymmetric at trial " + std::to_string(trial));
        require(lib_jsd >= 0.0 && lib_jsd <= 1.0, "jsd out of [0,1]");
        require(jsd(p, p) <= 1e-12, "jsd of a distribution with itself is nonzero");

        require(std::fabs(kl(p, q, epsilon) - oracle_kl(p, q, epsilon)) <= 1e-9,
                "kl disagrees with the oracle at trial " + std::to_string(trial));
        require(std::fabs(gini_simpson(p) - oracle_diversity(p)) <= 1e-9,
                "diversity disagrees with the pair oracle at trial " + std::to_string(trial));
    }

    Distribution half;
    half.dimension_id = "pin";
    half.entries = {{"A", 0.5}, {"B", 0.5}};
    Distribution point;
    point.dimension_id = "pin";
    point.entries = {{"A", 1.0}};
    require(std::fabs(jsd(half, point) - 0.311278124459) <= 1e-9, "pinned jsd value drifted");
    require(std::fabs(kl(point, half) - 1.0) <= 1e-4, "pinned kl value drifted");
    Distribution seventy;
    seventy.dimension_id = "pin";
    seventy.entries = {{"A", 0.7}, {"B", 0.3}};
    require(std::fabs(gini_simpson(seventy) - 0.42) <= 1e-12, "pinned diversity value drifted");
    Distribution none;
    none.dimension_id = "pin";
    require(gini_simpson(none) == 0.0, "diversity of an empty distribution is not zero");
    return "[1000 random pairs within 1e-9, pinned values hold]";
}

std::string check_apportionment() {
    auto leaf = [](const std::string& key, double prob) {
        LeafPersona l;
        l.persona = PersonaVector({{"cell", key}});
        l.path_prob = prob;
        return l;
    };

    {
        const std::vector<LeafPersona> leaves = {leaf("a", 0.5), leaf("b", 0.5)};
        const auto counts = allocate_counts(leaves, 1);
        require(counts == std::vector<std::size_t>{1, 0}, "tied half/half seat did not go first");
    }
    {
        const std::vector<LeafPersona> leaves = {leaf("a", 0.4), leaf("b", 0.4), leaf("c", 0.2)};
        require(allocate_counts(leaves, 2) == (std::vector<std::size_t>{1, 1, 0}),
                "0.4/0.4/0.2 over two seats drifted");
    }
    {
        const std::vector<LeafPersona> leaves = {leaf("a", 0.25), leaf("b", 0.75)};
        require(allocate_counts(leaves, 1000) == (std::vector<std::size_t>{250, 750}),
                "exact quarters drifted");
    }
    {
        const std::vector<LeafPersona> leaves = {leaf("a", 1.0)};
        try {
            allocate_counts(leaves, 0);
            require(false, "zero seats did not throw");
        } catch (const HagError& e) {
            require(e.code() == Errc::InvalidSize, "zero seats threw the wrong code");
        }
    }

    Rng rng(7);
    for (int trial = 0; trial < 1000; ++trial) {
        const std::size_t k = 1 + rng.next_index(40);
        std::vector<double> weights;
        double total = 0.0;
        for (std::size_t i = 0; i < k; ++i) {
            weights.push_back(rng.next_double() + 1e-4);
            total += weights.back();
        }
        std::vector<LeafPersona> leaves;
        for (std::size_t i = 0; i < k; ++i) {
            char key[16];
            std::snprintf(key, sizeof key, "c%03zu", i);
            leaves.push_back(leaf(key, weights[i] / total));
        }
        const std::size_t N = 1 + rng.next_index(5000);
        const auto counts = allocate_counts(leaves, N);
        require(counts == allocate_counts(leaves, N),
                "apportionment not repeatable at trial " + std::to_string(trial));
        std::size_t sum = 0;
        for (std::size_t i = 0; i < k; ++i) {
            sum += counts[i];
            const double ideal = static_cast<double>(N) * leaves[i].path_prob;
            require(std::fabs(static_cast<double>(counts[i]) - ideal) < 1.0 + 1e-9,
                    "seat count strays beyond one from its quota at trial " +
                        std::to_string(trial));
        }
        require(sum == N, "seats do not sum to N at trial " + std::to_string(trial));
    }
    return "[3 pinned cases, 1000 random instances]";
}

std::string check_tree_invariants() {
    ProviderParams params;
    params.max_depth = 4;
    params.max_branches = 4;

    for (int i = 1; i <= 100; ++i) {
        auto mock = std::make_shared<MockChatBackend>(static_cast<std::uint64_t>(i));
        WkmProvider provider(mock);
        const DistributionTree tree =
            build_tree("synthetic topic " + std::to_string(i), default_schema(), provider, params);
        validate_tree(tree);
        require(tree.dim_sequence.size() <= 4, "dimension sequence exceeds the depth cap");

        const auto leaves = enumerate_leaves(tree);
        require(!leaves.empty(), "tree " + std::to_string(i) + " has no leaves");
        double mass = 0.0;
        for (const auto& l : leaves) {
            mass += l.path_prob;
            require(l.persona.size() == tree.dim_sequence.size(),
                    "leaf path shorter than the dimension sequence");
            const auto& path = l.persona.assignments();
            for (std::size_t d = 0; d < path.size(); ++d)
                require(path[d].dimension_id == tree.dim_sequence[d],
                        "leaf path order diverges from the dimension sequence");
        }
        require(std::fabs(mass - 1.0) <= 1e-6, "leaf mass off unity in tree " + std::to_string(i));

        const DistributionTree trimmed = prune(tree, 0.01);
        validate_tree(trimmed);
        double trimmed_mass = 0.0;
        for (const auto& l : enumerate_leaves(trimmed)) trimmed_mass += l.path_prob;
        require(std::fabs(trimmed_mass - 1.0) <= 1e-6, "pruned leaf mass off unity");
    }

    const std::string transcript = scratch_dir() + "/tree_transcript.jsonl";
    std::remove(transcript.c_str());
    auto inner = std::make_shared<MockChatBackend>(424242);
    auto taped = std::make_shared<TranscriptingBackend>(inner, transcript);
    WkmProvider live(taped);
    const DistributionTree first = build_tree("replayed topic", default_schema(), live, params);
    auto replay = std::make_shared<ReplayChatBackend>(transcript);
    WkmProvider replayed(replay);
    const DistributionTree second =
        build_tree("replayed topic", default_schema(), replayed, params);
    // The serving backend names itself in meta; everything else must match
    // byte for byte.
    auto strip = [](const DistributionTree& t) {
        nlohmann::json doc = serialize_tree(t);
        doc["meta"].erase("provider_fingerprint");
        return doc.dump(2);
    };
    require(strip(first) == strip(second), "transcript replay rebuilt a different tree");
    const auto replay_fp = serialize_tree(second)["meta"]["provider_fingerprint"];
    require(replay_fp.get<std::string>().rfind("replay:", 0) == 0,
            "replay run does not name the transcript as its source");
    return "[100 seeded hierarchies clean, replay rebuild byte-identical]";
}

std::string check_grounding() {
    const DimensionSchema& schema = default_schema();
    std::map<std::string, std::size_t> expected_target;
    for (std::size_t e = 0; e < 3; ++e)
        for (std::size_t i = 0; i < 3; ++i)
            expected_target["education=" + kEdu[e] + "|income_level=" + kIncome[i]] =
                static_cast<std::size_t>(std::llround(1000.0 * true_joint(e, i)));

    auto run = [&](const PersonaDatabase& db) {
        auto backend = planted_backend();
        WkmProvider provider(backend);
        return instantiate(planted_tree(), db, 1000, provider, 21, schema);
    };
    auto cell_of = [](const PersonaRecord& r) {
        return "education=" + r.label("education") + "|income_level=" + r.label("income_level");
    };

    {  // every leaf oversupplied: all seats filled from the pool
        std::size_t counts[3][3];
        for (auto& row : counts)
            for (auto& c : row) c = 600;
        const Population pop = run(planted_database(counts));
        require(pop.size() == 1000, "surplus population is not the requested size");
        const auto& report = pop.meta.extra.at("allocation");
        require(report.size() == 9, "surplus allocation report does not cover all leaves");
        std::set<std::string> drawn;
        for (const auto& entry : report) {
            const std::string key = entry.at("persona").get<std::string>();
            require(entry.at("target").get<std::size_t>() == expected_target.at(key),
                    "surplus target off for " + key);
            require(entry.at("tag") == "HIT", "oversupplied leaf not tagged HIT");
            require(entry.at("available").get<std::size_t>() == 600, "surplus availability off");
            require(entry.at("augment_gap").get<std::size_t>() == 0, "surplus leaf augmented");
            for (const auto& id : entry.at("sampled_ids"))
                require(drawn.insert(id.get<std::string>()).second, "record drawn twice");
        }
        require(drawn.size() == 1000, "surplus draw count off");
        for (const auto& m : pop.members)
            require(m.provenance == Provenance::Real, "surplus member not a pool record");
    }

    {  // empty pool: every seat synthesized on its leaf path
        const Population pop = run(PersonaDatabase{});
        require(pop.size() == 1000, "augmented population is not the requested size");
        std::map<std::string, std::size_t> tally;
        for (const auto& m : pop.members) {
            require(m.provenance == Provenance::Augmented, "member claims pool provenance");
            ++tally[cell_of(m)];
        }
        require(tally == expected_target, "augmented members stray from their leaf paths");
        for (const auto& entry : pop.meta.extra.at("allocation")) {
            require(entry.at("tag") == "MISS", "empty pool leaf tagged HIT");
            require(entry.at("available").get<std::size_t>() == 0, "phantom availability");
            require(entry.at("augment_gap") == entry.at("target"), "gap is not the full target");
        }
    }

    {  // one leaf short by 140: pool first, synthesis for the exact deficit
        std::size_t counts[3][3];
        for (auto& row : counts)
            for (auto& c : row) c = 600;
        counts[0][0] = 50;  // Primary/Low wants 190
        const Population pop = run(planted_database(counts));
        require(pop.size() == 1000, "mixed population is not the requested size");
        std::size_t real = 0;
        for (const auto& m : pop.members)
            if (m.provenance == Provenance::Real) ++real;
        require(real == 860, "mixed pool share off: " + std::to_string(real));
        for (const auto& entry : pop.meta.extra.at("allocation")) {
            const std::string key = entry.at("persona").get<std::string>();
            if (key == "education=Primary|income_level=Low") {
                require(entry.at("tag") == "MISS", "short leaf tagged HIT");
                require(entry.at("available").get<std::size_t>() == 50, "short supply misread");
                require(entry.at("sampled_ids").size() == 50, "short leaf under-drawn");
                require(entry.at("augment_gap").get<std::size_t>() == 140, "deficit off");
            } else {
                require(entry.at("tag") == "HIT", "supplied leaf tagged MISS");
                require(entry.at("augment_gap").get<std::size_t>() == 0, "supplied leaf padded");
            }
        }
    }
    return "[surplus, empty, and mixed pools reconcile exactly]";
}

std::string check_joint_fidelity() {
    const std::vector<std::string> dims = {"education", "income_level"};
    const Distribution truth = joint_distribution(planted_gt(), dims, default_schema());
    const double conditioned =
        jsd(joint_distribution(planted_conditioned(), dims, default_schema()), truth);
    const double product =
        jsd(joint_distribution(planted_product(), dims, default_schema()), truth);
    char note[96];
    std::snprintf(note, sizeof note, "[joint jsd: conditioned %.4f, product %.4f]", conditioned,
                  product);
    require(conditioned < 0.05,
            "conditioned joint strays from the truth: jsd " + std::to_string(conditioned));
    require(product > 0.15,
            "flat product fails to expose the correlation: jsd " + std::to_string(product));
    return note;
}

std::string check_fidelity_ranking() {
    std::vector<Dimension> pair = {default_schema().at("education"),
                                   default_schema().at("income_level")};
    const DimensionSchema planted_pair{std::move(pair)};
    const auto score = [&](const Population& pop) {
        return dist_fidelity(pop, planted_gt(), planted_pair, DivergenceMetric::Jsd).mean;
    };
    const double conditioned = score(planted_conditioned());
    const double product = score(planted_product());
    const double unconditioned = score(random_select(skewed_database(), 2000, 5));
    char note[96];
    std::snprintf(note, sizeof note, "[fidelity: %.4f < %.4f < %.4f]", conditioned, product,
                  unconditioned);
    require(conditioned < product, "conditioned construction does not beat the flat product");
    require(product < unconditioned, "flat product does not beat unconditioned sampling");
    return note;
}

std::string check_benchmark_gates() {
    {  // same corpus, same seed: byte-identical artifact
        const std::string corpus = std::string(HAG_ASSETS_DIR) + "/toy_corpus.jsonl";
        const std::string a = scratch_dir() + "/bench_a.json";
        const std::string b = scratch_dir() + "/bench_b.json";
        MockChatBackend first(3);
        build_benchmark(corpus, "gamedev", "indie game development", first).save(a);
        MockChatBackend second(3);
        const Population rebuilt =
            build_benchmark(corpus, "gamedev", "indie game development", second);
        rebuilt.save(b);
        require(rebuilt.size() == 60, "theme slice kept an unexpected user count");
        require(read_file(a) == read_file(b), "rebuilt benchmark differs byte for byte");
    }

    {  // length gate: fourteen tokens out, fifteen in
        auto words = [](int n) {
            std::string s;
            for (int i = 1; i <= n; ++i) s += (i == 1 ? "w" : " w") + std::to_string(i);
            return s;
        };
        const std::vector<CorpusPost> posts = {
            {"u1", "2024-01-01T00:00:00Z", words(14), "t"},
            {"u2", "2024-01-02T00:00:00Z", words(15), "t"},
        };
        FilterStats stats;
        const auto users = filter_corpus(posts, FilterPolicy{}, &stats);
        require(stats.posts_short == 1, "fourteen tokens were not counted short");
        require(users.size() == 1 && users[0].user_id == "u2",
                "the fifteen-token post did not survive alone");
    }

    {  // volume gate: forty-nine users refused, fifty accepted
        auto corpus_with = [&](std::size_t user_count) {
            std::string body;
            for (std::size_t u = 0; u < user_count; ++u) {
                nlohmann::json j{
                    {"user_id", "v" + std::to_string(100 + u)},
                    {"timestamp", "2024-02-01T00:00:00Z"},
                    {"text",
                     "every line here carries enough separate words to clear the fifteen token "
                     "threshold comfortably and cleanly"},
                    {"theme", "t"}};
                body += j.dump() + "\n";
            }
            const std::string path =
                scratch_dir() + "/volume" + std::to_string(user_count) + ".jsonl";
            write_file(path, body);
            return path;
        };
        MockChatBackend backend(4);
        try {
            build_benchmark(corpus_with(49), "t", "volume probe", backend);
            require(false, "forty-nine users slipped past the volume gate");
        } catch (const HagError& e) {
            require(e.code() == Errc::InsufficientVolume, "volume refusal carries the wrong code");
            require(std::string(e.what()).find("49 users") != std::string::npos,
                    "volume refusal counted the wrong survivors: " + std::string(e.what()));
        }
        const Population forced =
            build_benchmark(corpus_with(49), "t", "volume probe", backend, FilterPolicy{}, true);
        require(forced.size() == 49, "forced build lost users");
        const Population fifty = build_benchmark(corpus_with(50), "t", "volume probe", backend);
        require(fifty.size() == 50, "fifty users did not pass the volume gate");
    }
    return "[byte-identical rebuild, token and volume edges exact]";
}

std::string check_offline() {
    require(std::getenv("HAG_OFFLINE") != nullptr, "offline guard is not set");
    require(offline_mode(), "offline guard not honored by the backend layer");

    HttpBackendConfig config;
    config.base_url = "http://127.0.0.1:9";
    config.api_key = "unused";
    HttpChatBackend chat(config);
    ChatRequest request;
    request.kind = RequestKind::PrioritizeDims;
    request.prompt = "noop";
    request.topic = "noop";
    try {
        chat.complete(request);
        require(false, "http chat ran despite the offline guard");
    } catch (const HagError& e) {
        require(e.code() == Errc::ProviderUnreachable, "chat refusal carries the wrong code");
    }

    HttpEmbedder embedder("http://127.0.0.1:9", "unused", "m", 8);
    try {
        embedder.embed({"probe"});
        require(false, "http embedder ran despite the offline guard");
    } catch (const HagError& e) {
        require(e.code() == Errc::EmbedderUnreachable, "embed refusal carries the wrong code");
    }
    return "[network backends refuse while the guard is set]";
}

}  // namespace

int main() {
    ::setenv("HAG_OFFLINE", "1", 1);
    std::printf("release gate: 9 criteria\n");

    criterion(1, "adaptive judge-sample sizes match the pinned grid", 1.0, check_sampling_grid);
    criterion(2, "divergence and diversity metrics agree with independent oracles", 10.0,
              check_metric_oracles);
    criterion(3, "seat apportionment is exact, proportional, and repeatable", 0.0,
              check_apportionment);
    criterion(4, "hierarchy construction holds invariants and replays byte-identically", 0.0,
              check_tree_invariants);
    criterion(5, "grounding reconciles seats, pool supply, and synthesis", 0.0, check_grounding);
    criterion(6, "conditioned joints track the truth and flat products do not", 30.0,
              check_joint_fidelity);
    criterion(7, "fidelity ranks conditioned over flat over unconditioned", 0.0,
              check_fidelity_ranking);
    criterion(8, "benchmark builds are deterministic with exact volume and length gates", 0.0,
              check_benchmark_gates);
    criterion(9, "the whole gate runs with networking refused", 0.0, check_offline);

    std::error_code ec;
    std::filesystem::remove_all(scratch_dir(), ec);

    if (g_failed == 0) {
        std::printf("result: 9/9 criteria passed\n");
        return 0;
    }
    std::printf("result: %d/9 criteria failed\n", g_failed);
    return 1;
}
