#include <doctest.h>

#include "mmm/context_tree.hpp"
#include "mmm/experiments.hpp"
#include "mmm/simulator.hpp"

using namespace mmm;

TEST_CASE("partition error") {
    Partition a(2, 2, {0, 1, 0, 1});
    Partition relabeled(2, 2, {1, 0, 1, 0});
    CHECK_FALSE(partition_error(a, relabeled));
    CHECK(partition_error(Partition::singleton(2, 2), Partition::one_cell(2, 2)));
    // A refinement of the truth is still an error.
    CHECK(partition_error(Partition(2, 2, {0, 1, 2, 1}), a));
    CHECK_THROWS_AS(partition_error(a, Partition::one_cell(2, 3)), std::invalid_argument);
}

TEST_CASE("method names") {
    for (auto m : {Method::kSweep, Method::kRelation, Method::kGreedy, Method::kDendrogram,
                   Method::kExhaustive}) {
        CHECK(parse_method(method_name(m)) == m);
    }
    CHECK_THROWS_AS(parse_method("kmeans"), std::invalid_argument);
    CHECK_THROWS_AS(preset_model("nope"), std::invalid_argument);
}

TEST_CASE("single replication is deterministic") {
    ExperimentSpec spec;
    spec.sizes = {3000};
    spec.replications = 1;
    spec.base_seed = 77;
    auto a = run_experiment(spec);
    auto b = run_experiment(spec);
    REQUIRE(a.sizes.size() == 1);
    CHECK(a.sizes[0].error == b.sizes[0].error);
    CHECK(a.sizes[0].seeds == std::vector<std::uint64_t>{77});
}

TEST_CASE("reports are reproducible and thread-count independent") {
    auto spec = table1_spec(12, 5);
    spec.sizes = {2000, 4000};
    spec.threads = 1;
    auto one = run_experiment(spec);
    spec.threads = 3;
    auto three = run_experiment(spec);
    CHECK(report_to_csv(one) == report_to_csv(three));
    CHECK(report_to_json(spec, one).dump() == report_to_json(spec, three).dump());

    for (const auto& s : one.sizes) {
        std::size_t errs = 0;
        for (bool e : s.error) errs += e;
        CHECK(errs == s.errors);
        CHECK(s.proportion == double(errs) / double(s.replications));
    }
    // Seeds are distinct across the whole report.
    CHECK(one.sizes[0].seeds[0] != one.sizes[1].seeds[0]);
}

TEST_CASE("spec json round trip") {
    auto spec = table2_spec(30, 123);
    spec.sizes = {5000};
    spec.penalty = 0.75;
    auto back = spec_from_json(spec_to_json(spec));
    CHECK(spec_to_json(back) == spec_to_json(spec));

    auto custom = spec;
    custom.initial = InitialKind::kCustom;
    custom.custom_initial = tree_to_partition(example_tree(), 3);
    custom.method = Method::kDendrogram;
    custom.cut.kind = DendrogramCut::Kind::kMaxCells;
    custom.cut.max_cells = 5;
    auto back2 = spec_from_json(spec_to_json(custom));
    CHECK(*back2.custom_initial == *custom.custom_initial);
    CHECK(back2.cut.max_cells == 5);

    CHECK_THROWS_AS(spec_from_json({{"initial", "random"}}), std::invalid_argument);
    CHECK_THROWS_AS(spec_from_json({{"replications", 0}}), std::invalid_argument);
}

TEST_CASE("bad sizes are rejected") {
    ExperimentSpec spec;
    spec.sizes = {3};
    CHECK_THROWS_AS(run_experiment(spec), std::invalid_argument);
    spec.sizes = {100};
    spec.replications = 0;
    CHECK_THROWS_AS(run_experiment(spec), std::invalid_argument);
}

TEST_CASE("csv layout") {
    ErrorReport r;
    SizeResult s;
    s.sample_length = 4000;
    s.replications = 4;
    s.errors = 1;
    s.proportion = 0.25;
    r.sizes.push_back(s);
    CHECK(report_to_csv(r) == "size,replications,errors,proportion\n4000,4,1,0.25\n");
}
