#include <doctest.h>

#include <cmath>
#include <random>

#include "mmm/counts.hpp"
#include "mmm/model.hpp"
#include "mmm/partition.hpp"
#include "mmm/selection.hpp"
#include "mmm/simulator.hpp"
#include "oracles.hpp"

using namespace mmm;

namespace {

CountTable table_from_rows(std::size_t alpha, int order, std::size_t n,
                           const std::vector<std::vector<Count>>& rows) {
    std::vector<Count> flat;
    for (const auto& r : rows) flat.insert(flat.end(), r.begin(), r.end());
    return CountTable(alpha, order, n, flat);
}

Partition example1_partition() {
    // 000 100 010 110 | 001 101 | 011 | 111
    return Partition::from_cells(2, 3, {{0, 4, 2, 6}, {1, 5}, {3}, {7}});
}

}  // namespace

TEST_CASE("partition construction") {
    CHECK_THROWS_AS(Partition(2, 1, {0, 2}), std::invalid_argument);
    CHECK_THROWS_AS(Partition::from_cells(2, 1, {{0}}), std::invalid_argument);
    CHECK_THROWS_AS(Partition::from_cells(2, 1, {{0, 1}, {1}}), std::invalid_argument);
    auto p = example1_partition();
    CHECK(p.num_cells() == 4);
    CHECK(p.cell_of(6) == 0);
    CHECK(p.cell_of(5) == 1);
}

TEST_CASE("partition equality ignores labels") {
    Partition a(2, 2, {0, 1, 0, 1});
    Partition b(2, 2, {1, 0, 1, 0});
    Partition c(2, 2, {0, 1, 1, 0});
    CHECK(a == b);
    CHECK_FALSE(a == c);
    CHECK(a.canonical_labels() == b.canonical_labels());
    CHECK(Partition::singleton(2, 2).refines(a));
    CHECK(a.refines(Partition::one_cell(2, 2)));
    CHECK_FALSE(a.refines(c));
}

TEST_CASE("aggregation") {
    std::mt19937_64 rng(3);
    auto x = oracle::random_sequence(rng, 400, 2);
    auto counts = count_transitions(x, 2, 3);

    auto single = aggregate(counts, Partition::singleton(2, 3));
    for (StateId s = 0; s < 8; ++s) {
        CHECK(single.cell_total[s] == counts.state_total(s));
        for (Symbol a = 0; a < 2; ++a) CHECK(single.row(s)[a] == counts.pair(s, a));
    }

    auto one = aggregate(counts, Partition::one_cell(2, 3));
    CHECK(one.num_cells == 1);
    CHECK(one.cell_total[0] == 400 - 3);

    auto p = example1_partition();
    auto cc = aggregate(counts, p);
    const auto cells = p.cells();
    for (CellId c = 0; c < cells.size(); ++c) {
        for (Symbol a = 0; a < 2; ++a) {
            Count sum = 0;
            for (auto s : cells[c]) sum += counts.pair(s, a);
            CHECK(cc.row(c)[a] == sum);
        }
    }

    auto other = count_transitions(x, 2, 2);
    CHECK_THROWS_AS(aggregate(other, p), std::invalid_argument);
}

TEST_CASE("empirical conditional") {
    auto t = table_from_rows(2, 1, 10, {{3, 1}, {5, 0}});
    auto cc = aggregate(t, Partition::singleton(2, 1));
    auto p0 = empirical_conditional(cc, 0);
    CHECK(p0[0] == doctest::Approx(0.75));
    CHECK(p0[1] == doctest::Approx(0.25));
    auto p1 = empirical_conditional(cc, 1);
    CHECK(p1[0] == 1.0);
    CHECK(p1[1] == 0.0);

    auto empty = table_from_rows(2, 1, 4, {{3, 0}, {0, 0}});
    CHECK_THROWS_AS(empirical_conditional(aggregate(empty, Partition::singleton(2, 1)), 1),
                    std::domain_error);
}

TEST_CASE("conditional distribution validation") {
    CHECK_THROWS_AS(ConditionalDistribution({0.5, 0.6}), std::invalid_argument);
    CHECK_THROWS_AS(ConditionalDistribution({-0.1, 1.1}), std::invalid_argument);
    ConditionalDistribution ok({0.25, 0.75});
    CHECK(ok[1] == 0.75);
}

TEST_CASE("log_ml values") {
    auto t = table_from_rows(2, 1, 5, {{2, 2}, {0, 0}});
    auto cc = aggregate(t, Partition::singleton(2, 1));
    CHECK(log_ml(cc) == doctest::Approx(4 * std::log(0.5)).epsilon(1e-12));
    CHECK(log_ml(cc) == doctest::Approx(-2.7726).epsilon(1e-4));

    std::vector<Symbol> constant(50, 1);
    auto ct = count_transitions(constant, 2, 2);
    CHECK(log_ml(aggregate(ct, Partition::singleton(2, 2))) == 0.0);
    CHECK(log_ml(aggregate(ct, Partition::one_cell(2, 2))) == 0.0);
}

TEST_CASE("log_ml against direct formula and refinement monotonicity") {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 50; ++trial) {
        const std::size_t alpha = 2 + rng() % 2;
        auto x = oracle::random_sequence(rng, 300, alpha);
        auto counts = count_transitions(x, alpha, 2);
        const auto k = counts.num_states();
        std::vector<CellId> labels(k);
        const CellId cells = 1 + static_cast<CellId>(rng() % k);
        for (std::size_t s = 0; s < k; ++s) labels[s] = s < cells ? CellId(s) : CellId(rng() % cells);
        Partition p(alpha, 2, labels);

        std::vector<std::vector<double>> rows(cells, std::vector<double>(alpha, 0.0));
        for (std::size_t s = 0; s < k; ++s)
            for (Symbol a = 0; a < alpha; ++a) rows[labels[s]][a] += double(counts.pair(s, a));
        const double coarse = log_ml(aggregate(counts, p));
        CHECK(coarse == doctest::Approx(oracle::log_likelihood(rows)).epsilon(1e-12));
        CHECK(coarse <= 0.0);
        CHECK(log_ml(aggregate(counts, Partition::singleton(alpha, 2))) >= coarse - 1e-9);
    }
}

TEST_CASE("bic of a constant sequence") {
    std::vector<Symbol> x(100, 0);
    auto counts = count_transitions(x, 2, 1);
    auto cc = aggregate(counts, Partition::one_cell(2, 1));
    CHECK(bic(cc, 100, default_penalty(2)) == doctest::Approx(-0.5 * std::log(100.0)));
    CHECK(bic(cc, 100, 0.5) == doctest::Approx(-2.3026).epsilon(1e-4));
    CHECK_THROWS_AS(bic(cc, 100, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(bic(cc, 100, -1.0), std::invalid_argument);
}

TEST_CASE("kl divergence") {
    ConditionalDistribution p({0.5, 0.5});
    ConditionalDistribution q({0.25, 0.75});
    CHECK(kl_divergence(p, p) == 0.0);
    CHECK(kl_divergence(p, q) == doctest::Approx(0.5 * std::log(2.0) + 0.5 * std::log(2.0 / 3.0)));
    CHECK(kl_divergence(p, q) == doctest::Approx(0.14384).epsilon(1e-4));
    ConditionalDistribution point({1.0, 0.0});
    CHECK(kl_divergence(point, p) == doctest::Approx(std::log(2.0)));
    CHECK(std::isinf(kl_divergence(p, point)));
}

TEST_CASE("kl divergence is nonnegative") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int trial = 0; trial < 500; ++trial) {
        const std::size_t k = 2 + rng() % 4;
        std::vector<double> a(k), b(k);
        double sa = 0, sb = 0;
        for (std::size_t i = 0; i < k; ++i) {
            a[i] = u(rng);
            b[i] = u(rng) + 1e-3;
            sa += a[i];
            sb += b[i];
        }
        for (std::size_t i = 0; i < k; ++i) {
            a[i] /= sa;
            b[i] /= sb;
        }
        CHECK(kl_divergence(ConditionalDistribution(a, 1e-9), ConditionalDistribution(b, 1e-9)) >= 0.0);
    }
}

TEST_CASE("fit_model") {
    auto t = table_from_rows(2, 1, 10, {{3, 1}, {0, 0}});
    auto m = fit_model(Alphabet({"a", "b"}), t, Partition::singleton(2, 1));
    CHECK(m.conditionals[0][0] == doctest::Approx(0.75));
    CHECK(m.conditionals[1][0] == 0.5);
}

TEST_CASE("empirical conditional of a simulated class") {
    const auto model = example_model();
    GeneratorConfig cfg;
    cfg.length = 10000;
    cfg.seed = 17;
    auto seq = sample_sequence(model, cfg);
    auto cc = aggregate(count_transitions(seq, 3), model.partition);
    auto p = empirical_conditional(cc, 3);
    CHECK(std::abs(p[0] - 0.1) < 0.05);
    CHECK(std::abs(p[1] - 0.4) < 0.05);
    CHECK(std::abs(p[2] - 0.5) < 0.05);
}

TEST_CASE("true partition beats every further merge at n=9000") {
    const auto model = example_model();
    GeneratorConfig cfg;
    cfg.length = 9000;
    cfg.seed = 9000;
    auto counts = count_transitions(sample_sequence(model, cfg), 3);
    const double base = partition_bic(counts, model.partition, 1.0);
    for (CellId i = 0; i < 5; ++i)
        for (CellId j = i + 1; j < 5; ++j)
            CHECK(base > partition_bic(counts, merge_cells(model.partition, i, j), 1.0));
}
