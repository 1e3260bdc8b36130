#include <doctest.h>

#include <numeric>
#include <random>

#include "mmm/alphabet.hpp"
#include "mmm/counts.hpp"
#include "oracles.hpp"

using namespace mmm;

TEST_CASE("state encoding") {
    std::vector<Symbol> w1 = {0};
    CHECK(encode_state(w1, 2, 1) == 0);
    std::vector<Symbol> w2 = {0, 1, 1};
    CHECK(encode_state(w2, 2, 3) == 3);
    std::vector<Symbol> w3 = {2, 0, 2};
    CHECK(encode_state(w3, 3, 3) == 20);
}

TEST_CASE("encoding agrees with lexicographic enumeration") {
    // "000", "001", ..., "222" in order must get ids 0..26.
    StateId expected = 0;
    for (Symbol a = 0; a < 3; ++a)
        for (Symbol b = 0; b < 3; ++b)
            for (Symbol c = 0; c < 3; ++c) {
                std::vector<Symbol> w = {a, b, c};
                CHECK(encode_state(w, 3, 3) == expected);
                CHECK(decode_state(expected, 3, 3) == w);
                ++expected;
            }
}

TEST_CASE("state strings") {
    Alphabet ab({"0", "1", "2"});
    CHECK(state_string(20, ab, 3) == "202");
    CHECK(parse_state("202", ab, 3) == 20);
    Alphabet words({"sun", "rain"});
    CHECK(state_string(1, words, 2) == "sun:rain");
    CHECK(parse_state("sun:rain", words, 2) == 1);
    CHECK_THROWS_AS(parse_state("20", ab, 3), std::invalid_argument);
}

TEST_CASE("alphabet validation") {
    CHECK_THROWS_AS(Alphabet({"a"}), std::invalid_argument);
    CHECK_THROWS_AS(Alphabet({"a", "a"}), std::invalid_argument);
    CHECK_THROWS_AS(Alphabet({"a", ""}), std::invalid_argument);
    CHECK_THROWS_AS(Alphabet({"a b", "c"}), std::invalid_argument);
    CHECK_THROWS_AS(Alphabet({"ab", "c:d"}), std::invalid_argument);
    Alphabet ab({"a", "b"});
    CHECK(ab.index_of("b") == 1);
    CHECK_THROWS_AS(ab.index_of("c"), std::invalid_argument);
}

TEST_CASE("state space cap") {
    CHECK(state_count(3, 3) == 27);
    CHECK_THROWS_AS(state_count(4, 20), std::length_error);
    CHECK_THROWS_AS(state_count(2, 0), std::invalid_argument);
}

TEST_CASE("constant sequence") {
    std::vector<Symbol> x = {0, 0, 0, 0};
    auto c = count_transitions(x, 2, 1);
    CHECK(c.pair(0, 0) == 3);
    CHECK(c.state_total(0) == 3);
    CHECK(c.pair(0, 1) == 0);
    CHECK(c.pair(1, 0) == 0);
    CHECK(c.pair(1, 1) == 0);
    CHECK(c.state_total(1) == 0);
    CHECK(c.sample_length() == 4);
}

TEST_CASE("sequence 0110 at order 2") {
    std::vector<Symbol> x = {0, 1, 1, 0};
    auto c = count_transitions(x, 2, 2);
    // states: 00=0, 01=1, 10=2, 11=3
    CHECK(c.pair(1, 1) == 1);
    CHECK(c.pair(3, 0) == 1);
    CHECK(c.state_total(1) == 1);
    CHECK(c.state_total(3) == 1);
    Count other = 0;
    for (StateId s = 0; s < 4; ++s)
        for (Symbol a = 0; a < 2; ++a)
            if (!((s == 1 && a == 1) || (s == 3 && a == 0))) other += c.pair(s, a);
    CHECK(other == 0);
    CHECK(c.observed_states() == 2);
}

TEST_CASE("too short") {
    std::vector<Symbol> x = {0, 1};
    CHECK_THROWS_AS(count_transitions(x, 2, 2), std::invalid_argument);
    std::vector<Symbol> bad = {0, 1, 5};
    CHECK_THROWS_AS(count_transitions(bad, 2, 1), std::out_of_range);
}

TEST_CASE("counts match naive window scan") {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t alpha = 2 + rng() % 2;
        const int order = 1 + static_cast<int>(rng() % 4);
        const std::size_t n = order + 1 + rng() % 150;
        auto x = oracle::random_sequence(rng, n, alpha);
        auto table = count_transitions(x, alpha, order);
        auto naive = oracle::naive_counts(x, order);

        Count total = 0;
        for (StateId s = 0; s < table.num_states(); ++s) {
            const auto name = oracle::state_name(s, alpha, order);
            Count row_sum = 0;
            for (Symbol a = 0; a < alpha; ++a) {
                auto it = naive.find({name, static_cast<int>(a)});
                Count expect = it == naive.end() ? 0 : it->second;
                REQUIRE(table.pair(s, a) == expect);
                row_sum += table.pair(s, a);
            }
            CHECK(table.state_total(s) == row_sum);
            total += row_sum;
        }
        CHECK(total == n - order);
    }
}

TEST_CASE("utf8 characters") {
    auto chars = utf8_chars("a\xc3\xa9z");
    REQUIRE(chars.size() == 3);
    CHECK(chars[1] == "\xc3\xa9");
    CHECK_THROWS(utf8_chars("\xc3"));
}
