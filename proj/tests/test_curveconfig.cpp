#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "ksba/curveconfig.hpp"

using namespace ksba;

static CurveConfig small_config() {
    return parse_config(R"({
        "kz_squared": 0,
        "curves": [
            {"name": "A", "self_int": -2},
            {"name": "B", "self_int": -3},
            {"name": "F", "self_int": 0, "genus": 1}
        ],
        "incidences": [
            {"a": "A", "b": "B", "mult": 1},
            {"a": "B", "b": "F", "mult": 2}
        ]
    })");
}

TEST_CASE("parsing and serialization round-trip") {
    CurveConfig cfg = small_config();
    CHECK(cfg.kz_squared == 0);
    CHECK(cfg.curves.size() == 3);
    CHECK(cfg.incidence("A", "B") == 1);
    CHECK(cfg.incidence("B", "F") == 2);
    CHECK(cfg.incidence("A", "F") == 0);
    CHECK(cfg.curves[cfg.index_of("F")].arith_genus == 1);
    CurveConfig again = parse_config(serialize_config(cfg));
    CHECK(serialize_config(again) == serialize_config(cfg));
}

TEST_CASE("parser rejects malformed configurations") {
    CHECK_THROWS_AS(parse_config("{"), ParseError);
    CHECK_THROWS_AS(parse_config(R"({"kz_squared": 0, "curves": [], "bogus": 1})"), ParseError);
    CHECK_THROWS_AS(parse_config(R"({"curves": []})"), ParseError);
    CHECK_THROWS_AS(parse_config(R"({"kz_squared": 0, "curves": [
        {"name": "A", "self_int": -2}, {"name": "A", "self_int": -3}]})"),
                    ParseError);
    CHECK_THROWS_AS(parse_config(R"({"kz_squared": 0, "curves": [
        {"name": "A", "self_int": -2}],
        "incidences": [{"a": "A", "b": "A"}]})"),
                    ParseError);
    CHECK_THROWS_AS(parse_config(R"({"kz_squared": 0, "curves": [
        {"name": "A", "self_int": -2}],
        "incidences": [{"a": "A", "b": "Z"}]})"),
                    ParseError);
    CHECK_THROWS_AS(parse_config(R"({"kz_squared": 0, "curves": [
        {"name": "A", "self_int": -2, "color": "red"}]})"),
                    ParseError);
}

TEST_CASE("adjunction degree") {
    CurveConfig cfg = small_config();
    CHECK(canonical_degree(cfg, "A") == 0);  // -2-(-2)
    CHECK(canonical_degree(cfg, "B") == 1);  // -2-(-3)
    CHECK(canonical_degree(cfg, "F") == 0);  // 2-2-0
}

TEST_CASE("blow-up bookkeeping on a worked example") {
    CurveConfig cfg = small_config();
    // blow up the tacnode-like contact point of B and F (mult 1 on each)
    CurveConfig up = blow_up(cfg, BlowUpSpec{{{"B", 1}, {"F", 1}}, "E"});
    CHECK(up.kz_squared == -1);
    CHECK(up.curves[up.index_of("E")].self_int == -1);
    CHECK(up.curves[up.index_of("B")].self_int == -4);
    CHECK(up.curves[up.index_of("F")].self_int == -1);
    CHECK(up.incidence("B", "F") == 1);
    CHECK(up.incidence("B", "E") == 1);
    CHECK(up.incidence("F", "E") == 1);
    // blowing up the node of F drops its genus to zero
    CurveConfig node = blow_up(cfg, BlowUpSpec{{{"F", 2}}, "N"});
    CHECK(node.curves[node.index_of("F")].self_int == -4);
    CHECK(node.curves[node.index_of("F")].arith_genus == 0);
    CHECK(node.incidence("F", "N") == 2);
}

TEST_CASE("blow-up rejects impossible centers") {
    CurveConfig cfg = small_config();
    // A and F are disjoint: no common point to blow up
    CHECK_THROWS_AS(blow_up(cfg, BlowUpSpec{{{"A", 1}, {"F", 1}}, "E"}), std::domain_error);
    // a rational curve has no node
    CHECK_THROWS_AS(blow_up(cfg, BlowUpSpec{{{"A", 2}}, "E"}), std::domain_error);
    CHECK_THROWS_AS(blow_up(cfg, BlowUpSpec{{{"A", 1}}, "A"}), std::domain_error);
    CHECK_THROWS_AS(blow_up(cfg, BlowUpSpec{{{"A", 1}, {"A", 1}}, "E"}), std::domain_error);
}

TEST_CASE("blow-down is the exact inverse of blow-up") {
    std::mt19937 rng(23);
    std::uniform_int_distribution<int> pick(0, 99);
    for (int trial = 0; trial < 1000; ++trial) {
        CurveConfig cfg = small_config();
        // random configuration state: a few random preliminary blow-ups
        int pre = pick(rng) % 3;
        for (int i = 0; i < pre; ++i) {
            std::vector<BlowUpCenter> center;
            std::size_t c = pick(rng) % cfg.curves.size();
            center.push_back({cfg.curves[c].name, 1});
            cfg = blow_up(cfg, BlowUpSpec{center, "P" + std::to_string(i)});
        }
        // random center for the round-trip step
        std::vector<BlowUpCenter> center;
        std::size_t a = pick(rng) % cfg.curves.size();
        center.push_back({cfg.curves[a].name, 1});
        if (pick(rng) % 2) {
            std::size_t b = pick(rng) % cfg.curves.size();
            if (b != a && cfg.incidence(a, b) > 0)
                center.push_back({cfg.curves[b].name, 1});
        }
        CurveConfig up = blow_up(cfg, BlowUpSpec{center, "E"});
        CurveConfig down = blow_down(up, "E");
        CHECK(serialize_config(down) == serialize_config(cfg));
    }
}

TEST_CASE("blow-down requires an exceptional curve") {
    CurveConfig cfg = small_config();
    CHECK_THROWS_AS(blow_down(cfg, "A"), std::domain_error);
    CHECK_THROWS_AS(blow_down(cfg, "F"), std::domain_error);
}

TEST_CASE("intersection matrix of a subset") {
    CurveConfig cfg = small_config();
    IntMatrix m = intersection_matrix(cfg, {"A", "B"});
    CHECK(m.at(0, 0) == -2);
    CHECK(m.at(1, 1) == -3);
    CHECK(m.at(0, 1) == 1);
    CHECK(m.at(1, 0) == 1);
}

TEST_CASE("declared fibers, contractions, bridges and notes survive a round-trip") {
    CurveConfig cfg = parse_config(R"({
        "kz_squared": -1,
        "curves": [
            {"name": "A", "self_int": -4},
            {"name": "B", "self_int": -1},
            {"name": "C", "self_int": -4}
        ],
        "incidences": [{"a": "A", "b": "B"}, {"a": "B", "b": "C"}],
        "fibers": [{"name": "f", "components": [{"curve": "B", "mult": 2}]}],
        "contractions": [{"name": "W1", "curves": ["A"]}, {"name": "W2", "curves": ["C"]}],
        "bridges": [{"curve": "B", "ends": ["A", "C"]}],
        "pullback": {"A": "1/2"},
        "notes": ["example"]
    })");
    CHECK(cfg.fibers.size() == 1);
    CHECK(cfg.contractions.size() == 2);
    CHECK(cfg.bridges[0].ends[1] == "C");
    CHECK(cfg.pullback_commentary.at("A") == Rational(1, 2));
    CurveConfig again = parse_config(serialize_config(cfg));
    CHECK(serialize_config(again) == serialize_config(cfg));
}
