// End-to-end acceptance checks over the bundled data and the library core.
// Prints one PASS/FAIL line per criterion and exits nonzero on any failure.

#include <fstream>
#include <iostream>
#include <random>
#include <set>
#include <sstream>
#include <vector>

#include "ksba/chains.hpp"
#include "ksba/contraction.hpp"
#include "ksba/fundgroup.hpp"
#include "ksba/obstruction.hpp"
#include "ksba/tables.hpp"

using namespace ksba;

static std::string slurp(const std::string &name) {
    std::ifstream in(std::string(KSBA_DATA_DIR) + "/" + name);
    if (!in.good())
        throw std::runtime_error("cannot open data file " + name);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

static CurveConfig load(const std::string &stem) { return parse_config(slurp(stem + ".json")); }

static const std::vector<std::string> stems = {"s31", "s32", "s33", "s41", "s42", "s43"};

namespace {
int failures = 0;

void report(int criterion, bool ok, const std::string &what) {
    std::cout << "criterion " << criterion << ": " << (ok ? "PASS" : "FAIL") << " — " << what
              << "\n";
    if (!ok)
        ++failures;
}
} // namespace

// 1. The singularity catalogue is internally consistent up to the recorded
//    errata rows.
static void criterion_1() {
    std::vector<TableRow> rows = load_tables(slurp("tables.json"));
    TableReport rep = verify_tables(rows);
    std::set<std::string> failing;
    for (const auto &v : rep.failures)
        failing.insert(v.row->key());
    const std::set<std::string> known = {"K2=1 (19,8)", "K2=2 (14,5)", "K2=3 (113,25)"};
    bool ok = rows.size() == 136 && failing == known &&
              verify_tables(rows, load_errata(slurp("errata.json")).table_rows).failures.empty();
    report(1, ok,
           "catalogue of 136 rows verifies with exactly the 3 recorded errata (" +
               std::to_string(failing.size()) + " inconsistent rows found)");
}

// 2. K_X^2 replays term by term from K_Z^2 plus one unit per contracted curve.
static void criterion_2() {
    struct Expected {
        const char *stem;
        long kz;
        std::vector<std::size_t> sizes;
        long kx2;
    };
    const std::vector<Expected> cases = {
        {"s31", -10, {1, 1, 5, 4}, 1},  {"s32", -9, {2, 4, 4}, 1},
        {"s33", -6, {3, 4}, 1},         {"s41", -13, {1, 2, 2, 4, 6}, 2},
        {"s42", -9, {5, 2, 4}, 2},      {"s43", -11, {7, 2, 4}, 2},
    };
    bool ok = true;
    for (const auto &e : cases) {
        CurveConfig cfg = load(e.stem);
        long sum = cfg.kz_squared;
        ok = ok && cfg.kz_squared == e.kz && cfg.contractions.size() == e.sizes.size();
        for (std::size_t i = 0; i < cfg.contractions.size() && ok; ++i) {
            ok = cfg.contractions[i].curves.size() == e.sizes[i];
            sum += static_cast<long>(cfg.contractions[i].curves.size());
        }
        ok = ok && sum == e.kx2 && k_squared(cfg, cfg.contractions) == e.kx2;
    }
    report(2, ok, "K^2 of all six contracted surfaces replays term by term (1,1,1,2,2,2)");
}

// 3. The pulled-back canonical class is orthogonal to every contracted curve
//    and its self-intersection equals K_X^2.
static void criterion_3() {
    bool ok = true;
    for (const auto &stem : stems) {
        CurveConfig cfg = load(stem);
        // pullback_class itself cross-checks (f*K)^2 against the set count
        PullbackClass pc = pullback_class(cfg, cfg.contractions);
        NefReport rep = nef_report(cfg, cfg.contractions);
        for (const auto &e : rep.entries)
            if (e.contracted && e.value != 0)
                ok = false;
        ok = ok && pc.coeffs.size() > 0;
    }
    report(3, ok, "f*(K_X) is orthogonal to every contracted curve and squares to K_X^2");
}

// 4. Nef/ample verdicts match the frozen expectations, including the curves
//    of degree zero.
static void criterion_4() {
    struct Expected {
        const char *stem;
        std::vector<std::string> zeros;
        AmpleKind kind;
    };
    const std::vector<Expected> cases = {
        {"s31", {"G4"}, AmpleKind::NefNotAmple}, {"s32", {"G5"}, AmpleKind::NefNotAmple},
        {"s33", {}, AmpleKind::Ample},           {"s41", {"G10"}, AmpleKind::NefNotAmple},
        {"s42", {}, AmpleKind::Ample},           {"s43", {}, AmpleKind::Ample},
    };
    bool ok = true;
    for (const auto &e : cases) {
        CurveConfig cfg = load(e.stem);
        NefReport rep = nef_report(cfg, cfg.contractions);
        AmpleVerdict v = ample_certificate(cfg, cfg.contractions, cfg.fibers.front().name);
        ok = ok && rep.negative_curves.empty() && rep.zero_curves == e.zeros &&
             v.kind == e.kind && v.zero_curves == e.zeros;
    }
    report(4, ok,
           "canonical classes are nef on all six surfaces; ample except for the three "
           "recorded degree-zero curves");
}

// 5. Fundamental-group bookkeeping: link orders, abelianizations against an
//    independent determinant, and trivialization of pi_1 on every surface.
static void criterion_5() {
    // independent cofactor-expansion determinant
    struct Cof {
        static Int det(const IntMatrix &m) {
            if (m.rows == 1)
                return m.at(0, 0);
            Int d = 0;
            for (std::size_t c = 0; c < m.cols; ++c) {
                IntMatrix minor(m.rows - 1, m.cols - 1);
                for (std::size_t i = 1; i < m.rows; ++i)
                    for (std::size_t j = 0, jj = 0; j < m.cols; ++j)
                        if (j != c)
                            minor.at(i - 1, jj++) = m.at(i, j);
                Int t = m.at(0, c) * det(minor);
                d += (c % 2 == 0) ? t : -t;
            }
            return d;
        }
    };
    bool ok = true;
    for (const auto &stem : stems) {
        CurveConfig cfg = load(stem);
        for (const auto &s : cfg.contractions) {
            Int lk = link_order(cfg, s);
            IntMatrix m = intersection_matrix(cfg, s.curves);
            Abelianization ab = abelianization(mumford_presentation(cfg, s));
            ok = ok && lk == abs(Cof::det(m)) && ab.order == lk;
        }
        TrivializeResult res = trivialize(cfg);
        ok = ok && res.trivial && !res.log.empty();
    }
    report(5, ok,
           "link orders match an independent determinant, abelianizations agree, and the "
           "meridian calculus trivializes pi_1 on all six surfaces");
}

// 6. The structural property suites: continued-fraction round trips, the Wahl
//    generator/recognizer agreement, and blow-up/blow-down inversion.
static void criterion_6() {
    bool ok = true;
    // every reduced fraction round-trips through its expansion
    for (long p = 2; p <= 200 && ok; ++p)
        for (long q = 1; q < p && ok; ++q) {
            if (gcd(Int(p), Int(q)) != 1)
                continue;
            auto [pp, qq] = hj_eval(hj_expand(Int(p), Int(q)));
            ok = pp == p && qq == q;
        }
    // generated Wahl chains are exactly the recognized ones
    std::set<Chain> gen = wahl_generate(5);
    for (const auto &c : gen)
        ok = ok && wahl_params(c).has_value();
    ok = ok && gen.count(Chain({2, 7, 2, 2, 3})) == 1;
    // blow-up followed by blow-down restores the configuration
    std::mt19937 rng(20240824);
    CurveConfig cfg = load("s31");
    for (int trial = 0; trial < 100 && ok; ++trial) {
        std::uniform_int_distribution<std::size_t> pick(0, cfg.curves.size() - 1);
        BlowUpSpec spec;
        spec.new_name = "T";
        spec.center.push_back({cfg.curves[pick(rng)].name, 1});
        CurveConfig up = blow_up(cfg, spec);
        ok = serialize_config(blow_down(up, "T")) == serialize_config(cfg);
    }
    report(6, ok,
           "continued-fraction round trips, Wahl generation/recognition agreement, and "
           "blow-up/blow-down inversion all hold");
}

// 7. Every bundled derivation script replays to its configuration, and broken
//    scripts are rejected with the violated rule named.
static void criterion_7() {
    bool ok = true;
    for (const auto &stem : stems)
        ok = ok && check_derivation(load(stem)).valid;

    auto with_script = [](const CurveConfig &cfg, const json &script) {
        json j = config_to_json(cfg);
        j["derivation"] = script;
        return parse_config(j.dump());
    };
    CurveConfig cfg = load("s33");
    json bad1 = cfg.derivation;
    bad1.push_back(json{{"op", "delete_minus_one"}, {"curve", "L1"}});
    DerivationVerdict v1 = check_derivation(with_script(cfg, bad1));
    ok = ok && !v1.valid && v1.reason.find("minus-one rule") != std::string::npos;
    json bad2 = cfg.derivation;
    bad2.push_back(json{{"op", "add_ade"}, {"curves", json::array({"L1"})}});
    DerivationVerdict v2 = check_derivation(with_script(cfg, bad2));
    ok = ok && !v2.valid && v2.reason.find("ade rule") != std::string::npos;
    report(7, ok,
           "all six derivation scripts replay cleanly; tampered scripts are rejected with "
           "the violated rule named");
}

int main() {
    try {
        criterion_1();
        criterion_2();
        criterion_3();
        criterion_4();
        criterion_5();
        criterion_6();
        criterion_7();
    } catch (const std::exception &e) {
        std::cout << "unexpected error: " << e.what() << "\n";
        return 1;
    }
    return failures == 0 ? 0 : 1;
}
