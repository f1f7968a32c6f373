#pragma once

#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "ksba/chains.hpp"
#include "ksba/curveconfig.hpp"

namespace ksba {

// One row of the catalogue of Wahl singularities known to occur on surfaces
// with the stated K^2: the parameters (n, a), the printed resolution chain,
// the minimal-model type of the resolution ("tmmr"), and a source tag.
struct TableRow {
    long k_squared = 0;
    Int n;
    Int a;
    Chain chain{std::vector<long>{2}};
    std::string tmmr;
    std::string reference;

    std::string key() const {
        return "K2=" + std::to_string(k_squared) + " (" + n.get_str() + "," + a.get_str() + ")";
    }
};

inline std::vector<TableRow> load_tables(const std::string &text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error &e) {
        throw ParseError(std::string("table file is not valid JSON: ") + e.what());
    }
    if (!j.is_array())
        throw ParseError("table file must be an array of rows");
    std::vector<TableRow> rows;
    for (const auto &rj : j) {
        detail::reject_unknown_keys(rj, {"k_squared", "n", "a", "chain", "tmmr", "reference"},
                                    "table row");
        TableRow r;
        r.k_squared = rj.at("k_squared").get<long>();
        r.n = Int(rj.at("n").get<long>());
        r.a = Int(rj.at("a").get<long>());
        std::vector<long> entries;
        for (const auto &e : rj.at("chain"))
            entries.push_back(e.get<long>());
        r.chain = Chain(entries);
        r.tmmr = rj.value("tmmr", std::string());
        r.reference = rj.value("reference", std::string());
        rows.push_back(r);
    }
    return rows;
}

struct TableRowVerdict {
    const TableRow *row = nullptr;
    bool consistent = false;
    Chain expected{std::vector<long>{2}}; // chain of 1/n^2(1, na-1)
};

// A row is consistent when the printed chain resolves 1/n^2(1, na-1) for its
// (n, a) in either orientation (the reversed chain is the same singularity),
// allowing the equivalent parameter n-a.
inline TableRowVerdict verify_row(const TableRow &r) {
    TableRowVerdict v;
    v.row = &r;
    v.expected = hj_expand(r.n * r.n, r.n * r.a - 1);
    for (const Int &a : {Int(r.a), Int(r.n - r.a)}) {
        if (a <= 0 || a >= r.n || gcd(r.n, a) != 1)
            continue;
        Chain c = hj_expand(r.n * r.n, r.n * a - 1);
        if (r.chain == c || r.chain == chain_dual(c)) {
            v.consistent = true;
            return v;
        }
    }
    return v;
}

struct TableReport {
    std::size_t total = 0;
    std::vector<TableRowVerdict> failures;
};

// Verify every row; rows whose key appears in the allowlist are reported as
// known errata and do not count as failures.
inline TableReport verify_tables(const std::vector<TableRow> &rows,
                                 const std::set<std::string> &allowlist = {}) {
    TableReport rep;
    rep.total = rows.size();
    for (const auto &r : rows) {
        TableRowVerdict v = verify_row(r);
        if (!v.consistent && !allowlist.count(r.key()))
            rep.failures.push_back(v);
    }
    return rep;
}

// The errata allowlist file: {"tables": [key...], "nef_zero_curves": {...}}.
struct Errata {
    std::set<std::string> table_rows;
    std::map<std::string, std::vector<std::string>> nef_zero_curves; // config stem -> curves
};

inline Errata load_errata(const std::string &text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error &e) {
        throw ParseError(std::string("errata file is not valid JSON: ") + e.what());
    }
    detail::reject_unknown_keys(j, {"tables", "nef_zero_curves"}, "errata file");
    Errata e;
    for (const auto &k : j.value("tables", json::array()))
        e.table_rows.insert(k.get<std::string>());
    if (j.contains("nef_zero_curves"))
        for (auto it = j.at("nef_zero_curves").begin(); it != j.at("nef_zero_curves").end(); ++it)
            for (const auto &c : it.value())
                e.nef_zero_curves[it.key()].push_back(c.get<std::string>());
    return e;
}

} // namespace ksba
