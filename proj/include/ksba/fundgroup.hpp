#pragma once

#include <algorithm>
#include <map>
#include <numeric>
#include <string>
#include <vector>

#include "ksba/chains.hpp"
#include "ksba/contraction.hpp"
#include "ksba/curveconfig.hpp"
#include "ksba/linalg.hpp"

namespace ksba {

// A group word: sequence of (generator index, exponent) letters.
using Word = std::vector<std::pair<std::size_t, long>>;

// Finite presentation of the link group of a contracted configuration:
// one meridian generator per curve, one relator per curve (the product of
// its neighbors times itself to its self-intersection), plus commutators
// of adjacent meridians.
struct Presentation {
    std::vector<std::string> generators;
    std::vector<Word> relators;    // the per-curve relators, in curve order
    std::vector<Word> commutators; // [a,b] for each edge of the dual graph

    std::string generator_name(std::size_t i) const { return generators[i]; }
};

// Order of the local fundamental group of the contracted set: |det| of its
// intersection matrix.  Requires negative definiteness.
inline Int link_order(const CurveConfig &cfg, const ContractionDecl &decl) {
    IntMatrix m = intersection_matrix(cfg, decl.curves);
    if (!is_negative_definite(m))
        throw std::domain_error("link_order: contraction " + decl.name +
                                " has non-negative-definite intersection matrix");
    return abs(int_det(m));
}

// Build the presentation of the link group from the dual graph of the set.
// The graph must be a simple tree: a cycle or a tangential/multiple contact
// between set members has no plumbing-tree presentation of this shape.
inline Presentation mumford_presentation(const CurveConfig &cfg, const ContractionDecl &decl) {
    const std::size_t n = decl.curves.size();
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if (cfg.incidence(decl.curves[i], decl.curves[j]) > 1)
                throw std::domain_error("mumford_presentation: curves " + decl.curves[i] +
                                        " and " + decl.curves[j] +
                                        " meet more than once; the dual graph is not a tree");
    if (!detail::is_simple_tree(cfg, decl.curves))
        throw std::domain_error("mumford_presentation: contraction " + decl.name +
                                " does not have a tree dual graph");
    Presentation p;
    p.generators = decl.curves;
    for (std::size_t i = 0; i < n; ++i) {
        Word w;
        for (std::size_t j = 0; j < n; ++j)
            if (j != i && cfg.incidence(decl.curves[i], decl.curves[j]) == 1)
                w.emplace_back(j, 1);
        w.emplace_back(i, cfg.curves[cfg.index_of(decl.curves[i])].self_int);
        p.relators.push_back(w);
        for (std::size_t j = i + 1; j < n; ++j)
            if (cfg.incidence(decl.curves[i], decl.curves[j]) == 1)
                p.commutators.push_back(Word{{i, 1}, {j, 1}, {i, -1}, {j, -1}});
    }
    return p;
}

struct Abelianization {
    std::vector<Int> invariant_factors; // nontrivial factors d1 | d2 | ...
    Int order;                          // 0 when infinite
};

// Abelianized group from the exponent-sum matrix of the relators (commutators
// abelianize to nothing).
inline Abelianization abelianization(const Presentation &p) {
    IntMatrix m(p.relators.size(), p.generators.size());
    for (std::size_t r = 0; r < p.relators.size(); ++r)
        for (const auto &[g, e] : p.relators[r])
            m.at(r, g) += e;
    std::vector<Int> factors = smith_normal_form(m);
    Abelianization ab;
    ab.order = 1;
    for (std::size_t i = 0; i < p.generators.size(); ++i) {
        Int d = i < factors.size() ? factors[i] : Int(0);
        if (d == 1)
            continue;
        ab.invariant_factors.push_back(d);
        ab.order *= d;
    }
    if (ab.order < 0)
        ab.order = -ab.order;
    return ab;
}

// ---------------------------------------------------------------------------
// Trivialization engine.
//
// Works with meridian classes of the contracted curves in pi_1 of the
// complement of the whole configuration, modulo the identifications coming
// from bridge curves.  Facts are of the form ord(class) | n; the engine
// saturates a small set of sound closure rules and reports whether every
// contracted meridian was forced to be trivial.
// ---------------------------------------------------------------------------

struct TrivializeResult {
    bool trivial = false;
    std::vector<std::string> log; // deterministic replayable derivation
    std::vector<std::string> unresolved; // contracted curves not forced trivial
};

namespace detail {

struct MeridianFacts {
    std::vector<std::size_t> parent; // union-find over curve indices
    std::vector<Int> order_divisor;  // on roots; 0 = no bound known

    explicit MeridianFacts(std::size_t n) : parent(n), order_divisor(n, Int(0)) {
        std::iota(parent.begin(), parent.end(), std::size_t{0});
    }

    std::size_t find(std::size_t v) {
        while (parent[v] != v)
            v = parent[v] = parent[parent[v]];
        return v;
    }

    // Record ord(class of v) | n.  Returns true if the bound improved.
    bool bound(std::size_t v, const Int &n) {
        std::size_t r = find(v);
        Int g = gcd(order_divisor[r], n);
        if (g == order_divisor[r])
            return false;
        order_divisor[r] = g;
        return true;
    }

    bool merge(std::size_t a, std::size_t b) {
        std::size_t ra = find(a), rb = find(b);
        if (ra == rb)
            return false;
        parent[rb] = ra;
        order_divisor[ra] = gcd(order_divisor[ra], order_divisor[rb]);
        return true;
    }

    bool trivial(std::size_t v) { return order_divisor[find(v)] == 1; }
    Int order_of(std::size_t v) { return order_divisor[find(v)]; }
};

} // namespace detail

// Decide triviality of pi_1 from the contraction sets and declared bridges.
// Precondition: every contraction set must be contractible; bridges must
// actually meet the curves they name.
inline TrivializeResult trivialize(const CurveConfig &cfg,
                                   const std::vector<ContractionDecl> &sets,
                                   const std::vector<Bridge> &bridges) {
    for (const auto &s : sets)
        if (!check_contractible(cfg, s).contractible)
            throw std::domain_error("trivialize: contraction " + s.name +
                                    " is not contractible");
    for (const auto &b : bridges) {
        bool same = b.ends[0] == b.ends[1];
        long need = same ? 2 : 1;
        if (cfg.incidence(b.curve, b.ends[0]) < need ||
            (!same && cfg.incidence(b.curve, b.ends[1]) < 1))
            throw std::domain_error("trivialize: bridge " + b.curve +
                                    " does not meet its declared ends");
    }

    detail::MeridianFacts facts(cfg.curves.size());
    TrivializeResult res;
    std::vector<std::size_t> tracked; // indices of all contracted curves
    auto idx = [&](const std::string &n) { return cfg.index_of(n); };

    // Seed order bounds at chain ends only: a chain's link group is cyclic,
    // generated by either end meridian, of order |det|.
    for (const auto &s : sets) {
        for (const auto &n : s.curves)
            tracked.push_back(idx(n));
        if (s.center)
            continue;
        Int det = link_order(cfg, s);
        for (const std::string &end : {s.curves.front(), s.curves.back()}) {
            facts.bound(idx(end), det);
            res.log.push_back("seed: ord(" + end + ") divides " + det.get_str() + " (end of " +
                              s.name + ")");
            if (s.curves.size() == 1)
                break;
        }
    }

    // A bridge contracts to a rational curve meeting both branches, so its
    // two end meridians are identified (inverse up to orientation, which the
    // order bookkeeping ignores).  A bridge with both ends on one curve gives
    // the relation (end meridian)^2 = 1.
    for (const auto &b : bridges) {
        if (b.ends[0] == b.ends[1]) {
            if (facts.bound(idx(b.ends[0]), Int(2)))
                res.log.push_back("bridge " + b.curve + ": ord(" + b.ends[0] + ") divides 2");
        } else {
            facts.merge(idx(b.ends[0]), idx(b.ends[1]));
            res.log.push_back("bridge " + b.curve + ": identify " + b.ends[0] + " ~ " +
                              b.ends[1]);
        }
    }

    // Per-set relator words over classes.
    struct SetWords {
        const ContractionDecl *decl;
        std::vector<Word> relators; // generator = index into decl->curves
    };
    std::vector<SetWords> words;
    for (const auto &s : sets) {
        Presentation p = mumford_presentation(cfg, s);
        words.push_back(SetWords{&s, p.relators});
    }

    // Saturate the closure rules.
    bool progress = true;
    while (progress) {
        progress = false;
        // Chain propagation: the whole chain group is generated by either end
        // meridian, so a trivial end trivializes every member.
        for (const auto &s : sets) {
            if (s.center)
                continue;
            if (!facts.trivial(idx(s.curves.front())) && !facts.trivial(idx(s.curves.back())))
                continue;
            for (const auto &n : s.curves)
                if (!facts.trivial(idx(n))) {
                    facts.bound(idx(n), Int(1));
                    progress = true;
                    res.log.push_back("chain " + s.name + ": end trivial, so " + n +
                                      " is trivial");
                }
        }
        // Relator evaluation: drop trivial letters, merge adjacent letters of
        // equal class.  A one-class residue g^k bounds ord(g) | |k|; a
        // two-class residue g^a h^b with ord(h) | n bounds
        // ord(g) | |a| * n / gcd(n, |b|), and symmetrically.
        for (const auto &sw : words) {
            for (std::size_t r = 0; r < sw.relators.size(); ++r) {
                std::vector<std::pair<std::size_t, Int>> runs; // (class root, exponent)
                for (const auto &[g, e] : sw.relators[r]) {
                    std::size_t root = facts.find(idx(sw.decl->curves[g]));
                    if (facts.trivial(root))
                        continue;
                    if (!runs.empty() && runs.back().first == root)
                        runs.back().second += e;
                    else
                        runs.emplace_back(root, Int(e));
                }
                std::erase_if(runs, [](const auto &p) { return p.second == 0; });
                auto describe = [&](std::size_t root) {
                    for (const auto &n : sw.decl->curves)
                        if (facts.find(idx(n)) == root)
                            return n;
                    return std::string("?");
                };
                if (runs.size() == 1) {
                    Int k = abs(runs[0].second);
                    if (facts.bound(runs[0].first, k)) {
                        progress = true;
                        res.log.push_back("relator of " + sw.decl->curves[r] + " in " +
                                          sw.decl->name + ": ord(" + describe(runs[0].first) +
                                          ") divides " + k.get_str());
                    }
                } else if (runs.size() == 2 && runs[0].first != runs[1].first) {
                    for (int side = 0; side < 2; ++side) {
                        const auto &[gr, ge] = runs[side];
                        const auto &[hr, he] = runs[1 - side];
                        Int n = facts.order_of(hr);
                        if (n == 0)
                            continue;
                        // g^ge = h^-he, and ord(h^he) | n / gcd(n, |he|).
                        Int k = abs(ge) * (n / gcd(n, abs(he)));
                        if (facts.bound(gr, k)) {
                            progress = true;
                            res.log.push_back("relator of " + sw.decl->curves[r] + " in " +
                                              sw.decl->name + ": ord(" + describe(gr) +
                                              ") divides " + k.get_str());
                        }
                    }
                } else if (runs.size() == 2 && runs[0].first == runs[1].first) {
                    Int k = abs(runs[0].second + runs[1].second);
                    if (k != 0 && facts.bound(runs[0].first, k)) {
                        progress = true;
                        res.log.push_back("relator of " + sw.decl->curves[r] + " in " +
                                          sw.decl->name + ": ord(" + describe(runs[0].first) +
                                          ") divides " + k.get_str());
                    }
                }
            }
        }
        // Re-apply bridge identifications: a merge after new bounds can
        // combine divisor facts via gcd (coprime orders force triviality).
        for (const auto &b : bridges) {
            if (b.ends[0] == b.ends[1])
                continue;
            std::size_t ra = facts.find(idx(b.ends[0]));
            Int before = facts.order_of(ra);
            if (facts.merge(idx(b.ends[0]), idx(b.ends[1])))
                progress = true;
            if (facts.order_of(ra) != before) {
                progress = true;
                res.log.push_back("bridge " + b.curve + ": combined bounds give ord(" +
                                  b.ends[0] + ") divides " +
                                  facts.order_of(ra).get_str());
            }
        }
    }

    res.trivial = true;
    for (std::size_t v : tracked)
        if (!facts.trivial(v)) {
            res.trivial = false;
            res.unresolved.push_back(cfg.curves[v].name);
        }
    std::sort(res.unresolved.begin(), res.unresolved.end());
    res.unresolved.erase(std::unique(res.unresolved.begin(), res.unresolved.end()),
                         res.unresolved.end());
    return res;
}

inline TrivializeResult trivialize(const CurveConfig &cfg) {
    return trivialize(cfg, cfg.contractions, cfg.bridges);
}

} // namespace ksba
