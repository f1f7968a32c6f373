#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ksba/chains.hpp"
#include "ksba/curveconfig.hpp"
#include "ksba/linalg.hpp"

namespace ksba {

enum class SetKind { Wahl, Qeq, Ade, Other };

struct Classification {
    SetKind kind = SetKind::Other;
    std::optional<WahlParams> wahl;  // set when kind == Wahl
    std::optional<QeqType> qeq;      // set when kind == Qeq
    std::optional<Chain> chain;      // set when the curves form a chain in list order

    std::string to_string() const {
        switch (kind) {
        case SetKind::Wahl:
            return "Wahl(" + wahl->n.get_str() + "," + wahl->a.get_str() + ")";
        case SetKind::Qeq:
            return "QEq " + qeq_type_name(*qeq);
        case SetKind::Ade:
            return "ADE";
        case SetKind::Other:
            return "Other";
        }
        return "";
    }
};

struct ContractVerdict {
    bool contractible = false;
    std::string reason; // set when not contractible
    Classification cls;
};

namespace detail {

// True when the curves, in the given order, form a simple chain: consecutive
// curves meet once, all other pairs are disjoint.
inline bool is_chain_in_order(const CurveConfig &cfg, const std::vector<std::string> &names) {
    for (std::size_t i = 0; i < names.size(); ++i)
        for (std::size_t j = i + 1; j < names.size(); ++j) {
            long want = (j == i + 1) ? 1 : 0;
            if (cfg.incidence(names[i], names[j]) != want)
                return false;
        }
    return true;
}

// Connected tree with simple edges?
inline bool is_simple_tree(const CurveConfig &cfg, const std::vector<std::string> &names) {
    std::size_t edges = 0;
    for (std::size_t i = 0; i < names.size(); ++i)
        for (std::size_t j = i + 1; j < names.size(); ++j) {
            long m = cfg.incidence(names[i], names[j]);
            if (m > 1)
                return false;
            edges += m;
        }
    if (edges != names.size() - 1)
        return false;
    // connectivity
    std::vector<bool> seen(names.size(), false);
    std::vector<std::size_t> stack{0};
    seen[0] = true;
    std::size_t count = 1;
    while (!stack.empty()) {
        std::size_t v = stack.back();
        stack.pop_back();
        for (std::size_t j = 0; j < names.size(); ++j)
            if (!seen[j] && cfg.incidence(names[v], names[j]) == 1) {
                seen[j] = true;
                ++count;
                stack.push_back(j);
            }
    }
    return count == names.size();
}

} // namespace detail

inline Classification classify_set(const CurveConfig &cfg, const ContractionDecl &decl) {
    Classification cls;
    if (decl.center) {
        // Star shape: three legs each meeting the center once, pairwise disjoint.
        std::vector<std::string> legs;
        for (const auto &n : decl.curves)
            if (n != *decl.center)
                legs.push_back(n);
        bool star = legs.size() == 3;
        for (std::size_t i = 0; star && i < legs.size(); ++i) {
            if (cfg.incidence(legs[i], *decl.center) != 1)
                star = false;
            for (std::size_t j = i + 1; j < legs.size(); ++j)
                if (cfg.incidence(legs[i], legs[j]) != 0)
                    star = false;
        }
        if (star) {
            QeqStar s{{-cfg.curves[cfg.index_of(legs[0])].self_int,
                       -cfg.curves[cfg.index_of(legs[1])].self_int,
                       -cfg.curves[cfg.index_of(legs[2])].self_int},
                      -cfg.curves[cfg.index_of(*decl.center)].self_int};
            if (auto t = qeq_classify(s)) {
                cls.kind = SetKind::Qeq;
                cls.qeq = t;
                return cls;
            }
        }
    } else if (detail::is_chain_in_order(cfg, decl.curves)) {
        std::vector<long> entries;
        bool all_ge2 = true;
        for (const auto &n : decl.curves) {
            long e = -cfg.curves[cfg.index_of(n)].self_int;
            if (e < 2)
                all_ge2 = false;
            entries.push_back(e);
        }
        if (all_ge2) {
            Chain c(entries);
            if (auto w = wahl_params(c)) {
                cls.kind = SetKind::Wahl;
                cls.wahl = w;
                cls.chain = c;
                return cls;
            }
            cls.chain = c;
        }
    }
    // ADE: all (-2) rational curves forming a simple tree.
    bool all_minus2 = true;
    for (const auto &n : decl.curves)
        if (cfg.curves[cfg.index_of(n)].self_int != -2)
            all_minus2 = false;
    if (all_minus2 && detail::is_simple_tree(cfg, decl.curves)) {
        cls.kind = SetKind::Ade;
        return cls;
    }
    return cls;
}

inline ContractVerdict check_contractible(const CurveConfig &cfg, const ContractionDecl &decl) {
    for (const auto &n : decl.curves)
        if (cfg.curves[cfg.index_of(n)].arith_genus != 0)
            throw std::domain_error("contraction " + decl.name + ": curve " + n +
                                    " has positive genus (only rational configurations "
                                    "are supported)");
    ContractVerdict v;
    IntMatrix m = intersection_matrix(cfg, decl.curves);
    if (!is_negative_definite(m)) {
        v.contractible = false;
        v.reason = "intersection matrix is not negative definite";
        return v;
    }
    v.contractible = true;
    v.cls = classify_set(cfg, decl);
    return v;
}

// Coefficients d_i of f*(K_X) = K_Z + sum d_i E_i: the unique exact solution
// of sum_i d_i (E_i . E_j) = -K_Z . E_j = 2 + E_j^2 for every j in the set.
inline std::map<std::string, Rational> discrepancies(const CurveConfig &cfg,
                                                     const ContractionDecl &decl) {
    const std::size_t n = decl.curves.size();
    RatMatrix m(n, RatVector(n));
    RatVector b(n);
    IntMatrix im = intersection_matrix(cfg, decl.curves);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j)
            m[i][j] = Rational(im.at(i, j));
        b[i] = Rational(-canonical_degree(cfg, decl.curves[i]));
    }
    RatVector x = rat_solve(m, b);
    std::map<std::string, Rational> out;
    for (std::size_t i = 0; i < n; ++i)
        out[decl.curves[i]] = x[i];
    return out;
}

inline void require_disjoint(const std::vector<ContractionDecl> &sets) {
    std::map<std::string, std::string> owner;
    for (const auto &s : sets)
        for (const auto &n : s.curves) {
            auto [it, inserted] = owner.emplace(n, s.name);
            if (!inserted)
                throw std::domain_error("curve " + n + " appears in both contraction sets " +
                                        it->second + " and " + s.name);
        }
}

// K_X^2 = K_Z^2 + sum of set sizes (one unit per exceptional curve).
inline long k_squared(const CurveConfig &cfg, const std::vector<ContractionDecl> &sets) {
    require_disjoint(sets);
    long k = cfg.kz_squared;
    for (const auto &s : sets) {
        if (!check_contractible(cfg, s).contractible)
            throw std::domain_error("contraction " + s.name + " is not contractible");
        k += static_cast<long>(s.curves.size());
    }
    return k;
}

struct PullbackClass {
    std::map<std::string, Rational> coeffs;
};

// Union of the per-set discrepancies, cross-checked against the set-count
// formula: (f*K)^2 = K_Z^2 + 2 sum d_i (K.E_i) + sum d_i d_j (E_i.E_j).
inline PullbackClass pullback_class(const CurveConfig &cfg,
                                    const std::vector<ContractionDecl> &sets) {
    require_disjoint(sets);
    PullbackClass pc;
    for (const auto &s : sets)
        for (const auto &[name, d] : discrepancies(cfg, s))
            pc.coeffs[name] = d;
    Rational square(cfg.kz_squared);
    for (const auto &[name, d] : pc.coeffs)
        square += 2 * d * Rational(canonical_degree(cfg, name));
    for (const auto &[na, da] : pc.coeffs)
        for (const auto &[nb, db] : pc.coeffs) {
            long dot = (na == nb) ? cfg.curves[cfg.index_of(na)].self_int : cfg.incidence(na, nb);
            square += da * db * Rational(dot);
        }
    if (square != Rational(k_squared(cfg, sets)))
        throw std::logic_error("pullback_class: (f*K)^2 disagrees with the set-count formula");
    return pc;
}

struct NefEntry {
    std::string curve;
    Rational value; // f*(K_X) . C
    bool contracted = false;
};

struct NefReport {
    std::vector<NefEntry> entries;           // all configuration curves, in config order
    std::vector<std::string> zero_curves;    // non-contracted curves with value 0
    std::vector<std::string> negative_curves;
};

inline NefReport nef_report(const CurveConfig &cfg, const std::vector<ContractionDecl> &sets) {
    PullbackClass pc = pullback_class(cfg, sets);
    NefReport rep;
    for (const auto &c : cfg.curves) {
        NefEntry e;
        e.curve = c.name;
        e.contracted = pc.coeffs.count(c.name) > 0;
        Rational v(canonical_degree(cfg, c.name));
        for (const auto &[name, d] : pc.coeffs) {
            long dot = (name == c.name) ? c.self_int : cfg.incidence(name, c.name);
            v += d * Rational(dot);
        }
        e.value = v;
        if (e.contracted && v != 0)
            throw std::logic_error("nef_report: contracted curve " + c.name +
                                   " has nonzero pullback degree");
        if (!e.contracted) {
            if (v == 0)
                rep.zero_curves.push_back(c.name);
            else if (v < 0)
                rep.negative_curves.push_back(c.name);
        }
        rep.entries.push_back(e);
    }
    return rep;
}

enum class AmpleKind { Ample, NefNotAmple, NotNef, Inconclusive };

struct AmpleVerdict {
    AmpleKind kind = AmpleKind::Inconclusive;
    std::vector<std::string> zero_curves;
    std::string witness; // for NotNef
    std::string reason;  // for Inconclusive

    std::string to_string() const {
        switch (kind) {
        case AmpleKind::Ample:
            return "ample";
        case AmpleKind::NefNotAmple: {
            std::string s = "nef_not_ample(";
            for (std::size_t i = 0; i < zero_curves.size(); ++i)
                s += (i ? "," : "") + zero_curves[i];
            return s + ")";
        }
        case AmpleKind::NotNef:
            return "not_nef(" + witness + ")";
        case AmpleKind::Inconclusive:
            return "inconclusive(" + reason + ")";
        }
        return "";
    }
};

// Certificate check for ampleness of K_X, relative to the configuration and
// the declared-fiber argument: K_X is nef with no zero curves, (f*K)^2 > 0,
// and f*K is supported (with positive coefficients) on a set containing all
// components of the named fiber, so any curve of Z outside the configuration
// meets it nonnegatively and the finitely many config checks suffice.
inline AmpleVerdict ample_certificate(const CurveConfig &cfg,
                                      const std::vector<ContractionDecl> &sets,
                                      const std::string &fiber_name) {
    const Fiber *fiber = nullptr;
    for (const auto &f : cfg.fibers)
        if (f.name == fiber_name)
            fiber = &f;
    if (!fiber)
        throw std::domain_error("fiber " + fiber_name + " is not declared in the configuration");
    NefReport rep = nef_report(cfg, sets);
    AmpleVerdict v;
    if (!rep.negative_curves.empty()) {
        v.kind = AmpleKind::NotNef;
        v.witness = rep.negative_curves.front();
        return v;
    }
    if (!rep.zero_curves.empty()) {
        v.kind = AmpleKind::NefNotAmple;
        v.zero_curves = rep.zero_curves;
        return v;
    }
    if (k_squared(cfg, sets) <= 0) {
        v.kind = AmpleKind::Inconclusive;
        v.reason = "(f*K)^2 is not positive";
        return v;
    }
    std::map<std::string, Rational> values;
    for (const auto &e : rep.entries)
        values[e.curve] = e.value;
    Rational fiber_degree(0);
    for (const auto &c : fiber->components) {
        fiber_degree += Rational(c.mult) * values.at(c.curve);
        // Every fiber component must carry positive coefficient in the
        // effective support: contracted curves do (d_i > 0); the rest must
        // meet f*K positively.
        bool contracted = false;
        for (const auto &s : sets)
            for (const auto &n : s.curves)
                if (n == c.curve)
                    contracted = true;
        if (!contracted && values.at(c.curve) <= 0) {
            v.kind = AmpleKind::Inconclusive;
            v.reason = "fiber component " + c.curve + " not positively supported";
            return v;
        }
    }
    if (fiber_degree <= 0) {
        v.kind = AmpleKind::Inconclusive;
        v.reason = "f*K has nonpositive degree on the declared fiber";
        return v;
    }
    v.kind = AmpleKind::Ample;
    return v;
}

} // namespace ksba
