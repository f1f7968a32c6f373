#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "ksba/linalg.hpp"
#include "ksba/rational.hpp"

namespace ksba {

using json = nlohmann::json;

struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Curve {
    std::string name;
    long self_int = 0;
    long arith_genus = 0; // p_a; nodal curves carry p_a = 1 until the node is blown up
};

// Declaration of a set of curves to contract (chain order for chains; for a
// star the center is named separately and also listed in `curves`).
struct ContractionDecl {
    std::string name;
    std::vector<std::string> curves;
    std::optional<std::string> center;
};

struct FiberComponent {
    std::string curve;
    long mult = 1;
};

struct Fiber {
    std::string name;
    std::vector<FiberComponent> components;
};

// A curve meeting two contracted components (its "ends"); carries the
// homotopy identification used by the trivialization engine.  Ends may name
// the same curve when the bridge meets it twice (blow-up of a node).
struct Bridge {
    std::string curve;
    std::string ends[2];
};

struct BlowUpCenter {
    std::string curve;
    long mult = 1;
};

struct BlowUpSpec {
    std::vector<BlowUpCenter> center; // empty = free point
    std::string new_name;
};

// The dual-graph model of a curve configuration on a smooth surface Z:
// named curves with self-intersections and genera, pairwise intersection
// multiplicities, K_Z^2, plus the bundled verification data (declared fibers,
// contraction sets, bridges, the source's pullback coefficients as commentary,
// and an optional derivation script kept verbatim for the obstruction module).
struct CurveConfig {
    long kz_squared = 0;
    std::vector<Curve> curves;
    std::map<std::pair<std::size_t, std::size_t>, long> incidences; // key i<j, value > 0
    std::vector<Fiber> fibers;
    std::vector<ContractionDecl> contractions;
    std::vector<Bridge> bridges;
    std::map<std::string, Rational> pullback_commentary;
    json derivation; // null when absent
    std::vector<std::string> notes;

    std::size_t index_of(const std::string &name) const {
        for (std::size_t i = 0; i < curves.size(); ++i)
            if (curves[i].name == name)
                return i;
        throw ParseError("unknown curve reference: " + name);
    }

    bool has_curve(const std::string &name) const {
        return std::any_of(curves.begin(), curves.end(),
                           [&](const Curve &c) { return c.name == name; });
    }

    long incidence(std::size_t i, std::size_t j) const {
        if (i == j)
            throw std::invalid_argument("incidence of a curve with itself is not stored");
        auto key = std::minmax(i, j);
        auto it = incidences.find({key.first, key.second});
        return it == incidences.end() ? 0 : it->second;
    }

    long incidence(const std::string &a, const std::string &b) const {
        return incidence(index_of(a), index_of(b));
    }

    void set_incidence(std::size_t i, std::size_t j, long mult) {
        if (i == j)
            throw std::invalid_argument("self-incidence not allowed");
        if (mult < 0)
            throw std::domain_error("negative incidence between " + curves[i].name + " and " +
                                    curves[j].name);
        auto key = std::minmax(i, j);
        if (mult == 0)
            incidences.erase({key.first, key.second});
        else
            incidences[{key.first, key.second}] = mult;
    }
};

// K_Z . C by adjunction on a smooth surface.
inline long canonical_degree(const CurveConfig &cfg, const std::string &name) {
    const Curve &c = cfg.curves[cfg.index_of(name)];
    return 2 * c.arith_genus - 2 - c.self_int;
}

inline IntMatrix intersection_matrix(const CurveConfig &cfg,
                                     const std::vector<std::string> &subset) {
    std::vector<std::size_t> idx;
    idx.reserve(subset.size());
    for (const auto &n : subset)
        idx.push_back(cfg.index_of(n));
    IntMatrix m(idx.size(), idx.size());
    for (std::size_t i = 0; i < idx.size(); ++i) {
        m.at(i, i) = cfg.curves[idx[i]].self_int;
        for (std::size_t j = i + 1; j < idx.size(); ++j)
            m.at(i, j) = m.at(j, i) = cfg.incidence(idx[i], idx[j]);
    }
    return m;
}

// Blow up a point of Z.  The center lists the curves through the point with
// their multiplicities there; the exceptional curve joins the configuration
// with self-intersection -1.  A point of multiplicity m on a curve lowers its
// arithmetic genus by m(m-1)/2 (blowing up the node of a nodal curve makes
// its strict transform smooth).
inline CurveConfig blow_up(const CurveConfig &cfg, const BlowUpSpec &spec) {
    if (cfg.has_curve(spec.new_name))
        throw std::domain_error("blow_up: curve name already used: " + spec.new_name);
    CurveConfig out = cfg;
    std::vector<std::pair<std::size_t, long>> center;
    for (const auto &c : spec.center) {
        if (c.mult < 1)
            throw std::domain_error("blow_up: center multiplicity must be >= 1");
        center.emplace_back(out.index_of(c.curve), c.mult);
    }
    for (std::size_t i = 0; i < center.size(); ++i)
        for (std::size_t j = i + 1; j < center.size(); ++j)
            if (center[i].first == center[j].first)
                throw std::domain_error("blow_up: duplicate center curve");
    const std::size_t newidx = out.curves.size();
    out.curves.push_back(Curve{spec.new_name, -1, 0});
    for (const auto &[ci, mi] : center) {
        Curve &c = out.curves[ci];
        c.self_int -= mi * mi;
        long drop = mi * (mi - 1) / 2;
        if (c.arith_genus < drop)
            throw std::domain_error("blow_up: multiplicity exceeds what the genus of " + c.name +
                                    " allows");
        c.arith_genus -= drop;
        out.set_incidence(ci, newidx, mi);
    }
    for (std::size_t i = 0; i < center.size(); ++i)
        for (std::size_t j = i + 1; j < center.size(); ++j) {
            const auto &[ci, mi] = center[i];
            const auto &[cj, mj] = center[j];
            long v = out.incidence(ci, cj) - mi * mj;
            if (v < 0)
                throw std::domain_error("blow_up: curves " + out.curves[ci].name + " and " +
                                        out.curves[cj].name + " do not meet at the center");
            out.set_incidence(ci, cj, v);
        }
    out.kz_squared -= 1;
    return out;
}

// Contract a (-1)-curve; exact inverse of blow_up with the contracted curve's
// incidences as the center.
inline CurveConfig blow_down(const CurveConfig &cfg, const std::string &name) {
    const std::size_t e = cfg.index_of(name);
    if (cfg.curves[e].self_int != -1 || cfg.curves[e].arith_genus != 0)
        throw std::domain_error("blow_down: " + name + " is not a smooth rational (-1)-curve");
    CurveConfig out;
    out.kz_squared = cfg.kz_squared + 1;
    std::vector<std::size_t> remap(cfg.curves.size());
    for (std::size_t i = 0; i < cfg.curves.size(); ++i) {
        if (i == e)
            continue;
        remap[i] = out.curves.size();
        out.curves.push_back(cfg.curves[i]);
    }
    std::vector<std::pair<std::size_t, long>> center; // old indices
    for (std::size_t i = 0; i < cfg.curves.size(); ++i)
        if (i != e && cfg.incidence(i, e) > 0)
            center.emplace_back(i, cfg.incidence(i, e));
    for (const auto &[ci, mi] : center)
        out.curves[remap[ci]].self_int += mi * mi;
    for (const auto &[key, mult] : cfg.incidences) {
        if (key.first == e || key.second == e)
            continue;
        out.set_incidence(remap[key.first], remap[key.second], mult);
    }
    for (std::size_t i = 0; i < center.size(); ++i)
        for (std::size_t j = i + 1; j < center.size(); ++j) {
            std::size_t a = remap[center[i].first], b = remap[center[j].first];
            out.set_incidence(a, b, out.incidence(a, b) + center[i].second * center[j].second);
        }
    out.fibers = cfg.fibers;
    out.contractions = cfg.contractions;
    out.bridges = cfg.bridges;
    out.pullback_commentary = cfg.pullback_commentary;
    out.derivation = cfg.derivation;
    out.notes = cfg.notes;
    return out;
}

namespace detail {

inline void reject_unknown_keys(const json &j, std::initializer_list<const char *> allowed,
                                const std::string &where) {
    for (auto it = j.begin(); it != j.end(); ++it) {
        bool ok = false;
        for (const char *k : allowed)
            if (it.key() == k)
                ok = true;
        if (!ok)
            throw ParseError("unknown key \"" + it.key() + "\" in " + where);
    }
}

} // namespace detail

inline CurveConfig parse_config(const std::string &text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error &e) {
        throw ParseError(std::string("configuration is not valid JSON: ") + e.what());
    }
    if (!j.is_object())
        throw ParseError("configuration root must be an object");
    detail::reject_unknown_keys(j,
                                {"kz_squared", "curves", "incidences", "fibers", "contractions",
                                 "bridges", "pullback", "derivation", "notes"},
                                "configuration root");
    if (!j.contains("kz_squared") || !j.contains("curves"))
        throw ParseError("configuration requires kz_squared and curves");
    CurveConfig cfg;
    cfg.kz_squared = j.at("kz_squared").get<long>();
    for (const auto &cj : j.at("curves")) {
        detail::reject_unknown_keys(cj, {"name", "self_int", "genus"}, "curve entry");
        Curve c;
        c.name = cj.at("name").get<std::string>();
        c.self_int = cj.at("self_int").get<long>();
        c.arith_genus = cj.value("genus", 0L);
        if (c.arith_genus < 0)
            throw ParseError("curve " + c.name + ": genus must be nonnegative");
        if (cfg.has_curve(c.name))
            throw ParseError("duplicate curve name: " + c.name);
        cfg.curves.push_back(c);
    }
    for (const auto &ij : j.value("incidences", json::array())) {
        detail::reject_unknown_keys(ij, {"a", "b", "mult"}, "incidence entry");
        std::size_t a = cfg.index_of(ij.at("a").get<std::string>());
        std::size_t b = cfg.index_of(ij.at("b").get<std::string>());
        long mult = ij.value("mult", 1L);
        if (a == b)
            throw ParseError("incidence of a curve with itself: " + cfg.curves[a].name);
        if (mult < 1)
            throw ParseError("incidence multiplicity must be >= 1");
        if (cfg.incidence(a, b) != 0)
            throw ParseError("duplicate incidence between " + cfg.curves[a].name + " and " +
                             cfg.curves[b].name);
        cfg.set_incidence(a, b, mult);
    }
    for (const auto &fj : j.value("fibers", json::array())) {
        detail::reject_unknown_keys(fj, {"name", "components"}, "fiber entry");
        Fiber f;
        f.name = fj.at("name").get<std::string>();
        for (const auto &cj : fj.at("components")) {
            detail::reject_unknown_keys(cj, {"curve", "mult"}, "fiber component");
            FiberComponent fc;
            fc.curve = cj.at("curve").get<std::string>();
            fc.mult = cj.value("mult", 1L);
            cfg.index_of(fc.curve);
            if (fc.mult < 1)
                throw ParseError("fiber component multiplicity must be >= 1");
            f.components.push_back(fc);
        }
        cfg.fibers.push_back(f);
    }
    for (const auto &sj : j.value("contractions", json::array())) {
        detail::reject_unknown_keys(sj, {"name", "curves", "center"}, "contraction entry");
        ContractionDecl d;
        d.name = sj.at("name").get<std::string>();
        for (const auto &n : sj.at("curves")) {
            d.curves.push_back(n.get<std::string>());
            cfg.index_of(d.curves.back());
        }
        if (sj.contains("center")) {
            d.center = sj.at("center").get<std::string>();
            if (std::find(d.curves.begin(), d.curves.end(), *d.center) == d.curves.end())
                throw ParseError("contraction " + d.name + ": center must be one of its curves");
        }
        cfg.contractions.push_back(d);
    }
    for (const auto &bj : j.value("bridges", json::array())) {
        detail::reject_unknown_keys(bj, {"curve", "ends"}, "bridge entry");
        Bridge b;
        b.curve = bj.at("curve").get<std::string>();
        cfg.index_of(b.curve);
        const auto &ends = bj.at("ends");
        if (!ends.is_array() || ends.size() != 2)
            throw ParseError("bridge " + b.curve + ": ends must list exactly two curves");
        b.ends[0] = ends[0].get<std::string>();
        b.ends[1] = ends[1].get<std::string>();
        cfg.index_of(b.ends[0]);
        cfg.index_of(b.ends[1]);
        cfg.bridges.push_back(b);
    }
    if (j.contains("pullback"))
        for (auto it = j.at("pullback").begin(); it != j.at("pullback").end(); ++it) {
            cfg.index_of(it.key());
            cfg.pullback_commentary[it.key()] =
                rational_from_string(it.value().get<std::string>());
        }
    if (j.contains("derivation"))
        cfg.derivation = j.at("derivation");
    for (const auto &n : j.value("notes", json::array()))
        cfg.notes.push_back(n.get<std::string>());
    return cfg;
}

inline json config_to_json(const CurveConfig &cfg) {
    json j;
    j["kz_squared"] = cfg.kz_squared;
    j["curves"] = json::array();
    for (const auto &c : cfg.curves) {
        json cj{{"name", c.name}, {"self_int", c.self_int}};
        if (c.arith_genus != 0)
            cj["genus"] = c.arith_genus;
        j["curves"].push_back(cj);
    }
    j["incidences"] = json::array();
    for (const auto &[key, mult] : cfg.incidences)
        j["incidences"].push_back(json{{"a", cfg.curves[key.first].name},
                                       {"b", cfg.curves[key.second].name},
                                       {"mult", mult}});
    if (!cfg.fibers.empty()) {
        j["fibers"] = json::array();
        for (const auto &f : cfg.fibers) {
            json comps = json::array();
            for (const auto &c : f.components)
                comps.push_back(json{{"curve", c.curve}, {"mult", c.mult}});
            j["fibers"].push_back(json{{"name", f.name}, {"components", comps}});
        }
    }
    if (!cfg.contractions.empty()) {
        j["contractions"] = json::array();
        for (const auto &d : cfg.contractions) {
            json sj{{"name", d.name}, {"curves", d.curves}};
            if (d.center)
                sj["center"] = *d.center;
            j["contractions"].push_back(sj);
        }
    }
    if (!cfg.bridges.empty()) {
        j["bridges"] = json::array();
        for (const auto &b : cfg.bridges)
            j["bridges"].push_back(
                json{{"curve", b.curve}, {"ends", json::array({b.ends[0], b.ends[1]})}});
    }
    if (!cfg.pullback_commentary.empty()) {
        j["pullback"] = json::object();
        for (const auto &[name, coeff] : cfg.pullback_commentary)
            j["pullback"][name] = rational_to_string(coeff);
    }
    if (!cfg.derivation.is_null())
        j["derivation"] = cfg.derivation;
    if (!cfg.notes.empty())
        j["notes"] = cfg.notes;
    return j;
}

inline std::string serialize_config(const CurveConfig &cfg) {
    return config_to_json(cfg).dump(2) + "\n";
}

} // namespace ksba
