#pragma once

#include <algorithm>
#include <set>
#include <string>
#include <vector>

#include "ksba/curveconfig.hpp"
#include "ksba/linalg.hpp"

namespace ksba {

// Verdict of replaying a derivation script.  `valid` means the script is
// well-formed, every step obeys its side conditions, the replayed
// configuration matches the bundled one, and the accumulated divisor D covers
// every contracted curve.  Those side conditions are exactly what makes the
// obstruction space H^2(T_Z(-log D)) vanish step by step, which is what the
// bundled contraction data relies on.
struct DerivationVerdict {
    bool valid = false;
    std::size_t step = 0; // index of the offending step when invalid
    std::string reason;

    std::string to_string() const {
        if (valid)
            return "valid";
        return "invalid at step " + std::to_string(step) + ": " + reason;
    }
};

namespace detail {

// D-membership bookkeeping during a replay.
struct Replay {
    CurveConfig cfg;
    std::set<std::string> divisor; // reduced support of D

    bool in_divisor(const std::string &n) const { return divisor.count(n) > 0; }
};

// A curve may join or leave D only if it is a smooth rational (-1)-curve
// meeting D transversally: each D-curve at most once, unless the contact is
// explicitly asserted to consist of distinct transverse points.
inline std::string minus_one_violation(const Replay &r, const std::string &name,
                                       const std::vector<std::string> &distinct) {
    const Curve &c = r.cfg.curves[r.cfg.index_of(name)];
    if (c.self_int != -1 || c.arith_genus != 0)
        return "minus-one rule: " + name + " is not a smooth rational (-1)-curve here";
    for (const auto &d : r.divisor) {
        if (d == name)
            continue;
        long m = r.cfg.incidence(name, d);
        if (m > 1 && std::find(distinct.begin(), distinct.end(), d) == distinct.end())
            return "minus-one rule: " + name + " meets " + d +
                   " with multiplicity > 1 and no distinct-points assertion";
    }
    return "";
}

} // namespace detail

// Replay the "derivation" script bundled with a configuration.  The script
// starts from a relatively minimal elliptic model and reaches the bundled
// configuration through moves that each preserve unobstructedness of the pair
// (Z, D): seeding D with fibers and sections of the fibration, blowing up
// points of D, adding or deleting transverse (-1)-curves, and adding disjoint
// exceptional trees of (-2)-curves.
//
// Malformed scripts (bad JSON shape, unknown curve names) throw ParseError;
// scripts that violate a side condition return an invalid verdict.
inline DerivationVerdict check_derivation(const CurveConfig &target) {
    const json &script = target.derivation;
    if (!script.is_array() || script.empty())
        throw ParseError("derivation script must be a nonempty array of steps");

    DerivationVerdict v;
    detail::Replay r;
    auto fail = [&](std::size_t step, const std::string &why) {
        v.valid = false;
        v.step = step;
        v.reason = why;
        return v;
    };

    for (std::size_t si = 0; si < script.size(); ++si) {
        const json &st = script[si];
        if (!st.is_object() || !st.contains("op"))
            throw ParseError("derivation step " + std::to_string(si) + " has no op");
        const std::string op = st.at("op").get<std::string>();

        if (op == "start") {
            if (si != 0)
                return fail(si, "start must be the first step");
            detail::reject_unknown_keys(st, {"op", "kz_squared", "curves", "incidences"},
                                        "start step");
            json base{{"kz_squared", st.at("kz_squared")}, {"curves", st.at("curves")}};
            if (st.contains("incidences"))
                base["incidences"] = st.at("incidences");
            r.cfg = parse_config(base.dump());
            continue;
        }
        if (si == 0)
            return fail(si, "derivation must start with a start step");

        if (op == "seed_fibration") {
            if (si != 1)
                return fail(si, "seed rule: the fibration seed must follow the start step");
            detail::reject_unknown_keys(st, {"op", "fibers", "sections", "node_blowups"},
                                        "seed step");
            // Validate fibers on the starting surface: each declared class is
            // orthogonal to its components; nodal fibers are irreducible of
            // arithmetic genus one, reduced normal-crossing fibers consist of
            // rational components.
            struct SeedFiber {
                std::string name;
                bool nodal;
                std::vector<FiberComponent> comps;
            };
            std::vector<SeedFiber> fibers;
            for (const auto &fj : st.at("fibers")) {
                detail::reject_unknown_keys(fj, {"name", "type", "components"}, "seed fiber");
                SeedFiber f;
                f.name = fj.at("name").get<std::string>();
                const std::string type = fj.at("type").get<std::string>();
                if (type != "nodal" && type != "snc")
                    throw ParseError("seed fiber " + f.name + ": type must be nodal or snc");
                f.nodal = type == "nodal";
                for (const auto &cj : fj.at("components")) {
                    detail::reject_unknown_keys(cj, {"curve", "mult"}, "seed fiber component");
                    FiberComponent fc;
                    fc.curve = cj.at("curve").get<std::string>();
                    fc.mult = cj.value("mult", 1L);
                    r.cfg.index_of(fc.curve);
                    f.comps.push_back(fc);
                }
                fibers.push_back(f);
            }
            for (const auto &f : fibers) {
                for (const auto &c : f.comps) {
                    // fiber . component = 0
                    Int dot(0);
                    for (const auto &d : f.comps) {
                        long m = (d.curve == c.curve)
                                     ? r.cfg.curves[r.cfg.index_of(c.curve)].self_int
                                     : r.cfg.incidence(d.curve, c.curve);
                        dot += Int(d.mult) * m;
                    }
                    if (dot != 0)
                        return fail(si, "seed rule: class of " + f.name +
                                            " is not orthogonal to component " + c.curve);
                    long genus = r.cfg.curves[r.cfg.index_of(c.curve)].arith_genus;
                    long want = f.nodal ? 1 : 0;
                    if (genus != want)
                        return fail(si, "seed rule: component " + c.curve + " of " + f.name +
                                            " has arithmetic genus " + std::to_string(genus));
                }
                if (f.nodal && f.comps.size() != 1)
                    return fail(si, "seed rule: nodal fiber " + f.name +
                                        " must be irreducible");
            }
            // Sections must be smooth rational (-1)-curves of the starting
            // surface (checked before the node blow-ups).
            std::vector<std::string> sections;
            for (const auto &sj : st.value("sections", json::array())) {
                sections.push_back(sj.get<std::string>());
                const Curve &c = r.cfg.curves[r.cfg.index_of(sections.back())];
                if (c.self_int != -1 || c.arith_genus != 0)
                    return fail(si, "seed rule: section " + sections.back() +
                                        " is not a (-1)-curve of the starting surface");
            }
            // Each nodal fiber needs exactly one blow-up at its node; the
            // exceptional curve joins D and the strict transform of the
            // fiber becomes smooth.
            std::set<std::string> blown;
            std::vector<std::string> exceptionals;
            for (const auto &bj : st.value("node_blowups", json::array())) {
                detail::reject_unknown_keys(bj, {"fiber", "new_name", "center"},
                                            "node blow-up");
                const std::string fname = bj.at("fiber").get<std::string>();
                const SeedFiber *f = nullptr;
                for (const auto &sf : fibers)
                    if (sf.name == fname)
                        f = &sf;
                if (!f || !f->nodal)
                    return fail(si, "seed rule: node blow-up names no nodal fiber: " + fname);
                if (!blown.insert(fname).second)
                    return fail(si, "seed rule: nodal fiber " + fname + " blown up twice");
                BlowUpSpec spec;
                spec.new_name = bj.at("new_name").get<std::string>();
                bool hits_node = false;
                for (const auto &cj : bj.at("center")) {
                    detail::reject_unknown_keys(cj, {"curve", "mult"}, "node blow-up center");
                    BlowUpCenter bc;
                    bc.curve = cj.at("curve").get<std::string>();
                    bc.mult = cj.value("mult", 1L);
                    if (bc.curve == f->comps.front().curve && bc.mult == 2)
                        hits_node = true;
                    spec.center.push_back(bc);
                }
                if (!hits_node)
                    return fail(si, "seed rule: blow-up center misses the node of " + fname);
                r.cfg = blow_up(r.cfg, spec);
                exceptionals.push_back(spec.new_name);
            }
            for (const auto &f : fibers)
                if (f.nodal && !blown.count(f.name))
                    return fail(si, "seed rule: nodal fiber " + f.name +
                                        " requires a node blow-up");
            // Assemble D: reduced fiber supports, node exceptionals, sections.
            for (const auto &f : fibers)
                for (const auto &c : f.comps)
                    r.divisor.insert(c.curve);
            for (const auto &e : exceptionals)
                r.divisor.insert(e);
            for (const auto &s : sections) {
                std::string why = detail::minus_one_violation(r, s, {});
                if (!why.empty() && why.find("not a smooth") == std::string::npos)
                    return fail(si, "seed rule: section " + s + " does not meet D "
                                    "transversally");
                r.divisor.insert(s);
            }
            continue;
        }

        if (op == "blow_up") {
            detail::reject_unknown_keys(st, {"op", "new_name", "center"}, "blow-up step");
            BlowUpSpec spec;
            spec.new_name = st.at("new_name").get<std::string>();
            bool touches = st.at("center").empty();
            for (const auto &cj : st.at("center")) {
                detail::reject_unknown_keys(cj, {"curve", "mult"}, "blow-up center");
                BlowUpCenter bc;
                bc.curve = cj.at("curve").get<std::string>();
                bc.mult = cj.value("mult", 1L);
                if (r.in_divisor(bc.curve))
                    touches = true;
                spec.center.push_back(bc);
            }
            if (!touches)
                return fail(si, "blow-up rule: center of " + spec.new_name +
                                    " does not lie on D");
            try {
                r.cfg = blow_up(r.cfg, spec);
            } catch (const std::domain_error &e) {
                return fail(si, std::string("blow-up rule: ") + e.what());
            }
            r.divisor.insert(spec.new_name);
            continue;
        }

        if (op == "add_minus_one" || op == "delete_minus_one") {
            detail::reject_unknown_keys(st, {"op", "curve", "distinct"}, "minus-one step");
            const std::string name = st.at("curve").get<std::string>();
            r.cfg.index_of(name);
            std::vector<std::string> distinct;
            for (const auto &dj : st.value("distinct", json::array()))
                distinct.push_back(dj.get<std::string>());
            const bool adding = op == "add_minus_one";
            if (adding == r.in_divisor(name))
                return fail(si, "minus-one rule: " + name +
                                    (adding ? " is already part of D" : " is not part of D"));
            std::string why = detail::minus_one_violation(r, name, distinct);
            if (!why.empty())
                return fail(si, why);
            if (adding)
                r.divisor.insert(name);
            else
                r.divisor.erase(name);
            continue;
        }

        if (op == "add_ade") {
            detail::reject_unknown_keys(st, {"op", "curves"}, "ade step");
            std::vector<std::string> names;
            for (const auto &nj : st.at("curves")) {
                names.push_back(nj.get<std::string>());
                r.cfg.index_of(names.back());
            }
            if (names.empty())
                return fail(si, "ade rule: empty configuration");
            for (const auto &n : names) {
                const Curve &c = r.cfg.curves[r.cfg.index_of(n)];
                if (c.self_int != -2 || c.arith_genus != 0)
                    return fail(si, "ade rule: " + n + " is not a smooth rational (-2)-curve");
                if (r.in_divisor(n))
                    return fail(si, "ade rule: " + n + " is already part of D");
                for (const auto &d : r.divisor)
                    if (r.cfg.incidence(n, d) > 0)
                        return fail(si, "ade rule: " + n + " meets D along " + d);
            }
            if (!is_negative_definite(intersection_matrix(r.cfg, names)))
                return fail(si, "ade rule: configuration is not an exceptional tree");
            for (const auto &n : names)
                r.divisor.insert(n);
            continue;
        }

        throw ParseError("unknown derivation op: " + op);
    }

    // Replay must land exactly on the bundled configuration.
    if (r.cfg.kz_squared != target.kz_squared)
        return fail(script.size(), "replay mismatch: K_Z^2 is " +
                                       std::to_string(r.cfg.kz_squared) + ", expected " +
                                       std::to_string(target.kz_squared));
    if (r.cfg.curves.size() != target.curves.size())
        return fail(script.size(), "replay mismatch: curve count differs");
    for (const auto &c : target.curves) {
        if (!r.cfg.has_curve(c.name))
            return fail(script.size(), "replay mismatch: curve " + c.name + " never appears");
        const Curve &rc = r.cfg.curves[r.cfg.index_of(c.name)];
        if (rc.self_int != c.self_int || rc.arith_genus != c.arith_genus)
            return fail(script.size(), "replay mismatch: curve " + c.name +
                                           " has self-intersection " +
                                           std::to_string(rc.self_int) + ", genus " +
                                           std::to_string(rc.arith_genus));
    }
    for (std::size_t i = 0; i < target.curves.size(); ++i)
        for (std::size_t j = i + 1; j < target.curves.size(); ++j) {
            const std::string &a = target.curves[i].name, &b = target.curves[j].name;
            if (r.cfg.incidence(a, b) != target.incidence(i, j))
                return fail(script.size(), "replay mismatch: incidence of " + a + " and " + b);
        }
    // The unobstructedness argument only covers curves inside D.
    for (const auto &s : target.contractions)
        for (const auto &n : s.curves)
            if (!r.divisor.count(n))
                return fail(script.size(),
                            "coverage rule: contracted curve " + n + " is not part of D");
    v.valid = true;
    v.step = script.size();
    return v;
}

} // namespace ksba
