#pragma once

#include <algorithm>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "ksba/linalg.hpp"
#include "ksba/rational.hpp"

namespace ksba {

// A Hirzebruch-Jung string [e1,...,es], all entries >= 2.  Encodes the
// resolution chain of a cyclic quotient singularity 1/p(1,q) with
// p/q = e1 - 1/(e2 - 1/(...)).
struct Chain {
    std::vector<long> entries;

    explicit Chain(std::vector<long> e) : entries(std::move(e)) {
        if (entries.empty())
            throw std::invalid_argument("chain must be nonempty");
        for (long v : entries)
            if (v < 2)
                throw std::invalid_argument("chain entries must be >= 2");
    }

    auto operator<=>(const Chain &) const = default;

    std::string to_string() const {
        std::string s = "[";
        for (std::size_t i = 0; i < entries.size(); ++i)
            s += (i ? "," : "") + std::to_string(entries[i]);
        return s + "]";
    }
};

// Parameters of a Wahl singularity 1/n^2(1, na-1), normalized so a <= n-a.
struct WahlParams {
    Int n;
    Int a;
    auto operator<=>(const WahlParams &) const = default;
};

// Star-shaped resolution graph: three legs of single curves with weights
// -leg[i], center with weight -center.
struct QeqStar {
    long legs[3];
    long center;
};

enum class QeqType { Z3, Z4, Z6 };

inline std::string qeq_type_name(QeqType t) {
    switch (t) {
    case QeqType::Z3: return "Z3";
    case QeqType::Z4: return "Z4";
    case QeqType::Z6: return "Z6";
    }
    return "";
}

// Evaluate the continued fraction right-to-left; returns coprime (p, q).
inline std::pair<Int, Int> hj_eval(const Chain &c) {
    // Value so far is num/den; prepending e gives e - den/num = (e*num-den)/num.
    Int num(1), den(0);
    for (auto it = c.entries.rbegin(); it != c.entries.rend(); ++it) {
        Int nnum = Int(*it) * num - den;
        den = num;
        num = nnum;
    }
    return {num, den};
}

// Expand p/q (coprime, p > q >= 1) as a Hirzebruch-Jung continued fraction
// via ceiling divisions.
inline Chain hj_expand(const Int &p, const Int &q) {
    if (q < 1 || p <= q)
        throw std::invalid_argument("hj_expand requires p > q >= 1");
    if (gcd(p, q) != 1)
        throw std::invalid_argument("hj_expand requires gcd(p,q) = 1");
    std::vector<long> entries;
    Int a = p, b = q;
    while (b != 0) {
        Int e = (a + b - 1) / b; // ceil(a/b)
        entries.push_back(e.get_si());
        Int nb = e * b - a; // next fraction is b/(e*b - a)
        a = b;
        b = nb;
    }
    return Chain(entries);
}

// Recognize a Wahl chain: hj_eval(c) = (n^2, na-1) for some coprime (n,a).
inline std::optional<WahlParams> wahl_params(const Chain &c) {
    auto [p, q] = hj_eval(c);
    Int n = sqrt(p);
    if (n * n != p)
        return std::nullopt;
    if ((q + 1) % n != 0)
        return std::nullopt;
    Int a = (q + 1) / n;
    if (a <= 0 || a >= n || gcd(n, a) != 1)
        return std::nullopt;
    if (a > n - a)
        a = n - a;
    return WahlParams{n, a};
}

// All chains reachable from [4] by the two Wahl extension rules
// [e1,...,es] -> [e1+1,...,es,2] and [2,e1,...,es+1], up to max_length.
inline std::set<Chain> wahl_generate(std::size_t max_length) {
    if (max_length < 1)
        throw std::invalid_argument("wahl_generate requires max_length >= 1");
    std::set<Chain> out;
    std::vector<Chain> frontier{Chain({4})};
    out.insert(frontier.front());
    while (!frontier.empty()) {
        std::vector<Chain> next;
        for (const Chain &c : frontier) {
            if (c.entries.size() + 1 > max_length)
                continue;
            std::vector<long> left = c.entries;
            ++left.front();
            left.push_back(2);
            std::vector<long> right = c.entries;
            ++right.back();
            right.insert(right.begin(), 2);
            for (auto &e : {left, right}) {
                Chain cand(e);
                if (out.insert(cand).second)
                    next.push_back(cand);
            }
        }
        frontier = std::move(next);
    }
    return out;
}

// The reversed chain describes the same singularity with the dual coordinate:
// if hj_eval(c) = (p, q) then hj_eval(reverse(c)) = (p, q') with qq' = 1 mod p.
inline Chain chain_dual(const Chain &c) {
    std::vector<long> rev(c.entries.rbegin(), c.entries.rend());
    return Chain(rev);
}

// The three elliptic quotient stars admitting rational homology disk
// smoothings, keyed by the order of the smoothing's Milnor-fiber group.
inline std::optional<QeqType> qeq_classify(const QeqStar &s) {
    std::vector<long> legs{s.legs[0], s.legs[1], s.legs[2]};
    std::sort(legs.begin(), legs.end());
    if (legs == std::vector<long>{3, 3, 3} && s.center == 4)
        return QeqType::Z3;
    if (legs == std::vector<long>{2, 4, 4} && s.center == 3)
        return QeqType::Z4;
    if (legs == std::vector<long>{2, 3, 6} && s.center == 2)
        return QeqType::Z6;
    return std::nullopt;
}

// Intersection matrix of a chain: diagonal -e_i, off-diagonal 1 on the
// superdiagonal/subdiagonal.
inline IntMatrix chain_matrix(const Chain &c) {
    const std::size_t n = c.entries.size();
    IntMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        m.at(i, i) = -c.entries[i];
        if (i + 1 < n)
            m.at(i, i + 1) = m.at(i + 1, i) = 1;
    }
    return m;
}

// Intersection matrix of a star, center last.
inline IntMatrix star_matrix(const QeqStar &s) {
    IntMatrix m(4, 4);
    for (std::size_t i = 0; i < 3; ++i) {
        m.at(i, i) = -s.legs[i];
        m.at(i, 3) = m.at(3, i) = 1;
    }
    m.at(3, 3) = -s.center;
    return m;
}

} // namespace ksba
