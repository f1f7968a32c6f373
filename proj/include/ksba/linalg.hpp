#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "ksba/rational.hpp"

namespace ksba {

// Dense integer matrix with arbitrary-precision entries.  Used almost
// exclusively for intersection matrices of curve configurations, which are
// square and symmetric, but the type itself is general.
struct IntMatrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<Int> entries; // row-major

    IntMatrix() = default;
    IntMatrix(std::size_t r, std::size_t c) : rows(r), cols(c), entries(r * c, Int(0)) {}

    Int &at(std::size_t i, std::size_t j) { return entries[i * cols + j]; }
    const Int &at(std::size_t i, std::size_t j) const { return entries[i * cols + j]; }

    bool is_square() const { return rows == cols; }
    bool is_symmetric() const {
        if (!is_square())
            return false;
        for (std::size_t i = 0; i < rows; ++i)
            for (std::size_t j = i + 1; j < cols; ++j)
                if (at(i, j) != at(j, i))
                    return false;
        return true;
    }

    IntMatrix leading_principal(std::size_t k) const {
        IntMatrix m(k, k);
        for (std::size_t i = 0; i < k; ++i)
            for (std::size_t j = 0; j < k; ++j)
                m.at(i, j) = at(i, j);
        return m;
    }
};

// Exact determinant by Bareiss fraction-free elimination: every intermediate
// division is exact, so all values stay integral.
inline Int int_det(const IntMatrix &m) {
    if (!m.is_square())
        throw std::invalid_argument("int_det: matrix is not square");
    const std::size_t n = m.rows;
    if (n == 0)
        return Int(1);
    IntMatrix a = m;
    Int prev(1);
    int sign = 1;
    for (std::size_t k = 0; k + 1 < n; ++k) {
        if (a.at(k, k) == 0) {
            std::size_t piv = k + 1;
            while (piv < n && a.at(piv, k) == 0)
                ++piv;
            if (piv == n)
                return Int(0);
            for (std::size_t j = 0; j < n; ++j)
                std::swap(a.at(k, j), a.at(piv, j));
            sign = -sign;
        }
        for (std::size_t i = k + 1; i < n; ++i)
            for (std::size_t j = k + 1; j < n; ++j) {
                Int v = a.at(i, j) * a.at(k, k) - a.at(i, k) * a.at(k, j);
                mpz_divexact(a.at(i, j).get_mpz_t(), v.get_mpz_t(), prev.get_mpz_t());
            }
        prev = a.at(k, k);
    }
    return sign > 0 ? a.at(n - 1, n - 1) : Int(-a.at(n - 1, n - 1));
}

// Smith normal form invariant factors d1 | d2 | ... (nonnegative; trailing
// zeros represent free rank).  Classical reduction: move a gcd-minimal pivot
// into place, clear its row and column, restart on divisibility violations.
inline std::vector<Int> smith_normal_form(const IntMatrix &m) {
    IntMatrix a = m;
    const std::size_t n = std::min(a.rows, a.cols);
    std::vector<Int> factors;
    std::size_t top = 0;
    while (top < n) {
        // Find a nonzero pivot of minimal absolute value in the working block.
        std::size_t pi = top, pj = top;
        bool found = false;
        Int best(0);
        for (std::size_t i = top; i < a.rows; ++i)
            for (std::size_t j = top; j < a.cols; ++j)
                if (a.at(i, j) != 0) {
                    Int v = abs(a.at(i, j));
                    if (!found || v < best) {
                        best = v;
                        pi = i;
                        pj = j;
                        found = true;
                    }
                }
        if (!found)
            break;
        for (std::size_t j = 0; j < a.cols; ++j)
            std::swap(a.at(top, j), a.at(pi, j));
        for (std::size_t i = 0; i < a.rows; ++i)
            std::swap(a.at(i, top), a.at(i, pj));

        bool reduced = true;
        for (std::size_t i = top + 1; i < a.rows; ++i) {
            Int q = a.at(i, top) / a.at(top, top); // truncated division is fine: we iterate
            if (q != 0)
                for (std::size_t j = 0; j < a.cols; ++j)
                    a.at(i, j) -= q * a.at(top, j);
            if (a.at(i, top) != 0)
                reduced = false;
        }
        for (std::size_t j = top + 1; j < a.cols; ++j) {
            Int q = a.at(top, j) / a.at(top, top);
            if (q != 0)
                for (std::size_t i = 0; i < a.rows; ++i)
                    a.at(i, j) -= q * a.at(i, top);
            if (a.at(top, j) != 0)
                reduced = false;
        }
        if (!reduced)
            continue; // smaller remainders now exist; pick a new pivot
        // Enforce the divisibility chain: pivot must divide the whole block.
        bool divides_all = true;
        for (std::size_t i = top + 1; i < a.rows && divides_all; ++i)
            for (std::size_t j = top + 1; j < a.cols && divides_all; ++j)
                if (a.at(i, j) % a.at(top, top) != 0) {
                    for (std::size_t jj = 0; jj < a.cols; ++jj)
                        a.at(top, jj) += a.at(i, jj);
                    divides_all = false;
                }
        if (!divides_all)
            continue;
        factors.push_back(abs(a.at(top, top)));
        ++top;
    }
    while (factors.size() < n)
        factors.push_back(Int(0));
    return factors;
}

// Negative definiteness via leading principal minors: (-1)^k * minor_k > 0
// for every k, i.e. the minors alternate in sign starting negative.
inline bool is_negative_definite(const IntMatrix &m) {
    if (!m.is_symmetric())
        throw std::invalid_argument("is_negative_definite: matrix is not symmetric");
    for (std::size_t k = 1; k <= m.rows; ++k) {
        Int minor = int_det(m.leading_principal(k));
        if (k % 2 == 1 ? minor >= 0 : minor <= 0)
            return false;
    }
    return true;
}

using RatMatrix = std::vector<std::vector<Rational>>;
using RatVector = std::vector<Rational>;

// Exact solve of m x = b by Gauss-Jordan elimination over the rationals.
inline RatVector rat_solve(RatMatrix m, RatVector b) {
    const std::size_t n = m.size();
    for (const auto &row : m)
        if (row.size() != n)
            throw std::invalid_argument("rat_solve: matrix is not square");
    if (b.size() != n)
        throw std::invalid_argument("rat_solve: dimension mismatch");
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t piv = k;
        while (piv < n && m[piv][k] == 0)
            ++piv;
        if (piv == n)
            throw std::domain_error("rat_solve: singular matrix (row " + std::to_string(k) +
                                    " is dependent)");
        std::swap(m[k], m[piv]);
        std::swap(b[k], b[piv]);
        Rational inv = 1 / m[k][k];
        for (auto &v : m[k])
            v *= inv;
        b[k] *= inv;
        for (std::size_t i = 0; i < n; ++i) {
            if (i == k || m[i][k] == 0)
                continue;
            Rational f = m[i][k];
            for (std::size_t j = 0; j < n; ++j)
                m[i][j] -= f * m[k][j];
            b[i] -= f * b[k];
        }
    }
    return b;
}

} // namespace ksba
