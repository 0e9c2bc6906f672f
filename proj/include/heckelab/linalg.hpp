#pragma once

#include "heckelab/rational.hpp"

#include <optional>
#include <vector>

namespace heckelab {

using QVec = std::vector<Rat>;
using QMat = std::vector<std::vector<Rat>>;
using IVec = std::vector<long>;
using IMat = std::vector<std::vector<long>>;

inline QVec qvec(size_t n, const Rat& v = Rat(0)) { return QVec(n, v); }
inline QMat qmat(size_t r, size_t c, const Rat& v = Rat(0)) { return QMat(r, QVec(c, v)); }
inline QMat qidentity(size_t n)
{
    QMat m = qmat(n, n);
    for (size_t i = 0; i < n; ++i)
        m[i][i] = 1;
    return m;
}

inline QVec to_qvec(const IVec& v)
{
    QVec r(v.size());
    for (size_t i = 0; i < v.size(); ++i)
        r[i] = v[i];
    return r;
}

inline Rat dot(const QVec& a, const QVec& b)
{
    Rat s = 0;
    for (size_t i = 0; i < a.size(); ++i)
        s += a[i] * b[i];
    return s;
}

inline QVec add(const QVec& a, const QVec& b)
{
    QVec r(a.size());
    for (size_t i = 0; i < a.size(); ++i)
        r[i] = a[i] + b[i];
    return r;
}

inline QVec sub(const QVec& a, const QVec& b)
{
    QVec r(a.size());
    for (size_t i = 0; i < a.size(); ++i)
        r[i] = a[i] - b[i];
    return r;
}

inline QVec scale(const Rat& c, const QVec& a)
{
    QVec r(a.size());
    for (size_t i = 0; i < a.size(); ++i)
        r[i] = c * a[i];
    return r;
}

inline bool is_zero_vec(const QVec& a)
{
    for (const auto& x : a)
        if (x != 0)
            return false;
    return true;
}

inline QVec mat_vec(const QMat& m, const QVec& v)
{
    QVec r(m.size(), Rat(0));
    for (size_t i = 0; i < m.size(); ++i)
        for (size_t j = 0; j < v.size(); ++j)
            r[i] += m[i][j] * v[j];
    return r;
}

inline QMat mat_mul(const QMat& a, const QMat& b)
{
    size_t n = a.size(), k = b.size(), m = b.empty() ? 0 : b[0].size();
    QMat r = qmat(n, m);
    for (size_t i = 0; i < n; ++i)
        for (size_t l = 0; l < k; ++l) {
            if (a[i][l] == 0)
                continue;
            for (size_t j = 0; j < m; ++j)
                r[i][j] += a[i][l] * b[l][j];
        }
    return r;
}

inline QMat transpose(const QMat& a)
{
    if (a.empty())
        return {};
    QMat r = qmat(a[0].size(), a.size());
    for (size_t i = 0; i < a.size(); ++i)
        for (size_t j = 0; j < a[0].size(); ++j)
            r[j][i] = a[i][j];
    return r;
}

// Row-reduced echelon form in place; returns pivot columns.
inline std::vector<size_t> rref(QMat& m)
{
    std::vector<size_t> pivots;
    size_t rows = m.size();
    if (rows == 0)
        return pivots;
    size_t cols = m[0].size();
    size_t r = 0;
    for (size_t c = 0; c < cols && r < rows; ++c) {
        size_t p = r;
        while (p < rows && m[p][c] == 0)
            ++p;
        if (p == rows)
            continue;
        std::swap(m[p], m[r]);
        Rat inv = Rat(1) / m[r][c];
        for (size_t j = c; j < cols; ++j)
            m[r][j] *= inv;
        for (size_t i = 0; i < rows; ++i) {
            if (i == r || m[i][c] == 0)
                continue;
            Rat f = m[i][c];
            for (size_t j = c; j < cols; ++j)
                m[i][j] -= f * m[r][j];
        }
        pivots.push_back(c);
        ++r;
    }
    return pivots;
}

inline size_t rank(QMat m) { return rref(m).size(); }

inline Rat determinant(QMat m)
{
    size_t n = m.size();
    Rat det = 1;
    for (size_t c = 0; c < n; ++c) {
        size_t p = c;
        while (p < n && m[p][c] == 0)
            ++p;
        if (p == n)
            return Rat(0);
        if (p != c) {
            std::swap(m[p], m[c]);
            det = -det;
        }
        det *= m[c][c];
        Rat inv = Rat(1) / m[c][c];
        for (size_t i = c + 1; i < n; ++i) {
            if (m[i][c] == 0)
                continue;
            Rat f = m[i][c] * inv;
            for (size_t j = c; j < n; ++j)
                m[i][j] -= f * m[c][j];
        }
    }
    return det;
}

inline std::optional<QMat> try_invert(const QMat& a)
{
    size_t n = a.size();
    QMat aug = qmat(n, 2 * n);
    for (size_t i = 0; i < n; ++i) {
        for (size_t j = 0; j < n; ++j)
            aug[i][j] = a[i][j];
        aug[i][n + i] = 1;
    }
    auto piv = rref(aug);
    if (piv.size() != n || (n > 0 && piv[n - 1] != n - 1))
        return std::nullopt;
    QMat inv = qmat(n, n);
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j)
            inv[i][j] = aug[i][n + j];
    return inv;
}

inline QMat invert(const QMat& a)
{
    auto inv = try_invert(a);
    if (!inv)
        throw Error(Errc::BadInput, "singular matrix");
    return *inv;
}

// Solves A x = b; returns one solution or nullopt when inconsistent.
inline std::optional<QVec> solve(const QMat& a, const QVec& b)
{
    size_t rows = a.size();
    size_t cols = rows == 0 ? 0 : a[0].size();
    QMat aug = qmat(rows, cols + 1);
    for (size_t i = 0; i < rows; ++i) {
        for (size_t j = 0; j < cols; ++j)
            aug[i][j] = a[i][j];
        aug[i][cols] = b[i];
    }
    auto piv = rref(aug);
    for (size_t i = piv.size(); i < rows; ++i)
        if (aug[i][cols] != 0)
            return std::nullopt;
    if (!piv.empty() && piv.back() == cols)
        return std::nullopt;
    QVec x(cols, Rat(0));
    for (size_t i = 0; i < piv.size(); ++i)
        x[piv[i]] = aug[i][cols];
    return x;
}

// Basis of the kernel of A.
inline std::vector<QVec> kernel_basis(QMat a)
{
    size_t rows = a.size();
    size_t cols = rows == 0 ? 0 : a[0].size();
    auto piv = rref(a);
    std::vector<bool> is_pivot(cols, false);
    for (size_t c : piv)
        is_pivot[c] = true;
    std::vector<QVec> basis;
    for (size_t c = 0; c < cols; ++c) {
        if (is_pivot[c])
            continue;
        QVec v(cols, Rat(0));
        v[c] = 1;
        for (size_t i = 0; i < piv.size(); ++i)
            v[piv[i]] = -a[i][c];
        basis.push_back(v);
    }
    return basis;
}

inline bool is_integral(const Rat& r) { return denominator(r) == 1; }

inline std::optional<IVec> integral_vec(const QVec& v)
{
    IVec r(v.size());
    for (size_t i = 0; i < v.size(); ++i) {
        if (!is_integral(v[i]))
            return std::nullopt;
        r[i] = to_long(numerator(v[i]));
    }
    return r;
}

// Membership of v in the Z-span of gens, by staircase gcd elimination.
inline bool lattice_member(std::vector<QVec> gens, QVec v)
{
    if (gens.empty())
        return is_zero_vec(v);
    size_t n = v.size();
    // clear denominators
    Int den = 1;
    for (const auto& g : gens)
        for (const auto& x : g)
            den = lcm(den, denominator(x));
    for (const auto& x : v)
        den = lcm(den, denominator(x));
    std::vector<std::vector<Int>> cols;
    for (const auto& g : gens) {
        std::vector<Int> c(n);
        for (size_t i = 0; i < n; ++i)
            c[i] = numerator(g[i] * Rat(den));
        cols.push_back(c);
    }
    std::vector<Int> b(n);
    for (size_t i = 0; i < n; ++i) {
        Rat scaled = v[i] * Rat(den);
        if (denominator(scaled) != 1)
            return false;
        b[i] = numerator(scaled);
    }

    size_t head = 0;
    for (size_t row = 0; row < n && head < cols.size(); ++row) {
        // gcd-eliminate entries of this row among columns head..end
        while (true) {
            size_t best = cols.size();
            for (size_t c = head; c < cols.size(); ++c) {
                if (cols[c][row] == 0)
                    continue;
                if (best == cols.size() || abs(cols[c][row]) < abs(cols[best][row]))
                    best = c;
            }
            if (best == cols.size())
                break; // row already clear
            std::swap(cols[head], cols[best]);
            bool clean = true;
            for (size_t c = head + 1; c < cols.size(); ++c) {
                if (cols[c][row] == 0)
                    continue;
                Int q = cols[c][row] / cols[head][row];
                for (size_t i = 0; i < n; ++i)
                    cols[c][i] -= q * cols[head][i];
                if (cols[c][row] != 0)
                    clean = false;
            }
            if (clean) {
                // reduce b against the pivot
                if (b[row] % cols[head][row] == 0) {
                    Int q = b[row] / cols[head][row];
                    for (size_t i = 0; i < n; ++i)
                        b[i] -= q * cols[head][i];
                }
                ++head;
                break;
            }
        }
    }
    for (const auto& x : b)
        if (x != 0)
            return false;
    return true;
}

inline std::string qvec_to_string(const QVec& v)
{
    std::string s = "[";
    for (size_t i = 0; i < v.size(); ++i) {
        if (i)
            s += ", ";
        s += rat_to_string(v[i]);
    }
    return s + "]";
}

} // namespace heckelab
