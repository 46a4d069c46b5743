#pragma once

// Dense Gaussian elimination over an arbitrary field, generic in a small
// field-ops policy. Instantiated over GF(p^s) subfield elements and over
// exact rationals; all subspaces in this project are row spaces in reduced
// row echelon form so that equality is a plain comparison.

#include <cstddef>
#include <stdexcept>
#include <vector>

namespace dickson {

template <class Ops>
concept FieldOps = requires(const Ops& f, const typename Ops::Value& a) {
    { f.zero() } -> std::convertible_to<typename Ops::Value>;
    { f.one() } -> std::convertible_to<typename Ops::Value>;
    { f.add(a, a) } -> std::convertible_to<typename Ops::Value>;
    { f.sub(a, a) } -> std::convertible_to<typename Ops::Value>;
    { f.mul(a, a) } -> std::convertible_to<typename Ops::Value>;
    { f.inv(a) } -> std::convertible_to<typename Ops::Value>;
    { f.eq(a, a) } -> std::convertible_to<bool>;
    { f.is_zero(a) } -> std::convertible_to<bool>;
};

template <FieldOps Ops>
using Row = std::vector<typename Ops::Value>;

template <FieldOps Ops>
using Matrix = std::vector<Row<Ops>>;

// In-place reduced row echelon form; returns the pivot column of each of the
// leading rows (rows below pivots.size() are zero afterwards).
template <FieldOps Ops>
std::vector<std::size_t> rref_in_place(Matrix<Ops>& m, const Ops& f) {
    std::vector<std::size_t> pivots;
    if (m.empty()) return pivots;
    const std::size_t ncols = m.front().size();
    std::size_t row = 0;
    for (std::size_t col = 0; col < ncols && row < m.size(); ++col) {
        std::size_t sel = row;
        while (sel < m.size() && f.is_zero(m[sel][col])) ++sel;
        if (sel == m.size()) continue;
        std::swap(m[sel], m[row]);
        const auto piv_inv = f.inv(m[row][col]);
        for (std::size_t c2 = col; c2 < ncols; ++c2) m[row][c2] = f.mul(piv_inv, m[row][c2]);
        for (std::size_t r2 = 0; r2 < m.size(); ++r2) {
            if (r2 == row || f.is_zero(m[r2][col])) continue;
            const auto factor = m[r2][col];
            for (std::size_t c2 = col; c2 < ncols; ++c2)
                m[r2][c2] = f.sub(m[r2][c2], f.mul(factor, m[row][c2]));
        }
        pivots.push_back(col);
        ++row;
    }
    return pivots;
}

// A subspace of F^n stored as its canonical RREF basis (no zero rows).
template <FieldOps Ops>
struct Subspace {
    Matrix<Ops> rows;
    std::size_t dim() const { return rows.size(); }
};

template <FieldOps Ops>
Subspace<Ops> row_space(Matrix<Ops> m, const Ops& f) {
    const auto pivots = rref_in_place(m, f);
    m.resize(pivots.size());
    return Subspace<Ops>{std::move(m)};
}

template <FieldOps Ops>
std::size_t rank(Matrix<Ops> m, const Ops& f) {
    return rref_in_place(m, f).size();
}

template <FieldOps Ops>
bool row_eq(const Row<Ops>& a, const Row<Ops>& b, const Ops& f) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i)
        if (!f.eq(a[i], b[i])) return false;
    return true;
}

template <FieldOps Ops>
bool subspace_eq(const Subspace<Ops>& a, const Subspace<Ops>& b, const Ops& f) {
    if (a.rows.size() != b.rows.size()) return false;
    for (std::size_t i = 0; i < a.rows.size(); ++i)
        if (!row_eq<Ops>(a.rows[i], b.rows[i], f)) return false;
    return true;
}

// Reduces v against the RREF basis; membership iff the residue vanishes.
template <FieldOps Ops>
bool subspace_contains(const Subspace<Ops>& sp, Row<Ops> v, const Ops& f) {
    for (const auto& basis_row : sp.rows) {
        std::size_t piv = 0;
        while (piv < basis_row.size() && f.is_zero(basis_row[piv])) ++piv;
        if (piv == basis_row.size()) continue;
        if (f.is_zero(v[piv])) continue;
        const auto factor = v[piv];
        for (std::size_t c = piv; c < v.size(); ++c)
            v[c] = f.sub(v[c], f.mul(factor, basis_row[c]));
    }
    for (const auto& x : v)
        if (!f.is_zero(x)) return false;
    return true;
}

// Basis of the right nullspace {x : m x = 0}, rows of length ncols.
template <FieldOps Ops>
Subspace<Ops> kernel_basis(Matrix<Ops> m, std::size_t ncols, const Ops& f) {
    if (m.empty()) {
        Matrix<Ops> id(ncols, Row<Ops>(ncols, f.zero()));
        for (std::size_t i = 0; i < ncols; ++i) id[i][i] = f.one();
        return Subspace<Ops>{std::move(id)};
    }
    const auto pivots = rref_in_place(m, f);
    std::vector<bool> is_pivot(ncols, false);
    for (auto c : pivots) is_pivot[c] = true;
    Matrix<Ops> basis;
    for (std::size_t free_col = 0; free_col < ncols; ++free_col) {
        if (is_pivot[free_col]) continue;
        Row<Ops> v(ncols, f.zero());
        v[free_col] = f.one();
        for (std::size_t i = 0; i < pivots.size(); ++i)
            v[pivots[i]] = f.sub(f.zero(), m[i][free_col]);
        basis.push_back(std::move(v));
    }
    return row_space(std::move(basis), f);
}

// Zassenhaus: intersection of two row spaces of F^n.
template <FieldOps Ops>
Subspace<Ops> intersect(const Subspace<Ops>& a, const Subspace<Ops>& b, std::size_t ncols,
                        const Ops& f) {
    Matrix<Ops> block;
    block.reserve(a.rows.size() + b.rows.size());
    for (const auto& u : a.rows) {
        Row<Ops> row(2 * ncols, f.zero());
        for (std::size_t i = 0; i < ncols; ++i) row[i] = row[ncols + i] = u[i];
        block.push_back(std::move(row));
    }
    for (const auto& w : b.rows) {
        Row<Ops> row(2 * ncols, f.zero());
        for (std::size_t i = 0; i < ncols; ++i) row[i] = w[i];
        block.push_back(std::move(row));
    }
    rref_in_place(block, f);
    Matrix<Ops> out;
    for (const auto& row : block) {
        bool left_zero = true;
        for (std::size_t i = 0; i < ncols && left_zero; ++i) left_zero = f.is_zero(row[i]);
        if (!left_zero) continue;
        Row<Ops> tail(row.begin() + static_cast<std::ptrdiff_t>(ncols), row.end());
        bool all_zero = true;
        for (const auto& x : tail)
            if (!f.is_zero(x)) { all_zero = false; break; }
        if (!all_zero) out.push_back(std::move(tail));
    }
    return row_space(std::move(out), f);
}

template <FieldOps Ops>
Subspace<Ops> full_space(std::size_t n, const Ops& f) {
    Matrix<Ops> id(n, Row<Ops>(n, f.zero()));
    for (std::size_t i = 0; i < n; ++i) id[i][i] = f.one();
    return Subspace<Ops>{std::move(id)};
}

}  // namespace dickson
