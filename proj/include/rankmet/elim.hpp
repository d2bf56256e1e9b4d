#pragma once

#include <algorithm>
#include <deque>
#include <optional>
#include <vector>

#include "rankmet/matrix.hpp"

namespace rankmet {

namespace detail {

/// Clears denominators row-wise (rank-invariant) so the Bareiss core runs on
/// integral entries. No-op for prime fields.
inline void clear_denominators_row(std::vector<Scalar>& row) {
    if (row.empty()) return;
    Field f = Field::rationals();
    bool found = false;
    for (auto& s : row)
        if (!s.is_zero()) {
            f = s.field();
            found = true;
            break;
        }
    if (!found || f.kind == FieldKind::Gf) return;
    Int l = 1;
    for (auto& s : row) {
        if (s.is_zero()) continue;
        l = boost::multiprecision::lcm(l, den(s.re()));
        if (f.kind == FieldKind::Qi) l = boost::multiprecision::lcm(l, den(s.im()));
    }
    if (l == 1) return;
    Scalar m = f.kind == FieldKind::Qi ? Scalar::qi(Rat(l), Rat(0)) : Scalar::q(Rat(l));
    for (auto& s : row)
        if (!s.is_zero()) s *= m;
}

/// Fraction-free (Bareiss) elimination on a dense core; returns its rank.
/// Entries are made integral first, and every update divides exactly by the
/// previous pivot per the Sylvester minor identity.
inline int bareiss_rank(std::vector<std::vector<Scalar>>& a) {
    const int m = static_cast<int>(a.size());
    if (m == 0) return 0;
    const int n = static_cast<int>(a[0].size());
    for (auto& row : a) clear_denominators_row(row);

    std::optional<Scalar> prev;
    int r = 0;
    for (int col = 0; col < n && r < m; ++col) {
        int piv = -1;
        for (int i = r; i < m; ++i)
            if (!a[i][col].is_zero()) {
                piv = i;
                break;
            }
        if (piv < 0) continue;
        std::swap(a[r], a[piv]);
        const Scalar p = a[r][col];
        for (int i = r + 1; i < m; ++i) {
            const Scalar c = a[i][col];
            for (int j = 0; j < n; ++j) {
                Scalar v = p * a[i][j] - c * a[r][j];
                if (prev) v = v / *prev;
                a[i][j] = v;
            }
        }
        prev = p;
        ++r;
    }
    return r;
}

}  // namespace detail

/// Exact rank. Structural phase peels singleton rows/columns (each is a
/// certified +1 to the rank and strictly shrinks the problem); the remaining
/// core goes through fraction-free elimination. Works on the compact support
/// only, so ambient-scale sparse matrices stay cheap.
inline int rank(const SpMat& mat) {
    // compact row list and column remap
    std::vector<int> col_ids = mat.support_cols();
    auto col_of = [&](int j) {
        return static_cast<int>(std::lower_bound(col_ids.begin(), col_ids.end(), j) -
                                col_ids.begin());
    };
    const int R = static_cast<int>(mat.row_entries().size());
    const int C = static_cast<int>(col_ids.size());
    std::vector<std::vector<std::pair<int, Scalar>>> rows(R);
    std::vector<int> col_count(C, 0);
    std::vector<std::vector<int>> col_rows(C);
    {
        int i = 0;
        for (auto& [orig, r] : mat.row_entries()) {
            rows[i].reserve(r.size());
            for (auto& [j, v] : r) {
                int cj = col_of(j);
                rows[i].push_back({cj, v});
                ++col_count[cj];
                col_rows[cj].push_back(i);
            }
            ++i;
        }
    }
    std::vector<bool> row_alive(R, true), col_alive(C, true);
    auto row_nnz = [&](int i) { return static_cast<int>(rows[i].size()); };

    int rk = 0;
    std::deque<std::pair<bool, int>> queue;  // (is_row, index)
    for (int i = 0; i < R; ++i)
        if (row_nnz(i) == 1) queue.push_back({true, i});
    for (int j = 0; j < C; ++j)
        if (col_count[j] == 1) queue.push_back({false, j});

    auto drop_entry = [&](int i, int j) {
        auto& r = rows[i];
        for (std::size_t k = 0; k < r.size(); ++k)
            if (r[k].first == j) {
                r.erase(r.begin() + k);
                break;
            }
        --col_count[j];
        if (col_alive[j] && col_count[j] == 1) queue.push_back({false, j});
        if (row_alive[i] && r.size() == 1) queue.push_back({true, i});
    };
    auto kill_row = [&](int i) {
        row_alive[i] = false;
        auto entries = rows[i];
        rows[i].clear();
        for (auto& [j, v] : entries) {
            --col_count[j];
            if (col_alive[j] && col_count[j] == 1) queue.push_back({false, j});
        }
    };
    auto kill_col = [&](int j) {
        col_alive[j] = false;
        for (int i : col_rows[j]) {
            if (!row_alive[i]) continue;
            bool has = false;
            for (auto& [c, v] : rows[i])
                if (c == j) {
                    has = true;
                    break;
                }
            if (has) drop_entry(i, j);
        }
    };

    while (!queue.empty()) {
        auto [is_row, idx] = queue.front();
        queue.pop_front();
        if (is_row) {
            int i = idx;
            if (!row_alive[i] || row_nnz(i) != 1) continue;
            int j = rows[i][0].first;
            ++rk;
            row_alive[i] = false;
            rows[i].clear();
            --col_count[j];
            kill_col(j);
        } else {
            int j = idx;
            if (!col_alive[j] || col_count[j] != 1) continue;
            int owner = -1;
            for (int i : col_rows[j])
                if (row_alive[i]) {
                    for (auto& [c, v] : rows[i])
                        if (c == j) {
                            owner = i;
                            break;
                        }
                    if (owner >= 0) break;
                }
            if (owner < 0) {
                col_alive[j] = false;
                continue;
            }
            ++rk;
            col_alive[j] = false;
            kill_row(owner);
        }
    }

    // Dense core on the surviving support.
    std::vector<int> live_rows, live_cols;
    for (int i = 0; i < R; ++i)
        if (row_alive[i] && !rows[i].empty()) live_rows.push_back(i);
    std::vector<int> col_map(C, -1);
    for (int i : live_rows)
        for (auto& [j, v] : rows[i])
            if (col_map[j] < 0) {
                col_map[j] = static_cast<int>(live_cols.size());
                live_cols.push_back(j);
            }
    if (live_rows.empty()) return rk;
    std::vector<std::vector<Scalar>> core(live_rows.size(),
                                          std::vector<Scalar>(live_cols.size()));
    for (std::size_t i = 0; i < live_rows.size(); ++i)
        for (auto& [j, v] : rows[live_rows[i]]) core[i][col_map[j]] = v;
    return rk + detail::bareiss_rank(core);
}

/// Reduced row echelon form with a row-transform track: returns (rref, T)
/// with T * a == rref and T square invertible.
inline std::pair<SpMat, SpMat> rref_with_transform(const SpMat& a) {
    const int m = a.rows(), n = a.cols();
    std::vector<std::vector<Scalar>> w(m, std::vector<Scalar>(n));
    for (int i = 0; i < m; ++i)
        for (auto& [j, v] : a.row(i)) w[i][j] = v;
    Field f = Field::rationals();
    for (int i = 0; i < m; ++i)
        if (!a.row(i).empty()) {
            f = a.row(i)[0].second.field();
            break;
        }
    std::vector<std::vector<Scalar>> t(m, std::vector<Scalar>(m));
    for (int i = 0; i < m; ++i) t[i][i] = Scalar::one(f);

    int r = 0;
    for (int col = 0; col < n && r < m; ++col) {
        int piv = -1;
        for (int i = r; i < m; ++i)
            if (!w[i][col].is_zero()) {
                piv = i;
                break;
            }
        if (piv < 0) continue;
        std::swap(w[r], w[piv]);
        std::swap(t[r], t[piv]);
        Scalar inv = w[r][col].inverse();
        for (int j = 0; j < n; ++j)
            if (!w[r][j].is_zero()) w[r][j] *= inv;
        for (int j = 0; j < m; ++j)
            if (!t[r][j].is_zero()) t[r][j] *= inv;
        for (int i = 0; i < m; ++i) {
            if (i == r || w[i][col].is_zero()) continue;
            Scalar c = w[i][col];
            for (int j = 0; j < n; ++j)
                if (!w[r][j].is_zero()) w[i][j] -= c * w[r][j];
            for (int j = 0; j < m; ++j)
                if (!t[r][j].is_zero()) t[i][j] -= c * t[r][j];
        }
        ++r;
    }
    return {SpMat::from_dense(w), SpMat::from_dense(t)};
}

/// Solves B * a = m exactly. Returns B iff every row of m lies in the row
/// space of a (sound and complete per block over a field).
inline std::optional<SpMat> solve_left_factor(const SpMat& m, const SpMat& a) {
    if (m.cols() != a.cols()) throw std::invalid_argument("solve_left_factor shape mismatch");
    auto [rref, t] = rref_with_transform(a);
    // pivot columns of rref
    std::vector<std::pair<int, int>> pivots;  // (row, col)
    for (int i = 0; i < rref.rows(); ++i)
        if (!rref.row(i).empty()) pivots.push_back({i, rref.row(i)[0].first});
    SpMat b(m.rows(), a.rows());
    for (int i = 0; i < m.rows(); ++i) {
        // residual := m_i, peel pivots
        std::vector<Scalar> res(m.cols());
        for (auto& [j, v] : m.row(i)) res[j] = v;
        std::vector<std::pair<int, Scalar>> coeffs;
        for (auto& [prow, pcol] : pivots) {
            Scalar c = res[pcol];
            if (c.is_zero()) continue;
            coeffs.push_back({prow, c});
            for (auto& [j, v] : rref.row(prow)) res[j] -= c * v;
        }
        for (auto& s : res)
            if (!s.is_zero()) return std::nullopt;
        // row of B = sum c_k * T_k
        std::map<int, Scalar> acc;
        for (auto& [prow, c] : coeffs)
            for (auto& [j, v] : t.row(prow)) {
                auto it = acc.find(j);
                if (it == acc.end())
                    acc.emplace(j, c * v);
                else
                    it->second += c * v;
            }
        for (auto& [j, v] : acc)
            if (!v.is_zero()) b.set(i, j, v);
    }
    return b;
}

/// Solves a * c = m exactly (column-space membership).
inline std::optional<SpMat> solve_right_factor(const SpMat& m, const SpMat& a) {
    auto bt = solve_left_factor(m.transpose(), a.transpose());
    if (!bt) return std::nullopt;
    return bt->transpose();
}

/// Basis of the right kernel {v : a v = 0}, returned as columns of a matrix
/// (cols(a) x nullity). Deterministic (free columns in index order).
inline SpMat kernel_basis(const SpMat& a) {
    auto [rref, t] = rref_with_transform(a);
    const int n = a.cols();
    std::vector<int> pivcol_of_row(rref.rows(), -1);
    std::vector<bool> is_pivot(n, false);
    for (int i = 0; i < rref.rows(); ++i)
        if (!rref.row(i).empty()) {
            pivcol_of_row[i] = rref.row(i)[0].first;
            is_pivot[rref.row(i)[0].first] = true;
        }
    Field f = Field::rationals();
    bool ffound = false;
    for (int i = 0; i < a.rows() && !ffound; ++i)
        if (!a.row(i).empty()) {
            f = a.row(i)[0].second.field();
            ffound = true;
        }
    std::vector<int> free_cols;
    for (int j = 0; j < n; ++j)
        if (!is_pivot[j]) free_cols.push_back(j);
    SpMat k(n, static_cast<int>(free_cols.size()));
    for (std::size_t idx = 0; idx < free_cols.size(); ++idx) {
        int fc = free_cols[idx];
        k.set(fc, static_cast<int>(idx), Scalar::one(f));
        for (int i = 0; i < rref.rows(); ++i) {
            if (pivcol_of_row[i] < 0) continue;
            Scalar v = rref.get(i, fc);
            if (!v.is_zero()) k.set(pivcol_of_row[i], static_cast<int>(idx), -v);
        }
    }
    return k;
}

/// Exact inverse of a square invertible matrix; throws if singular.
inline SpMat inverse(const SpMat& a) {
    if (a.rows() != a.cols()) throw std::invalid_argument("inverse of non-square matrix");
    auto [rref, t] = rref_with_transform(a);
    for (int i = 0; i < a.rows(); ++i) {
        if (rref.row(i).empty() || rref.row(i)[0].first != i || !rref.row(i)[0].second.is_one())
            throw std::domain_error("matrix is singular");
        if (rref.row(i).size() != 1) throw std::domain_error("matrix is singular");
    }
    return t;
}

/// Column basis of the column space, as an n x rank matrix: the original
/// columns at the pivot positions of the row reduction (deterministic).
inline SpMat column_basis(const SpMat& a) {
    auto [rref, t] = rref_with_transform(a);
    std::vector<int> pivot_cols;
    for (int i = 0; i < rref.rows(); ++i)
        if (!rref.row(i).empty()) pivot_cols.push_back(rref.row(i)[0].first);
    SpMat out(a.rows(), static_cast<int>(pivot_cols.size()));
    for (int i = 0; i < a.rows(); ++i)
        for (auto& [j, v] : a.row(i)) {
            auto it = std::lower_bound(pivot_cols.begin(), pivot_cols.end(), j);
            if (it != pivot_cols.end() && *it == j)
                out.set(i, static_cast<int>(it - pivot_cols.begin()), v);
        }
    return out;
}

}  // namespace rankmet
