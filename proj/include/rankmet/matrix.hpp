#pragma once

#include <algorithm>
#include <initializer_list>
#include <map>
#include <stdexcept>
#include <utility>
#include <vector>

#include "rankmet/scalar.hpp"

namespace rankmet {

/// Sparse matrix over an exact field. Only nonempty rows are stored (sorted
/// by row index); each row holds (col, value) pairs sorted by column with no
/// explicit zeros. Small dense matrices are just sparse matrices whose rows
/// happen to be full; ambient matrices at chain scale stay cheap.
class SpMat {
  public:
    using Entry = std::pair<int, Scalar>;
    using Row = std::vector<Entry>;
    using RowItem = std::pair<int, Row>;

    SpMat() : rows_(0), cols_(0) {}
    SpMat(int rows, int cols) : rows_(rows), cols_(cols) {
        if (rows < 0 || cols < 0) throw std::invalid_argument("negative matrix dimension");
    }

    static SpMat identity(int n, const Field& f) {
        SpMat m(n, n);
        m.data_.reserve(n);
        for (int i = 0; i < n; ++i) m.data_.push_back({i, Row{{i, Scalar::one(f)}}});
        return m;
    }

    static SpMat zero(int r, int c) { return SpMat(r, c); }

    /// e_{ij} scaled by s.
    static SpMat unit(int n, int i, int j, const Scalar& s) {
        SpMat m(n, n);
        if (!s.is_zero()) m.data_.push_back({i, Row{{j, s}}});
        return m;
    }

    static SpMat from_dense(const std::vector<std::vector<Scalar>>& d) {
        int r = static_cast<int>(d.size());
        int c = r ? static_cast<int>(d[0].size()) : 0;
        SpMat m(r, c);
        for (int i = 0; i < r; ++i) {
            if (static_cast<int>(d[i].size()) != c)
                throw std::invalid_argument("ragged dense matrix");
            Row row;
            for (int j = 0; j < c; ++j)
                if (!d[i][j].is_zero()) row.push_back({j, d[i][j]});
            if (!row.empty()) m.data_.push_back({i, std::move(row)});
        }
        return m;
    }

    /// Convenience for dense rational literals in tests.
    static SpMat from_rows(const Field& f,
                           std::initializer_list<std::initializer_list<long>> rows) {
        std::vector<std::vector<Scalar>> d;
        for (auto& r : rows) {
            std::vector<Scalar> row;
            for (long v : r) row.push_back(Scalar::from_long(v, f));
            d.push_back(std::move(row));
        }
        return from_dense(d);
    }

    int rows() const { return rows_; }
    int cols() const { return cols_; }

    /// Stored (nonempty) rows, sorted by row index.
    const std::vector<RowItem>& row_entries() const { return data_; }

    const Row& row(int i) const {
        auto it = find_row(i);
        if (it != data_.end() && it->first == i) return it->second;
        static const Row empty;
        return empty;
    }

    std::size_t nnz() const {
        std::size_t n = 0;
        for (auto& [i, r] : data_) n += r.size();
        return n;
    }

    bool is_zero() const { return data_.empty(); }

    Scalar get(int i, int j) const {
        const Row& r = row(i);
        auto it = std::lower_bound(r.begin(), r.end(), j,
                                   [](const Entry& e, int c) { return e.first < c; });
        if (it != r.end() && it->first == j) return it->second;
        return Scalar();
    }

    void set(int i, int j, const Scalar& v) {
        auto it = find_row_mut(i);
        if (it == data_.end() || it->first != i) {
            if (v.is_zero()) return;
            it = data_.insert(it, {i, Row{}});
        }
        Row& r = it->second;
        auto e = std::lower_bound(r.begin(), r.end(), j,
                                  [](const Entry& en, int c) { return en.first < c; });
        if (e != r.end() && e->first == j) {
            if (v.is_zero()) {
                r.erase(e);
                if (r.empty()) data_.erase(it);
            } else {
                e->second = v;
            }
        } else if (!v.is_zero()) {
            r.insert(e, {j, v});
        }
    }

    SpMat operator+(const SpMat& o) const { return combine(o, false); }
    SpMat operator-(const SpMat& o) const { return combine(o, true); }

    SpMat operator*(const SpMat& o) const {
        if (cols_ != o.rows_) throw std::invalid_argument("matrix product shape mismatch");
        SpMat out(rows_, o.cols_);
        std::map<int, Scalar> acc;
        for (auto& [i, arow] : data_) {
            acc.clear();
            for (const auto& [k, a] : arow) {
                const Row& brow = o.row(k);
                for (const auto& [j, b] : brow) {
                    auto it = acc.find(j);
                    if (it == acc.end())
                        acc.emplace(j, a * b);
                    else
                        it->second += a * b;
                }
            }
            Row r;
            for (auto& [j, v] : acc)
                if (!v.is_zero()) r.push_back({j, v});
            if (!r.empty()) out.data_.push_back({i, std::move(r)});
        }
        return out;
    }

    SpMat scaled(const Scalar& s) const {
        SpMat out(rows_, cols_);
        if (s.is_zero()) return out;
        for (auto& [i, arow] : data_) {
            Row r;
            for (const auto& [j, v] : arow) {
                Scalar w = v * s;
                if (!w.is_zero()) r.push_back({j, w});
            }
            if (!r.empty()) out.data_.push_back({i, std::move(r)});
        }
        return out;
    }

    SpMat operator-() const {
        SpMat out(rows_, cols_);
        for (auto& [i, arow] : data_) {
            Row r;
            for (const auto& [j, v] : arow) r.push_back({j, -v});
            out.data_.push_back({i, std::move(r)});
        }
        return out;
    }

    SpMat transpose() const { return transpose_impl(false); }

    /// Conjugate transpose (the *-transpose when the field carries an
    /// involution; plain transpose over Q and GF(p)).
    SpMat conj_transpose() const { return transpose_impl(true); }

    bool operator==(const SpMat& o) const {
        if (rows_ != o.rows_ || cols_ != o.cols_) return false;
        if (data_.size() != o.data_.size()) return false;
        for (std::size_t k = 0; k < data_.size(); ++k) {
            if (data_[k].first != o.data_[k].first) return false;
            const Row& a = data_[k].second;
            const Row& b = o.data_[k].second;
            if (a.size() != b.size()) return false;
            for (std::size_t t = 0; t < a.size(); ++t)
                if (a[t].first != b[t].first || a[t].second != b[t].second) return false;
        }
        return true;
    }
    bool operator!=(const SpMat& o) const { return !(*this == o); }

    std::vector<int> support_rows() const {
        std::vector<int> out;
        for (auto& [i, r] : data_) out.push_back(i);
        return out;
    }
    std::vector<int> support_cols() const {
        std::vector<int> out;
        for (auto& [i, r] : data_)
            for (auto& [j, v] : r) out.push_back(j);
        std::sort(out.begin(), out.end());
        out.erase(std::unique(out.begin(), out.end()), out.end());
        return out;
    }

  private:
    std::vector<RowItem>::const_iterator find_row(int i) const {
        return std::lower_bound(data_.begin(), data_.end(), i,
                                [](const RowItem& r, int idx) { return r.first < idx; });
    }
    std::vector<RowItem>::iterator find_row_mut(int i) {
        return std::lower_bound(data_.begin(), data_.end(), i,
                                [](const RowItem& r, int idx) { return r.first < idx; });
    }

    SpMat transpose_impl(bool conj) const {
        std::map<int, Row> cols;
        for (auto& [i, arow] : data_)
            for (auto& [j, v] : arow) cols[j].push_back({i, conj ? v.conj() : v});
        SpMat out(cols_, rows_);
        for (auto& [j, r] : cols) out.data_.push_back({j, std::move(r)});
        return out;
    }

    SpMat combine(const SpMat& o, bool sub) const {
        if (rows_ != o.rows_ || cols_ != o.cols_)
            throw std::invalid_argument("matrix sum shape mismatch");
        SpMat out(rows_, cols_);
        std::size_t x = 0, y = 0;
        while (x < data_.size() || y < o.data_.size()) {
            int ri = x < data_.size() ? data_[x].first : rows_;
            int rj = y < o.data_.size() ? o.data_[y].first : rows_;
            if (ri < rj) {
                out.data_.push_back(data_[x]);
                ++x;
            } else if (rj < ri) {
                Row r;
                for (auto& [j, v] : o.data_[y].second) r.push_back({j, sub ? -v : v});
                out.data_.push_back({rj, std::move(r)});
                ++y;
            } else {
                const Row& a = data_[x].second;
                const Row& b = o.data_[y].second;
                Row r;
                std::size_t s = 0, t = 0;
                while (s < a.size() || t < b.size()) {
                    if (t == b.size() || (s < a.size() && a[s].first < b[t].first)) {
                        r.push_back(a[s]);
                        ++s;
                    } else if (s == a.size() || b[t].first < a[s].first) {
                        r.push_back({b[t].first, sub ? -b[t].second : b[t].second});
                        ++t;
                    } else {
                        Scalar v = sub ? a[s].second - b[t].second : a[s].second + b[t].second;
                        if (!v.is_zero()) r.push_back({a[s].first, v});
                        ++s;
                        ++t;
                    }
                }
                if (!r.empty()) out.data_.push_back({ri, std::move(r)});
                ++x;
                ++y;
            }
        }
        return out;
    }

    int rows_, cols_;
    std::vector<RowItem> data_;
};

inline SpMat random_matrix(Rng& rng, int n, const Field& f, long height = 2) {
    SpMat m(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            Scalar s = random_scalar(rng, f, height);
            if (!s.is_zero()) m.set(i, j, s);
        }
    return m;
}

}  // namespace rankmet
