#pragma once

#include <optional>

#include "rankmet/matalg.hpp"

namespace rankmet {

/// A unital matricial subalgebra of an ambient algebra, represented by an
/// embedding hom with an explicit coordinate basis of the image. Membership
/// and approximation queries are exact linear solves in image coordinates.
class Subalgebra {
  public:
    Subalgebra() = default;
    explicit Subalgebra(ConcreteHom embedding) : emb_(std::move(embedding)) {
        if (!emb_.unital())
            throw std::invalid_argument("subalgebra embedding must be unital");
        build_basis();
    }

    const Shape& structure() const { return emb_.src(); }
    const Shape& ambient() const { return emb_.tgt(); }
    const Field& field() const { return emb_.field(); }
    const ConcreteHom& embedding() const { return emb_; }

    /// The full ambient algebra viewed as a subalgebra of itself.
    static Subalgebra full(const Shape& ambient, const Field& f) {
        std::vector<std::vector<int>> mult(ambient.num_blocks(),
                                           std::vector<int>(ambient.num_blocks(), 0));
        for (int i = 0; i < ambient.num_blocks(); ++i) mult[i][i] = 1;
        return Subalgebra(standard_embedding(ambient, ambient, f, mult, true));
    }

    Element from_coords(const Element& a) const { return emb_.apply(a); }

    /// Solves x = sum c_u * basis_u exactly; nullopt when x is outside A.
    std::optional<Element> to_coords(const Element& x) const {
        if (x.shape() != ambient()) throw std::invalid_argument("to_coords ambient mismatch");
        SpMat v = flatten(x);
        auto c = solve_right_factor(v, basis_);
        if (!c) return std::nullopt;
        Element out = Element::zero(structure(), field());
        for (int u = 0; u < basis_.cols(); ++u) {
            Scalar s = c->get(u, 0);
            if (s.is_zero()) continue;
            auto [b, i, j] = unit_of_index(u);
            out.block_mut(b).set(i, j, s);
        }
        return out;
    }

    bool contains(const Element& x) const { return to_coords(x).has_value(); }

    /// Linear projection of x onto span(A) in the ambient coordinate space
    /// (Gram solve over the standard hermitian form). This is an approximation
    /// witness, not a nearest point in rank metric. Positive definite fields
    /// only.
    std::optional<Element> linear_projection(const Element& x) const {
        if (!field().positive_definite()) return std::nullopt;
        SpMat v = flatten(x);
        SpMat bstar = basis_.conj_transpose();
        SpMat gram = bstar * basis_;
        SpMat rhs = bstar * v;
        auto c = solve_right_factor(rhs, gram);
        if (!c) return std::nullopt;
        Element out = Element::zero(structure(), field());
        for (int u = 0; u < basis_.cols(); ++u) {
            Scalar s = c->get(u, 0);
            if (s.is_zero()) continue;
            auto [b, i, j] = unit_of_index(u);
            out.block_mut(b).set(i, j, s);
        }
        return from_coords(out);
    }

    long dim() const { return structure().dim(); }

  private:
    void build_basis() {
        // flatten each unit image into a column
        long d = structure().dim();
        long amb = 0;
        for (int b = 0; b < ambient().num_blocks(); ++b)
            amb += static_cast<long>(ambient().block(b)) * ambient().block(b);
        basis_ = SpMat(static_cast<int>(amb), static_cast<int>(d));
        index_.clear();
        int col = 0;
        for (int b = 0; b < structure().num_blocks(); ++b)
            for (int i = 0; i < structure().block(b); ++i)
                for (int j = 0; j < structure().block(b); ++j) {
                    SpMat v = flatten(emb_.unit_image(b, i, j));
                    for (auto& [r, rowv] : v.row_entries())
                        for (auto& [zero, s] : rowv) basis_.set(r, col, s);
                    index_.push_back({b, i, j});
                    ++col;
                }
    }

    SpMat flatten(const Element& x) const {
        long amb = basisless_ambient_dim();
        SpMat v(static_cast<int>(amb), 1);
        long off = 0;
        for (int b = 0; b < x.num_blocks(); ++b) {
            int n = x.shape().block(b);
            for (int i = 0; i < n; ++i)
                for (auto& [j, s] : x.block(b).row(i))
                    v.set(static_cast<int>(off + static_cast<long>(i) * n + j), 0, s);
            off += static_cast<long>(n) * n;
        }
        return v;
    }

    long basisless_ambient_dim() const {
        long amb = 0;
        for (int b = 0; b < ambient().num_blocks(); ++b)
            amb += static_cast<long>(ambient().block(b)) * ambient().block(b);
        return amb;
    }

    std::tuple<int, int, int> unit_of_index(int u) const { return index_[u]; }

    ConcreteHom emb_;
    SpMat basis_;  // ambient-dim x subalgebra-dim
    std::vector<std::tuple<int, int, int>> index_;
};

}  // namespace rankmet
