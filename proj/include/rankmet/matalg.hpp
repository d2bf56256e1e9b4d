#pragma once

#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "rankmet/elim.hpp"

namespace rankmet {

/// Block sizes [n(1), ..., n(k)] of a matricial algebra
/// M_{n(1)} x ... x M_{n(k)}.
struct Shape {
    std::vector<int> blocks;

    Shape() = default;
    Shape(std::initializer_list<int> b) : blocks(b) { validate(); }
    explicit Shape(std::vector<int> b) : blocks(std::move(b)) { validate(); }

    void validate() const {
        if (blocks.empty()) throw std::invalid_argument("shape must be nonempty");
        for (int n : blocks)
            if (n < 1) throw std::invalid_argument("shape blocks must be >= 1");
    }

    int num_blocks() const { return static_cast<int>(blocks.size()); }
    int block(int i) const { return blocks[i]; }
    bool single_block() const { return blocks.size() == 1; }
    /// Total algebra dimension sum n(i)^2.
    long dim() const {
        long d = 0;
        for (int n : blocks) d += static_cast<long>(n) * n;
        return d;
    }
    bool operator==(const Shape& o) const { return blocks == o.blocks; }
    bool operator!=(const Shape& o) const { return !(*this == o); }
};

/// An element of a matricial algebra: one matrix per block.
class Element {
  public:
    Element() = default;
    Element(Shape shape, const Field& f) : shape_(std::move(shape)), field_(f) {
        for (int n : shape_.blocks) blocks_.push_back(SpMat(n, n));
    }
    Element(Shape shape, const Field& f, std::vector<SpMat> blocks)
        : shape_(std::move(shape)), field_(f), blocks_(std::move(blocks)) {
        if (static_cast<int>(blocks_.size()) != shape_.num_blocks())
            throw std::invalid_argument("element block count mismatch");
        for (int i = 0; i < shape_.num_blocks(); ++i)
            if (blocks_[i].rows() != shape_.block(i) || blocks_[i].cols() != shape_.block(i))
                throw std::invalid_argument("element block dimension mismatch");
    }

    static Element identity(const Shape& s, const Field& f) {
        std::vector<SpMat> b;
        for (int n : s.blocks) b.push_back(SpMat::identity(n, f));
        return Element(s, f, std::move(b));
    }
    static Element zero(const Shape& s, const Field& f) { return Element(s, f); }

    /// Canonical matrix unit e_{ij} of block b.
    static Element unit(const Shape& s, const Field& f, int b, int i, int j) {
        Element e(s, f);
        e.blocks_[b].set(i, j, Scalar::one(f));
        return e;
    }

    const Shape& shape() const { return shape_; }
    const Field& field() const { return field_; }
    const SpMat& block(int i) const { return blocks_[i]; }
    SpMat& block_mut(int i) { return blocks_[i]; }
    int num_blocks() const { return shape_.num_blocks(); }

    bool is_zero() const {
        for (auto& b : blocks_)
            if (!b.is_zero()) return false;
        return true;
    }

    Element operator+(const Element& o) const { return map2(o, [](const SpMat& a, const SpMat& b) { return a + b; }); }
    Element operator-(const Element& o) const { return map2(o, [](const SpMat& a, const SpMat& b) { return a - b; }); }
    Element operator*(const Element& o) const { return map2(o, [](const SpMat& a, const SpMat& b) { return a * b; }); }
    Element operator-() const { return map1([](const SpMat& a) { return -a; }); }
    Element scaled(const Scalar& s) const { return map1([&](const SpMat& a) { return a.scaled(s); }); }

    /// Blockwise conjugate transpose.
    Element adjoint() const { return map1([](const SpMat& a) { return a.conj_transpose(); }); }

    bool operator==(const Element& o) const {
        if (shape_ != o.shape_) return false;
        for (int i = 0; i < num_blocks(); ++i)
            if (blocks_[i] != o.blocks_[i]) return false;
        return true;
    }
    bool operator!=(const Element& o) const { return !(*this == o); }

    bool is_idempotent() const { return (*this) * (*this) == *this; }
    bool is_projection() const { return is_idempotent() && adjoint() == *this; }

    std::size_t nnz() const {
        std::size_t n = 0;
        for (auto& b : blocks_) n += b.nnz();
        return n;
    }

  private:
    template <class F>
    Element map1(F&& fn) const {
        std::vector<SpMat> b;
        b.reserve(blocks_.size());
        for (auto& m : blocks_) b.push_back(fn(m));
        return Element(shape_, field_, std::move(b));
    }
    template <class F>
    Element map2(const Element& o, F&& fn) const {
        if (shape_ != o.shape_) throw std::invalid_argument("element shape mismatch");
        if (!(field_ == o.field_)) throw std::invalid_argument("element field mismatch");
        std::vector<SpMat> b;
        b.reserve(blocks_.size());
        for (std::size_t i = 0; i < blocks_.size(); ++i) b.push_back(fn(blocks_[i], o.blocks_[i]));
        return Element(shape_, field_, std::move(b));
    }

    Shape shape_;
    Field field_;
    std::vector<SpMat> blocks_;
};

/// Convex weight vector (alpha_1, ..., alpha_k) inducing
/// N(x) = sum alpha_i rank(x_i)/n(i). Weights are exact rationals.
class PseudoRank {
  public:
    PseudoRank(Shape shape, std::vector<Rat> weights)
        : shape_(std::move(shape)), weights_(std::move(weights)) {
        if (static_cast<int>(weights_.size()) != shape_.num_blocks())
            throw std::invalid_argument("pseudo-rank weight count mismatch");
        Rat sum = 0;
        for (auto& w : weights_) {
            if (w < 0) throw std::invalid_argument("pseudo-rank weights must be >= 0");
            sum += w;
        }
        if (sum != 1) throw std::invalid_argument("pseudo-rank weights must sum to 1");
    }

    /// The unique rank function when the shape is a single block.
    static PseudoRank unique(const Shape& s) {
        if (!s.single_block())
            throw std::invalid_argument("unique rank function needs a single block");
        return PseudoRank(s, {Rat(1)});
    }

    const Shape& shape() const { return shape_; }
    const std::vector<Rat>& weights() const { return weights_; }
    bool strictly_positive() const {
        for (auto& w : weights_)
            if (w == 0) return false;
        return true;
    }

  private:
    Shape shape_;
    std::vector<Rat> weights_;
};

/// N(x) = sum alpha_i rank(x_i)/n(i), computed by exact elimination.
inline Rat rank_of(const Element& x, const PseudoRank& n) {
    if (x.shape() != n.shape()) throw std::invalid_argument("rank_of shape mismatch");
    Rat total = 0;
    for (int b = 0; b < x.num_blocks(); ++b) {
        if (n.weights()[b] == 0) continue;
        int r = rank(x.block(b));
        total += n.weights()[b] * Rat(r) / Rat(x.shape().block(b));
    }
    return total;
}

/// Normalized rank rank(z)/p on a single-block algebra.
inline Rat rank_norm(const Element& z) {
    return rank_of(z, PseudoRank::unique(z.shape()));
}

struct MatrixUnitViolation {
    int block_a, ia, ja, block_b, ib, jb;
    std::string what;
};

struct MatrixUnitVerdict {
    bool ok = true;
    std::optional<MatrixUnitViolation> first_violation;
};

/// Indexed family x_{ij} (one square family per block of the *source* shape).
struct MatrixUnitFamily {
    Shape src;
    // images[b] is an n(b) x n(b) grid of Elements in the target algebra.
    std::vector<std::vector<std::vector<Element>>> images;

    const Element& unit(int b, int i, int j) const { return images[b][i][j]; }
};

/// Checks x_{ij} x_{kl} = delta_{jk} x_{il} within each block and zero
/// products across blocks; in star mode additionally x_{ji} = x_{ij}^*.
inline MatrixUnitVerdict verify_matrix_units(const MatrixUnitFamily& fam, bool star_mode = false) {
    MatrixUnitVerdict v;
    auto fail = [&](int ba, int ia, int ja, int bb, int ib, int jb, const std::string& w) {
        v.ok = false;
        if (!v.first_violation) v.first_violation = MatrixUnitViolation{ba, ia, ja, bb, ib, jb, w};
    };
    for (int b = 0; b < fam.src.num_blocks() && v.ok; ++b) {
        int n = fam.src.block(b);
        for (int i = 0; i < n && v.ok; ++i)
            for (int j = 0; j < n && v.ok; ++j) {
                for (int k = 0; k < n && v.ok; ++k)
                    for (int l = 0; l < n && v.ok; ++l) {
                        Element prod = fam.unit(b, i, j) * fam.unit(b, k, l);
                        Element expect = (j == k) ? fam.unit(b, i, l)
                                                  : Element::zero(prod.shape(), prod.field());
                        if (prod != expect)
                            fail(b, i, j, b, k, l, "product relation violated");
                    }
                if (star_mode && v.ok && fam.unit(b, j, i) != fam.unit(b, i, j).adjoint())
                    fail(b, i, j, b, j, i, "adjoint symmetry violated");
            }
        // cross-block products must vanish
        for (int b2 = 0; b2 < fam.src.num_blocks() && v.ok; ++b2) {
            if (b2 == b) continue;
            Element prod = fam.unit(b, 0, 0) * fam.unit(b2, 0, 0);
            if (!prod.is_zero()) fail(b, 0, 0, b2, 0, 0, "cross-block product nonzero");
        }
    }
    return v;
}

/// A homomorphism between matricial algebras given by the images of every
/// canonical matrix unit of the source.
class ConcreteHom {
  public:
    ConcreteHom() = default;
    ConcreteHom(Shape src, Shape tgt, const Field& f, MatrixUnitFamily images, bool unital)
        : src_(std::move(src)), tgt_(std::move(tgt)), field_(f),
          images_(std::move(images)), unital_(unital) {
        verify();
    }

    const Shape& src() const { return src_; }
    const Shape& tgt() const { return tgt_; }
    const Field& field() const { return field_; }
    bool unital() const { return unital_; }

    const Element& unit_image(int b, int i, int j) const { return images_.unit(b, i, j); }

    /// Image of the source identity.
    Element image_identity() const {
        Element s = Element::zero(tgt_, field_);
        for (int b = 0; b < src_.num_blocks(); ++b)
            for (int i = 0; i < src_.block(b); ++i) s = s + images_.unit(b, i, i);
        return s;
    }

    Element apply(const Element& x) const {
        if (x.shape() != src_) throw std::invalid_argument("hom applied to wrong shape");
        Element out = Element::zero(tgt_, field_);
        for (int b = 0; b < src_.num_blocks(); ++b) {
            const SpMat& m = x.block(b);
            for (auto& [i, r] : m.row_entries())
                for (auto& [j, v] : r) out = out + images_.unit(b, i, j).scaled(v);
        }
        return out;
    }

    ConcreteHom compose_after(const ConcreteHom& first) const {
        // (*this) o first : first.src -> this->tgt
        if (!(first.tgt() == src_)) throw std::invalid_argument("hom composition shape mismatch");
        MatrixUnitFamily fam;
        fam.src = first.src();
        fam.images.resize(first.src().num_blocks());
        for (int b = 0; b < first.src().num_blocks(); ++b) {
            int n = first.src().block(b);
            fam.images[b].assign(n, std::vector<Element>(n, Element::zero(tgt_, field_)));
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) fam.images[b][i][j] = apply(first.unit_image(b, i, j));
        }
        return ConcreteHom(first.src(), tgt_, field_, std::move(fam),
                           unital_ && first.unital());
    }

    /// Multiplicity matrix metadata for standard embeddings (empty otherwise).
    const std::vector<std::vector<int>>& multiplicities() const { return mult_; }
    void set_multiplicities(std::vector<std::vector<int>> m) { mult_ = std::move(m); }

  private:
    void verify() const {
        auto verdict = verify_matrix_units(images_, false);
        if (!verdict.ok) throw std::invalid_argument("hom images violate matrix-unit relations");
        if (unital_) {
            if (image_identity() != Element::identity(tgt_, field_))
                throw std::invalid_argument("hom declared unital but image of 1 is not 1");
        }
    }

    Shape src_, tgt_;
    Field field_;
    MatrixUnitFamily images_;
    bool unital_ = false;
    std::vector<std::vector<int>> mult_;
};

/// Block-diagonal homomorphism realizing a multiplicity matrix
/// (mult[t][s] copies of source block s inside target block t).
inline ConcreteHom standard_embedding(const Shape& src, const Shape& tgt, const Field& f,
                                      const std::vector<std::vector<int>>& mult,
                                      bool unital_requested = true) {
    if (static_cast<int>(mult.size()) != tgt.num_blocks())
        throw std::invalid_argument("multiplicity matrix row count mismatch");
    for (auto& row : mult)
        if (static_cast<int>(row.size()) != src.num_blocks())
            throw std::invalid_argument("multiplicity matrix col count mismatch");
    // feasibility: per target block, sum_s mult[t][s] n(s) <= n'(t)
    for (int t = 0; t < tgt.num_blocks(); ++t) {
        long used = 0;
        for (int s = 0; s < src.num_blocks(); ++s) {
            if (mult[t][s] < 0) throw std::invalid_argument("negative multiplicity");
            used += static_cast<long>(mult[t][s]) * src.block(s);
        }
        if (used > tgt.block(t)) throw std::invalid_argument("infeasible multiplicities");
        if (unital_requested && used != tgt.block(t))
            throw std::invalid_argument("unital embedding requires exact fill");
    }
    MatrixUnitFamily fam;
    fam.src = src;
    fam.images.resize(src.num_blocks());
    for (int s = 0; s < src.num_blocks(); ++s) {
        int n = src.block(s);
        fam.images[s].assign(n, std::vector<Element>(n, Element::zero(tgt, f)));
    }
    for (int t = 0; t < tgt.num_blocks(); ++t) {
        int offset = 0;
        for (int s = 0; s < src.num_blocks(); ++s) {
            int n = src.block(s);
            for (int copy = 0; copy < mult[t][s]; ++copy) {
                for (int i = 0; i < n; ++i)
                    for (int j = 0; j < n; ++j)
                        fam.images[s][i][j].block_mut(t).set(offset + i, offset + j,
                                                             Scalar::one(f));
                offset += n;
            }
        }
    }
    ConcreteHom h(src, tgt, f, std::move(fam), unital_requested);
    h.set_multiplicities(mult);
    return h;
}

/// z in M_p maps to z (x) 1_g in M_{pg}; normalized rank is preserved.
inline Element tensor_stabilize(const Element& z, int g) {
    if (!z.shape().single_block())
        throw std::invalid_argument("tensor_stabilize needs a single-block source");
    if (g < 1) throw std::invalid_argument("tensor multiplicity must be positive");
    int p = z.shape().block(0);
    SpMat out(p * g, p * g);
    for (int i = 0; i < p; ++i)
        for (auto& [j, v] : z.block(0).row(i))
            for (int c = 0; c < g; ++c) out.set(c * p + i, c * p + j, v);
    return Element(Shape{p * g}, z.field(), {out});
}

/// The canonical unital hom M_p -> M_{pg}, z -> z (x) 1_g, as a ConcreteHom.
inline ConcreteHom tensor_embedding_hom(int p, int g, const Field& f) {
    std::vector<std::vector<int>> mult{{g}};
    return standard_embedding(Shape{p}, Shape{p * g}, f, mult, true);
}

struct ChainVerdict {
    bool ok = true;
    std::string detail;
};

/// Embedding chain: shapes with composable ConcreteHoms; in factor-sequence
/// mode every shape is a single block M_{p_i} with p_i | p_{i+1}.
struct EmbeddingChain {
    std::vector<Shape> shapes;
    std::vector<ConcreteHom> homs;  // homs[i] : shapes[i] -> shapes[i+1]
    bool factor_sequence = false;

    void validate() const {
        if (shapes.empty()) throw std::invalid_argument("empty chain");
        if (homs.size() + 1 != shapes.size())
            throw std::invalid_argument("chain hom count mismatch");
        for (std::size_t i = 0; i < homs.size(); ++i) {
            if (homs[i].src() != shapes[i] || homs[i].tgt() != shapes[i + 1])
                throw std::invalid_argument("chain hom endpoints mismatch");
        }
        if (factor_sequence) {
            for (auto& s : shapes)
                if (!s.single_block())
                    throw std::invalid_argument("factor sequence shapes must be single blocks");
            for (std::size_t i = 0; i + 1 < shapes.size(); ++i)
                if (shapes[i + 1].block(0) % shapes[i].block(0) != 0)
                    throw std::invalid_argument("factor sequence requires p_i | p_{i+1}");
        }
    }
};

/// Stage-wise compatibility: for every canonical unit u of stage i,
/// N_i(u) = N_{i+1}(hom(u)). In factor-sequence mode the unique compatible
/// weights are all (1).
inline ChainVerdict check_rank_compatibility(const EmbeddingChain& chain,
                                             const std::vector<PseudoRank>& weights) {
    chain.validate();
    if (weights.size() != chain.shapes.size())
        return {false, "weight count does not match stage count"};
    for (std::size_t i = 0; i < weights.size(); ++i)
        if (weights[i].shape() != chain.shapes[i])
            return {false, "weight shape mismatch at stage " + std::to_string(i)};
    for (std::size_t i = 0; i + 1 < chain.shapes.size(); ++i) {
        const Shape& s = chain.shapes[i];
        for (int b = 0; b < s.num_blocks(); ++b)
            for (int u = 0; u < s.block(b); ++u) {
                Element e = Element::unit(s, chain.homs[i].field(), b, u, u);
                Rat lhs = rank_of(e, weights[i]);
                Rat rhs = rank_of(chain.homs[i].apply(e), weights[i + 1]);
                if (lhs != rhs)
                    return {false, "rank mismatch at stage " + std::to_string(i) + " block " +
                                       std::to_string(b)};
            }
    }
    if (chain.factor_sequence) {
        for (auto& w : weights)
            if (w.weights() != std::vector<Rat>{Rat(1)})
                return {false, "factor sequence weights must be (1)"};
    }
    return {true, ""};
}

inline Element random_element(Rng& rng, const Shape& s, const Field& f, long height = 2) {
    std::vector<SpMat> blocks;
    for (int n : s.blocks) blocks.push_back(random_matrix(rng, n, f, height));
    return Element(s, f, std::move(blocks));
}

}  // namespace rankmet
