#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "ribbon/arith.hpp"

namespace ribbon {

using IntVector = std::vector<Int>;

Int dot(std::span<const Int> a, std::span<const Int> b);

/// Dense row-major integer matrix.
class IntMatrix {
public:
    IntMatrix() = default;
    IntMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, 0) {}
    static IntMatrix identity(std::size_t n);
    static IntMatrix from_rows(const std::vector<IntVector>& rows, std::size_t cols);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    Int& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    Int operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    std::span<const Int> row(std::size_t i) const { return {data_.data() + i * cols_, cols_}; }
    IntVector column(std::size_t j) const;

    IntMatrix transpose() const;
    bool is_symmetric() const;

    friend IntMatrix operator*(const IntMatrix& a, const IntMatrix& b);
    friend bool operator==(const IntMatrix&, const IntMatrix&) = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<Int> data_;
};

/// Abstract lattice given by its Gram matrix.
struct GramLattice {
    IntMatrix gram;

    std::size_t rank() const { return gram.rows(); }
    /// Quadratic form x^T G x.
    Int norm(std::span<const Int> x) const;
    Int pairing(std::span<const Int> x, std::span<const Int> y) const;
};

/// Sublattice of Z^N spanned by the given vectors.
struct EmbeddedLattice {
    std::size_t ambient_rank = 0;
    std::vector<IntVector> vectors;

    std::size_t size() const { return vectors.size(); }
};

/// U * A * V = D with D diagonal (entries in `diagonal`), d_i | d_{i+1}.
struct SNFResult {
    std::vector<Int> diagonal;
    IntMatrix left;
    IntMatrix right;
};

class RecognitionLimitExceeded : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

GramLattice gram_of(const EmbeddedLattice& e);
GramLattice linear_gram(const CFString& s);

/// Exact determinant (fraction-free elimination).
Int determinant(const IntMatrix& m);
bool is_positive_definite(const IntMatrix& g);
std::size_t matrix_rank(const IntMatrix& m);

/// Basis of {x in Z^cols : A x = 0}; saturated by construction.
std::vector<IntVector> integer_kernel(const IntMatrix& a);

/// Basis of the Z-span of the given vectors (row Hermite normal form).
std::vector<IntVector> lattice_basis(const std::vector<IntVector>& vectors, std::size_t ambient_rank);

EmbeddedLattice orthogonal_complement(const EmbeddedLattice& e);

SNFResult smith_normal_form(const IntMatrix& a);

/// Z^N / <E> torsion-free, via elementary divisors.
bool primitivity_test(const EmbeddedLattice& e);
/// Same property via (<E> (x) Q) cap Z^N == <E>, compared through Gram determinants.
bool primitivity_by_saturation(const EmbeddedLattice& e);
/// Double orthogonal complement: a basis of (<E> (x) Q) cap Z^N.
EmbeddedLattice saturation(const EmbeddedLattice& e);

/// Nonzero x with x^T G x <= bound, one of each +-pair (first nonzero entry positive),
/// sorted by norm then lexicographically.
std::vector<IntVector> enumerate_short_vectors(const GramLattice& g, Int bound);

struct UnitSplit {
    std::size_t units = 0;
    GramLattice rest;
};

/// G = rest (+) Z^units with rest free of norm-1 vectors.
UnitSplit strip_unit_summands(const GramLattice& g);

/// Basis of g realizing the tridiagonal Gram matrix of s, if g is isometric to Lambda(s).
std::optional<std::vector<IntVector>> isometric_to_linear(const GramLattice& g, const CFString& s);

enum class Recognition { Linear, NotLinear, LimitExceeded };

struct RecognitionResult {
    Recognition status = Recognition::NotLinear;
    std::optional<CFString> string;  // canonical, set iff status == Linear
};

constexpr std::size_t kDefaultRecognitionLimit = 24;

/// Identifies g as a single connected linear lattice Lambda(a1..an).
RecognitionResult recognize_linear(const GramLattice& g, std::size_t limit = kDefaultRecognitionLimit);

/// Connected components of the pairing graph (off-diagonal nonzero entries).
std::vector<std::vector<std::size_t>> pairing_components(const GramLattice& g);

/// gram_of(e) == Lambda(target) (+) Z^k for some k >= 0. Throws RecognitionLimitExceeded.
bool stably_isometric_linear(const EmbeddedLattice& e, const CFString& target,
                             std::size_t limit = kDefaultRecognitionLimit);

}  // namespace ribbon
