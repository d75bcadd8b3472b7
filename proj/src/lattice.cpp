#include "ribbon/lattice.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>

#include <boost/multiprecision/cpp_int.hpp>

namespace ribbon {

namespace {

using Big = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

// int64 with overflow trapping; lets the eliminations run on machine words and
// retry in arbitrary precision only when a coefficient actually blows up.
struct Checked {
    Int v = 0;
    Checked() = default;
    Checked(Int x) : v(x) {}  // NOLINT(google-explicit-constructor)

    friend Checked operator+(Checked a, Checked b) { return checked_add(a.v, b.v); }
    friend Checked operator-(Checked a, Checked b) {
        Int r;
        if (__builtin_sub_overflow(a.v, b.v, &r)) throw std::overflow_error("integer overflow in subtraction");
        return r;
    }
    friend Checked operator*(Checked a, Checked b) { return checked_mul(a.v, b.v); }
    friend Checked operator/(Checked a, Checked b) { return a.v / b.v; }
    friend Checked operator%(Checked a, Checked b) { return a.v % b.v; }
    Checked operator-() const { return Checked(0) - *this; }
    friend auto operator<=>(Checked a, Checked b) = default;
};

Int to_int(const Checked& c) { return c.v; }
Int to_int(const Big& b) {
    if (b > std::numeric_limits<Int>::max() || b < std::numeric_limits<Int>::min())
        throw std::overflow_error("lattice result does not fit in 64 bits");
    return static_cast<Int>(b);
}

template <class T>
using Mat = std::vector<std::vector<T>>;

template <class T>
T abs_t(const T& x) {
    return x < T(0) ? -x : x;
}

template <class T>
Mat<T> to_mat(const IntMatrix& m) {
    Mat<T> r(m.rows(), std::vector<T>(m.cols()));
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) r[i][j] = T(m(i, j));
    return r;
}

template <class T>
Mat<T> to_mat(const std::vector<IntVector>& rows, std::size_t cols) {
    Mat<T> r(rows.size(), std::vector<T>(cols));
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = 0; j < cols; ++j) r[i][j] = T(rows[i][j]);
    return r;
}

template <class T>
IntMatrix from_mat(const Mat<T>& m, std::size_t cols) {
    IntMatrix r(m.size(), cols);
    for (std::size_t i = 0; i < m.size(); ++i)
        for (std::size_t j = 0; j < cols; ++j) r(i, j) = to_int(m[i][j]);
    return r;
}

// g = x a + y b, g >= 0
template <class T>
void egcd(const T& a, const T& b, T& g, T& x, T& y) {
    T old_r = a, r = b, old_s = 1, s = 0, old_t = 0, t = 1;
    while (r != T(0)) {
        T q = old_r / r;
        T tmp = old_r - q * r;
        old_r = r;
        r = tmp;
        tmp = old_s - q * s;
        old_s = s;
        s = tmp;
        tmp = old_t - q * t;
        old_t = t;
        t = tmp;
    }
    if (old_r < T(0)) {
        old_r = -old_r;
        old_s = -old_s;
        old_t = -old_t;
    }
    g = old_r;
    x = old_s;
    y = old_t;
}

template <class T>
T floor_div(const T& a, const T& b) {
    T q = a / b;
    if ((a % b != T(0)) && ((a < T(0)) != (b < T(0)))) q = q - T(1);
    return q;
}

// Row Hermite normal form; returns the nonzero rows.
template <class T>
Mat<T> row_hnf(Mat<T> m, std::size_t cols) {
    std::size_t row = 0;
    for (std::size_t col = 0; col < cols && row < m.size(); ++col) {
        for (std::size_t i = row + 1; i < m.size(); ++i) {
            if (m[i][col] == T(0)) continue;
            if (m[row][col] == T(0)) {
                std::swap(m[row], m[i]);
                continue;
            }
            T g, x, y;
            egcd(m[row][col], m[i][col], g, x, y);
            T a = m[row][col] / g;
            T b = m[i][col] / g;
            for (std::size_t j = col; j < cols; ++j) {
                T r1 = x * m[row][j] + y * m[i][j];
                T r2 = a * m[i][j] - b * m[row][j];
                m[row][j] = r1;
                m[i][j] = r2;
            }
        }
        if (m[row][col] == T(0)) continue;
        if (m[row][col] < T(0))
            for (std::size_t j = col; j < cols; ++j) m[row][j] = -m[row][j];
        for (std::size_t k = 0; k < row; ++k) {
            T f = floor_div(m[k][col], m[row][col]);
            if (f == T(0)) continue;
            for (std::size_t j = col; j < cols; ++j) m[k][j] = m[k][j] - f * m[row][j];
        }
        ++row;
    }
    m.resize(row);
    return m;
}

template <class T>
Mat<T> kernel_t(Mat<T> a, std::size_t cols) {
    Mat<T> v(cols, std::vector<T>(cols, T(0)));
    for (std::size_t i = 0; i < cols; ++i) v[i][i] = T(1);
    auto col_op = [&](std::size_t p, std::size_t j, const T& x, const T& y, const T& ca, const T& cb) {
        // col_p <- x col_p + y col_j ; col_j <- -cb col_p + ca col_j
        auto apply = [&](Mat<T>& m) {
            for (auto& r : m) {
                T np = x * r[p] + y * r[j];
                T nj = ca * r[j] - cb * r[p];
                r[p] = np;
                r[j] = nj;
            }
        };
        apply(a);
        apply(v);
    };
    std::size_t pc = 0;
    for (std::size_t i = 0; i < a.size() && pc < cols; ++i) {
        for (std::size_t j = pc + 1; j < cols; ++j) {
            if (a[i][j] == T(0)) continue;
            if (a[i][pc] == T(0)) {
                for (auto& r : a) std::swap(r[pc], r[j]);
                for (auto& r : v) std::swap(r[pc], r[j]);
                continue;
            }
            T g, x, y;
            egcd(a[i][pc], a[i][j], g, x, y);
            col_op(pc, j, x, y, a[i][pc] / g, a[i][j] / g);
        }
        if (a[i][pc] != T(0)) ++pc;
    }
    Mat<T> basis;
    for (std::size_t j = pc; j < cols; ++j) {
        std::vector<T> col(cols);
        for (std::size_t r = 0; r < cols; ++r) col[r] = v[r][j];
        basis.push_back(std::move(col));
    }
    return row_hnf(std::move(basis), cols);
}

template <class T>
T bareiss(Mat<T> m) {
    const std::size_t n = m.size();
    if (n == 0) return T(1);
    T sign = 1;
    T prev = 1;
    for (std::size_t k = 0; k + 1 < n; ++k) {
        if (m[k][k] == T(0)) {
            std::size_t s = k + 1;
            while (s < n && m[s][k] == T(0)) ++s;
            if (s == n) return T(0);
            std::swap(m[k], m[s]);
            sign = -sign;
        }
        for (std::size_t i = k + 1; i < n; ++i) {
            for (std::size_t j = k + 1; j < n; ++j) m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) / prev;
            m[i][k] = T(0);
        }
        prev = m[k][k];
    }
    return sign * m[n - 1][n - 1];
}

template <class T>
void snf_t(Mat<T>& a, Mat<T>& u, Mat<T>& v) {
    const std::size_t r = a.size();
    const std::size_t c = r ? a[0].size() : 0;
    auto swap_rows = [&](std::size_t i, std::size_t j) {
        std::swap(a[i], a[j]);
        std::swap(u[i], u[j]);
    };
    auto swap_cols = [&](std::size_t i, std::size_t j) {
        for (auto& row : a) std::swap(row[i], row[j]);
        for (auto& row : v) std::swap(row[i], row[j]);
    };
    auto add_row = [&](std::size_t dst, std::size_t src, const T& f) {  // row_dst += f row_src
        for (std::size_t j = 0; j < c; ++j) a[dst][j] = a[dst][j] + f * a[src][j];
        for (std::size_t j = 0; j < r; ++j) u[dst][j] = u[dst][j] + f * u[src][j];
    };
    auto add_col = [&](std::size_t dst, std::size_t src, const T& f) {
        for (std::size_t i = 0; i < r; ++i) a[i][dst] = a[i][dst] + f * a[i][src];
        for (std::size_t i = 0; i < c; ++i) v[i][dst] = v[i][dst] + f * v[i][src];
    };
    for (std::size_t t = 0; t < std::min(r, c); ++t) {
        for (;;) {
            // smallest nonzero entry of the trailing block becomes the pivot
            bool found = false;
            std::size_t bi = t, bj = t;
            for (std::size_t i = t; i < r; ++i)
                for (std::size_t j = t; j < c; ++j)
                    if (a[i][j] != T(0) && (!found || abs_t(a[i][j]) < abs_t(a[bi][bj]))) {
                        found = true;
                        bi = i;
                        bj = j;
                    }
            if (!found) return;
            if (bi != t) swap_rows(bi, t);
            if (bj != t) swap_cols(bj, t);
            bool clean = true;
            for (std::size_t i = t + 1; i < r; ++i) {
                if (a[i][t] == T(0)) continue;
                add_row(i, t, -(a[i][t] / a[t][t]));
                if (a[i][t] != T(0)) clean = false;
            }
            for (std::size_t j = t + 1; j < c; ++j) {
                if (a[t][j] == T(0)) continue;
                add_col(j, t, -(a[t][j] / a[t][t]));
                if (a[t][j] != T(0)) clean = false;
            }
            if (!clean) continue;
            bool divides = true;
            for (std::size_t i = t + 1; i < r && divides; ++i)
                for (std::size_t j = t + 1; j < c; ++j)
                    if (a[i][j] % a[t][t] != T(0)) {
                        add_row(t, i, T(1));
                        divides = false;
                        break;
                    }
            if (divides) break;
        }
        if (a[t][t] < T(0)) {
            for (auto& x : a[t]) x = -x;
            for (auto& x : u[t]) x = -x;
        }
    }
}

template <class F>
auto with_fallback(F&& f) {
    try {
        return f(Checked{});
    } catch (const std::overflow_error&) {
        return f(Big{});
    }
}

}  // namespace

// ---------------------------------------------------------------------------

Int dot(std::span<const Int> a, std::span<const Int> b) {
    if (a.size() != b.size()) throw std::invalid_argument("dot product of vectors with different lengths");
    Int s = 0;
    for (std::size_t i = 0; i < a.size(); ++i) s = checked_add(s, checked_mul(a[i], b[i]));
    return s;
}

IntMatrix IntMatrix::identity(std::size_t n) {
    IntMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
    return m;
}

IntMatrix IntMatrix::from_rows(const std::vector<IntVector>& rows, std::size_t cols) {
    IntMatrix m(rows.size(), cols);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].size() != cols) throw std::invalid_argument("row length does not match column count");
        for (std::size_t j = 0; j < cols; ++j) m(i, j) = rows[i][j];
    }
    return m;
}

IntVector IntMatrix::column(std::size_t j) const {
    IntVector c(rows_);
    for (std::size_t i = 0; i < rows_; ++i) c[i] = (*this)(i, j);
    return c;
}

IntMatrix IntMatrix::transpose() const {
    IntMatrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
}

bool IntMatrix::is_symmetric() const {
    if (rows_ != cols_) return false;
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < i; ++j)
            if ((*this)(i, j) != (*this)(j, i)) return false;
    return true;
}

IntMatrix operator*(const IntMatrix& a, const IntMatrix& b) {
    if (a.cols() != b.rows()) throw std::invalid_argument("matrix product shape mismatch");
    IntMatrix r(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const Int x = a(i, k);
            if (x == 0) continue;
            for (std::size_t j = 0; j < b.cols(); ++j) r(i, j) = checked_add(r(i, j), checked_mul(x, b(k, j)));
        }
    return r;
}

Int GramLattice::pairing(std::span<const Int> x, std::span<const Int> y) const {
    Int s = 0;
    for (std::size_t i = 0; i < rank(); ++i) {
        if (x[i] == 0) continue;
        Int row = 0;
        for (std::size_t j = 0; j < rank(); ++j) row = checked_add(row, checked_mul(gram(i, j), y[j]));
        s = checked_add(s, checked_mul(x[i], row));
    }
    return s;
}

Int GramLattice::norm(std::span<const Int> x) const { return pairing(x, x); }

GramLattice gram_of(const EmbeddedLattice& e) {
    GramLattice g{IntMatrix(e.size(), e.size())};
    for (std::size_t i = 0; i < e.size(); ++i)
        for (std::size_t j = 0; j <= i; ++j) g.gram(i, j) = g.gram(j, i) = dot(e.vectors[i], e.vectors[j]);
    return g;
}

GramLattice linear_gram(const CFString& s) {
    const std::size_t n = s.rank();
    GramLattice g{IntMatrix(n, n)};
    for (std::size_t i = 0; i < n; ++i) {
        g.gram(i, i) = s.terms()[i];
        if (i + 1 < n) g.gram(i, i + 1) = g.gram(i + 1, i) = 1;
    }
    return g;
}

Int determinant(const IntMatrix& m) {
    if (m.rows() != m.cols()) throw std::invalid_argument("determinant of non-square matrix");
    return with_fallback([&](auto tag) { return to_int(bareiss(to_mat<decltype(tag)>(m))); });
}

bool is_positive_definite(const IntMatrix& g) {
    if (!g.is_symmetric()) return false;
    for (std::size_t k = 1; k <= g.rows(); ++k) {
        Mat<Big> lead(k, std::vector<Big>(k));
        for (std::size_t i = 0; i < k; ++i)
            for (std::size_t j = 0; j < k; ++j) lead[i][j] = g(i, j);
        if (bareiss(lead) <= 0) return false;
    }
    return true;
}

std::size_t matrix_rank(const IntMatrix& m) {
    return with_fallback([&](auto tag) { return row_hnf(to_mat<decltype(tag)>(m), m.cols()).size(); });
}

std::vector<IntVector> integer_kernel(const IntMatrix& a) {
    return with_fallback([&](auto tag) {
        auto k = kernel_t(to_mat<decltype(tag)>(a), a.cols());
        std::vector<IntVector> out;
        for (const auto& row : k) {
            IntVector v(a.cols());
            for (std::size_t j = 0; j < a.cols(); ++j) v[j] = to_int(row[j]);
            out.push_back(std::move(v));
        }
        return out;
    });
}

std::vector<IntVector> lattice_basis(const std::vector<IntVector>& vectors, std::size_t ambient_rank) {
    return with_fallback([&](auto tag) {
        auto h = row_hnf(to_mat<decltype(tag)>(vectors, ambient_rank), ambient_rank);
        std::vector<IntVector> out;
        for (const auto& row : h) {
            IntVector v(ambient_rank);
            for (std::size_t j = 0; j < ambient_rank; ++j) v[j] = to_int(row[j]);
            out.push_back(std::move(v));
        }
        return out;
    });
}

EmbeddedLattice orthogonal_complement(const EmbeddedLattice& e) {
    EmbeddedLattice out{e.ambient_rank, {}};
    if (e.vectors.empty()) {
        for (std::size_t i = 0; i < e.ambient_rank; ++i) {
            IntVector v(e.ambient_rank, 0);
            v[i] = 1;
            out.vectors.push_back(std::move(v));
        }
        return out;
    }
    out.vectors = integer_kernel(IntMatrix::from_rows(e.vectors, e.ambient_rank));
    return out;
}

SNFResult smith_normal_form(const IntMatrix& a) {
    return with_fallback([&](auto tag) {
        using T = decltype(tag);
        auto m = to_mat<T>(a);
        auto u = to_mat<T>(IntMatrix::identity(a.rows()));
        auto v = to_mat<T>(IntMatrix::identity(a.cols()));
        snf_t(m, u, v);
        SNFResult r;
        for (std::size_t i = 0; i < std::min(a.rows(), a.cols()); ++i) r.diagonal.push_back(to_int(m[i][i]));
        r.left = from_mat(u, a.rows());
        r.right = from_mat(v, a.cols());
        return r;
    });
}

bool primitivity_test(const EmbeddedLattice& e) {
    if (e.vectors.empty()) return true;
    const auto snf = smith_normal_form(IntMatrix::from_rows(e.vectors, e.ambient_rank));
    return std::all_of(snf.diagonal.begin(), snf.diagonal.end(), [](Int d) { return d == 0 || d == 1; });
}

EmbeddedLattice saturation(const EmbeddedLattice& e) { return orthogonal_complement(orthogonal_complement(e)); }

bool primitivity_by_saturation(const EmbeddedLattice& e) {
    const EmbeddedLattice span{e.ambient_rank, lattice_basis(e.vectors, e.ambient_rank)};
    const EmbeddedLattice sat = saturation(e);
    if (span.size() != sat.size()) throw std::logic_error("saturation changed the rank");
    // <E> has finite index in its saturation; index^2 is the ratio of Gram determinants
    return determinant(gram_of(span).gram) == determinant(gram_of(sat).gram);
}

// ---------------------------------------------------------------------------

std::vector<IntVector> enumerate_short_vectors(const GramLattice& g, Int bound) {
    const std::size_t n = g.rank();
    if (!is_positive_definite(g.gram)) throw std::invalid_argument("short vector enumeration needs a positive definite form");
    std::vector<IntVector> out;
    if (n == 0 || bound <= 0) return out;

    // x^T G x = sum_i d_i (x_i + sum_{j>i} mu[j][i] x_j)^2
    std::vector<Rational> d(n);
    std::vector<std::vector<Rational>> mu(n, std::vector<Rational>(n));
    for (std::size_t i = 0; i < n; ++i) {
        Rational s = g.gram(i, i);
        for (std::size_t k = 0; k < i; ++k) s -= mu[i][k] * mu[i][k] * d[k];
        d[i] = s;
        for (std::size_t j = i + 1; j < n; ++j) {
            Rational t = g.gram(j, i);
            for (std::size_t k = 0; k < i; ++k) t -= mu[j][k] * mu[i][k] * d[k];
            mu[j][i] = t / d[i];
        }
    }

    IntVector x(n, 0);
    std::vector<Rational> budget(n + 1);
    budget[n] = bound;
    const Rational zero = 0;

    auto fits = [&](std::size_t i, const Rational& c, Int xi) {
        Rational t = Rational(xi) - c;
        return d[i] * t * t <= budget[i + 1];
    };

    auto recurse = [&](auto&& self, std::size_t level) -> void {
        const std::size_t i = level - 1;
        Rational c = 0;
        for (std::size_t j = i + 1; j < n; ++j)
            if (x[j] != 0) c -= mu[j][i] * x[j];
        // floor of the center, then walk outward in both directions
        Big fl = numerator(c) / denominator(c);
        if (c < zero && fl * denominator(c) != numerator(c)) fl -= 1;
        const Int start = static_cast<Int>(fl);
        auto visit = [&](Int xi) {
            x[i] = xi;
            Rational t = Rational(xi) - c;
            budget[i] = budget[i + 1] - d[i] * t * t;
            if (i == 0) {
                if (std::any_of(x.begin(), x.end(), [](Int v) { return v != 0; })) out.push_back(x);
            } else {
                self(self, i);
            }
        };
        for (Int xi = start; fits(i, c, xi); --xi) visit(xi);
        for (Int xi = start + 1; fits(i, c, xi); ++xi) visit(xi);
        x[i] = 0;
    };
    recurse(recurse, n);

    // keep the representative whose first nonzero entry is positive
    std::erase_if(out, [](const IntVector& v) {
        for (Int a : v)
            if (a != 0) return a < 0;
        return true;
    });
    std::vector<std::pair<Int, IntVector>> keyed;
    keyed.reserve(out.size());
    for (auto& v : out) keyed.emplace_back(g.norm(v), std::move(v));
    std::sort(keyed.begin(), keyed.end());
    out.clear();
    for (auto& [nrm, v] : keyed) out.push_back(std::move(v));
    return out;
}

UnitSplit strip_unit_summands(const GramLattice& g) {
    UnitSplit r{0, g};
    for (;;) {
        const auto units = enumerate_short_vectors(r.rest, 1);
        if (units.empty()) return r;
        const IntVector& v = units.front();
        const std::size_t n = r.rest.rank();
        // v^perp = kernel of x -> v^T G x
        IntMatrix row(1, n);
        for (std::size_t j = 0; j < n; ++j) {
            Int s = 0;
            for (std::size_t i = 0; i < n; ++i) s = checked_add(s, checked_mul(v[i], r.rest.gram(i, j)));
            row(0, j) = s;
        }
        const auto basis = integer_kernel(row);
        const IntMatrix b = IntMatrix::from_rows(basis, n);
        r.rest = GramLattice{b * r.rest.gram * b.transpose()};
        ++r.units;
    }
}

std::optional<std::vector<IntVector>> isometric_to_linear(const GramLattice& g, const CFString& s) {
    const std::size_t n = s.rank();
    if (g.rank() != n) return std::nullopt;
    if (n == 0) return std::vector<IntVector>{};
    const auto target_det = cf_evaluate(s)->num();
    if (determinant(g.gram) != target_det) return std::nullopt;

    const Int max_term = *std::max_element(s.terms().begin(), s.terms().end());
    const auto reps = enumerate_short_vectors(g, max_term);
    std::map<Int, std::vector<IntVector>> by_norm;
    for (const auto& v : reps) {
        const Int nv = g.norm(v);
        by_norm[nv].push_back(v);
        IntVector neg(v);
        for (auto& a : neg) a = -a;
        by_norm[nv].push_back(std::move(neg));
    }

    std::vector<IntVector> chosen;
    auto search = [&](auto&& self, std::size_t i) -> bool {
        if (i == n) return true;
        const auto it = by_norm.find(s.terms()[i]);
        if (it == by_norm.end()) return false;
        for (const auto& v : it->second) {
            // -x is an isometry, so the first vector can be taken with positive leading entry
            if (i == 0) {
                auto lead = std::find_if(v.begin(), v.end(), [](Int a) { return a != 0; });
                if (*lead < 0) continue;
            }
            bool ok = true;
            for (std::size_t j = 0; j < i && ok; ++j) ok = g.pairing(chosen[j], v) == (j + 1 == i ? 1 : 0);
            if (!ok) continue;
            chosen.push_back(v);
            if (self(self, i + 1)) return true;
            chosen.pop_back();
        }
        return false;
    };
    // equal determinants make any such chain a basis
    if (search(search, 0)) return chosen;
    return std::nullopt;
}

RecognitionResult recognize_linear(const GramLattice& g, std::size_t limit) {
    const std::size_t n = g.rank();
    if (n == 0) return {Recognition::Linear, CFString{}};
    if (n > limit) return {Recognition::LimitExceeded, std::nullopt};
    const Int det = determinant(g.gram);
    if (det < 2) return {Recognition::NotLinear, std::nullopt};

    std::set<CFString> candidates;
    for (Int q = 1; q < det; ++q) {
        if (gcd(q, det) != 1) continue;
        CFString s = cf_expand(Fraction(det, q));
        if (s.rank() == n) candidates.insert(s.canonical());
    }
    for (const auto& s : candidates)
        if (isometric_to_linear(g, s)) return {Recognition::Linear, s};
    return {Recognition::NotLinear, std::nullopt};
}

std::vector<std::vector<std::size_t>> pairing_components(const GramLattice& g) {
    const std::size_t n = g.rank();
    std::vector<std::size_t> parent(n);
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](std::size_t x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if (g.gram(i, j) != 0) parent[find(i)] = find(j);
    std::map<std::size_t, std::vector<std::size_t>> groups;
    for (std::size_t i = 0; i < n; ++i) groups[find(i)].push_back(i);
    std::vector<std::vector<std::size_t>> out;
    for (auto& [root, members] : groups) out.push_back(std::move(members));
    std::sort(out.begin(), out.end());
    return out;
}

bool stably_isometric_linear(const EmbeddedLattice& e, const CFString& target, std::size_t limit) {
    const EmbeddedLattice basis{e.ambient_rank, lattice_basis(e.vectors, e.ambient_rank)};
    const auto split = strip_unit_summands(gram_of(basis));
    if (target.empty()) return split.rest.rank() == 0;
    if (split.rest.rank() != target.rank()) return false;
    if (split.rest.rank() > limit)
        throw RecognitionLimitExceeded("lattice rank " + std::to_string(split.rest.rank()) +
                                       " exceeds the recognition limit " + std::to_string(limit));
    return isometric_to_linear(split.rest, target).has_value();
}

}  // namespace ribbon
