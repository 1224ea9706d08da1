#pragma once

// Dense rational matrices, exact Gaussian elimination (determinants, rank,
// nullspace), Sylvester's positive-definiteness test, and a floating-point
// Jacobi eigenvalue routine for advisory output. Sizes here are tiny (at
// most ~20 on a side), so simplicity beats asymptotics.

#include "quasiperm/rational.hpp"

#include <cmath>
#include <vector>

namespace qp {

struct Mat {
    int r = 0, c = 0;
    std::vector<Rational> a;  // row-major

    Mat() = default;
    Mat(int r, int c) : r(r), c(c), a(static_cast<size_t>(r) * c, Rational(0)) {}

    Rational& at(int i, int j) { return a[static_cast<size_t>(i) * c + j]; }
    const Rational& at(int i, int j) const { return a[static_cast<size_t>(i) * c + j]; }

    static Mat identity(int n) {
        Mat m(n, n);
        for (int i = 0; i < n; ++i) m.at(i, i) = 1;
        return m;
    }

    Mat transpose() const {
        Mat m(c, r);
        for (int i = 0; i < r; ++i)
            for (int j = 0; j < c; ++j) m.at(j, i) = at(i, j);
        return m;
    }

    bool is_symmetric() const {
        if (r != c) return false;
        for (int i = 0; i < r; ++i)
            for (int j = i + 1; j < c; ++j)
                if (at(i, j) != at(j, i)) return false;
        return true;
    }

    Mat& operator+=(const Mat& o) {
        for (size_t i = 0; i < a.size(); ++i) a[i] += o.a[i];
        return *this;
    }
    Mat& operator-=(const Mat& o) {
        for (size_t i = 0; i < a.size(); ++i) a[i] -= o.a[i];
        return *this;
    }
    Mat& operator*=(const Rational& s) {
        for (auto& x : a) x *= s;
        return *this;
    }
    friend Mat operator+(Mat x, const Mat& y) { return x += y; }
    friend Mat operator-(Mat x, const Mat& y) { return x -= y; }
    friend Mat operator*(const Rational& s, Mat x) { return x *= s; }
    bool operator==(const Mat&) const = default;
};

inline Rational determinant(Mat m) {
    if (m.r != m.c) throw std::invalid_argument("determinant: square matrix required");
    Rational det = 1;
    for (int col = 0; col < m.c; ++col) {
        int pivot = -1;
        for (int row = col; row < m.r; ++row)
            if (m.at(row, col) != 0) {
                pivot = row;
                break;
            }
        if (pivot < 0) return 0;
        if (pivot != col) {
            for (int j = col; j < m.c; ++j) std::swap(m.at(pivot, j), m.at(col, j));
            det = -det;
        }
        det *= m.at(col, col);
        for (int row = col + 1; row < m.r; ++row) {
            if (m.at(row, col) == 0) continue;
            Rational f = m.at(row, col) / m.at(col, col);
            for (int j = col; j < m.c; ++j) m.at(row, j) -= f * m.at(col, j);
        }
    }
    return det;
}

inline Mat leading_submatrix(const Mat& m, int k) {
    Mat s(k, k);
    for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j) s.at(i, j) = m.at(i, j);
    return s;
}

inline std::vector<Rational> leading_principal_minors(const Mat& m) {
    std::vector<Rational> minors;
    for (int k = 1; k <= m.r; ++k) minors.push_back(determinant(leading_submatrix(m, k)));
    return minors;
}

struct DefinitenessReport {
    bool positive_definite = false;
    std::vector<Rational> minors;
};

// Sylvester's criterion with exact arithmetic.
inline DefinitenessReport check_positive_definite(const Mat& m) {
    if (!m.is_symmetric())
        throw std::invalid_argument("check_positive_definite: symmetric matrix required");
    DefinitenessReport rep;
    rep.minors = leading_principal_minors(m);
    rep.positive_definite = true;
    for (const Rational& d : rep.minors)
        if (d <= 0) rep.positive_definite = false;
    return rep;
}

// Reduced row echelon form in place; returns pivot columns.
inline std::vector<int> rref(Mat& m) {
    std::vector<int> pivots;
    int row = 0;
    for (int col = 0; col < m.c && row < m.r; ++col) {
        int p = -1;
        for (int i = row; i < m.r; ++i)
            if (m.at(i, col) != 0) {
                p = i;
                break;
            }
        if (p < 0) continue;
        if (p != row)
            for (int j = 0; j < m.c; ++j) std::swap(m.at(p, j), m.at(row, j));
        Rational inv = Rational(1) / m.at(row, col);
        for (int j = col; j < m.c; ++j) m.at(row, j) *= inv;
        for (int i = 0; i < m.r; ++i) {
            if (i == row || m.at(i, col) == 0) continue;
            Rational f = m.at(i, col);
            for (int j = col; j < m.c; ++j) m.at(i, j) -= f * m.at(row, j);
        }
        pivots.push_back(col);
        ++row;
    }
    return pivots;
}

inline int rank(Mat m) { return static_cast<int>(rref(m).size()); }

// Basis of the right null space { v : m v = 0 }.
inline std::vector<std::vector<Rational>> nullspace(Mat m) {
    std::vector<int> pivots = rref(m);
    std::vector<std::vector<Rational>> basis;
    std::vector<bool> is_pivot(m.c, false);
    for (int p : pivots) is_pivot[p] = true;
    for (int free = 0; free < m.c; ++free) {
        if (is_pivot[free]) continue;
        std::vector<Rational> v(m.c, Rational(0));
        v[free] = 1;
        for (size_t i = 0; i < pivots.size(); ++i) v[pivots[i]] = -m.at(static_cast<int>(i), free);
        basis.push_back(std::move(v));
    }
    return basis;
}

struct Inertia {
    int positive = 0, negative = 0, zero = 0;
    bool operator==(const Inertia&) const = default;
};

// Exact eigenvalue sign counts of a symmetric matrix via congruence
// diagonalization. When the leading diagonal entry vanishes, a nonzero
// diagonal entry is swapped in; when the whole diagonal vanishes, adding a
// column with a nonzero off-diagonal entry into it manufactures one without
// changing the signature.
inline Inertia signature_inertia(Mat m) {
    if (!m.is_symmetric())
        throw std::invalid_argument("signature_inertia: symmetric matrix required");
    const int d = m.r;
    Inertia result;
    for (int p = 0; p < d; ++p) {
        int diag = -1;
        for (int i = p; i < d && diag < 0; ++i)
            if (m.at(i, i) != 0) diag = i;
        if (diag < 0) {
            int oi = -1, oj = -1;
            for (int i = p; i < d && oi < 0; ++i)
                for (int j = i + 1; j < d && oi < 0; ++j)
                    if (m.at(i, j) != 0) {
                        oi = i;
                        oj = j;
                    }
            if (oi < 0) {
                result.zero += d - p;
                return result;
            }
            for (int t = p; t < d; ++t) m.at(oi, t) += m.at(oj, t);
            for (int t = p; t < d; ++t) m.at(t, oi) += m.at(t, oj);
            diag = oi;
        }
        if (diag != p) {
            for (int t = p; t < d; ++t) std::swap(m.at(diag, t), m.at(p, t));
            for (int t = p; t < d; ++t) std::swap(m.at(t, diag), m.at(t, p));
        }
        const Rational piv = m.at(p, p);
        if (piv > 0) ++result.positive;
        else ++result.negative;
        for (int i = p + 1; i < d; ++i) {
            if (m.at(i, p) == 0) continue;
            Rational f = m.at(i, p) / piv;
            for (int j = p + 1; j < d; ++j) m.at(i, j) -= f * m.at(p, j);
        }
    }
    return result;
}

// Cyclic Jacobi iteration on a double copy; advisory only, pass/fail logic
// everywhere uses exact minors instead. Eigenvalues returned descending.
inline std::vector<double> float_eigenvalues(const Mat& m, double tol = 1e-6) {
    if (!m.is_symmetric())
        throw std::invalid_argument("float_eigenvalues: symmetric matrix required");
    const int n = m.r;
    std::vector<std::vector<double>> a(n, std::vector<double>(n));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) a[i][j] = to_double(m.at(i, j));
    for (int sweep = 0; sweep < 200; ++sweep) {
        double off = 0;
        for (int p = 0; p < n; ++p)
            for (int q = p + 1; q < n; ++q) off = std::max(off, std::abs(a[p][q]));
        if (off < tol * 1e-3) break;
        for (int p = 0; p < n; ++p) {
            for (int q = p + 1; q < n; ++q) {
                if (std::abs(a[p][q]) < 1e-300) continue;
                double theta = (a[q][q] - a[p][p]) / (2 * a[p][q]);
                double t = (theta >= 0 ? 1.0 : -1.0) /
                           (std::abs(theta) + std::sqrt(theta * theta + 1));
                double co = 1 / std::sqrt(t * t + 1), si = t * co;
                for (int k = 0; k < n; ++k) {
                    double akp = a[k][p], akq = a[k][q];
                    a[k][p] = co * akp - si * akq;
                    a[k][q] = si * akp + co * akq;
                }
                for (int k = 0; k < n; ++k) {
                    double apk = a[p][k], aqk = a[q][k];
                    a[p][k] = co * apk - si * aqk;
                    a[q][k] = si * apk + co * aqk;
                }
            }
        }
    }
    std::vector<double> ev(n);
    for (int i = 0; i < n; ++i) ev[i] = a[i][i];
    std::sort(ev.rbegin(), ev.rend());
    return ev;
}

}  // namespace qp
