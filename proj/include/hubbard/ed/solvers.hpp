#pragma once
#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <random>
#include <type_traits>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <lapacke.h>

#include "hubbard/errors.hpp"
#include "hubbard/lattice.hpp"

namespace hubbard::ed {

template <class Scalar>
using DenseMatrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <class Scalar>
using DenseVector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
template <class Scalar>
using SparseOperator = Eigen::SparseMatrix<Scalar, Eigen::RowMajor>;

inline constexpr std::size_t default_dense_budget = 6000;

template <class Scalar>
struct EigenPairs {
    Eigen::VectorXd values;       // ascending
    DenseMatrix<Scalar> vectors;  // columns; empty when only values were requested
    std::vector<double> residuals;
};

namespace detail {
inline void hermitian_eigen(DenseMatrix<cplx>& H, bool want_vectors, Eigen::VectorXd& values, DenseMatrix<cplx>& Z) {
    const auto n = static_cast<lapack_int>(H.rows());
    Z.resize(want_vectors ? n : 1, want_vectors ? n : 1);
    std::vector<lapack_int> support(2 * static_cast<std::size_t>(n));
    lapack_int found = 0;
    lapack_int info = LAPACKE_zheevr(LAPACK_COL_MAJOR, want_vectors ? 'V' : 'N', 'A', 'L', n,
                                     reinterpret_cast<lapack_complex_double*>(H.data()), n, 0.0, 0.0, 0, 0, 0.0, &found,
                                     values.data(), reinterpret_cast<lapack_complex_double*>(Z.data()),
                                     want_vectors ? n : 1, support.data());
    if (info != 0) throw numeric_error("LAPACK eigensolver failed to converge");
}

// Real orthonormal eigenvectors from complex ones: within each cluster of equal eigenvalues
// the real and imaginary parts span the real eigenspace.
inline Eigen::MatrixXd realify(const DenseMatrix<cplx>& Z, const Eigen::VectorXd& values) {
    const Eigen::Index n = Z.rows();
    Eigen::MatrixXd out(n, Z.cols());
    const double scale = std::max(1.0, values.cwiseAbs().maxCoeff());
    Eigen::Index i = 0;
    while (i < values.size()) {
        Eigen::Index j = i + 1;
        while (j < values.size() && values[j] - values[j - 1] <= 1e-10 * scale) ++j;
        const Eigen::Index m = j - i;
        Eigen::MatrixXd span(n, 2 * m);
        span << Z.middleCols(i, m).real(), Z.middleCols(i, m).imag();
        Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(span);
        out.middleCols(i, m) = qr.householderQ() * Eigen::MatrixXd::Identity(n, m);
        i = j;
    }
    return out;
}

template <class Scalar>
void check_residuals(const DenseMatrix<Scalar>& H, const EigenPairs<Scalar>& r) {
    const Eigen::Index n = H.rows();
    if (r.vectors.cols() == 0 || n == 0) return;
    const double scale = std::max(1.0, r.values.cwiseAbs().maxCoeff());
    for (Eigen::Index c : {Eigen::Index(0), n / 2, n - 1}) {
        double res = (H * r.vectors.col(c) - r.values[c] * r.vectors.col(c)).norm();
        if (res > 1e-8 * scale) throw numeric_error("dense eigensolver returned inaccurate eigenpairs");
    }
}
}  // namespace detail

// Full Hermitian eigensystem through LAPACK zheevr. Real symmetric matrices take the same
// route: the real-arithmetic kernels of the system OpenBLAS give wrong eigenvectors on
// AVX-512 hosts, while the complex ones are sound. A few residuals are spot-checked.
template <class Scalar>
EigenPairs<Scalar> dense_eigensystem(const DenseMatrix<Scalar>& H, bool want_vectors = true,
                                     std::size_t budget = default_dense_budget) {
    static_assert(std::is_same_v<Scalar, double> || std::is_same_v<Scalar, cplx>, "only double and complex<double>");
    const auto n = H.rows();
    if (H.rows() != H.cols()) throw domain_error("eigensystem needs a square matrix");
    if (static_cast<std::size_t>(n) > budget) throw budget_error("sector dimension exceeds the dense diagonalisation budget");
    EigenPairs<Scalar> out;
    out.values.resize(n);
    if (n == 0) return out;
    DenseMatrix<cplx> work = H.template cast<cplx>();
    DenseMatrix<cplx> Z;
    detail::hermitian_eigen(work, want_vectors, out.values, Z);
    if (!want_vectors) return out;
    if constexpr (std::is_same_v<Scalar, double>)
        out.vectors = detail::realify(Z, out.values);
    else
        out.vectors = std::move(Z);
    detail::check_residuals(H, out);
    return out;
}

struct LanczosOptions {
    double tolerance = 1e-8;  // on || H v - E v || for unit v
    int krylov = 120;
    int max_restarts = 400;
    std::uint64_t seed = 20240531;
    std::size_t dense_below = 300;  // small problems go straight to the dense solver
    std::size_t memory_bytes = std::size_t(512) << 20;  // caps the Krylov basis for large dimensions
};

namespace detail {
template <class Scalar>
DenseVector<Scalar> seeded_vector(Eigen::Index n, std::uint64_t seed) {
    std::mt19937_64 gen(seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    DenseVector<Scalar> v(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        if constexpr (std::is_same_v<Scalar, double>)
            v[i] = u(gen);
        else
            v[i] = Scalar(u(gen), u(gen));
    }
    return v;
}

template <class Scalar>
void project_out(DenseVector<Scalar>& w, const DenseMatrix<Scalar>& F, Eigen::Index count) {
    if (count == 0) return;
    auto block = F.leftCols(count);
    w -= block * (block.adjoint() * w);
}
}  // namespace detail

// Lowest `count` eigenpairs by restarted Lanczos with full reorthogonalisation. Each pair
// is found in turn on the complement of those already converged.
template <class Scalar>
EigenPairs<Scalar> lowest_eigenpairs(const SparseOperator<Scalar>& H, int count, LanczosOptions opt = {}) {
    const Eigen::Index D = H.rows();
    if (count < 1 || count > D) throw domain_error("requested eigenpair count must lie in [1, dimension]");
    if (static_cast<std::size_t>(D) <= opt.dense_below) {
        auto all = dense_eigensystem<Scalar>(DenseMatrix<Scalar>(H), true, static_cast<std::size_t>(D));
        EigenPairs<Scalar> out;
        out.values = all.values.head(count);
        out.vectors = all.vectors.leftCols(count);
        for (int p = 0; p < count; ++p)
            out.residuals.push_back((H * out.vectors.col(p) - out.values[p] * out.vectors.col(p)).norm());
        return out;
    }
    const auto affordable = static_cast<Eigen::Index>(opt.memory_bytes / (sizeof(Scalar) * static_cast<std::size_t>(D)));
    const Eigen::Index m = std::min<Eigen::Index>({Eigen::Index(opt.krylov), D - count + 1, std::max<Eigen::Index>(affordable - 1, 8)});
    DenseMatrix<Scalar> found(D, count);
    EigenPairs<Scalar> out;
    out.values.resize(count);
    for (int p = 0; p < count; ++p) {
        DenseVector<Scalar> v = detail::seeded_vector<Scalar>(D, opt.seed + static_cast<std::uint64_t>(p));
        detail::project_out(v, found, p);
        v.normalize();
        DenseMatrix<Scalar> V(D, m + 1);
        bool done = false;
        double theta = 0.0;
        DenseVector<Scalar> x;
        for (int restart = 0; restart <= opt.max_restarts && !done; ++restart) {
            std::vector<double> alpha, beta;
            V.col(0) = v;
            Eigen::Index used = 0;
            Eigen::VectorXd ritz;
            for (Eigen::Index j = 0; j < m; ++j) {
                DenseVector<Scalar> w = H * V.col(j);
                detail::project_out(w, found, p);
                alpha.push_back(std::real(V.col(j).dot(w)));
                for (int pass = 0; pass < 2; ++pass) {
                    w -= V.leftCols(j + 1) * (V.leftCols(j + 1).adjoint() * w);
                    detail::project_out(w, found, p);
                }
                double b = w.norm();
                used = j + 1;
                bool last = (j + 1 == m) || b < 1e-13;
                if (last || j % 5 == 4) {
                    Eigen::MatrixXd T = Eigen::MatrixXd::Zero(used, used);
                    for (Eigen::Index i = 0; i < used; ++i) {
                        T(i, i) = alpha[static_cast<std::size_t>(i)];
                        if (i + 1 < used) T(i, i + 1) = T(i + 1, i) = beta[static_cast<std::size_t>(i)];
                    }
                    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(T);
                    theta = es.eigenvalues()[0];
                    ritz = es.eigenvectors().col(0);
                    double estimate = b * std::abs(ritz[used - 1]);
                    if (estimate <= 0.1 * opt.tolerance || last) break;
                }
                beta.push_back(b);
                V.col(j + 1) = w / b;
            }
            x = V.leftCols(used) * ritz.template cast<Scalar>();
            detail::project_out(x, found, p);
            x.normalize();
            DenseVector<Scalar> Hx = H * x;
            theta = std::real(x.dot(Hx));
            double residual = (Hx - theta * x).norm();
            if (residual <= opt.tolerance) done = true;
            v = x;
        }
        if (!done) throw numeric_error("Lanczos did not converge within the restart limit");
        found.col(p) = x;
        out.values[p] = theta;
    }
    // deflated pairs come out in ascending order up to round-off; sort to be safe
    std::vector<int> order(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i) order[static_cast<std::size_t>(i)] = i;
    std::sort(order.begin(), order.end(), [&](int a, int b) { return out.values[a] < out.values[b]; });
    EigenPairs<Scalar> sorted;
    sorted.values.resize(count);
    sorted.vectors.resize(D, count);
    for (int i = 0; i < count; ++i) {
        int src = order[static_cast<std::size_t>(i)];
        sorted.values[i] = out.values[src];
        sorted.vectors.col(i) = found.col(src);
        sorted.residuals.push_back((H * found.col(src) - out.values[src] * found.col(src)).norm());
    }
    return sorted;
}

}  // namespace hubbard::ed
