#ifndef TENSORDIAG_BASIS_CHANGE_HPP
#define TENSORDIAG_BASIS_CHANGE_HPP

// Change of basis S = (V⊗V⊗V).T for V ∈ ℂ^{n×r}:
//   S_{i1 i2 i3} = Σ_{j1 j2 j3} V_{j1 i1} V_{j2 i2} V_{j3 i3} T_{j1 j2 j3},
// whose slices are S_k = Vᵀ D_k V with D_k = Σ_m V_{m,k} T_m.
//
// explicit_cob materializes S (O(n⁴) with cubic multiplication). tscb and lcscb
// return the slice traces and a slice combination of S in O(n³) without ever
// forming it. All three use the plain transpose Vᵀ; callers pass conj(P).

#include "tensordiag/common.hpp"
#include "tensordiag/op_count.hpp"
#include "tensordiag/sym_tensor.hpp"

#include <algorithm>
#include <vector>

namespace tensordiag {

/// Flatten, multiply, reshape. The flattening multiplies a square change of
/// basis, so a rectangular V is completed with zero columns; the result is
/// the leading r×r×r block.
inline SymTensor3 explicit_cob(const SymTensor3& T, const Matrix& V) {
    const Index n = T.n();
    if (V.rows() != n) throw ArgumentError("explicit_cob: V must have n rows");
    const Index r = V.cols();
    if (r < 1) throw ArgumentError("explicit_cob: V must have at least one column");

    Matrix Vsq = Matrix::Zero(n, n);
    Vsq.leftCols(std::min(r, n)) = V.leftCols(std::min(r, n));
    // More columns than rows: the padded square form cannot hold V.
    if (r > n) Vsq = V;
    const Index m = Vsq.cols();

    std::vector<Complex> out(static_cast<std::size_t>(r * r * r));
    const auto flat = T.flat();
    constexpr Index kBlock = 16;
    for (Index i0 = 0; i0 < m; i0 += kBlock) {
        const Index b = std::min(kBlock, m - i0);
        // Rows i0..i0+b of Vᵀ·T_flat; row i reshapes to D_i.
        const RowMatrix X = Vsq.middleCols(i0, b).transpose() * flat;
        ops::gemm(b, n, n * n);
        for (Index t = 0; t < b; ++t) {
            const Index i = i0 + t;
            const Eigen::Map<const RowMatrix> Di(X.row(t).data(), n, n);
            const Matrix Mi = Vsq.transpose() * Di;
            const Matrix Si = Mi * Vsq;
            ops::gemm(m, n, n);
            ops::gemm(m, n, m);
            if (i >= r) continue;
            for (Index j = 0; j < r; ++j)
                for (Index k = 0; k < r; ++k) out[static_cast<std::size_t>((i * r + j) * r + k)] = Si(j, k);
        }
    }
    return SymTensor3::from_data(r, std::move(out));
}

/// Traces of the r slices of (V⊗V⊗V).T.
inline Vector tscb(const SymTensor3& T, const Matrix& V) {
    const Index n = T.n();
    if (V.rows() != n) throw ArgumentError("tscb: V must have n rows");
    const Index r = V.cols();

    const Matrix W = V * V.transpose();
    ops::gemm(n, r, n);

    // x_m = Σ_k (W T_m)_kk
    Vector x(n);
    for (Index m = 0; m < n; ++m) x(m) = (W.array() * T.block(m).transpose().array()).sum();
    ops::add(static_cast<std::uint64_t>(n) * n * n);

    ops::gemm(r, n, 1);
    return V.transpose() * x;
}

/// Σ_i a_i S_i for S = (V⊗V⊗V).T, computed as Vᵀ(Σ_m ⟨a, v_m⟩ T_m)V with v_m
/// the rows of V.
inline Matrix lcscb(const SymTensor3& T, const Matrix& V, const Vector& a) {
    const Index n = T.n();
    if (V.rows() != n) throw ArgumentError("lcscb: V must have n rows");
    const Index r = V.cols();
    if (a.size() != r) throw ArgumentError("lcscb: coefficient vector must have r entries");

    const Vector alpha = V * a;
    ops::gemm(n, r, 1);
    const Matrix D = slice_combination(T, alpha);
    const Matrix A = D * V;
    ops::gemm(n, n, r);
    ops::gemm(r, n, r);
    return V.transpose() * A;
}

inline Matrix lcscb(const SymTensor3& T, const Matrix& V, const RealVector& a) {
    return lcscb(T, V, Vector(a.cast<Complex>()));
}

}  // namespace tensordiag

#endif  // TENSORDIAG_BASIS_CHANGE_HPP
