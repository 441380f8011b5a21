// Copyright 2026 The ohsense Authors.

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at

//     http://www.apache.org/licenses/LICENSE-2.0

// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

/**
 * @file
 * Dense complex linear algebra used throughout the library: a Hermitian
 * operator type with a lazily cached spectrum, a cyclic Jacobi eigensolver,
 * Pauli tensor products and the handful of norms the bounds need.
 */

#pragma once

#include <complex>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace ohsense {

using cplx = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RMatrix = Eigen::MatrixXd;
using RVector = Eigen::VectorXd;

inline constexpr cplx kI{0.0, 1.0};

/// Raised when a numerical routine cannot produce a trustworthy result.
class NumericalError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Eigenvalues ascending, eigenvectors as orthonormal columns.
struct Spectrum {
    RVector values;
    CMatrix vectors;
};

/// Largest entry modulus. Zero for empty matrices.
double max_abs(const CMatrix &a);

/// True when every entry is finite.
bool all_finite(const CMatrix &a);

/**
 * Hermitian matrix with a spectrum computed on first use.
 *
 * Construction checks ‖A − A†‖_max ≤ 1e-12·(1 + ‖A‖_max) and stores the
 * exactly symmetrized matrix. Copies share the spectrum cache; the cache is
 * filled under std::call_once, so concurrent readers are safe.
 */
class HermitianOperator {
  public:
    HermitianOperator();
    explicit HermitianOperator(CMatrix m, double tolerance = 1e-12);

    /// Wraps a matrix whose spectrum is already known. The spectrum is not
    /// re-derived, only checked for shape.
    HermitianOperator(CMatrix m, Spectrum known);

    [[nodiscard]] const CMatrix &matrix() const noexcept { return m_; }
    [[nodiscard]] Eigen::Index dim() const noexcept { return m_.rows(); }
    [[nodiscard]] const Spectrum &spectrum() const;

    /// Threshold below which two eigenvalues are treated as degenerate:
    /// 1e-10·(1 + ‖A‖_op).
    [[nodiscard]] double degeneracy_threshold() const;

    HermitianOperator operator+(const HermitianOperator &o) const;
    HermitianOperator operator-(const HermitianOperator &o) const;
    HermitianOperator operator*(double s) const;

  private:
    struct Cache {
        std::once_flag once;
        Spectrum spectrum;
    };
    CMatrix m_;
    std::shared_ptr<Cache> cache_;
};

inline HermitianOperator operator*(double s, const HermitianOperator &a) { return a * s; }

/// Single-qubit Pauli matrix σ_i, i ∈ 0..3 (σ_0 = identity).
CMatrix pauli(int i);

/**
 * T_ijk = σ_i ⊗ σ_j ⊗ σ_k on the 8-dimensional space.
 *
 * Big-endian slots: σ_i acts on the most significant bit of the basis
 * index, so basis vector e_j (1-based) carries bits b₁b₂b₃ with
 * j − 1 = 4b₁ + 2b₂ + b₃.
 */
HermitianOperator pauli_tensor(int i, int j, int k);

/**
 * Cyclic Jacobi eigendecomposition of a Hermitian matrix.
 *
 * Sweeps until the off-diagonal Frobenius norm falls below
 * 1e-14·‖A‖_F. Output is sorted ascending; each eigenvector is phase fixed
 * so that its first component with modulus above 1e-10 is real positive.
 * Throws std::invalid_argument for non-Hermitian input.
 */
Spectrum eig_hermitian(const CMatrix &a, double tolerance = 1e-12);
Spectrum eig_hermitian(const HermitianOperator &a);

/// U = Σ_k exp(−i t E_k)|v_k⟩⟨v_k|.
CMatrix unitary_of(const HermitianOperator &h, double t);

/// f(A) = Σ_k f(E_k)|v_k⟩⟨v_k| for real-valued f.
template <class F> CMatrix spectral_function(const HermitianOperator &a, F &&f) {
    const Spectrum &s = a.spectrum();
    CMatrix out = CMatrix::Zero(a.dim(), a.dim());
    for (Eigen::Index k = 0; k < s.values.size(); ++k) {
        out += f(s.values(k)) * s.vectors.col(k) * s.vectors.col(k).adjoint();
    }
    return out;
}

enum class NormKind { trace, operator_norm, max };

/**
 * Matrix norms. `trace` is the sum of singular values. `operator_norm` is
 * only defined for Hermitian arguments and returns max |eigenvalue|
 * (throws std::invalid_argument otherwise). `max` is the entrywise maximum
 * modulus.
 */
double norm(const CMatrix &a, NormKind kind);

/// max_abs(A − A†).
double hermiticity_residual(const CMatrix &a);

/// (A + A†)/2.
CMatrix hermitian_part(const CMatrix &a);

/// [A, B].
inline CMatrix commutator(const CMatrix &a, const CMatrix &b) { return a * b - b * a; }

/// Principal square root of a real symmetric PSD matrix (negative
/// eigenvalues clipped to zero).
RMatrix sqrt_psd(const RMatrix &a);

/// Moore–Penrose style inverse of a real symmetric matrix that drops
/// eigenvalues with modulus below `rel_cutoff`·max|eigenvalue|.
RMatrix pinv_symmetric(const RMatrix &a, double rel_cutoff = 1e-12);

} // namespace ohsense
