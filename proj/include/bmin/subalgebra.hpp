#pragma once

// A C*-subalgebra B of M_n(C), represented only by an orthonormal (trace
// inner product) basis of Hermitian matrices spanning its self-adjoint part.

#include <string>
#include <vector>

#include "bmin/hermitian.hpp"

namespace bmin {

enum class BasisLabel { Diagonal, Block, PauliDiagonal, Custom };

std::string_view to_string(BasisLabel label);

class SubalgebraBasis {
 public:
  SubalgebraBasis() = default;
  /// Throws InvalidInput unless tr(B_i B_j) = delta_ij within 1e-10 and all
  /// elements share the ambient dimension.
  SubalgebraBasis(std::vector<HermitianMatrix> elements, BasisLabel label);

  Eigen::Index n() const { return n_; }
  Eigen::Index dim() const { return static_cast<Eigen::Index>(elements_.size()); }
  const std::vector<HermitianMatrix>& elements() const { return elements_; }
  const HermitianMatrix& operator[](Eigen::Index k) const { return elements_[static_cast<std::size_t>(k)]; }
  BasisLabel label() const { return label_; }

  /// Row k is conj(vec(B_k))^T, so (rows * vec(Y))_k = tr(Y B_k) for
  /// Hermitian B_k and any Y.
  const CMatrix& stacked() const { return stacked_; }

  /// Sum_k x_k B_k.
  HermitianMatrix combine(const RVector& x) const;

  /// Residual ||Y - sum_k tr(Y B_k) B_k||_F of projecting Y onto the complex
  /// span of the basis.
  double span_residual(const CMatrix& y) const;

  /// I_n lies in the span within tol.
  bool is_unital(double tol = 1e-10) const;

 private:
  Eigen::Index n_ = 0;
  std::vector<HermitianMatrix> elements_;
  BasisLabel label_ = BasisLabel::Custom;
  CMatrix stacked_;
};

/// C[k][i] = tr(to_k from_i).
struct ChangeOfBasis {
  RMatrix matrix;
};

enum class BlockKind { Diagonal, Full };

struct Block {
  Eigen::Index size = 0;
  BlockKind kind = BlockKind::Diagonal;
};

struct BlockPattern {
  std::vector<Block> blocks;

  Eigen::Index total() const;
  /// Parses "2d,2f".
  static BlockPattern parse(const std::string& spec);
};

SubalgebraBasis build_diagonal(Eigen::Index n);

/// Diagonal blocks contribute e_i e_i*. A full block additionally contributes,
/// for i < j inside it, (e_i e_j* + e_j e_i*)/sqrt2 followed by
/// (-i e_i e_j* + i e_j e_i*)/sqrt2.
SubalgebraBasis build_block(const BlockPattern& pattern);

/// All 2^q normalized tensor products of I_2 and Z. Element m carries Z on
/// factor j+1 (leftmost factor first) iff bit j of m is set.
SubalgebraBasis build_pauli_diagonal(int q);

/// Gram-Schmidt under tr(XY). Inputs are normalized first; a vector whose
/// residual falls below 1e-10 is dropped. Throws EmptySpan if nothing is left.
SubalgebraBasis orthonormalize(const std::vector<HermitianMatrix>& raw,
                               BasisLabel label = BasisLabel::Custom);

/// Every product B_i B_j lies in the complex span of the basis within tol.
bool verify_closed(const SubalgebraBasis& basis, double tol = 1e-8);

/// Phi^B(rho) = (tr(rho B_1), ..., tr(rho B_t)). Throws InvalidInput if an
/// imaginary residue above 1e-12 max(1, ||rho||_F) shows up.
RVector compress(const HermitianMatrix& rho, const SubalgebraBasis& basis);

/// Throws SpanMismatch unless the two bases span the same space (mutual
/// projection residual <= 1e-8).
ChangeOfBasis change_of_basis(const SubalgebraBasis& from, const SubalgebraBasis& to);

/// max_k |tr(X B_k)| <= tol max(1, ||X||_F).
bool in_trace_orthocomplement(const HermitianMatrix& x, const SubalgebraBasis& basis, double tol);

}  // namespace bmin
