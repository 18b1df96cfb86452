#include "bmin/subalgebra.hpp"

#include <cmath>
#include <sstream>

namespace bmin {

namespace {

Eigen::Map<const CVector> vec(const CMatrix& m) { return {m.data(), m.size()}; }

HermitianMatrix unit(Eigen::Index n, Eigen::Index i, Eigen::Index j, Complex ij, Complex ji) {
  CMatrix m = CMatrix::Zero(n, n);
  m(i, j) += ij;
  m(j, i) += ji;
  return HermitianMatrix(m);
}

}  // namespace

std::string_view to_string(BasisLabel label) {
  switch (label) {
    case BasisLabel::Diagonal: return "diag";
    case BasisLabel::Block: return "block";
    case BasisLabel::PauliDiagonal: return "pauli-diag";
    case BasisLabel::Custom: return "custom";
  }
  return "custom";
}

SubalgebraBasis::SubalgebraBasis(std::vector<HermitianMatrix> elements, BasisLabel label)
    : elements_(std::move(elements)), label_(label) {
  if (elements_.empty()) throw Error(ErrorCode::EmptySpan, "SubalgebraBasis: no elements");
  n_ = elements_.front().n();
  const auto t = static_cast<Eigen::Index>(elements_.size());
  stacked_.resize(t, n_ * n_);
  for (Eigen::Index k = 0; k < t; ++k) {
    if (elements_[static_cast<std::size_t>(k)].n() != n_) {
      throw Error(ErrorCode::DimensionMismatch, "SubalgebraBasis: elements differ in size");
    }
    stacked_.row(k) = vec(elements_[static_cast<std::size_t>(k)].matrix()).adjoint();
  }
  const CMatrix gram = stacked_ * stacked_.adjoint();
  const double err = (gram - CMatrix::Identity(t, t)).cwiseAbs().maxCoeff();
  if (err > 1e-10) {
    std::ostringstream os;
    os << "SubalgebraBasis: elements are not trace-orthonormal (max deviation " << err << ")";
    throw Error(ErrorCode::InvalidInput, os.str());
  }
}

HermitianMatrix SubalgebraBasis::combine(const RVector& x) const {
  if (x.size() != dim()) throw Error(ErrorCode::DimensionMismatch, "combine: coefficient length != dim(B)");
  CMatrix m = CMatrix::Zero(n_, n_);
  for (Eigen::Index k = 0; k < dim(); ++k) m += x[k] * (*this)[k].matrix();
  return HermitianMatrix::symmetrize(m);
}

double SubalgebraBasis::span_residual(const CMatrix& y) const {
  if (y.rows() != n_ || y.cols() != n_) throw Error(ErrorCode::DimensionMismatch, "span_residual: size mismatch");
  const CVector coeffs = stacked_ * vec(y);
  return (vec(y) - stacked_.adjoint() * coeffs).norm();
}

bool SubalgebraBasis::is_unital(double tol) const {
  return span_residual(CMatrix::Identity(n_, n_)) <= tol;
}

Eigen::Index BlockPattern::total() const {
  Eigen::Index n = 0;
  for (const auto& b : blocks) n += b.size;
  return n;
}

BlockPattern BlockPattern::parse(const std::string& spec) {
  BlockPattern pattern;
  std::stringstream ss(spec);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.size() < 2) throw Error(ErrorCode::InvalidPattern, "block pattern: bad item '" + item + "'");
    const char kind = item.back();
    const std::string digits = item.substr(0, item.size() - 1);
    if (digits.find_first_not_of("0123456789") != std::string::npos || (kind != 'd' && kind != 'f')) {
      throw Error(ErrorCode::InvalidPattern, "block pattern: bad item '" + item + "'");
    }
    if (digits.size() > 6 || std::stol(digits) < 1) {
      throw Error(ErrorCode::InvalidPattern, "block pattern: block sizes must be positive, got '" + item + "'");
    }
    pattern.blocks.push_back({std::stol(digits), kind == 'd' ? BlockKind::Diagonal : BlockKind::Full});
  }
  if (pattern.blocks.empty() || spec.back() == ',') throw Error(ErrorCode::InvalidPattern, "block pattern: empty item");
  return pattern;
}

SubalgebraBasis build_diagonal(Eigen::Index n) {
  if (n < 1) throw Error(ErrorCode::InvalidInput, "build_diagonal: n must be >= 1");
  std::vector<HermitianMatrix> elements;
  for (Eigen::Index i = 0; i < n; ++i) elements.push_back(unit(n, i, i, 0.5, 0.5));
  return SubalgebraBasis(std::move(elements), BasisLabel::Diagonal);
}

SubalgebraBasis build_block(const BlockPattern& pattern) {
  const Eigen::Index n = pattern.total();
  if (n < 1) throw Error(ErrorCode::InvalidPattern, "build_block: empty pattern");
  for (const auto& b : pattern.blocks) {
    if (b.size < 1) throw Error(ErrorCode::InvalidPattern, "build_block: block sizes must be positive");
  }
  const double s = 1.0 / std::sqrt(2.0);
  const Complex i_unit(0.0, 1.0);
  std::vector<HermitianMatrix> elements;
  for (Eigen::Index i = 0; i < n; ++i) elements.push_back(unit(n, i, i, 0.5, 0.5));
  Eigen::Index offset = 0;
  for (const auto& b : pattern.blocks) {
    if (b.kind == BlockKind::Full) {
      for (Eigen::Index i = offset; i < offset + b.size; ++i) {
        for (Eigen::Index j = i + 1; j < offset + b.size; ++j) {
          elements.push_back(unit(n, i, j, s, s));
          elements.push_back(unit(n, i, j, -i_unit * s, i_unit * s));
        }
      }
    }
    offset += b.size;
  }
  return SubalgebraBasis(std::move(elements), BasisLabel::Block);
}

SubalgebraBasis build_pauli_diagonal(int q) {
  if (q < 1 || q > 20) throw Error(ErrorCode::InvalidInput, "build_pauli_diagonal: need 1 <= q <= 20");
  const Eigen::Index n = Eigen::Index{1} << q;
  const double scale = 1.0 / std::sqrt(static_cast<double>(n));
  std::vector<HermitianMatrix> elements;
  for (Eigen::Index m = 0; m < n; ++m) {
    RVector d(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      int sign = 1;
      for (int j = 0; j < q; ++j) {
        // Factor j+1 acts on bit q-1-j of the row index.
        const bool z_here = (m >> j) & 1;
        const bool bit = (i >> (q - 1 - j)) & 1;
        if (z_here && bit) sign = -sign;
      }
      d[i] = sign * scale;
    }
    elements.push_back(HermitianMatrix::diagonal(d));
  }
  return SubalgebraBasis(std::move(elements), BasisLabel::PauliDiagonal);
}

SubalgebraBasis orthonormalize(const std::vector<HermitianMatrix>& raw, BasisLabel label) {
  if (raw.empty()) throw Error(ErrorCode::EmptySpan, "orthonormalize: empty input");
  const Eigen::Index n = raw.front().n();
  std::vector<CMatrix> kept;
  for (const auto& h : raw) {
    if (h.n() != n) throw Error(ErrorCode::DimensionMismatch, "orthonormalize: elements differ in size");
    const double nrm = h.frobenius_norm();
    if (nrm == 0) continue;
    CMatrix v = h.matrix() / nrm;
    for (int pass = 0; pass < 2; ++pass) {
      for (const auto& e : kept) {
        const double c = (v.array() * e.array().conjugate()).sum().real();
        v -= c * e;
      }
    }
    const double residual = v.norm();
    if (residual < 1e-10) continue;
    kept.push_back(v / residual);
  }
  if (kept.empty()) throw Error(ErrorCode::EmptySpan, "orthonormalize: inputs span nothing");
  std::vector<HermitianMatrix> elements;
  for (const auto& e : kept) elements.push_back(HermitianMatrix::symmetrize(e));
  return SubalgebraBasis(std::move(elements), label);
}

bool verify_closed(const SubalgebraBasis& basis, double tol) {
  for (Eigen::Index i = 0; i < basis.dim(); ++i) {
    for (Eigen::Index j = 0; j < basis.dim(); ++j) {
      const CMatrix product = basis[i].matrix() * basis[j].matrix();
      if (basis.span_residual(product) > tol) return false;
    }
  }
  return true;
}

RVector compress(const HermitianMatrix& rho, const SubalgebraBasis& basis) {
  if (rho.n() != basis.n()) throw Error(ErrorCode::DimensionMismatch, "compress: dimension mismatch");
  const CVector c = basis.stacked() * vec(rho.matrix());
  const double residue = c.size() ? c.imag().cwiseAbs().maxCoeff() : 0.0;
  if (residue > 1e-12 * std::max(1.0, rho.frobenius_norm())) {
    std::ostringstream os;
    os << "compress: imaginary residue " << residue << " in tr(rho B_k)";
    throw Error(ErrorCode::InvalidInput, os.str());
  }
  return c.real();
}

ChangeOfBasis change_of_basis(const SubalgebraBasis& from, const SubalgebraBasis& to) {
  if (from.n() != to.n() || from.dim() != to.dim()) {
    throw Error(ErrorCode::SpanMismatch, "change_of_basis: bases have different dimensions");
  }
  for (const auto& e : from.elements()) {
    if (to.span_residual(e.matrix()) > 1e-8) throw Error(ErrorCode::SpanMismatch, "change_of_basis: spans differ");
  }
  for (const auto& e : to.elements()) {
    if (from.span_residual(e.matrix()) > 1e-8) throw Error(ErrorCode::SpanMismatch, "change_of_basis: spans differ");
  }
  ChangeOfBasis c;
  c.matrix.resize(to.dim(), from.dim());
  for (Eigen::Index k = 0; k < to.dim(); ++k)
    for (Eigen::Index i = 0; i < from.dim(); ++i) c.matrix(k, i) = trace_inner(to[k], from[i]);
  return c;
}

bool in_trace_orthocomplement(const HermitianMatrix& x, const SubalgebraBasis& basis, double tol) {
  if (x.n() != basis.n()) throw Error(ErrorCode::DimensionMismatch, "in_trace_orthocomplement: size mismatch");
  const CVector c = basis.stacked() * vec(x.matrix());
  return c.cwiseAbs().maxCoeff() <= tol * std::max(1.0, x.frobenius_norm());
}

}  // namespace bmin
