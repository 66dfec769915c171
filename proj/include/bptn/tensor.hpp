#pragma once

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <utility>
#include <vector>

#include <Eigen/Dense>
#include "json.hpp"

namespace bptn {

using cplx = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

/// Dense complex array with a fixed row-major linearization (last axis fastest).
///
/// A rank-0 tensor has an empty shape and holds exactly one scalar.
class DenseTensor {
 public:
  DenseTensor();
  explicit DenseTensor(std::vector<std::size_t> shape);
  DenseTensor(std::vector<std::size_t> shape, std::vector<cplx> data);

  static DenseTensor from_matrix(const Matrix& m);

  const std::vector<std::size_t>& shape() const { return shape_; }
  std::size_t extent(std::size_t axis) const { return shape_.at(axis); }
  std::size_t rank() const { return shape_.size(); }
  std::size_t size() const { return data_.size(); }

  std::span<const cplx> data() const { return data_; }
  std::span<cplx> data() { return data_; }

  cplx& operator[](std::size_t flat) { return data_[flat]; }
  const cplx& operator[](std::size_t flat) const { return data_[flat]; }

  cplx& at(std::initializer_list<std::size_t> index);
  const cplx& at(std::initializer_list<std::size_t> index) const;
  std::size_t flat_index(std::span<const std::size_t> index) const;

  std::vector<std::size_t> strides() const;

  double norm() const;
  bool all_finite() const;
  bool is_zero() const;

  DenseTensor conj() const;
  DenseTensor& operator*=(cplx s);
  DenseTensor& operator+=(const DenseTensor& other);
  DenseTensor& operator-=(const DenseTensor& other);

  /// Reinterprets the data with a new shape of equal total size.
  DenseTensor reshaped(std::vector<std::size_t> shape) const;

  /// Views the tensor as a matrix whose rows are the leading `row_axes` axes.
  Matrix as_matrix(std::size_t row_axes) const;

  friend bool operator==(const DenseTensor&, const DenseTensor&) = default;

 private:
  std::vector<std::size_t> shape_;
  std::vector<cplx> data_;
};

DenseTensor operator*(cplx s, DenseTensor t);
DenseTensor operator+(DenseTensor a, const DenseTensor& b);
DenseTensor operator-(DenseTensor a, const DenseTensor& b);

/// Result axes: axis `i` of the output is axis `perm[i]` of the input.
DenseTensor permute(const DenseTensor& t, std::span<const std::size_t> perm);

/// Sums over each (axis of a, axis of b) pair. Output axes are the unpaired axes of `a`
/// followed by the unpaired axes of `b`, each in original order.
DenseTensor contract(const DenseTensor& a, const DenseTensor& b,
                     std::span<const std::pair<std::size_t, std::size_t>> axis_pairs);
DenseTensor contract(const DenseTensor& a, const DenseTensor& b,
                     std::initializer_list<std::pair<std::size_t, std::size_t>> axis_pairs);

/// Kronecker product of two square or rectangular matrices.
Matrix kron(const Matrix& a, const Matrix& b);

struct HermitianEig {
  Eigen::VectorXd values;  // ascending
  Matrix vectors;          // columns, unitary
};

/// Eigendecomposition of a Hermitian matrix; throws InvalidInput when `m` is not
/// Hermitian within 1e-10 (relative to its largest entry).
HermitianEig hermitian_eig(const Matrix& m);
HermitianEig hermitian_eig(const DenseTensor& m);

/// Returns A with A * A^T == m for a complex symmetric m.
Matrix symmetric_factor(const Matrix& m);

bool is_hermitian(const Matrix& m, double tol);
Matrix hermitize(const Matrix& m);

nlohmann::json to_json(const DenseTensor& t);
DenseTensor tensor_from_json(const nlohmann::json& j);

// ---------------------------------------------------------------------------
// Small labeled networks. Each label names one index; a label shared by two
// tensors is summed over when they are contracted.

struct LabeledTensor {
  DenseTensor tensor;
  std::vector<int> labels;
};

LabeledTensor contract(const LabeledTensor& a, const LabeledTensor& b);

/// Reorders axes so that the labels appear in `order` (which must be a permutation).
DenseTensor arrange(const LabeledTensor& t, std::span<const int> order);

/// Left fold over `parts` in the given order.
LabeledTensor contract_sequence(std::span<const LabeledTensor> parts);

}  // namespace bptn
