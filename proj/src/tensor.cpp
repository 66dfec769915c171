#include "bptn/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <string>

#include "bptn/error.hpp"

namespace bptn {

namespace {

using RowMajorMatrix = Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

std::size_t product(const std::vector<std::size_t>& extents) {
  return std::accumulate(extents.begin(), extents.end(), std::size_t{1}, std::multiplies<>());
}

std::string shape_string(const std::vector<std::size_t>& shape) {
  std::string s = "(";
  for (std::size_t i = 0; i < shape.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(shape[i]);
  }
  return s + ")";
}

}  // namespace

DenseTensor::DenseTensor() : data_(1, cplx{0.0, 0.0}) {}

DenseTensor::DenseTensor(std::vector<std::size_t> shape)
    : shape_(std::move(shape)), data_(product(shape_), cplx{0.0, 0.0}) {
  for (auto e : shape_) {
    if (e == 0) throw InvalidInput("tensor extents must be positive, got " + shape_string(shape_));
  }
}

DenseTensor::DenseTensor(std::vector<std::size_t> shape, std::vector<cplx> data)
    : shape_(std::move(shape)), data_(std::move(data)) {
  for (auto e : shape_) {
    if (e == 0) throw InvalidInput("tensor extents must be positive, got " + shape_string(shape_));
  }
  if (data_.size() != product(shape_)) {
    throw InvalidInput("tensor data length " + std::to_string(data_.size()) +
                       " does not match shape " + shape_string(shape_));
  }
}

DenseTensor DenseTensor::from_matrix(const Matrix& m) {
  DenseTensor t({static_cast<std::size_t>(m.rows()), static_cast<std::size_t>(m.cols())});
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) t.data_[i * m.cols() + j] = m(i, j);
  return t;
}

std::vector<std::size_t> DenseTensor::strides() const {
  std::vector<std::size_t> s(shape_.size(), 1);
  for (std::size_t i = shape_.size(); i-- > 1;) s[i - 1] = s[i] * shape_[i];
  return s;
}

std::size_t DenseTensor::flat_index(std::span<const std::size_t> index) const {
  if (index.size() != shape_.size()) throw InvalidInput("index rank does not match tensor rank");
  std::size_t flat = 0;
  for (std::size_t i = 0; i < index.size(); ++i) {
    if (index[i] >= shape_[i]) throw InvalidInput("tensor index out of range");
    flat = flat * shape_[i] + index[i];
  }
  return flat;
}

cplx& DenseTensor::at(std::initializer_list<std::size_t> index) {
  return data_[flat_index(std::span<const std::size_t>(index.begin(), index.size()))];
}

const cplx& DenseTensor::at(std::initializer_list<std::size_t> index) const {
  return data_[flat_index(std::span<const std::size_t>(index.begin(), index.size()))];
}

double DenseTensor::norm() const {
  double s = 0.0;
  for (const auto& z : data_) s += std::norm(z);
  return std::sqrt(s);
}

bool DenseTensor::all_finite() const {
  return std::all_of(data_.begin(), data_.end(),
                     [](const cplx& z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); });
}

bool DenseTensor::is_zero() const {
  return std::all_of(data_.begin(), data_.end(), [](const cplx& z) { return z == cplx{}; });
}

DenseTensor DenseTensor::conj() const {
  DenseTensor out = *this;
  for (auto& z : out.data_) z = std::conj(z);
  return out;
}

DenseTensor& DenseTensor::operator*=(cplx s) {
  for (auto& z : data_) z *= s;
  return *this;
}

DenseTensor& DenseTensor::operator+=(const DenseTensor& other) {
  if (other.shape_ != shape_) throw InvalidInput("tensor shapes differ in addition");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += other.data_[i];
  return *this;
}

DenseTensor& DenseTensor::operator-=(const DenseTensor& other) {
  if (other.shape_ != shape_) throw InvalidInput("tensor shapes differ in subtraction");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= other.data_[i];
  return *this;
}

DenseTensor operator*(cplx s, DenseTensor t) { return t *= s; }
DenseTensor operator+(DenseTensor a, const DenseTensor& b) { return a += b; }
DenseTensor operator-(DenseTensor a, const DenseTensor& b) { return a -= b; }

DenseTensor DenseTensor::reshaped(std::vector<std::size_t> shape) const {
  return DenseTensor(std::move(shape), data_);
}

Matrix DenseTensor::as_matrix(std::size_t row_axes) const {
  if (row_axes > shape_.size()) throw InvalidInput("as_matrix: too many row axes");
  std::size_t rows = 1;
  for (std::size_t i = 0; i < row_axes; ++i) rows *= shape_[i];
  const std::size_t cols = data_.size() / rows;
  Matrix m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) m(i, j) = data_[i * cols + j];
  return m;
}

DenseTensor permute(const DenseTensor& t, std::span<const std::size_t> perm) {
  const std::size_t r = t.rank();
  if (perm.size() != r) throw InvalidInput("permutation length does not match tensor rank");
  std::vector<bool> seen(r, false);
  for (auto p : perm) {
    if (p >= r || seen[p]) throw InvalidInput("invalid axis permutation");
    seen[p] = true;
  }
  bool identity = true;
  for (std::size_t i = 0; i < r; ++i) identity = identity && perm[i] == i;
  if (identity) return t;

  const auto in_strides = t.strides();
  std::vector<std::size_t> out_shape(r), step(r);
  for (std::size_t i = 0; i < r; ++i) {
    out_shape[i] = t.extent(perm[i]);
    step[i] = in_strides[perm[i]];
  }
  DenseTensor out(out_shape);
  auto src = t.data();
  auto dst = out.data();
  std::vector<std::size_t> counter(r, 0);
  std::size_t offset = 0;
  for (std::size_t flat = 0; flat < dst.size(); ++flat) {
    dst[flat] = src[offset];
    for (std::size_t ax = r; ax-- > 0;) {
      if (++counter[ax] < out_shape[ax]) {
        offset += step[ax];
        break;
      }
      offset -= step[ax] * (out_shape[ax] - 1);
      counter[ax] = 0;
    }
  }
  return out;
}

DenseTensor contract(const DenseTensor& a, const DenseTensor& b,
                     std::span<const std::pair<std::size_t, std::size_t>> axis_pairs) {
  std::vector<bool> paired_a(a.rank(), false), paired_b(b.rank(), false);
  for (const auto& [ia, ib] : axis_pairs) {
    if (ia >= a.rank() || ib >= b.rank()) throw InvalidInput("contract: axis out of range");
    if (paired_a[ia] || paired_b[ib]) throw InvalidInput("contract: axis paired twice");
    if (a.extent(ia) != b.extent(ib)) {
      throw InvalidInput("contract: extent mismatch " + std::to_string(a.extent(ia)) + " vs " +
                         std::to_string(b.extent(ib)));
    }
    paired_a[ia] = paired_b[ib] = true;
  }

  std::vector<std::size_t> perm_a, perm_b, out_shape;
  std::size_t rows = 1, inner = 1, cols = 1;
  for (std::size_t i = 0; i < a.rank(); ++i) {
    if (!paired_a[i]) {
      perm_a.push_back(i);
      out_shape.push_back(a.extent(i));
      rows *= a.extent(i);
    }
  }
  for (const auto& [ia, ib] : axis_pairs) {
    perm_a.push_back(ia);
    perm_b.push_back(ib);
    inner *= a.extent(ia);
  }
  for (std::size_t i = 0; i < b.rank(); ++i) {
    if (!paired_b[i]) {
      perm_b.push_back(i);
      out_shape.push_back(b.extent(i));
      cols *= b.extent(i);
    }
  }

  const DenseTensor pa = permute(a, perm_a);
  const DenseTensor pb = permute(b, perm_b);
  DenseTensor out(out_shape);
  Eigen::Map<const RowMajorMatrix> ma(pa.data().data(), rows, inner);
  Eigen::Map<const RowMajorMatrix> mb(pb.data().data(), inner, cols);
  Eigen::Map<RowMajorMatrix> mo(out.data().data(), rows, cols);
  mo.noalias() = ma * mb;
  return out;
}

DenseTensor contract(const DenseTensor& a, const DenseTensor& b,
                     std::initializer_list<std::pair<std::size_t, std::size_t>> axis_pairs) {
  return contract(a, b, std::span<const std::pair<std::size_t, std::size_t>>(axis_pairs.begin(),
                                                                              axis_pairs.size()));
}

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

bool is_hermitian(const Matrix& m, double tol) {
  if (m.rows() != m.cols()) return false;
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  return (m - m.adjoint()).cwiseAbs().maxCoeff() <= tol * scale;
}

Matrix hermitize(const Matrix& m) { return 0.5 * (m + m.adjoint()); }

HermitianEig hermitian_eig(const Matrix& m) {
  if (m.rows() != m.cols()) throw InvalidInput("hermitian_eig: matrix is not square");
  if (!is_hermitian(m, 1e-10)) throw InvalidInput("hermitian_eig: matrix is not Hermitian");
  Eigen::SelfAdjointEigenSolver<Matrix> solver(hermitize(m));
  if (solver.info() != Eigen::Success) throw NumericalFailure("hermitian_eig: solver did not converge");
  return {solver.eigenvalues(), solver.eigenvectors()};
}

HermitianEig hermitian_eig(const DenseTensor& m) {
  if (m.rank() != 2) throw InvalidInput("hermitian_eig: tensor must have rank 2");
  return hermitian_eig(m.as_matrix(1));
}

namespace {

Matrix factor_real_symmetric(const Eigen::MatrixXd& m) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(m);
  if (solver.info() != Eigen::Success) throw NumericalFailure("symmetric_factor: eigensolver failed");
  const Eigen::Index n = m.rows();
  Matrix a(n, n);
  for (Eigen::Index k = 0; k < n; ++k) {
    const cplx root = std::sqrt(cplx{solver.eigenvalues()(k), 0.0});
    for (Eigen::Index i = 0; i < n; ++i) a(i, k) = solver.eigenvectors()(i, k) * root;
  }
  return a;
}

// M = U D U^T with U^T U = I, found by orthonormalizing eigenvectors under the bilinear form.
Matrix factor_complex_symmetric(const Matrix& m) {
  Eigen::ComplexEigenSolver<Matrix> solver(m);
  if (solver.info() != Eigen::Success) throw NumericalFailure("symmetric_factor: eigensolver failed");
  const Eigen::Index n = m.rows();
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  Matrix u = solver.eigenvectors();
  const Vector lambda = solver.eigenvalues();
  for (Eigen::Index k = 0; k < n; ++k) {
    for (Eigen::Index j = 0; j < k; ++j) {
      if (std::abs(lambda(j) - lambda(k)) <= 1e-9 * scale) {
        const cplx overlap = (u.col(j).transpose() * u.col(k))(0, 0);
        u.col(k) -= overlap * u.col(j);
      }
    }
    const cplx self = (u.col(k).transpose() * u.col(k))(0, 0);
    if (std::abs(self) < 1e-10 * u.col(k).squaredNorm()) {
      throw NumericalFailure("symmetric_factor: quasi-null eigenvector, matrix is not orthogonally diagonalizable");
    }
    u.col(k) /= std::sqrt(self);
  }
  Matrix a(n, n);
  for (Eigen::Index k = 0; k < n; ++k) a.col(k) = u.col(k) * std::sqrt(lambda(k));
  return a;
}

}  // namespace

Matrix symmetric_factor(const Matrix& m) {
  if (m.rows() != m.cols()) throw InvalidInput("symmetric_factor: matrix is not square");
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  if ((m - m.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale) {
    throw InvalidInput("symmetric_factor: matrix is not symmetric");
  }
  const Matrix sym = 0.5 * (m + m.transpose());
  const bool real = sym.imag().cwiseAbs().maxCoeff() <= 1e-15 * scale;
  Matrix a = real ? factor_real_symmetric(sym.real()) : factor_complex_symmetric(sym);
  const double residual = (a * a.transpose() - m).cwiseAbs().maxCoeff();
  if (residual > 1e-10 * scale) {
    throw NumericalFailure("symmetric_factor: residual " + std::to_string(residual) + " too large");
  }
  return a;
}

nlohmann::json to_json(const DenseTensor& t) {
  nlohmann::json re = nlohmann::json::array(), im = nlohmann::json::array();
  for (const auto& z : t.data()) {
    re.push_back(z.real());
    im.push_back(z.imag());
  }
  return {{"shape", t.shape()}, {"re", re}, {"im", im}};
}

DenseTensor tensor_from_json(const nlohmann::json& j) {
  try {
    auto shape = j.at("shape").get<std::vector<std::size_t>>();
    auto re = j.at("re").get<std::vector<double>>();
    auto im = j.at("im").get<std::vector<double>>();
    if (re.size() != im.size()) throw InvalidInput("tensor JSON: re/im length mismatch");
    std::vector<cplx> data(re.size());
    for (std::size_t i = 0; i < re.size(); ++i) data[i] = {re[i], im[i]};
    return DenseTensor(std::move(shape), std::move(data));
  } catch (const nlohmann::json::exception& e) {
    throw InvalidInput(std::string("tensor JSON: ") + e.what());
  }
}

LabeledTensor contract(const LabeledTensor& a, const LabeledTensor& b) {
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  std::vector<int> labels;
  std::vector<bool> used_b(b.labels.size(), false);
  for (std::size_t i = 0; i < a.labels.size(); ++i) {
    auto it = std::find(b.labels.begin(), b.labels.end(), a.labels[i]);
    if (it == b.labels.end()) {
      labels.push_back(a.labels[i]);
    } else {
      const auto j = static_cast<std::size_t>(it - b.labels.begin());
      pairs.emplace_back(i, j);
      used_b[j] = true;
    }
  }
  for (std::size_t j = 0; j < b.labels.size(); ++j) {
    if (!used_b[j]) labels.push_back(b.labels[j]);
  }
  return {contract(a.tensor, b.tensor, pairs), std::move(labels)};
}

DenseTensor arrange(const LabeledTensor& t, std::span<const int> order) {
  if (order.size() != t.labels.size()) throw InvalidInput("arrange: label count mismatch");
  std::vector<std::size_t> perm;
  perm.reserve(order.size());
  for (int label : order) {
    auto it = std::find(t.labels.begin(), t.labels.end(), label);
    if (it == t.labels.end()) throw InvalidInput("arrange: unknown label " + std::to_string(label));
    perm.push_back(static_cast<std::size_t>(it - t.labels.begin()));
  }
  return permute(t.tensor, perm);
}

LabeledTensor contract_sequence(std::span<const LabeledTensor> parts) {
  if (parts.empty()) throw InvalidInput("contract_sequence: no tensors");
  LabeledTensor acc = parts.front();
  for (std::size_t i = 1; i < parts.size(); ++i) acc = contract(acc, parts[i]);
  return acc;
}

}  // namespace bptn
