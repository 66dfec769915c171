#pragma once

#include "bptn/tensor.hpp"

namespace bptn::pauli {

// Basis order |0>, |1> with Z|0> = |0>.
inline Matrix I() { return Matrix::Identity(2, 2); }

inline Matrix X() {
  Matrix m(2, 2);
  m << 0.0, 1.0, 1.0, 0.0;
  return m;
}

inline Matrix Y() {
  Matrix m(2, 2);
  m << cplx{0.0, 0.0}, cplx{0.0, -1.0}, cplx{0.0, 1.0}, cplx{0.0, 0.0};
  return m;
}

inline Matrix Z() {
  Matrix m(2, 2);
  m << 1.0, 0.0, 0.0, -1.0;
  return m;
}

}  // namespace bptn::pauli
