#pragma once

// Dense complex linear algebra and Pauli-word algebra for 2^n dimensions, n <= 4.

#include <complex>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "cq/errors.hpp"

namespace cq {

template <typename Scalar>
using ComplexMatrixT =
    Eigen::Matrix<std::complex<Scalar>, Eigen::Dynamic, Eigen::Dynamic>;
using ComplexMatrix = ComplexMatrixT<double>;
using ComplexVector = Eigen::VectorXcd;
using Complex = std::complex<double>;

// Accepted max entrywise |m - m^dagger|; well above round-off at dim <= 16.
inline constexpr double kHermiticityTol = 1e-9;

// One observable sigma_{w1} x ... x sigma_{wn} and its real coefficient.
// Axis codes per qubit: 0 = identity, 1 = x, 2 = y, 3 = z.
struct PauliString {
    std::vector<int> word;
    double coefficient = 0.0;
};

// n for dim = 2^n; throws validation_error if dim is not a power of two >= 2.
int qubit_count(const ComplexMatrix& m);

bool is_hermitian(const ComplexMatrix& m, double tol = kHermiticityTol);

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);

// Cached 2x2 Pauli by axis code (0 = I).
const ComplexMatrix& pauli1(int axis);

// Tensor product of the named single-qubit matrices; |0> is the +1 eigenstate
// of sigma_z.
ComplexMatrix pauli_matrix(const std::vector<int>& word);

// All 4^n words in lexicographic order over (0, x, y, z) per qubit.
std::vector<std::vector<int>> all_words(int n);

// Compact text form, e.g. {1,3,2} -> "xzy", {3,0} -> "z0".
std::string word_name(const std::vector<int>& word);
std::vector<int> word_from_name(const std::string& name);

// Coefficients r_w = Tr(m P_w) for all 4^n words (lexicographic order).
// Requires m Hermitian within tolerance. (1/2^n) sum r_w P_w reproduces m.
std::vector<PauliString> pauli_decompose(const ComplexMatrix& m);

// (1/2^n) sum r_w P_w over a full 4^n coefficient set.
ComplexMatrix pauli_assemble(const std::vector<PauliString>& coeffs);

// exp(-i * angle_scale * h) via Hermitian eigendecomposition.
ComplexMatrix expm_hermitian(const ComplexMatrix& h, double angle_scale);

// W^dagger O W. Requires matching dims and W unitary to 1e-10.
ComplexMatrix conjugate_observable(const ComplexMatrix& w, const ComplexMatrix& o);

// (1/2) sum |eigenvalues(a - b)|.
double trace_distance(const ComplexMatrix& a, const ComplexMatrix& b);

// |Tr(a^dagger b)| / dim; equals 1 iff a = e^{i phi} b for unitaries.
double phase_overlap(const ComplexMatrix& a, const ComplexMatrix& b);

// Trace out one qubit (0-based, leftmost factor is qubit 0).
ComplexMatrix partial_trace(const ComplexMatrix& m, int qubit);

}  // namespace cq
