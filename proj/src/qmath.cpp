#include "cq/qmath.hpp"

#include <array>
#include <cmath>

namespace cq {

namespace {
constexpr int kMaxQubits = 4;

int checked_qubits(int n) {
    if (n < 1 || n > kMaxQubits)
        throw validation_error("qubit count " + std::to_string(n) +
                               " outside [1, " + std::to_string(kMaxQubits) + "]");
    return n;
}
}  // namespace

int qubit_count(const ComplexMatrix& m) {
    if (m.rows() != m.cols() || m.rows() < 2)
        throw validation_error("matrix is not square with dim >= 2");
    const auto dim = m.rows();
    if ((dim & (dim - 1)) != 0)
        throw validation_error("dim " + std::to_string(dim) +
                               " is not a power of two");
    int n = 0;
    for (auto d = dim; d > 1; d >>= 1) ++n;
    return checked_qubits(n);
}

bool is_hermitian(const ComplexMatrix& m, double tol) {
    if (m.rows() != m.cols()) return false;
    return (m - m.adjoint()).cwiseAbs().maxCoeff() <= tol;
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
    ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

const ComplexMatrix& pauli1(int axis) {
    static const std::array<ComplexMatrix, 4> table = [] {
        std::array<ComplexMatrix, 4> t;
        for (auto& m : t) m = ComplexMatrix::Zero(2, 2);
        t[0](0, 0) = t[0](1, 1) = 1.0;
        t[1](0, 1) = t[1](1, 0) = 1.0;
        t[2](0, 1) = Complex(0.0, -1.0);
        t[2](1, 0) = Complex(0.0, 1.0);
        t[3](0, 0) = 1.0;
        t[3](1, 1) = -1.0;
        return t;
    }();
    if (axis < 0 || axis > 3)
        throw validation_error("axis code " + std::to_string(axis) +
                               " outside [0, 3]");
    return table[static_cast<size_t>(axis)];
}

ComplexMatrix pauli_matrix(const std::vector<int>& word) {
    checked_qubits(static_cast<int>(word.size()));
    ComplexMatrix out = pauli1(word[0]);
    for (size_t k = 1; k < word.size(); ++k) out = kron(out, pauli1(word[k]));
    return out;
}

std::vector<std::vector<int>> all_words(int n) {
    checked_qubits(n);
    std::vector<std::vector<int>> words;
    words.reserve(static_cast<size_t>(1) << (2 * n));
    std::vector<int> word(static_cast<size_t>(n), 0);
    while (true) {
        words.push_back(word);
        int k = n - 1;
        while (k >= 0 && word[static_cast<size_t>(k)] == 3)
            word[static_cast<size_t>(k--)] = 0;
        if (k < 0) break;
        ++word[static_cast<size_t>(k)];
    }
    return words;
}

std::string word_name(const std::vector<int>& word) {
    static const char* axis = "0xyz";
    std::string name;
    for (int a : word) {
        if (a < 0 || a > 3)
            throw validation_error("axis code " + std::to_string(a) +
                                   " outside [0, 3]");
        name += axis[a];
    }
    return name;
}

std::vector<int> word_from_name(const std::string& name) {
    std::vector<int> word;
    word.reserve(name.size());
    for (char c : name) {
        switch (c) {
            case '0': word.push_back(0); break;
            case 'x': word.push_back(1); break;
            case 'y': word.push_back(2); break;
            case 'z': word.push_back(3); break;
            default:
                throw validation_error(std::string("bad axis letter '") + c + "'");
        }
    }
    checked_qubits(static_cast<int>(word.size()));
    return word;
}

std::vector<PauliString> pauli_decompose(const ComplexMatrix& m) {
    const int n = qubit_count(m);
    if (!is_hermitian(m))
        throw validation_error("pauli_decompose requires a Hermitian matrix");
    std::vector<PauliString> coeffs;
    for (const auto& word : all_words(n)) {
        const Complex tr = (m * pauli_matrix(word)).trace();
        coeffs.push_back({word, tr.real()});
    }
    return coeffs;
}

ComplexMatrix pauli_assemble(const std::vector<PauliString>& coeffs) {
    if (coeffs.empty()) throw validation_error("empty coefficient set");
    const int n = checked_qubits(static_cast<int>(coeffs[0].word.size()));
    const size_t expected = static_cast<size_t>(1) << (2 * n);
    if (coeffs.size() != expected)
        throw validation_error("expected " + std::to_string(expected) +
                               " coefficients, got " +
                               std::to_string(coeffs.size()));
    const Eigen::Index dim = Eigen::Index(1) << n;
    ComplexMatrix out = ComplexMatrix::Zero(dim, dim);
    for (const auto& c : coeffs) {
        if (static_cast<int>(c.word.size()) != n)
            throw validation_error("mixed word lengths in coefficient set");
        if (c.coefficient != 0.0) out += c.coefficient * pauli_matrix(c.word);
    }
    return out / std::pow(2.0, n);
}

ComplexMatrix expm_hermitian(const ComplexMatrix& h, double angle_scale) {
    if (h.rows() != h.cols()) throw validation_error("matrix is not square");
    if (!is_hermitian(h))
        throw validation_error("expm_hermitian requires a Hermitian matrix");
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(h);
    ComplexVector phases(h.rows());
    for (Eigen::Index k = 0; k < h.rows(); ++k) {
        const double angle = -angle_scale * es.eigenvalues()(k);
        phases(k) = Complex(std::cos(angle), std::sin(angle));
    }
    return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

ComplexMatrix conjugate_observable(const ComplexMatrix& w,
                                   const ComplexMatrix& o) {
    if (w.rows() != o.rows() || w.cols() != o.cols() || w.rows() != w.cols())
        throw validation_error("dimension mismatch in conjugate_observable");
    const double unitarity =
        (w.adjoint() * w - ComplexMatrix::Identity(w.rows(), w.cols()))
            .cwiseAbs()
            .maxCoeff();
    if (unitarity > 1e-10)
        throw validation_error("operator is not unitary (deviation " +
                               std::to_string(unitarity) + ")");
    return w.adjoint() * o * w;
}

double trace_distance(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols())
        throw validation_error("dimension mismatch in trace_distance");
    ComplexMatrix diff = a - b;
    if (!is_hermitian(diff, 1e-8))
        throw validation_error("trace_distance requires Hermitian difference");
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(diff);
    return 0.5 * es.eigenvalues().cwiseAbs().sum();
}

double phase_overlap(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols())
        throw validation_error("dimension mismatch in phase_overlap");
    return std::abs((a.adjoint() * b).trace()) / static_cast<double>(a.rows());
}

ComplexMatrix partial_trace(const ComplexMatrix& m, int qubit) {
    const int n = qubit_count(m);
    if (qubit < 0 || qubit >= n)
        throw validation_error("qubit index " + std::to_string(qubit) +
                               " outside [0, " + std::to_string(n - 1) + "]");
    const Eigen::Index out_dim = m.rows() / 2;
    // qubit 0 is the leftmost tensor factor: its bit is the highest index bit
    const int shift = n - 1 - qubit;
    const Eigen::Index low_mask = (Eigen::Index(1) << shift) - 1;
    ComplexMatrix out = ComplexMatrix::Zero(out_dim, out_dim);
    for (Eigen::Index i = 0; i < out_dim; ++i) {
        const Eigen::Index i_lo = i & low_mask;
        const Eigen::Index i_hi = (i & ~low_mask) << 1;
        for (Eigen::Index j = 0; j < out_dim; ++j) {
            const Eigen::Index j_lo = j & low_mask;
            const Eigen::Index j_hi = (j & ~low_mask) << 1;
            for (Eigen::Index b = 0; b < 2; ++b)
                out(i, j) += m(i_hi | (b << shift) | i_lo,
                               j_hi | (b << shift) | j_lo);
        }
    }
    return out;
}

}  // namespace cq
