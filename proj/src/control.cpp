#include "cq/control.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <string>
#include <vector>

#include "cq/errors.hpp"

namespace cq {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kRowTol = 1e-10;

// Word with sigma_z on one qubit, identity elsewhere.
std::vector<int> z_word(int n_qubits, int qubit) {
    std::vector<int> w(static_cast<size_t>(n_qubits), 0);
    w[static_cast<size_t>(qubit)] = 3;
    return w;
}

PulseSequence sequence_from_gates(const DeviceParams& p,
                                  const std::vector<NamedGate>& gates,
                                  const std::string& label, bool reverse) {
    PulseSequence seq;
    seq.label = label;
    if (reverse) {
        for (auto it = gates.rbegin(); it != gates.rend(); ++it) {
            PulseSequence g = gate_schedule(p, *it);
            seq.segments.insert(seq.segments.end(), g.segments.begin(),
                                g.segments.end());
        }
    } else {
        for (const auto& gate : gates) {
            PulseSequence g = gate_schedule(p, gate);
            seq.segments.insert(seq.segments.end(), g.segments.begin(),
                                g.segments.end());
        }
    }
    return seq;
}

ComplexMatrix sequence_unitary(const DeviceParams& p, const PulseSequence& w) {
    if (w.segments.empty()) {
        const int dim = 1 << p.n_qubits;
        return ComplexMatrix::Identity(dim, dim);
    }
    return compose(p, w);
}

PauliString term(const char* name, double coefficient) {
    return PauliString{word_from_name(name), coefficient};
}

std::vector<TableRow> build_table(Route route) {
    std::vector<TableRow> rows;
    auto add = [&rows](int a, int b, const char* label, const char* variant,
                       const char* w1, double c1, const char* w2, double c2,
                       int readout) {
        rows.push_back(TableRow{{a, b},
                                label,
                                variant,
                                {term(w1, c1), term(w2, c2)},
                                readout});
    };
    if (route == Route::qubit1) {
        add(1, 2, "U(t)", "", "z0", +1.0, "xy", +1.0, 0);
        add(1, 3, "X1U(t)", "", "y0", -1.0, "xz", +1.0, 0);
        add(1, 1, "U(t)Z2", "", "z0", +1.0, "xx", -1.0, 0);
        add(2, 2, "U(t)Z1", "", "z0", +1.0, "yy", +1.0, 0);
        add(2, 3, "X1U(t)Z1", "", "x0", +1.0, "yz", +1.0, 0);
        add(2, 1, "U(t)Z1Z2", "", "z0", +1.0, "yx", -1.0, 0);
        add(3, 2, "U(t)Z1X1", "", "y0", -1.0, "zy", +1.0, 0);
        add(3, 3, "X1U(t)Z1X1", "", "x0", +1.0, "zz", +1.0, 0);
        add(3, 1, "U(t)Z1Z2X1", "", "y0", -1.0, "zx", -1.0, 0);
    } else {
        add(1, 1, "U(t)Z1", "", "0z", +1.0, "xx", -1.0, 1);
        add(2, 1, "U(t)", "", "0z", +1.0, "yx", +1.0, 1);
        add(3, 1, "X2U(t)", "U(t)X1", "0y", -1.0, "zx", +1.0, 1);
        add(1, 2, "U(t)Z1Z2", "", "0z", +1.0, "xy", -1.0, 1);
        add(2, 2, "U(t)Z2", "", "0z", +1.0, "yy", +1.0, 1);
        add(3, 2, "X2U(t)Z2", "U(t)X1Z2", "0x", +1.0, "zy", +1.0, 1);
        add(1, 3, "U(t)Z1Z2X2", "", "0y", -1.0, "xz", -1.0, 1);
        add(2, 3, "U(t)Z2X2", "", "0y", -1.0, "yz", +1.0, 1);
        add(3, 3, "X2U(t)Z2X2", "U(t)X1Z2X2", "0x", +1.0, "zz", +1.0, 1);
    }
    return rows;
}

// -(1/sqrt 2) * sum of the row's expected terms, as a dense observable.
ComplexMatrix expected_observable(const TableRow& row) {
    const int dim = 4;
    ComplexMatrix m = ComplexMatrix::Zero(dim, dim);
    for (const auto& t : row.expected)
        m += (-t.coefficient / std::sqrt(2.0)) * pauli_matrix(t.word);
    return m;
}

double row_deviation(const DeviceParams& p, const ComplexMatrix& w,
                     const TableRow& row) {
    const ComplexMatrix conj =
        conjugate_observable(w, pauli_matrix(z_word(p.n_qubits, row.readout_qubit)));
    return (conj - expected_observable(row)).cwiseAbs().maxCoeff();
}

}  // namespace

ComplexMatrix evolve_segment(const DeviceParams& p, const PulseSegment& seg) {
    if (!(seg.duration >= 0.0))
        throw validation_error("segment duration must be nonnegative, got " +
                               std::to_string(seg.duration));
    const ComplexMatrix h = hamiltonian(p, seg.settings);
    return expm_hermitian(h, 2.0 * kPi * seg.duration);
}

ComplexMatrix compose(const DeviceParams& p, const PulseSequence& w) {
    if (w.segments.empty())
        throw validation_error("cannot compose an empty pulse sequence");
    const int dim = 1 << p.n_qubits;
    ComplexMatrix u = ComplexMatrix::Identity(dim, dim);
    for (const auto& seg : w.segments) u = evolve_segment(p, seg) * u;
    return u;
}

PulseSequence gate_schedule(const DeviceParams& p, const NamedGate& g) {
    validate_device(p);
    const int n = p.n_qubits;
    int q1 = g.qubit;
    int q2 = g.qubit2;
    if (g.kind == NamedGate::Kind::U && q1 > q2) std::swap(q1, q2);
    auto check_qubit = [n](int q) {
        if (q < 0 || q >= n)
            throw validation_error("gate qubit " + std::to_string(q + 1) +
                                   " out of range for " + std::to_string(n) +
                                   " qubits");
    };
    check_qubit(q1);

    const Timings t = timings(p);
    PulseSegment seg;
    seg.settings = idle_settings(n);
    switch (g.kind) {
        case NamedGate::Kind::X:
            seg.settings.n_g[static_cast<size_t>(q1)] = 0.5;
            seg.settings.flux[static_cast<size_t>(q1)] = 0.0;
            seg.duration = t.t_x;
            break;
        case NamedGate::Kind::Z:
        case NamedGate::Kind::Z3:
            seg.settings.n_g[static_cast<size_t>(q1)] = 0.0;
            seg.settings.flux[static_cast<size_t>(q1)] = 0.5;
            seg.duration = g.kind == NamedGate::Kind::Z3 ? 3.0 * t.t_z_quarter
                                                         : t.t_z_quarter;
            break;
        case NamedGate::Kind::U: {
            check_qubit(q2);
            if (q1 == q2)
                throw validation_error(
                    "two-qubit gate needs two distinct qubits");
            const double ej1 = josephson_energy_qubit(p, q1, 0.0);
            const double ej2 = josephson_energy_qubit(p, q2, 0.0);
            if (std::abs(ej1 / ej2 - 1.0) > kUtauRatioTol)
                throw validation_error(
                    "two-qubit gate requires equal junction energies; E_L/E_J(0) "
                    "must equal sqrt(15) for both qubits");
            const double ratio = p.E_L / ej1;
            if (std::abs(ratio / kUtauRatio - 1.0) > kUtauRatioTol)
                throw validation_error(
                    "two-qubit gate requires E_L/E_J(0) = sqrt(15); device has "
                    "ratio " +
                    std::to_string(ratio));
            seg.settings.n_g[static_cast<size_t>(q1)] = 0.5;
            seg.settings.flux[static_cast<size_t>(q1)] = 0.0;
            seg.settings.n_g[static_cast<size_t>(q2)] = 0.5;
            seg.settings.flux[static_cast<size_t>(q2)] = 0.0;
            seg.duration = std::sqrt(15.0) / (8.0 * ej1);
            break;
        }
    }
    return PulseSequence{{seg}, gate_token(NamedGate{g.kind, q1, q2})};
}

std::string gate_token(const NamedGate& g) {
    switch (g.kind) {
        case NamedGate::Kind::X:
            return "X" + std::to_string(g.qubit + 1);
        case NamedGate::Kind::Z:
            return "Z" + std::to_string(g.qubit + 1);
        case NamedGate::Kind::Z3: {
            const std::string z = "Z" + std::to_string(g.qubit + 1);
            return z + z + z;
        }
        case NamedGate::Kind::U:
            if (g.qubit == 0 && g.qubit2 == 1) return "U(t)";
            return "U" + std::to_string(g.qubit + 1) +
                   std::to_string(g.qubit2 + 1) + "(t)";
    }
    throw validation_error("unknown gate kind");
}

std::vector<NamedGate> gates_from_label(const std::string& label, int n_qubits) {
    if (label.empty())
        throw validation_error("empty operation string (use \"I\" for identity)");
    if (label == "I") return {};
    auto bad = [&label](size_t at) -> validation_error {
        return validation_error("unrecognized token at position " +
                                std::to_string(at) + " in operation string \"" +
                                label + "\"");
    };
    auto qubit_at = [&](size_t at) {
        if (at >= label.size() || label[at] < '1' || label[at] > '9') throw bad(at);
        const int q = label[at] - '0';
        if (q > n_qubits)
            throw validation_error("qubit " + std::to_string(q) +
                                   " out of range in operation string \"" +
                                   label + "\" (" + std::to_string(n_qubits) +
                                   " qubits)");
        return q - 1;
    };
    std::vector<NamedGate> gates;
    size_t i = 0;
    while (i < label.size()) {
        const char c = label[i];
        if (c == 'X' || c == 'Z') {
            const int q = qubit_at(i + 1);
            gates.push_back(NamedGate{c == 'X' ? NamedGate::Kind::X
                                               : NamedGate::Kind::Z,
                                      q, q});
            i += 2;
        } else if (c == 'U') {
            if (label.compare(i + 1, 3, "(t)") == 0) {
                if (n_qubits < 2)
                    throw validation_error(
                        "\"U(t)\" needs at least two qubits, device has " +
                        std::to_string(n_qubits));
                gates.push_back(NamedGate{NamedGate::Kind::U, 0, 1});
                i += 4;
            } else {
                const int qa = qubit_at(i + 1);
                const int qb = qubit_at(i + 2);
                if (qa >= qb) throw bad(i);
                if (label.compare(i + 3, 3, "(t)") != 0) throw bad(i + 3);
                gates.push_back(NamedGate{NamedGate::Kind::U, qa, qb});
                i += 6;
            }
        } else {
            throw bad(i);
        }
    }
    return gates;
}

PulseSequence sequence_from_label(const DeviceParams& p, const std::string& label) {
    return sequence_from_gates(p, gates_from_label(label, p.n_qubits), label,
                               /*reverse=*/true);
}

ComplexMatrix u_closed_form(double E_J, double E_int, double t) {
    if (E_int == 0.0)
        throw validation_error("closed-form evolution needs E_int != 0");
    const double a = E_J / E_int;
    const double root = std::sqrt(1.0 + a * a);
    const double phi = 2.0 * kPi * E_int * t;
    const double theta = phi * root;
    const double n_x = 1.0 / root;
    const double n_z = a / root;
    const Complex i1(0.0, 1.0);

    ComplexMatrix u = ComplexMatrix::Zero(4, 4);
    u += 0.5 * (std::cos(phi) + std::cos(theta)) * pauli_matrix({0, 0});
    u += i1 * n_z * (std::sin(theta) / 2.0) *
         (pauli_matrix({1, 0}) + pauli_matrix({0, 1}));
    u += i1 * ((std::sin(phi) - n_x * std::sin(theta)) / 2.0) *
         pauli_matrix({3, 3});
    u += i1 * ((std::sin(phi) + n_x * std::sin(theta)) / 2.0) *
         pauli_matrix({2, 2});
    u -= ((std::cos(phi) - std::cos(theta)) / 2.0) * pauli_matrix({1, 1});
    return u;
}

ComplexMatrix u_tau_exact() {
    const double s2 = std::sqrt(2.0);
    const double norm = 1.0 / (2.0 * s2);
    const Complex i1(0.0, 1.0);
    ComplexMatrix u = ComplexMatrix::Zero(4, 4);
    u += norm * (1.0 - s2) * pauli_matrix({0, 0});
    u -= norm * (1.0 + s2) * pauli_matrix({1, 1});
    u += i1 * norm * pauli_matrix({2, 2});
    u += i1 * norm * pauli_matrix({3, 3});
    return u;
}

std::vector<PauliString> equivalent_measurement(const DeviceParams& p,
                                                const PulseSequence& w,
                                                int readout_qubit) {
    const int n = p.n_qubits;
    if (readout_qubit < 0 || readout_qubit >= n)
        throw validation_error("readout qubit " +
                               std::to_string(readout_qubit + 1) +
                               " out of range for " + std::to_string(n) +
                               " qubits");
    const ComplexMatrix u = sequence_unitary(p, w);
    const ComplexMatrix conj =
        conjugate_observable(u, pauli_matrix(z_word(n, readout_qubit)));
    const double dim = static_cast<double>(1 << n);

    std::vector<PauliString> terms;
    for (const auto& word : all_words(n)) {
        const Complex c = (conj * pauli_matrix(word)).trace() / dim;
        if (std::abs(c.imag()) > 1e-10)
            throw physics_error("equivalent measurement of \"" + w.label +
                                "\" has a complex coefficient on " +
                                word_name(word));
        if (std::abs(c.real()) > 1e-10)
            terms.push_back(PauliString{word, c.real()});
    }
    return terms;
}

const std::vector<TableRow>& readout_table(Route route) {
    static const std::vector<TableRow> table1 = build_table(Route::qubit1);
    static const std::vector<TableRow> table2 = build_table(Route::qubit2);
    return route == Route::qubit1 ? table1 : table2;
}

TableReport verify_tables(const DeviceParams& p) {
    if (p.n_qubits != 2)
        throw validation_error("readout tables are defined for two qubits, got " +
                               std::to_string(p.n_qubits));
    TableReport report;
    for (Route route : {Route::qubit1, Route::qubit2}) {
        const std::string table_name = route == Route::qubit1 ? "I" : "II";
        for (const TableRow& row : readout_table(route)) {
            TableRowCheck check;
            check.table = table_name;
            check.target = word_name({row.target[0], row.target[1]});
            check.label = row.label;
            check.max_deviation =
                row_deviation(p, compose(p, sequence_from_label(p, row.label)), row);
            check.pass = check.max_deviation < kRowTol;
            if (!row.variant_label.empty()) {
                check.variant_label = row.variant_label;
                const auto gates = gates_from_label(row.variant_label, p.n_qubits);
                check.variant_deviation = row_deviation(
                    p,
                    compose(p, sequence_from_gates(p, gates, row.variant_label,
                                                   /*reverse=*/true)),
                    row);
                check.variant_reversed_deviation = row_deviation(
                    p,
                    compose(p, sequence_from_gates(p, gates, row.variant_label,
                                                   /*reverse=*/false)),
                    row);
            }
            report.rows.push_back(std::move(check));
        }
    }
    report.all_pass = std::all_of(report.rows.begin(), report.rows.end(),
                                  [](const TableRowCheck& r) { return r.pass; });
    return report;
}

}  // namespace cq
