#include "cq/process.hpp"

#include <cmath>
#include <string>

#include "cq/errors.hpp"

namespace cq {

namespace {

constexpr double kTraceTol = 1e-10;

void check_param(double param, const char* what) {
    if (!(param >= 0.0 && param <= 1.0))
        throw validation_error(std::string(what) + " parameter " +
                               std::to_string(param) + " outside [0, 1]");
}

std::string channel_kind_name(ChannelKind kind) {
    switch (kind) {
        case ChannelKind::identity: return "identity";
        case ChannelKind::bit_flip: return "bit_flip";
        case ChannelKind::dephasing: return "dephasing";
        case ChannelKind::amplitude_damping: return "amplitude_damping";
    }
    throw validation_error("unknown channel kind");
}

}  // namespace

void validate_channel(const Channel& c) {
    if (c.kraus_ops.empty())
        throw validation_error("channel \"" + c.label + "\" has no Kraus operators");
    const auto dim = c.kraus_ops.front().rows();
    if (dim < 2 || c.kraus_ops.front().cols() != dim)
        throw validation_error("channel \"" + c.label +
                               "\" has non-square Kraus operators");
    ComplexMatrix sum = ComplexMatrix::Zero(dim, dim);
    for (const auto& k : c.kraus_ops) {
        if (k.rows() != dim || k.cols() != dim)
            throw validation_error("channel \"" + c.label +
                                   "\" mixes Kraus operator dimensions");
        sum += k.adjoint() * k;
    }
    const double dev =
        (sum - ComplexMatrix::Identity(dim, dim)).cwiseAbs().maxCoeff();
    if (dev > kTraceTol)
        throw validation_error("channel \"" + c.label +
                               "\" is not trace preserving (deviation " +
                               std::to_string(dev) + ")");
}

ComplexMatrix apply_channel(const Channel& c, const ComplexMatrix& rho) {
    validate_channel(c);
    const auto dim = c.kraus_ops.front().rows();
    if (rho.rows() != dim || rho.cols() != dim)
        throw validation_error("state dimension does not match channel \"" +
                               c.label + "\"");
    ComplexMatrix out = ComplexMatrix::Zero(dim, dim);
    for (const auto& k : c.kraus_ops) out += k * rho * k.adjoint();
    return out;
}

Channel standard_channel(ChannelKind kind, double param) {
    Channel c;
    const ComplexMatrix id = ComplexMatrix::Identity(2, 2);
    switch (kind) {
        case ChannelKind::identity:
            c.kraus_ops = {id};
            break;
        case ChannelKind::bit_flip:
            check_param(param, "bit flip");
            c.kraus_ops = {std::sqrt(1.0 - param) * id,
                           std::sqrt(param) * pauli1(1)};
            break;
        case ChannelKind::dephasing:
            check_param(param, "dephasing");
            c.kraus_ops = {std::sqrt(1.0 - param / 2.0) * id,
                           std::sqrt(param / 2.0) * pauli1(3)};
            break;
        case ChannelKind::amplitude_damping: {
            check_param(param, "amplitude damping");
            ComplexMatrix k0 = ComplexMatrix::Zero(2, 2);
            k0(0, 0) = 1.0;
            k0(1, 1) = std::sqrt(1.0 - param);
            ComplexMatrix k1 = ComplexMatrix::Zero(2, 2);
            k1(0, 1) = std::sqrt(param);
            c.kraus_ops = {k0, k1};
            break;
        }
    }
    c.label = channel_kind_name(kind) + "(" + std::to_string(param) + ")";
    validate_channel(c);
    return c;
}

ChannelKind channel_kind_from_name(const std::string& name) {
    if (name == "identity") return ChannelKind::identity;
    if (name == "bit_flip") return ChannelKind::bit_flip;
    if (name == "dephasing") return ChannelKind::dephasing;
    if (name == "amplitude_damping") return ChannelKind::amplitude_damping;
    throw validation_error("unknown channel kind \"" + name + "\"");
}

std::vector<ComplexMatrix> input_states() {
    std::vector<ComplexMatrix> states;
    Eigen::Vector2cd zero(1.0, 0.0);
    Eigen::Vector2cd one(0.0, 1.0);
    Eigen::Vector2cd plus = (zero + one) / std::sqrt(2.0);
    Eigen::Vector2cd plus_i = (zero + Complex(0.0, 1.0) * one) / std::sqrt(2.0);
    for (const auto& v : {zero, one, plus, plus_i})
        states.push_back(v * v.adjoint());
    return states;
}

ComplexMatrix chi_apply(const ChiMatrix& chi, const ComplexMatrix& rho) {
    if (rho.rows() != 2 || rho.cols() != 2)
        throw validation_error("chi matrices act on single-qubit states");
    ComplexMatrix out = ComplexMatrix::Zero(2, 2);
    for (int m = 0; m < 4; ++m)
        for (int n = 0; n < 4; ++n)
            out += chi.entries(m, n) * pauli1(m) * rho * pauli1(n);
    return out;
}

ProcessResult process_tomography(const DeviceParams& p, const Channel& c,
                                 long long shots, std::uint64_t master_seed,
                                 bool project) {
    validate_channel(c);
    if (c.kraus_ops.front().rows() != 2)
        throw validation_error("process tomography supports single-qubit "
                               "channels only");
    if (p.n_qubits != 1)
        throw validation_error("process tomography needs a one-qubit device");

    const TomographySchedule schedule = schedule_1q(p);
    const std::vector<ComplexMatrix> inputs = input_states();

    ProcessResult res;
    std::vector<ComplexMatrix> outputs;
    for (size_t j = 0; j < inputs.size(); ++j) {
        const ComplexMatrix out = apply_channel(c, inputs[j]);
        const std::uint64_t seed =
            derive_seed(master_seed, "input" + std::to_string(j));
        ReconstructionResult recon = reconstruct(
            p, schedule, run_schedule(p, schedule, out, shots, seed));
        outputs.push_back(project ? recon.physical_rho : recon.raw_rho);
        res.input_reconstructions.push_back(std::move(recon));
    }

    // Linear inversion: outputs for |0>, |1>, |+>, |+i> give the channel on
    // the matrix units E_ij, assembled into the Choi matrix
    // J = (1/2) [[E(E00), E(E01)], [E(E10), E(E11)]].
    const Complex i1(0.0, 1.0);
    const ComplexMatrix e00 = outputs[0];
    const ComplexMatrix e11 = outputs[1];
    const ComplexMatrix e01 =
        outputs[2] + i1 * outputs[3] - 0.5 * (1.0 + i1) * (outputs[0] + outputs[1]);
    const ComplexMatrix e10 =
        outputs[2] - i1 * outputs[3] - 0.5 * (1.0 - i1) * (outputs[0] + outputs[1]);
    ComplexMatrix choi = ComplexMatrix::Zero(4, 4);
    choi.block(0, 0, 2, 2) = 0.5 * e00;
    choi.block(0, 2, 2, 2) = 0.5 * e01;
    choi.block(2, 0, 2, 2) = 0.5 * e10;
    choi.block(2, 2, 2, 2) = 0.5 * e11;

    // chi_mn = omega_m^dagger J omega_n with omega_m = (I x sigma_m)|Omega>,
    // |Omega> the normalized maximally entangled pair.
    Eigen::Matrix<Complex, 4, 4> omega;
    for (int m = 0; m < 4; ++m) {
        const ComplexMatrix& sig = pauli1(m);
        Eigen::Vector4cd w;
        // |Omega> = (|00> + |11>)/sqrt2; (I x sigma)|Omega> stacks sigma's columns.
        w << sig(0, 0), sig(1, 0), sig(0, 1), sig(1, 1);
        omega.col(m) = w / std::sqrt(2.0);
    }
    res.chi.entries = omega.adjoint() * choi * omega;

    ComplexMatrix tp = ComplexMatrix::Zero(2, 2);
    for (int m = 0; m < 4; ++m)
        for (int n = 0; n < 4; ++n)
            tp += res.chi.entries(m, n) * pauli1(n) * pauli1(m);
    res.tp_residual =
        (tp - ComplexMatrix::Identity(2, 2)).cwiseAbs().maxCoeff();

    Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> es(
        (res.chi.entries + res.chi.entries.adjoint()) / 2.0);
    res.min_chi_eigenvalue = es.eigenvalues().minCoeff();
    return res;
}

}  // namespace cq
