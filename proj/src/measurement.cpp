#include "cq/measurement.hpp"

#include <cmath>
#include <string>

#include "cq/errors.hpp"

namespace cq {

namespace {

constexpr double kProbabilitySlack = 1e-10;

}  // namespace

ComplexMatrix projector_one(int n, int l) {
    if (n < 1 || n > 4)
        throw validation_error("qubit count " + std::to_string(n) +
                               " outside [1, 4]");
    if (l < 0 || l >= n)
        throw validation_error("projector qubit " + std::to_string(l + 1) +
                               " out of range for " + std::to_string(n) +
                               " qubits");
    const int dim = 1 << n;
    const int bit = n - 1 - l;  // qubit 0 is the leftmost tensor factor
    ComplexMatrix m = ComplexMatrix::Zero(dim, dim);
    for (int i = 0; i < dim; ++i)
        if ((i >> bit) & 1) m(i, i) = 1.0;
    return m;
}

double probability(const DeviceParams& p, const ComplexMatrix& rho,
                   const MeasurementSetting& s) {
    return probability_from_observable(rho, setting_observable(p, s));
}

double probability_from_observable(const ComplexMatrix& rho,
                                   const ComplexMatrix& observable) {
    if (rho.rows() != observable.rows() || rho.cols() != observable.cols())
        throw validation_error("state and observable dimensions differ");
    const double p = (rho * observable).trace().real();
    if (p < -kProbabilitySlack || p > 1.0 + kProbabilitySlack)
        throw physics_error("measurement probability " + std::to_string(p) +
                            " outside [0, 1]; state is unphysical");
    if (p < 0.0) return 0.0;
    if (p > 1.0) return 1.0;
    return p;
}

std::uint64_t splitmix64_next(std::uint64_t& state) {
    state += 0x9E3779B97F4A7C15ull;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

std::uint64_t derive_seed(std::uint64_t master_seed, const std::string& label) {
    // FNV-1a over the label, then one splitmix64 mix against the master seed.
    std::uint64_t h = 0xCBF29CE484222325ull;
    for (unsigned char c : label) {
        h ^= c;
        h *= 0x100000001B3ull;
    }
    std::uint64_t state = master_seed ^ h;
    return splitmix64_next(state);
}

double flip_probability(double p, double f) {
    if (!(p >= 0.0 && p <= 1.0))
        throw validation_error("probability " + std::to_string(p) +
                               " outside [0, 1]");
    if (!(f >= 0.0 && f <= 1.0))
        throw validation_error("flip probability " + std::to_string(f) +
                               " outside [0, 1]");
    return p * (1.0 - f) + (1.0 - p) * f;
}

long long sample(double probability, long long shots, std::uint64_t seed) {
    if (!(probability >= 0.0 && probability <= 1.0))
        throw validation_error("sampling probability " +
                               std::to_string(probability) + " outside [0, 1]");
    if (shots < 0)
        throw validation_error("shot count must be nonnegative, got " +
                               std::to_string(shots));
    if (probability >= 1.0) return shots;  // threshold would overflow 64 bits
    const std::uint64_t threshold =
        static_cast<std::uint64_t>(std::ldexp(probability, 64));
    std::uint64_t state = seed;
    long long ones = 0;
    for (long long i = 0; i < shots; ++i)
        if (splitmix64_next(state) < threshold) ++ones;
    return ones;
}

ComplexMatrix setting_observable(const DeviceParams& p,
                                 const MeasurementSetting& s) {
    const int n = p.n_qubits;
    const ComplexMatrix proj = projector_one(n, s.readout_qubit);
    if (s.sequence.segments.empty()) return proj;
    return conjugate_observable(compose(p, s.sequence), proj);
}

}  // namespace cq
