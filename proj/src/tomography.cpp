#include "cq/tomography.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "cq/errors.hpp"

namespace cq {

namespace {

constexpr double kCoeffTol = 1e-12;
constexpr double kCrossCheckTol = 1e-10;

using SparseCombo = std::map<std::vector<int>, double>;

// Axis image and sign under W^dagger sigma W for the quarter rotations:
//   X gate: x -> x, y -> +z, z -> -y
//   Z gate: x -> +y, y -> -x, z -> z
struct AxisImage {
    int axis;
    double sign;
};
constexpr AxisImage kConjX[4] = {{0, 1.0}, {1, 1.0}, {3, 1.0}, {2, -1.0}};
constexpr AxisImage kConjZ[4] = {{0, 1.0}, {2, 1.0}, {1, -1.0}, {3, 1.0}};

struct UMixTerm {
    int a;
    int b;
    double weight;
};

// Conjugation of the pair word sigma_a x sigma_b by the special-time two-qubit
// unitary, expanded back into pair words. Built once from u_tau_exact().
const std::vector<UMixTerm>& u_mix(int a, int b) {
    static const auto table = [] {
        std::array<std::vector<UMixTerm>, 16> t;
        const ComplexMatrix u = u_tau_exact();
        for (int a = 0; a < 4; ++a) {
            for (int b = 0; b < 4; ++b) {
                const ComplexMatrix conj =
                    u.adjoint() * pauli_matrix({a, b}) * u;
                for (int a2 = 0; a2 < 4; ++a2) {
                    for (int b2 = 0; b2 < 4; ++b2) {
                        const Complex m =
                            (conj * pauli_matrix({a2, b2})).trace() / 4.0;
                        if (std::abs(m.real()) > kCoeffTol)
                            t[static_cast<size_t>(4 * a + b)].push_back(
                                UMixTerm{a2, b2, m.real()});
                    }
                }
            }
        }
        return t;
    }();
    return table[static_cast<size_t>(4 * a + b)];
}

struct Token {
    NamedGate::Kind kind;
    int l;
    int k;  // second pair qubit, unused for X/Z
};

std::vector<Token> alphabet(int n) {
    std::vector<Token> toks;
    for (int l = 0; l < n; ++l) toks.push_back({NamedGate::Kind::X, l, l});
    for (int l = 0; l < n; ++l) toks.push_back({NamedGate::Kind::Z, l, l});
    for (int l = 0; l < n; ++l)
        for (int k = l + 1; k < n; ++k) toks.push_back({NamedGate::Kind::U, l, k});
    return toks;
}

SparseCombo apply_token(const SparseCombo& combo, const Token& tok) {
    SparseCombo out;
    for (const auto& [word, c] : combo) {
        if (tok.kind == NamedGate::Kind::U) {
            const int a = word[static_cast<size_t>(tok.l)];
            const int b = word[static_cast<size_t>(tok.k)];
            for (const UMixTerm& m : u_mix(a, b)) {
                std::vector<int> nw = word;
                nw[static_cast<size_t>(tok.l)] = m.a;
                nw[static_cast<size_t>(tok.k)] = m.b;
                out[nw] += m.weight * c;
            }
        } else {
            const AxisImage* tab =
                tok.kind == NamedGate::Kind::X ? kConjX : kConjZ;
            const int a = word[static_cast<size_t>(tok.l)];
            std::vector<int> nw = word;
            nw[static_cast<size_t>(tok.l)] = tab[a].axis;
            out[nw] += tab[a].sign * c;
        }
    }
    for (auto it = out.begin(); it != out.end();)
        it = std::abs(it->second) > kCoeffTol ? std::next(it) : out.erase(it);
    return out;
}

std::string candidate_label(const std::vector<Token>& gates) {
    if (gates.empty()) return "I";
    std::string label;
    for (const Token& t : gates)
        label += gate_token(NamedGate{t.kind, t.l, t.k});
    return label;
}

MeasurementSetting make_setting(const DeviceParams& p, const std::string& label,
                                int readout_qubit) {
    MeasurementSetting s;
    s.sequence = sequence_from_label(p, label);
    s.readout_qubit = readout_qubit;
    s.label = label + ":q" + std::to_string(readout_qubit + 1);
    return s;
}

// Relation p = 1/2 + sum c_w r_w from the equivalent measurement of the
// setting: c_w = -e_w / 2.
Relation relation_for(const DeviceParams& p, const MeasurementSetting& s,
                      std::vector<int> target) {
    Relation rel;
    rel.target = std::move(target);
    for (const auto& term :
         equivalent_measurement(p, s.sequence, s.readout_qubit))
        rel.terms.push_back(PauliString{term.word, -term.coefficient / 2.0});
    return rel;
}

void require_qubits(const DeviceParams& p, int n, const char* what) {
    if (p.n_qubits != n)
        throw validation_error(std::string(what) + " needs a " +
                               std::to_string(n) + "-qubit device, got " +
                               std::to_string(p.n_qubits) + " qubits");
}

void cross_check_relation(const DeviceParams& p, const MeasurementSetting& s,
                          const SparseCombo& combo) {
    SparseCombo direct;
    for (const auto& term :
         equivalent_measurement(p, s.sequence, s.readout_qubit))
        direct[term.word] = term.coefficient;
    SparseCombo keys = combo;
    for (const auto& kv : direct) keys.emplace(kv.first, 0.0);
    for (const auto& kv : keys) {
        const auto a = combo.find(kv.first);
        const auto b = direct.find(kv.first);
        const double va = a == combo.end() ? 0.0 : a->second;
        const double vb = b == direct.end() ? 0.0 : b->second;
        if (std::abs(va - vb) > kCrossCheckTol)
            throw physics_error("schedule generator disagrees with composed "
                                "unitary on setting " +
                                s.label + " at word " + word_name(kv.first));
    }
}

}  // namespace

TomographySchedule schedule_1q(const DeviceParams& p) {
    require_qubits(p, 1, "schedule_1q");
    TomographySchedule s;
    s.n_qubits = 1;
    const std::pair<const char*, std::vector<int>> rows[] = {
        {"I", {3}}, {"X1", {2}}, {"Z1X1Z1Z1Z1", {1}}};
    for (const auto& [label, target] : rows) {
        MeasurementSetting setting = make_setting(p, label, 0);
        s.plan.push_back(relation_for(p, setting, target));
        s.settings.push_back(std::move(setting));
    }
    return s;
}

TomographySchedule schedule_2q(const DeviceParams& p, Route route) {
    require_qubits(p, 2, "schedule_2q");
    TomographySchedule s;
    s.n_qubits = 2;
    const std::pair<const char*, std::vector<int>> singles[] = {
        {"I", {3, 0}},          {"X1", {2, 0}}, {"Z1X1Z1Z1Z1", {1, 0}},
        {"I", {0, 3}},          {"X2", {0, 2}}, {"Z2X2Z2Z2Z2", {0, 1}}};
    for (int i = 0; i < 6; ++i) {
        MeasurementSetting setting = make_setting(p, singles[i].first, i / 3);
        s.plan.push_back(relation_for(p, setting, singles[i].second));
        s.settings.push_back(std::move(setting));
    }
    for (const TableRow& row : readout_table(route)) {
        MeasurementSetting setting =
            make_setting(p, row.label, row.readout_qubit);
        s.plan.push_back(
            relation_for(p, setting, {row.target[0], row.target[1]}));
        s.settings.push_back(std::move(setting));
    }
    return s;
}

TomographySchedule schedule_nq(const DeviceParams& p, int n, int max_gates) {
    if (n < 1 || n > 4)
        throw validation_error("schedule_nq supports 1..4 qubits, got " +
                               std::to_string(n));
    require_qubits(p, n, "schedule_nq");
    if (max_gates < 0)
        throw validation_error("gate budget must be nonnegative");

    const std::vector<Token> toks = alphabet(n);
    // Candidate gate strings in (length, lex) order, enumerated once.
    std::vector<std::vector<Token>> candidates;
    for (int len = 0; len <= max_gates; ++len) {
        std::vector<size_t> idx(static_cast<size_t>(len), 0);
        while (true) {
            std::vector<Token> gates;
            for (size_t i : idx) gates.push_back(toks[i]);
            candidates.push_back(std::move(gates));
            int pos = len - 1;
            while (pos >= 0 && ++idx[static_cast<size_t>(pos)] == toks.size()) {
                idx[static_cast<size_t>(pos)] = 0;
                --pos;
            }
            if (pos < 0) break;
        }
    }

    TomographySchedule s;
    s.n_qubits = n;
    const size_t total = static_cast<size_t>(1) << (2 * n);  // 4^n
    std::set<std::vector<int>> resolved{std::vector<int>(static_cast<size_t>(n), 0)};

    bool changed = true;
    while (changed && resolved.size() < total) {
        changed = false;
        for (const auto& gates : candidates) {
            if (resolved.size() == total) break;
            for (int ro = 0; ro < n; ++ro) {
                std::vector<int> base(static_cast<size_t>(n), 0);
                base[static_cast<size_t>(ro)] = 3;
                SparseCombo combo{{base, 1.0}};
                for (const Token& tok : gates) combo = apply_token(combo, tok);

                std::vector<int> unresolved;
                int count = 0;
                for (const auto& kv : combo) {
                    if (resolved.count(kv.first)) continue;
                    ++count;
                    unresolved = kv.first;
                }
                if (count != 1) continue;

                MeasurementSetting setting =
                    make_setting(p, candidate_label(gates), ro);
                cross_check_relation(p, setting, combo);
                Relation rel;
                rel.target = std::move(unresolved);
                for (const auto& [word, e] : combo)
                    rel.terms.push_back(PauliString{word, -e / 2.0});
                resolved.insert(rel.target);
                s.plan.push_back(std::move(rel));
                s.settings.push_back(std::move(setting));
                changed = true;
            }
        }
    }

    if (resolved.size() < total) {
        std::string missing;
        for (const auto& word : all_words(n)) {
            if (resolved.count(word)) continue;
            if (!missing.empty()) missing += ", ";
            missing += word_name(word);
        }
        throw physics_error("gate budget " + std::to_string(max_gates) +
                            " cannot resolve words: " + missing);
    }
    return s;
}

TomographySchedule schedule_3q_coefficient(const DeviceParams& p,
                                           const std::vector<int>& target) {
    require_qubits(p, 3, "schedule_3q_coefficient");
    if (target.size() != 3)
        throw validation_error("target word must have three axes");
    for (int a : target)
        if (a < 0 || a > 3) throw validation_error("bad axis code in target");
    if (target == std::vector<int>{0, 0, 0})
        throw validation_error("identity coefficient is fixed at 1");

    if (target == std::vector<int>{1, 3, 2}) {
        TomographySchedule s;
        s.n_qubits = 3;
        const std::pair<const char*, std::vector<int>> rows[] = {
            {"I", {3, 0, 0}},
            {"U12(t)", {1, 2, 0}},
            {"U13(t)Z1", {2, 0, 2}},
            {"U13(t)Z1U12(t)", {1, 3, 2}}};
        for (const auto& [label, row_target] : rows) {
            MeasurementSetting setting = make_setting(p, label, 0);
            s.plan.push_back(relation_for(p, setting, row_target));
            s.settings.push_back(std::move(setting));
        }
        check_triangular(s);
        return s;
    }

    const TomographySchedule full = schedule_nq(p, 3);
    std::set<std::vector<int>> needed{target};
    std::vector<bool> keep(full.plan.size(), false);
    for (size_t i = full.plan.size(); i-- > 0;) {
        if (!needed.count(full.plan[i].target)) continue;
        keep[i] = true;
        for (const auto& term : full.plan[i].terms) needed.insert(term.word);
    }
    TomographySchedule s;
    s.n_qubits = 3;
    for (size_t i = 0; i < full.plan.size(); ++i) {
        if (!keep[i]) continue;
        s.plan.push_back(full.plan[i]);
        s.settings.push_back(full.settings[i]);
    }
    if (s.plan.empty() || s.plan.back().target != target)
        throw physics_error("generic schedule does not resolve " +
                            word_name(target));
    return s;
}

void check_triangular(const TomographySchedule& schedule) {
    if (schedule.settings.size() != schedule.plan.size())
        throw validation_error("schedule has " +
                               std::to_string(schedule.settings.size()) +
                               " settings but " +
                               std::to_string(schedule.plan.size()) +
                               " plan rows");
    const std::vector<int> identity(static_cast<size_t>(schedule.n_qubits), 0);
    std::set<std::vector<int>> resolved{identity};
    for (size_t i = 0; i < schedule.plan.size(); ++i) {
        const Relation& rel = schedule.plan[i];
        if (resolved.count(rel.target))
            throw physics_error("relation " + std::to_string(i) +
                                " re-resolves word " + word_name(rel.target));
        bool has_target = false;
        for (const auto& term : rel.terms) {
            if (term.word == rel.target) {
                if (std::abs(term.coefficient) <= kCoeffTol)
                    throw physics_error("relation " + std::to_string(i) +
                                        " has a vanishing coefficient on its "
                                        "target " +
                                        word_name(rel.target));
                has_target = true;
            } else if (!resolved.count(term.word)) {
                throw physics_error("relation " + std::to_string(i) + " (" +
                                    word_name(rel.target) +
                                    ") depends on unresolved word " +
                                    word_name(term.word));
            }
        }
        if (!has_target)
            throw physics_error("relation " + std::to_string(i) +
                                " does not contain its target " +
                                word_name(rel.target));
        resolved.insert(rel.target);
    }
}

std::vector<PauliString> solve(const TomographySchedule& schedule,
                               const std::vector<MeasurementRecord>& records) {
    if (records.size() != schedule.settings.size())
        throw validation_error("got " + std::to_string(records.size()) +
                               " records for " +
                               std::to_string(schedule.settings.size()) +
                               " settings");
    for (size_t i = 0; i < records.size(); ++i)
        if (records[i].setting.label != schedule.settings[i].label)
            throw validation_error("record " + std::to_string(i) +
                                   " label \"" + records[i].setting.label +
                                   "\" does not match setting \"" +
                                   schedule.settings[i].label + "\"");
    check_triangular(schedule);

    const std::vector<int> identity(static_cast<size_t>(schedule.n_qubits), 0);
    std::map<std::vector<int>, double> r{{identity, 1.0}};
    for (size_t i = 0; i < schedule.plan.size(); ++i) {
        const Relation& rel = schedule.plan[i];
        const MeasurementRecord& rec = records[i];
        const double prob =
            rec.shots > 0 ? static_cast<double>(rec.ones_count) /
                                static_cast<double>(rec.shots)
                          : rec.ideal_probability;
        double acc = prob - 0.5;
        double c_target = 0.0;
        for (const auto& term : rel.terms) {
            if (term.word == rel.target)
                c_target = term.coefficient;
            else
                acc -= term.coefficient * r.at(term.word);
        }
        r[rel.target] = acc / c_target;
    }

    std::vector<PauliString> coefficients;
    for (const auto& word : all_words(schedule.n_qubits)) {
        const auto it = r.find(word);
        coefficients.push_back(
            PauliString{word, it == r.end() ? 0.0 : it->second});
    }
    return coefficients;
}

ComplexMatrix assemble(const std::vector<PauliString>& coefficients) {
    return pauli_assemble(coefficients);
}

ComplexMatrix project_physical(const ComplexMatrix& raw) {
    if (raw.rows() != raw.cols() || raw.rows() < 2)
        throw validation_error("state matrix is not square with dim >= 2");
    if (!is_hermitian(raw, 1e-8))
        throw validation_error("state matrix is not Hermitian");
    if (std::abs(raw.trace().real() - 1.0) > 1e-8 ||
        std::abs(raw.trace().imag()) > 1e-8)
        throw validation_error("state matrix trace " +
                               std::to_string(raw.trace().real()) +
                               " is not 1");

    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(raw);
    const int d = static_cast<int>(raw.rows());
    std::vector<int> order(static_cast<size_t>(d));
    for (int i = 0; i < d; ++i) order[static_cast<size_t>(i)] = i;
    std::sort(order.begin(), order.end(), [&es](int a, int b) {
        return es.eigenvalues()(a) > es.eigenvalues()(b);
    });

    // Water-filling onto the probability simplex over the sorted eigenvalues.
    double cumulative = 0.0;
    double mu = 0.0;
    for (int j = 0; j < d; ++j) {
        const double lambda = es.eigenvalues()(order[static_cast<size_t>(j)]);
        cumulative += lambda;
        const double candidate = (cumulative - 1.0) / (j + 1);
        if (lambda - candidate > 0.0) mu = candidate;
    }

    ComplexMatrix out = ComplexMatrix::Zero(d, d);
    for (int i = 0; i < d; ++i) {
        const double lambda = std::max(es.eigenvalues()(i) - mu, 0.0);
        if (lambda == 0.0) continue;
        out += lambda * (es.eigenvectors().col(i) *
                         es.eigenvectors().col(i).adjoint());
    }
    return out;
}

std::vector<MeasurementRecord> run_schedule(const DeviceParams& p,
                                            const TomographySchedule& schedule,
                                            const ComplexMatrix& rho,
                                            long long shots,
                                            std::uint64_t master_seed,
                                            double readout_flip) {
    if (schedule.n_qubits != p.n_qubits)
        throw validation_error("schedule is for " +
                               std::to_string(schedule.n_qubits) +
                               " qubits, device has " +
                               std::to_string(p.n_qubits));
    if (rho.rows() != (1 << p.n_qubits) || rho.cols() != (1 << p.n_qubits))
        throw validation_error("state dimension does not match device");
    if (shots < 0)
        throw validation_error("shot count must be nonnegative");
    if (!(readout_flip >= 0.0 && readout_flip <= 1.0))
        throw validation_error("readout flip rate outside [0, 1]");

    std::vector<MeasurementRecord> records;
    records.reserve(schedule.settings.size());
    for (const MeasurementSetting& setting : schedule.settings) {
        MeasurementRecord rec;
        rec.setting = setting;
        double prob =
            probability_from_observable(rho, setting_observable(p, setting));
        if (readout_flip != 0.0) prob = flip_probability(prob, readout_flip);
        rec.ideal_probability = prob;
        if (shots > 0) {
            rec.shots = shots;
            rec.seed = derive_seed(master_seed, setting.label);
            rec.ones_count = sample(prob, shots, rec.seed);
        }
        records.push_back(std::move(rec));
    }
    return records;
}

ReconstructionResult reconstruct(const DeviceParams& p,
                                 const TomographySchedule& schedule,
                                 const std::vector<MeasurementRecord>& records) {
    if (schedule.n_qubits != p.n_qubits)
        throw validation_error("schedule is for " +
                               std::to_string(schedule.n_qubits) +
                               " qubits, device has " +
                               std::to_string(p.n_qubits));
    ReconstructionResult res;
    res.coefficients = solve(schedule, records);
    res.raw_rho = assemble(res.coefficients);
    res.physical_rho = project_physical(res.raw_rho);
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(res.raw_rho);
    res.min_eigenvalue_raw = es.eigenvalues().minCoeff();
    res.residuals.reserve(records.size());
    for (const auto& rec : records) {
        res.residuals.push_back(
            rec.shots > 0 ? std::abs(static_cast<double>(rec.ones_count) /
                                         static_cast<double>(rec.shots) -
                                     rec.ideal_probability)
                          : 0.0);
    }
    return res;
}

}  // namespace cq
