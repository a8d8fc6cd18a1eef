// Command-line front end: timing reports, readout-table verification, schedule
// simulation, and state/process tomography, driven by a flat config file.
// Flags override config values; outputs are byte-deterministic.

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "cq/errors.hpp"
#include "cq/io.hpp"

namespace fs = std::filesystem;

namespace {

struct Options {
    std::string config_path;
    std::string out_dir;
    std::optional<long long> shots;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> route;
    std::optional<std::string> project;
};

struct RunConfig {
    cq::Config cfg;
    std::string out_dir;
    long long shots = 0;
    std::uint64_t seed = 0;
    cq::Route route = cq::Route::qubit1;
    std::string route_name = "qubit1";
    bool project = false;
    double readout_flip = 0.0;
};

RunConfig resolve(const Options& opt) {
    RunConfig rc;
    rc.cfg = cq::parse_config_file(opt.config_path);
    rc.out_dir = opt.out_dir;
    rc.shots = opt.shots ? *opt.shots : rc.cfg.get_int_or("shots", 0);
    rc.seed = opt.seed ? *opt.seed
                       : static_cast<std::uint64_t>(rc.cfg.get_int_or("seed", 0));
    rc.route_name = opt.route ? *opt.route : rc.cfg.get_or("route", "qubit1");
    if (rc.route_name == "qubit1")
        rc.route = cq::Route::qubit1;
    else if (rc.route_name == "qubit2")
        rc.route = cq::Route::qubit2;
    else
        throw cq::validation_error("route must be qubit1 or qubit2, got \"" +
                                   rc.route_name + "\"");
    const std::string project =
        opt.project ? *opt.project : rc.cfg.get_or("project", "off");
    if (project != "on" && project != "off")
        throw cq::validation_error("project must be on or off, got \"" + project +
                                   "\"");
    rc.project = project == "on";
    rc.readout_flip = rc.cfg.get_double_or("readout.flip", 0.0);
    fs::create_directories(rc.out_dir);
    return rc;
}

std::string out_path(const RunConfig& rc, const std::string& name) {
    return (fs::path(rc.out_dir) / name).string();
}

cq::TomographySchedule schedule_for(const cq::DeviceParams& p, cq::Route route) {
    if (p.n_qubits == 1) return cq::schedule_1q(p);
    if (p.n_qubits == 2) return cq::schedule_2q(p, route);
    return cq::schedule_nq(p, p.n_qubits);
}

double sequence_duration(const cq::PulseSequence& seq) {
    double total = 0.0;
    for (const auto& seg : seq.segments) total += seg.duration;
    return total;
}

std::string strip_readout_suffix(const std::string& label) {
    return label.substr(0, label.find(':'));
}

int cmd_timing(const RunConfig& rc) {
    const cq::DeviceParams p = cq::device_from_config(rc.cfg);
    const cq::Timings t = cq::timings(p);
    const double budget = rc.cfg.get_double_or("timing.budget_ns", 5.0);

    struct Row {
        std::string table;
        std::string label;
        int readout_qubit;
        double duration;
    };
    std::vector<Row> rows;
    double max_route = 0.0;
    if (p.n_qubits == 2) {
        const cq::TomographySchedule route1 = cq::schedule_2q(p, cq::Route::qubit1);
        const cq::TomographySchedule route2 = cq::schedule_2q(p, cq::Route::qubit2);
        for (size_t i = 0; i < route1.settings.size(); ++i) {
            const auto& s = route1.settings[i];
            rows.push_back(Row{i < 6 ? "single" : "I",
                               strip_readout_suffix(s.label), s.readout_qubit + 1,
                               sequence_duration(s.sequence)});
        }
        for (size_t i = 6; i < route2.settings.size(); ++i) {
            const auto& s = route2.settings[i];
            rows.push_back(Row{"II", strip_readout_suffix(s.label),
                               s.readout_qubit + 1,
                               sequence_duration(s.sequence)});
        }
        const cq::TomographySchedule& chosen =
            rc.route == cq::Route::qubit1 ? route1 : route2;
        for (const auto& s : chosen.settings)
            max_route = std::max(max_route, sequence_duration(s.sequence));
    } else {
        const cq::TomographySchedule sched = schedule_for(p, rc.route);
        const std::string table = p.n_qubits == 1 ? "single" : "generic";
        for (const auto& s : sched.settings) {
            const double d = sequence_duration(s.sequence);
            rows.push_back(
                Row{table, strip_readout_suffix(s.label), s.readout_qubit + 1, d});
            max_route = std::max(max_route, d);
        }
    }

    std::string report;
    report += "t_x_ns = " + cq::format_double(t.t_x) + "\n";
    report += "t_z_quarter_ns = " + cq::format_double(t.t_z_quarter) + "\n";
    report += "t_y_total_ns = " + cq::format_double(t.t_y_total) + "\n";
    report += "tau_ns = " + cq::format_double(t.tau) + "\n";
    report += "tau_alternative_ns = " + cq::format_double(cq::tau_physical(p)) +
              "\n";
    report += "tau_note = tau_ns follows the E_J_eff reading; "
              "tau_alternative_ns uses the full junction energy 2*E_J0, half "
              "the duration when E_J_eff = E_J0\n";
    report += "budget_ns = " + cq::format_double(budget) + "\n";
    report += "route = " + rc.route_name + "\n";
    report += "max_route_duration_ns = " + cq::format_double(max_route) + "\n";
    report += std::string("max_route_within_budget = ") +
              (max_route < budget ? "yes" : "no") + "\n";
    for (const std::string& warning : cq::device_warnings(p))
        report += "warning = " + warning + "\n";
    cq::write_text_file(out_path(rc, "timing.txt"), report);

    std::string csv = "table,label,readout_qubit,duration_ns,within_budget\n";
    for (const auto& row : rows) {
        csv += row.table + "," + row.label + "," +
               std::to_string(row.readout_qubit) + "," +
               cq::format_double(row.duration) + "," +
               (row.duration < budget ? "yes" : "no") + "\n";
    }
    cq::write_text_file(out_path(rc, "schedules.csv"), csv);
    return 0;
}

int cmd_verify_tables(const RunConfig& rc) {
    const cq::DeviceParams p = cq::device_from_config(rc.cfg);
    const cq::TableReport report = cq::verify_tables(p);

    std::string text;
    text += "order_convention = " + report.order_convention + "\n";
    text += "rows = " + std::to_string(report.rows.size()) + "\n";
    for (const auto& row : report.rows) {
        text += "table " + row.table + " " + row.target + " " + row.label +
                " deviation " + cq::format_double(row.max_deviation) + " " +
                (row.pass ? "PASS" : "FAIL") + "\n";
        if (!row.variant_label.empty()) {
            text += "table " + row.table + " " + row.target + " variant " +
                    row.variant_label + " deviations " +
                    cq::format_double(row.variant_deviation) + " / " +
                    cq::format_double(row.variant_reversed_deviation) +
                    " (fails under both reading orders, as expected)\n";
        }
    }
    text += std::string("all_pass = ") + (report.all_pass ? "yes" : "no") + "\n";
    cq::write_text_file(out_path(rc, "tables.txt"), text);
    if (!report.all_pass)
        throw cq::physics_error("readout-table verification failed");
    return 0;
}

int cmd_simulate(const RunConfig& rc) {
    const cq::DeviceParams p = cq::device_from_config(rc.cfg);
    const cq::ComplexMatrix rho = cq::state_from_config(rc.cfg, p.n_qubits);
    const cq::TomographySchedule schedule = schedule_for(p, rc.route);
    const auto records = cq::run_schedule(p, schedule, rho, rc.shots, rc.seed,
                                          rc.readout_flip);
    cq::write_text_file(out_path(rc, "records.csv"), cq::records_csv(records));
    return 0;
}

int cmd_tomo_state(const RunConfig& rc) {
    const cq::DeviceParams p = cq::device_from_config(rc.cfg);
    const std::string mode = rc.cfg.get_or("state.mode", "simulate");
    if (mode != "simulate" && mode != "direct")
        throw cq::validation_error("state.mode must be simulate or direct, got \"" +
                                   mode + "\"");

    std::vector<cq::MeasurementRecord> records;
    cq::ComplexMatrix raw;
    cq::ComplexMatrix physical;
    std::vector<cq::PauliString> coefficients;
    double min_eig_raw = 0.0;
    double max_residual = 0.0;
    int n_settings = 0;

    if (mode == "direct") {
        raw = cq::state_from_config(rc.cfg, p.n_qubits);
        coefficients = cq::pauli_decompose(raw);
        physical = cq::project_physical(raw);
        Eigen::SelfAdjointEigenSolver<cq::ComplexMatrix> es(raw);
        min_eig_raw = es.eigenvalues().minCoeff();
    } else {
        const cq::ComplexMatrix rho = cq::state_from_config(rc.cfg, p.n_qubits);
        const cq::TomographySchedule schedule = schedule_for(p, rc.route);
        records = cq::run_schedule(p, schedule, rho, rc.shots, rc.seed,
                                   rc.readout_flip);
        const cq::ReconstructionResult res =
            cq::reconstruct(p, schedule, records);
        raw = res.raw_rho;
        physical = res.physical_rho;
        coefficients = res.coefficients;
        min_eig_raw = res.min_eigenvalue_raw;
        for (double r : res.residuals) max_residual = std::max(max_residual, r);
        n_settings = static_cast<int>(schedule.settings.size());
    }

    cq::write_text_file(out_path(rc, "records.csv"), cq::records_csv(records));
    cq::write_text_file(out_path(rc, "coefficients.csv"),
                        cq::coefficients_csv(coefficients));
    cq::write_matrix_json(out_path(rc, "raw_rho.json"), raw);
    cq::write_matrix_json(out_path(rc, "physical_rho.json"), physical);
    cq::write_text_file(out_path(rc, "barchart_raw.csv"), cq::barchart_csv(raw));
    cq::write_text_file(out_path(rc, "barchart_physical.csv"),
                        cq::barchart_csv(physical));

    std::string summary;
    summary += "mode = " + mode + "\n";
    summary += "n_qubits = " + std::to_string(p.n_qubits) + "\n";
    summary += "route = " + rc.route_name + "\n";
    summary += "shots = " + std::to_string(mode == "direct" ? 0 : rc.shots) + "\n";
    summary += "seed = " + std::to_string(rc.seed) + "\n";
    summary += "n_settings = " + std::to_string(n_settings) + "\n";
    summary += "min_eigenvalue_raw = " + cq::format_double(min_eig_raw) + "\n";
    summary += "max_residual = " + cq::format_double(max_residual) + "\n";
    cq::write_text_file(out_path(rc, "summary.txt"), summary);
    return 0;
}

int cmd_tomo_process(const RunConfig& rc) {
    const cq::DeviceParams p = cq::device_from_config(rc.cfg);
    const cq::Channel channel = cq::channel_from_config(rc.cfg);
    const cq::ProcessResult res =
        cq::process_tomography(p, channel, rc.shots, rc.seed, rc.project);

    const cq::ComplexMatrix chi = res.chi.entries;
    nlohmann::ordered_json j =
        nlohmann::ordered_json::parse(cq::matrix_to_json(chi));
    j["basis_label"] = res.chi.basis_label;
    cq::write_text_file(out_path(rc, "chi.json"), j.dump() + "\n");

    for (size_t k = 0; k < res.input_reconstructions.size(); ++k) {
        const auto& recon = res.input_reconstructions[k];
        cq::write_matrix_json(
            out_path(rc, "input" + std::to_string(k) + "_raw.json"),
            recon.raw_rho);
        cq::write_matrix_json(
            out_path(rc, "input" + std::to_string(k) + "_physical.json"),
            recon.physical_rho);
    }

    std::string report;
    report += "channel = " + channel.label + "\n";
    report += "shots = " + std::to_string(rc.shots) + "\n";
    report += "seed = " + std::to_string(rc.seed) + "\n";
    report += std::string("project = ") + (rc.project ? "on" : "off") + "\n";
    report += "tp_residual = " + cq::format_double(res.tp_residual) + "\n";
    report += "chi_trace_re = " + cq::format_double(chi.trace().real()) + "\n";
    report += "chi_trace_im = " + cq::format_double(chi.trace().imag()) + "\n";
    report +=
        "min_chi_eigenvalue = " + cq::format_double(res.min_chi_eigenvalue) + "\n";
    cq::write_text_file(out_path(rc, "process.txt"), report);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"charge-qubit pulse simulator and tomography toolkit"};
    app.require_subcommand(1);

    Options opt;
    auto add_common = [&opt](CLI::App* sub) {
        sub->add_option("--config", opt.config_path, "flat key = value config file")
            ->required();
        sub->add_option("--out", opt.out_dir, "output directory")->required();
        sub->add_option("--shots", opt.shots,
                        "shots per setting (0 = exact probabilities)");
        sub->add_option("--seed", opt.seed, "master sampling seed");
        sub->add_option("--route", opt.route, "readout table: qubit1 or qubit2")
            ->check(CLI::IsMember({"qubit1", "qubit2"}));
        sub->add_option("--project", opt.project,
                        "project intermediate states in tomo-process: on or off")
            ->check(CLI::IsMember({"on", "off"}));
    };

    CLI::App* timing = app.add_subcommand("timing", "pulse durations and budgets");
    CLI::App* tables =
        app.add_subcommand("verify-tables", "check the 18 readout-table rows");
    CLI::App* simulate =
        app.add_subcommand("simulate", "record measurement settings for a state");
    CLI::App* tomo_state =
        app.add_subcommand("tomo-state", "reconstruct a density matrix");
    CLI::App* tomo_process =
        app.add_subcommand("tomo-process", "reconstruct a single-qubit chi matrix");
    for (CLI::App* sub : {timing, tables, simulate, tomo_state, tomo_process})
        add_common(sub);

    CLI11_PARSE(app, argc, argv);

    try {
        const RunConfig rc = resolve(opt);
        if (timing->parsed()) return cmd_timing(rc);
        if (tables->parsed()) return cmd_verify_tables(rc);
        if (simulate->parsed()) return cmd_simulate(rc);
        if (tomo_state->parsed()) return cmd_tomo_state(rc);
        return cmd_tomo_process(rc);
    } catch (const cq::physics_error& e) {
        std::cerr << "physics error: " << e.what() << "\n";
        return 2;
    } catch (const cq::validation_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
