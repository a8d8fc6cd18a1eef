#include <catch2/catch_amalgamated.hpp>

#include <sys/wait.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>

#include "cq/io.hpp"
#include "oracles.hpp"

namespace fs = std::filesystem;
using cq::Complex;
using cq::ComplexMatrix;

namespace {

int run_cli(const std::string& args) {
    const std::string cmd =
        std::string(CQ_CLI_PATH) + " " + args + " > /dev/null 2>&1";
    const int rc = std::system(cmd.c_str());
    return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

fs::path scratch(const std::string& name) {
    fs::path dir = fs::path("cli_scratch") / name;
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// "key = value" lines -> map; non-matching lines skipped
std::map<std::string, std::string> parse_report(const std::string& text) {
    std::map<std::string, std::string> out;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        const auto eq = line.find(" = ");
        if (eq == std::string::npos) continue;
        out[line.substr(0, eq)] = line.substr(eq + 3);
    }
    return out;
}

const char* kDeviceBlock =
    "device.n_qubits = 2\n"
    "device.E_C.value = 1.0\n"
    "device.E_C.unit = K\n"
    "device.E_J0.value = 0.1\n"
    "device.E_J0.unit = K\n";

std::string write_config(const fs::path& dir, const std::string& body) {
    const fs::path p = dir / "run.cfg";
    cq::write_text_file(p.string(), body);
    return p.string();
}

}  // namespace

TEST_CASE("format_double", "[io]") {
    REQUIRE(cq::format_double(0.5) == "0.5");
    REQUIRE(cq::format_double(1.0) == "1");
    REQUIRE(cq::format_double(-2.5) == "-2.5");
    REQUIRE(cq::format_double(0.1) == "0.10000000000000001");
    REQUIRE(cq::format_double(3.141592653589793) == "3.1415926535897931");
    REQUIRE(cq::format_double(1e300) == "1.0000000000000001e+300");
    oracle::Rng rng(8);
    for (int i = 0; i < 50; ++i) {
        const double v = (rng.uniform() - 0.5) * std::pow(10.0, 6 * rng.uniform());
        REQUIRE(std::strtod(cq::format_double(v).c_str(), nullptr) == v);
    }
    REQUIRE(cq::format_complex(Complex(0.5, -0.25)) == "0.5-0.25i");
    REQUIRE(cq::format_complex(Complex(0.0, 1.0)) == "0+1i");
}

TEST_CASE("config parsing", "[io]") {
    cq::Config cfg = cq::parse_config_text(
        "# leading comment\n"
        "a.b = hello world\n"
        "\n"
        "count = 12\n"
        "ratio = 0.25\n"
        "  padded.key   =   padded value  \n");
    REQUIRE(cfg.has("a.b"));
    REQUIRE(cfg.get("a.b") == "hello world");
    REQUIRE(cfg.get("padded.key") == "padded value");
    REQUIRE(cfg.get_int_or("count", 0) == 12);
    REQUIRE(cfg.get_double("ratio") == 0.25);
    REQUIRE(cfg.get_or("missing", "fallback") == "fallback");
    REQUIRE(cfg.get_double_or("missing", 1.5) == 1.5);
    REQUIRE_FALSE(cfg.has("missing"));
    REQUIRE_THROWS_AS(cfg.get("missing"), cq::validation_error);
    REQUIRE_THROWS_AS(cfg.get_double("a.b"), cq::validation_error);
    REQUIRE_THROWS_AS(cq::parse_config_text("no equals sign here\n"),
                      cq::validation_error);
}

TEST_CASE("device_from_config", "[io]") {
    SECTION("kelvin inputs convert through the fixed constant") {
        cq::Config cfg = cq::parse_config_text(kDeviceBlock);
        cq::DeviceParams p = cq::device_from_config(cfg);
        REQUIRE(p.n_qubits == 2);
        REQUIRE(p.E_C == Catch::Approx(20.836).epsilon(1e-12));
        REQUIRE(p.E_J0 == Catch::Approx(2.0836).epsilon(1e-12));
        REQUIRE(p.E_L ==
                Catch::Approx(2.0 * std::sqrt(15.0) * 2.0836).epsilon(1e-12));
        REQUIRE(p.E_J_eff == Catch::Approx(2.0836).epsilon(1e-12));
        REQUIRE(p.coupling_variant == cq::Coupling::inductor_yy);
    }
    SECTION("micro-eV and GHz units") {
        cq::Config cfg = cq::parse_config_text(
            "device.n_qubits = 1\n"
            "device.E_C.value = 145.0\n"
            "device.E_C.unit = ueV\n"
            "device.E_J0.value = 6.5\n"
            "device.E_J0.unit = GHz\n");
        cq::DeviceParams p = cq::device_from_config(cfg);
        REQUIRE(p.E_C == Catch::Approx(145.0 * 0.2418).epsilon(1e-12));
        REQUIRE(p.E_J0 == Catch::Approx(6.5).epsilon(1e-12));
    }
    SECTION("overrides") {
        cq::Config cfg = cq::parse_config_text(
            std::string(kDeviceBlock) +
            "device.coupling = chi_xx\n"
            "device.E_L.value = 20.0\n"
            "device.E_L.unit = GHz\n"
            "device.E_J0_q2.value = 0.2\n"
            "device.E_J0_q2.unit = K\n");
        cq::DeviceParams p = cq::device_from_config(cfg);
        REQUIRE(p.coupling_variant == cq::Coupling::chi_xx);
        REQUIRE(p.E_L == 20.0);
        REQUIRE(p.E_J0_per_qubit.size() == 2);
        REQUIRE(p.E_J0_per_qubit[1] == Catch::Approx(2.0 * 2.0836).epsilon(1e-12));
    }
    SECTION("errors") {
        REQUIRE_THROWS_AS(
            cq::device_from_config(cq::parse_config_text("device.n_qubits = 1\n")),
            cq::validation_error);
        REQUIRE_THROWS_AS(cq::device_from_config(cq::parse_config_text(
                              "device.n_qubits = 1\n"
                              "device.E_C.value = 1\n"
                              "device.E_C.unit = eV\n"
                              "device.E_J0.value = 0.1\n"
                              "device.E_J0.unit = K\n")),
                          cq::validation_error);
    }
}

TEST_CASE("matrix json round trips", "[io]") {
    oracle::Rng rng(21);
    ComplexMatrix m(4, 4);
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
            m(i, j) = Complex(rng.normal(), rng.normal());
    ComplexMatrix back = cq::matrix_from_json_text(cq::matrix_to_json(m));
    REQUIRE((back - m).cwiseAbs().maxCoeff() == 0.0);

    ComplexMatrix lit = cq::matrix_from_json_text(
        R"({"dim": 2, "re": [0.5, 0, 0, 0.5], "im": [0, -0.25, 0.25, 0]})");
    REQUIRE(lit(0, 0) == Complex(0.5, 0.0));
    REQUIRE(lit(0, 1) == Complex(0.0, -0.25));
    REQUIRE(lit(1, 0) == Complex(0.0, 0.25));

    REQUIRE_THROWS_AS(
        cq::matrix_from_json_text(R"({"dim": 2, "re": [1, 2], "im": [0, 0]})"),
        cq::validation_error);
    REQUIRE_THROWS_AS(cq::matrix_from_json_text("not json"), cq::validation_error);

    fs::path dir = scratch("matrix_json");
    cq::write_matrix_json((dir / "m.json").string(), m);
    REQUIRE((cq::read_matrix_json((dir / "m.json").string()) - m)
                .cwiseAbs()
                .maxCoeff() == 0.0);
}

TEST_CASE("barchart_csv", "[io]") {
    ComplexMatrix m(2, 2);
    m << Complex(0.5, 0.0), Complex(0.25, -0.25), Complex(0.25, 0.25),
        Complex(0.5, 0.0);
    REQUIRE(cq::barchart_csv(m) ==
            "i,j,re,im\n"
            "0,0,0.5,0\n"
            "0,1,0.25,-0.25\n"
            "1,0,0.25,0.25\n"
            "1,1,0.5,0\n");
}

TEST_CASE("presets and state specification", "[io]") {
    SECTION("fig3") {
        ComplexMatrix rho = cq::preset_state("fig3");
        REQUIRE(rho.rows() == 2);
        REQUIRE(std::abs(rho(0, 1) - Complex(0.25, -std::sqrt(3.0) / 4.0)) < 1e-15);
    }
    SECTION("fig4 is the unphysical demo matrix") {
        ComplexMatrix rho = cq::preset_state("fig4");
        REQUIRE(rho.rows() == 4);
        REQUIRE(std::abs(rho(0, 3) - Complex(0.5, -std::sqrt(3.0) / 2.0)) < 1e-15);
        Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(rho);
        REQUIRE(es.eigenvalues().minCoeff() == Catch::Approx(-0.5).margin(1e-12));
    }
    SECTION("maximally mixed presets") {
        for (int n : {1, 2, 3}) {
            ComplexMatrix rho = cq::preset_state("mixed" + std::to_string(n));
            const int d = 1 << n;
            REQUIRE((rho - ComplexMatrix::Identity(d, d) / double(d))
                        .cwiseAbs()
                        .maxCoeff() == 0.0);
        }
    }
    SECTION("unknown preset") {
        REQUIRE_THROWS_AS(cq::preset_state("fig9"), cq::validation_error);
    }
    SECTION("state_from_config dispatch") {
        fs::path dir = scratch("state_spec");
        REQUIRE((cq::state_from_config(
                     cq::parse_config_text("state.preset = mixed2\n"), 2) -
                 ComplexMatrix::Identity(4, 4) / 4.0)
                    .cwiseAbs()
                    .maxCoeff() == 0.0);

        cq::write_matrix_json((dir / "s.json").string(), cq::preset_state("fig3"));
        ComplexMatrix from_file = cq::state_from_config(
            cq::parse_config_text("state.file = " + (dir / "s.json").string() +
                                  "\n"),
            1);
        REQUIRE((from_file - cq::preset_state("fig3")).cwiseAbs().maxCoeff() == 0.0);

        cq::write_text_file((dir / "c.csv").string(),
                            "word,value\n0,1\nx,0.5\ny,0.86602540378443865\nz,0\n");
        ComplexMatrix from_coeffs = cq::state_from_config(
            cq::parse_config_text("state.coefficients_file = " +
                                  (dir / "c.csv").string() + "\n"),
            1);
        REQUIRE((from_coeffs - cq::preset_state("fig3")).cwiseAbs().maxCoeff() <
                1e-15);

        REQUIRE_THROWS_AS(cq::state_from_config(
                              cq::parse_config_text("state.preset = fig3\n"), 2),
                          cq::validation_error);
        REQUIRE_THROWS_AS(
            cq::state_from_config(cq::parse_config_text("shots = 5\n"), 1),
            cq::validation_error);
    }
}

TEST_CASE("coefficient and record CSV", "[io]") {
    std::vector<cq::PauliString> coeffs{
        {{0}, 1.0}, {{1}, 0.5}, {{2}, std::sqrt(3.0) / 2.0}, {{3}, 0.0}};
    REQUIRE(cq::coefficients_csv(coeffs) ==
            "word,value\n"
            "0,1\n"
            "x,0.5\n"
            "y,0.8660254037844386\n"
            "z,0\n");

    cq::MeasurementRecord rec;
    rec.setting.label = "I:q1";
    rec.setting.readout_qubit = 0;
    rec.ideal_probability = 0.25;
    rec.shots = 100;
    rec.ones_count = 37;
    rec.seed = 42;
    REQUIRE(cq::records_csv({rec}) ==
            "label,readout_qubit,shots,ones,probability,seed\n"
            "I:q1,1,100,37,0.25,42\n");
}

TEST_CASE("channel_from_config", "[io]") {
    cq::Channel c = cq::channel_from_config(
        cq::parse_config_text("channel.kind = bit_flip\nchannel.param = 0.25\n"));
    cq::Channel ref = cq::standard_channel(cq::ChannelKind::bit_flip, 0.25);
    REQUIRE(c.kraus_ops.size() == ref.kraus_ops.size());
    for (size_t i = 0; i < c.kraus_ops.size(); ++i)
        REQUIRE((c.kraus_ops[i] - ref.kraus_ops[i]).cwiseAbs().maxCoeff() == 0.0);
    REQUIRE_THROWS_AS(
        cq::channel_from_config(cq::parse_config_text("channel.kind = fancy\n")),
        cq::validation_error);
}

TEST_CASE("cli timing", "[cli]") {
    fs::path dir = scratch("timing");
    const std::string cfg = write_config(dir, kDeviceBlock);
    REQUIRE(run_cli("timing --config " + cfg + " --out " + (dir / "out").string()) ==
            0);

    auto report = parse_report(slurp(dir / "out" / "timing.txt"));
    REQUIRE(std::stod(report.at("t_x_ns")) ==
            Catch::Approx(0.0599923210).epsilon(1e-6));
    REQUIRE(std::stod(report.at("t_y_total_ns")) ==
            Catch::Approx(0.0719907852).epsilon(1e-6));
    REQUIRE(std::stod(report.at("tau_ns")) ==
            Catch::Approx(0.2323492601).epsilon(1e-6));
    REQUIRE(std::stod(report.at("tau_alternative_ns")) ==
            Catch::Approx(0.2323492601 / 2.0).epsilon(1e-6));
    REQUIRE(report.count("tau_note") == 1);
    REQUIRE(std::stod(report.at("max_route_duration_ns")) < 0.4);
    REQUIRE(std::stod(report.at("budget_ns")) == 5.0);
    REQUIRE(report.at("max_route_within_budget") == "yes");

    const std::string schedules = slurp(dir / "out" / "schedules.csv");
    REQUIRE(schedules.rfind("table,label,readout_qubit,duration_ns,within_budget\n",
                            0) == 0);
    REQUIRE(std::count(schedules.begin(), schedules.end(), '\n') == 25);  // 24 rows

    // zero budget fails every schedule
    const std::string cfg0 =
        write_config(dir, std::string(kDeviceBlock) + "timing.budget_ns = 0\n");
    REQUIRE(run_cli("timing --config " + cfg0 + " --out " +
                    (dir / "out0").string()) == 0);
    const std::string sched0 = slurp(dir / "out0" / "schedules.csv");
    REQUIRE(sched0.find(",yes") == std::string::npos);
    auto report0 = parse_report(slurp(dir / "out0" / "timing.txt"));
    REQUIRE(report0.at("max_route_within_budget") == "no");
}

TEST_CASE("cli verify-tables", "[cli]") {
    fs::path dir = scratch("tables");
    const std::string cfg = write_config(dir, kDeviceBlock);
    REQUIRE(run_cli("verify-tables --config " + cfg + " --out " +
                    (dir / "out").string()) == 0);
    const std::string text = slurp(dir / "out" / "tables.txt");
    size_t passes = 0, pos = 0;
    while ((pos = text.find("PASS", pos)) != std::string::npos) {
        ++passes;
        pos += 4;
    }
    REQUIRE(passes >= 18);
    REQUIRE(text.find("all_pass = yes") != std::string::npos);
    REQUIRE(text.find("rightmost factor first") != std::string::npos);
}

TEST_CASE("cli tomo-state exact on the worked example", "[cli]") {
    fs::path dir = scratch("tomo_fig3");
    const std::string cfg = write_config(dir,
                                         "device.n_qubits = 1\n"
                                         "device.E_C.value = 1.0\n"
                                         "device.E_C.unit = K\n"
                                         "device.E_J0.value = 0.1\n"
                                         "device.E_J0.unit = K\n"
                                         "state.preset = fig3\n");
    REQUIRE(run_cli("tomo-state --config " + cfg + " --out " +
                    (dir / "out").string()) == 0);

    ComplexMatrix raw = cq::read_matrix_json((dir / "out" / "raw_rho.json").string());
    REQUIRE((raw - cq::preset_state("fig3")).cwiseAbs().maxCoeff() < 1e-10);
    ComplexMatrix phys =
        cq::read_matrix_json((dir / "out" / "physical_rho.json").string());
    REQUIRE((phys - cq::preset_state("fig3")).cwiseAbs().maxCoeff() < 1e-8);

    std::map<std::string, double> coeffs;
    {
        std::istringstream in(slurp(dir / "out" / "coefficients.csv"));
        std::string line;
        std::getline(in, line);
        REQUIRE(line == "word,value");
        while (std::getline(in, line)) {
            const auto comma = line.find(',');
            REQUIRE(comma != std::string::npos);
            coeffs[line.substr(0, comma)] = std::stod(line.substr(comma + 1));
        }
    }
    REQUIRE(coeffs.size() == 4);
    REQUIRE(coeffs.at("0") == 1.0);
    REQUIRE(coeffs.at("x") == Catch::Approx(0.5).margin(1e-9));
    REQUIRE(coeffs.at("y") == Catch::Approx(std::sqrt(3.0) / 2.0).margin(1e-9));
    REQUIRE(coeffs.at("z") == Catch::Approx(0.0).margin(1e-9));

    const std::string records = slurp(dir / "out" / "records.csv");
    REQUIRE(records.find("I:q1") != std::string::npos);
    REQUIRE(records.find("Z1X1Z1Z1Z1:q1") != std::string::npos);

    const std::string barchart = slurp(dir / "out" / "barchart_raw.csv");
    REQUIRE(barchart.rfind("i,j,re,im\n", 0) == 0);
    REQUIRE(fs::exists(dir / "out" / "barchart_physical.csv"));
    REQUIRE(fs::exists(dir / "out" / "summary.txt"));
}

TEST_CASE("cli byte determinism with sampling", "[cli]") {
    fs::path dir = scratch("determinism");
    const std::string cfg = write_config(dir,
                                         "device.n_qubits = 1\n"
                                         "device.E_C.value = 1.0\n"
                                         "device.E_C.unit = K\n"
                                         "device.E_J0.value = 0.1\n"
                                         "device.E_J0.unit = K\n"
                                         "state.preset = fig3\n"
                                         "shots = 10000\n"
                                         "seed = 5\n");
    REQUIRE(run_cli("tomo-state --config " + cfg + " --out " +
                    (dir / "a").string()) == 0);
    REQUIRE(run_cli("tomo-state --config " + cfg + " --out " +
                    (dir / "b").string()) == 0);
    int compared = 0;
    for (const auto& entry : fs::directory_iterator(dir / "a")) {
        const fs::path other = dir / "b" / entry.path().filename();
        REQUIRE(fs::exists(other));
        REQUIRE(slurp(entry.path()) == slurp(other));
        ++compared;
    }
    REQUIRE(compared >= 6);

    // a different seed changes the sampled records
    const std::string cfg9 = write_config(dir,
                                          "device.n_qubits = 1\n"
                                          "device.E_C.value = 1.0\n"
                                          "device.E_C.unit = K\n"
                                          "device.E_J0.value = 0.1\n"
                                          "device.E_J0.unit = K\n"
                                          "state.preset = fig3\n"
                                          "shots = 10000\n"
                                          "seed = 9\n");
    REQUIRE(run_cli("tomo-state --config " + cfg9 + " --out " +
                    (dir / "c").string()) == 0);
    REQUIRE(slurp(dir / "a" / "records.csv") != slurp(dir / "c" / "records.csv"));
}

TEST_CASE("cli tomo-state direct mode projects the demo matrix", "[cli]") {
    fs::path dir = scratch("tomo_fig4");
    const std::string cfg = write_config(dir, std::string(kDeviceBlock) +
                                                  "state.preset = fig4\n"
                                                  "state.mode = direct\n");
    REQUIRE(run_cli("tomo-state --config " + cfg + " --out " +
                    (dir / "out").string()) == 0);
    ComplexMatrix raw = cq::read_matrix_json((dir / "out" / "raw_rho.json").string());
    REQUIRE((raw - cq::preset_state("fig4")).cwiseAbs().maxCoeff() < 1e-12);
    ComplexMatrix phys =
        cq::read_matrix_json((dir / "out" / "physical_rho.json").string());
    REQUIRE(std::abs(phys(0, 3) - Complex(0.25, -std::sqrt(3.0) / 4.0)) < 1e-10);
    auto report = parse_report(slurp(dir / "out" / "summary.txt"));
    REQUIRE(std::stod(report.at("min_eigenvalue_raw")) ==
            Catch::Approx(-0.5).margin(1e-9));
}

TEST_CASE("cli simulate rejects unphysical states with exit 2", "[cli]") {
    fs::path dir = scratch("simulate_bad");
    const std::string cfg = write_config(dir, std::string(kDeviceBlock) +
                                                  "state.preset = fig4\n");
    REQUIRE(run_cli("simulate --config " + cfg + " --out " +
                    (dir / "out").string()) == 2);
}

TEST_CASE("cli simulate writes records", "[cli]") {
    fs::path dir = scratch("simulate");
    const std::string cfg = write_config(dir, std::string(kDeviceBlock) +
                                                  "state.preset = mixed2\n"
                                                  "seed = 3\n");
    REQUIRE(run_cli("simulate --config " + cfg + " --shots 50 --out " +
                    (dir / "out").string()) == 0);
    const std::string records = slurp(dir / "out" / "records.csv");
    REQUIRE(records.rfind("label,readout_qubit,shots,ones,probability,seed\n", 0) ==
            0);
    REQUIRE(std::count(records.begin(), records.end(), '\n') == 16);  // 15 settings
    REQUIRE(records.find(",50,") != std::string::npos);
}

TEST_CASE("cli tomo-process", "[cli]") {
    fs::path dir = scratch("tomo_process");
    const std::string cfg = write_config(dir,
                                         "device.n_qubits = 1\n"
                                         "device.E_C.value = 1.0\n"
                                         "device.E_C.unit = K\n"
                                         "device.E_J0.value = 0.1\n"
                                         "device.E_J0.unit = K\n"
                                         "channel.kind = bit_flip\n"
                                         "channel.param = 0.25\n");
    REQUIRE(run_cli("tomo-process --config " + cfg + " --out " +
                    (dir / "out").string()) == 0);

    ComplexMatrix chi = cq::read_matrix_json((dir / "out" / "chi.json").string());
    REQUIRE(std::abs(chi(0, 0) - Complex(0.75)) < 1e-9);
    REQUIRE(std::abs(chi(1, 1) - Complex(0.25)) < 1e-9);
    REQUIRE(std::abs(chi(2, 2)) < 1e-9);
    REQUIRE(slurp(dir / "out" / "chi.json").find("basis_label") !=
            std::string::npos);

    auto report = parse_report(slurp(dir / "out" / "process.txt"));
    REQUIRE(std::stod(report.at("tp_residual")) < 1e-9);
    REQUIRE(std::stod(report.at("chi_trace_re")) == Catch::Approx(1.0).margin(1e-9));
    for (int k = 0; k < 4; ++k) {
        REQUIRE(fs::exists(dir / "out" /
                           ("input" + std::to_string(k) + "_raw.json")));
        REQUIRE(fs::exists(dir / "out" /
                           ("input" + std::to_string(k) + "_physical.json")));
    }
}

TEST_CASE("cli error paths", "[cli]") {
    fs::path dir = scratch("errors");
    SECTION("missing device block") {
        const std::string cfg = write_config(dir, "state.preset = fig3\n");
        REQUIRE(run_cli("timing --config " + cfg + " --out " +
                        (dir / "out").string()) == 1);
    }
    SECTION("unknown preset") {
        const std::string cfg = write_config(dir, std::string(kDeviceBlock) +
                                                      "state.preset = fig9\n");
        REQUIRE(run_cli("tomo-state --config " + cfg + " --out " +
                        (dir / "out").string()) == 1);
    }
    SECTION("nonexistent config path") {
        REQUIRE(run_cli("timing --config " + (dir / "absent.cfg").string() +
                        " --out " + (dir / "out").string()) == 1);
    }
    SECTION("bad flag value") {
        const std::string cfg = write_config(dir, kDeviceBlock);
        REQUIRE(run_cli("tomo-state --config " + cfg + " --route sideways --out " +
                        (dir / "out").string()) != 0);
    }
}
