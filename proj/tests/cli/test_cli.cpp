#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace {

struct RunResult {
    int exit_code = -1;
    std::string output;
};

RunResult run_cli(const std::string& args, bool keep_stderr = false) {
    const std::string cmd = std::string(TMCC_CLI_PATH) + " " + args +
                            (keep_stderr ? " 2>&1" : " 2>/dev/null");
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    RunResult result;
    char buf[4096];
    std::size_t n = 0;
    while ((n = fread(buf, 1, sizeof(buf), pipe)) > 0) {
        result.output.append(buf, n);
    }
    const int status = pclose(pipe);
    result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return result;
}

std::vector<std::string> split(const std::string& text, char sep) {
    std::vector<std::string> parts;
    std::stringstream stream(text);
    std::string item;
    while (std::getline(stream, item, sep)) {
        parts.push_back(item);
    }
    return parts;
}

std::filesystem::path temp_file(const std::string& name) {
    return std::filesystem::temp_directory_path() / name;
}

}  // namespace

TEST_CASE("state-info reports the moments and Mandel Q") {
    const auto run = run_cli("state-info --lambda 1");
    CHECK(run.exit_code == 0);
    CHECK(run.output.find("mean:          0.697775") != std::string::npos);
    CHECK(run.output.find("mandel_q:      -0.264647") != std::string::npos);
    CHECK(run.output.find("max_info_bits: 1.478528") != std::string::npos);
}

TEST_CASE("state-info reports the vacuum as undefined Q") {
    const auto run = run_cli("state-info --lambda 0");
    CHECK(run.exit_code == 0);
    CHECK(run.output.find("mean:          0.000000") != std::string::npos);
    CHECK(run.output.find("mandel_q:      undefined") != std::string::npos);
    CHECK(run.output.find("max_info_bits: 0.000000") != std::string::npos);
}

TEST_CASE("validation failures exit with code 2") {
    CHECK(run_cli("state-info --lambda -1").exit_code == 2);
    CHECK(run_cli("state-info").exit_code == 2);
    CHECK(run_cli("qber-curve --m 3").exit_code == 2);
    CHECK(run_cli("entropy-curve --lambda-min 5 --lambda-max 2").exit_code == 2);
    CHECK(run_cli("entropy-curve --alphabets 2,16").exit_code == 2);
    CHECK(run_cli("simulate --lambda 1 --attack clone-nothing").exit_code == 2);
    CHECK(run_cli("simulate --lambda 1 --dump").exit_code == 2);
    CHECK(run_cli("no-such-command").exit_code == 2);
}

TEST_CASE("help exits cleanly") {
    CHECK(run_cli("--help").exit_code == 0);
    CHECK(run_cli("simulate --help").exit_code == 0);
}

TEST_CASE("numeric failures exit with code 3") {
    // Cloning lambda = 100 needs resend parameters beyond the supported
    // range, which surfaces as a solver failure rather than a usage error.
    const auto run = run_cli(
        "simulate --lambda 100 --m 2 --slots 10 --seed 1 --attack clone-tmcc");
    CHECK(run.exit_code == 3);
}

TEST_CASE("entropy-curve emits the requested columns with ordered entropies") {
    const auto run = run_cli("entropy-curve --lambda-min 0 --lambda-max 10 --points 21");
    CHECK(run.exit_code == 0);
    const auto lines = split(run.output, '\n');
    REQUIRE(lines.size() >= 22);
    CHECK(lines[0] == "lambda,mean,H2,H4,H8,Hmax");

    // First row is the vacuum: every entropy is zero.
    CHECK(lines[1] == "0.000000,0.000000,0.000000,0.000000,0.000000,0.000000");

    for (std::size_t i = 1; i <= 21; ++i) {
        const auto cells = split(lines[i], ',');
        REQUIRE(cells.size() == 6);
        const double h2 = std::stod(cells[2]);
        const double h4 = std::stod(cells[3]);
        const double h8 = std::stod(cells[4]);
        const double hmax = std::stod(cells[5]);
        CHECK(h2 <= h4 + 5e-7);  // printed at 6 decimals
        CHECK(h4 <= h8 + 5e-7);
        CHECK(h8 <= hmax + 5e-7);
    }
}

TEST_CASE("entropy-curve honors a column subset") {
    const auto run = run_cli(
        "entropy-curve --lambda-min 0.5 --lambda-max 2 --points 4 --alphabets 4,max");
    CHECK(run.exit_code == 0);
    const auto lines = split(run.output, '\n');
    REQUIRE(!lines.empty());
    CHECK(lines[0] == "lambda,mean,H4,Hmax");
    CHECK(split(lines[1], ',').size() == 4);
}

TEST_CASE("entropy-curve --x-axis mean spaces rows uniformly in the mean") {
    const auto run = run_cli(
        "entropy-curve --lambda-min 0 --lambda-max 10 --points 5 --x-axis mean "
        "--alphabets max");
    CHECK(run.exit_code == 0);
    const auto lines = split(run.output, '\n');
    REQUIRE(lines.size() >= 6);
    std::vector<double> means;
    for (std::size_t i = 1; i <= 5; ++i) {
        means.push_back(std::stod(split(lines[i], ',')[1]));
    }
    const double step = means.back() / 4.0;
    for (std::size_t i = 0; i < means.size(); ++i) {
        CHECK(std::abs(means[i] - step * static_cast<double>(i)) < 1e-4);
    }
}

TEST_CASE("CSV numbers round-trip at the emitted precision") {
    const auto run = run_cli("entropy-curve --lambda-min 0 --lambda-max 3 --points 7");
    const auto lines = split(run.output, '\n');
    for (std::size_t i = 1; i < lines.size(); ++i) {
        if (lines[i].empty()) {
            continue;
        }
        for (const auto& cell : split(lines[i], ',')) {
            char buf[64];
            std::snprintf(buf, sizeof(buf), "%.6f", std::stod(cell));
            CHECK(cell == buf);
        }
    }
}

TEST_CASE("qber-curve emits the five columns and vanishes at low intensity") {
    const auto run = run_cli(
        "qber-curve --lambda-min 0.001 --lambda-max 2 --points 5 --m 4 --source tmcc "
        "--estimator weighted");
    CHECK(run.exit_code == 0);
    const auto lines = split(run.output, '\n');
    REQUIRE(lines.size() >= 6);
    CHECK(lines[0] == "lambda,mean,p_err_letter,p_err_bit_eq14,p_err_bit_hamming");
    const auto first = split(lines[1], ',');
    REQUIRE(first.size() == 5);
    CHECK(std::stod(first[2]) < 0.01);  // nearly vacuum: cloning almost perfect
}

TEST_CASE("qber-curve: poisson resend beats tmcc rowwise") {
    const std::string sweep = "--lambda-min 3 --lambda-max 6 --points 7 --m 4 "
                              "--estimator weighted";
    const auto tmcc_run = run_cli("qber-curve " + sweep + " --source tmcc");
    const auto poisson_run = run_cli("qber-curve " + sweep + " --source poisson");
    const auto tmcc_lines = split(tmcc_run.output, '\n');
    const auto poisson_lines = split(poisson_run.output, '\n');
    REQUIRE(tmcc_lines.size() == poisson_lines.size());
    for (std::size_t i = 1; i < tmcc_lines.size(); ++i) {
        if (tmcc_lines[i].empty()) {
            continue;
        }
        const auto t = split(tmcc_lines[i], ',');
        const auto p = split(poisson_lines[i], ',');
        CHECK(std::stod(p[3]) > std::stod(t[3]));
    }
}

TEST_CASE("simulate without attack reports zero error rates") {
    const auto run = run_cli(
        "simulate --lambda 4.5 --m 8 --slots 100000 --seed 42 --attack none");
    CHECK(run.exit_code == 0);
    CHECK(run.output.find("letter_error_rate:      0.000000") != std::string::npos);
    CHECK(run.output.find("bit_error_rate_eq14:    0.000000") != std::string::npos);
    CHECK(run.output.find("bit_error_rate_hamming: 0.000000") != std::string::npos);
}

TEST_CASE("simulate output is byte-identical across runs and thread counts") {
    const std::string flags =
        "simulate --lambda 4.5 --m 8 --slots 200000 --seed 42 --attack clone-tmcc";
    const auto a = run_cli(flags);
    const auto b = run_cli(flags);
    const auto c = run_cli(flags + " --threads 4");
    CHECK(a.exit_code == 0);
    CHECK(a.output == b.output);
    CHECK(a.output == c.output);
}

TEST_CASE("simulate --dump writes the per-slot CSV") {
    const auto csv_path = temp_file("tmcc_cli_dump.csv");
    std::filesystem::remove(csv_path);
    const auto run = run_cli(
        "simulate --lambda 2 --m 4 --slots 50 --seed 7 --attack clone-poisson "
        "--dump --out " + csv_path.string());
    CHECK(run.exit_code == 0);
    CHECK(run.output.find("letter_error_rate:") != std::string::npos);

    std::ifstream file(csv_path);
    REQUIRE(file.good());
    std::string line;
    std::getline(file, line);
    CHECK(line == "slot,n_alice,n_bob,letter_alice,letter_bob");
    int rows = 0;
    while (std::getline(file, line)) {
        if (!line.empty()) {
            ++rows;
            const auto cells = split(line, ',');
            REQUIRE(cells.size() == 5);
        }
    }
    CHECK(rows == 50);
    std::filesystem::remove(csv_path);
}

TEST_CASE("config file equals flags, with flags taking precedence") {
    const auto cfg_path = temp_file("tmcc_cli_session.cfg");
    {
        std::ofstream cfg(cfg_path);
        cfg << "# session configuration\n";
        cfg << "lambda = 4.5\n";
        cfg << "m = 8\n";
        cfg << "slots = 50000\n";
        cfg << "seed = 42\n";
        cfg << "attack = clone-tmcc\n";
    }
    const auto from_flags = run_cli(
        "simulate --lambda 4.5 --m 8 --slots 50000 --seed 42 --attack clone-tmcc");
    const auto from_config = run_cli("simulate --config " + cfg_path.string());
    CHECK(from_config.exit_code == 0);
    CHECK(from_config.output == from_flags.output);

    // A flag on the command line wins over the config value.
    const auto overridden =
        run_cli("simulate --config " + cfg_path.string() + " --seed 43");
    const auto reference = run_cli(
        "simulate --lambda 4.5 --m 8 --slots 50000 --seed 43 --attack clone-tmcc");
    CHECK(overridden.output == reference.output);
    CHECK(overridden.output != from_flags.output);
    std::filesystem::remove(cfg_path);
}

TEST_CASE("low-intensity octuple alphabets warn about unreachable letters") {
    const auto run = run_cli("simulate --lambda 1 --m 8 --slots 100 --seed 1", true);
    CHECK(run.exit_code == 0);
    CHECK(run.output.find("warning") != std::string::npos);
}

TEST_CASE("state-info --out writes the report to a file") {
    const auto out_path = temp_file("tmcc_cli_state.txt");
    std::filesystem::remove(out_path);
    const auto run = run_cli("state-info --lambda 1 --out " + out_path.string());
    CHECK(run.exit_code == 0);
    CHECK(run.output.empty());
    std::ifstream file(out_path);
    REQUIRE(file.good());
    std::stringstream content;
    content << file.rdbuf();
    CHECK(content.str().find("mandel_q:      -0.264647") != std::string::npos);
    std::filesystem::remove(out_path);
}
