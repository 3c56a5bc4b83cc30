// Command-line front end: analytic state reports, entropy and QBER sweeps
// as CSV, and the seeded Monte Carlo protocol simulator.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "tmcc/alphabet.hpp"
#include "tmcc/eavesdrop.hpp"
#include "tmcc/errors.hpp"
#include "tmcc/photon_stats.hpp"
#include "tmcc/protocol.hpp"

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitRuntime = 3;

std::string fmt6(double value) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6f", value);
    return buf;
}

std::string fmt_sci(double value) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.3e", value);
    return buf;
}

// Streams either to stdout or to --out; the file is opened lazily so a bad
// path fails before any computation output is lost.
class OutputTarget {
public:
    explicit OutputTarget(const std::string& path) {
        if (!path.empty()) {
            file_.open(path);
            if (!file_) {
                throw tmcc::error("cannot open output file: " + path);
            }
            to_file_ = true;
        }
    }
    std::ostream& stream() { return to_file_ ? file_ : std::cout; }

private:
    std::ofstream file_;
    bool to_file_ = false;
};

struct SweepSpec {
    double lambda_min = 0.0;
    double lambda_max = 10.0;
    int points = 101;
    std::string x_axis = "lambda";  // spacing of the sweep points

    void validate() const {
        if (!(lambda_min >= 0.0) || !(lambda_min < lambda_max)) {
            throw tmcc::validation_error("sweep requires 0 <= lambda-min < lambda-max");
        }
        if (lambda_max > tmcc::TmccState::kMaxLambda) {
            throw tmcc::validation_error("lambda-max exceeds the supported maximum");
        }
        if (points < 2) {
            throw tmcc::validation_error("sweep needs at least 2 points");
        }
    }

    std::vector<double> lambdas() const;
};

// Continuous counterpart of lambda_for_target, for mean-spaced sweeps.
double lambda_with_mean(double target_mean) {
    if (target_mean <= 0.0) {
        return 0.0;
    }
    double lo = 0.0;
    double hi = 1.0;
    while (tmcc::mean_photon_number(tmcc::TmccState(hi)) < target_mean) {
        hi *= 2.0;
        if (hi > tmcc::TmccState::kMaxLambda) {
            throw tmcc::validation_error("requested mean is out of the supported range");
        }
    }
    for (int iter = 0; iter < 100; ++iter) {
        const double mid = 0.5 * (lo + hi);
        if (tmcc::mean_photon_number(tmcc::TmccState(mid)) < target_mean) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

std::vector<double> SweepSpec::lambdas() const {
    std::vector<double> values;
    values.reserve(static_cast<std::size_t>(points));
    if (x_axis == "mean") {
        const double mean_lo = lambda_min == 0.0
                                   ? 0.0
                                   : tmcc::mean_photon_number(tmcc::TmccState(lambda_min));
        const double mean_hi = tmcc::mean_photon_number(tmcc::TmccState(lambda_max));
        for (int i = 0; i < points; ++i) {
            const double mean =
                mean_lo + (mean_hi - mean_lo) * static_cast<double>(i) /
                              static_cast<double>(points - 1);
            values.push_back(lambda_with_mean(mean));
        }
    } else {
        for (int i = 0; i < points; ++i) {
            values.push_back(lambda_min + (lambda_max - lambda_min) *
                                              static_cast<double>(i) /
                                              static_cast<double>(points - 1));
        }
    }
    return values;
}

std::string trim(const std::string& text) {
    const auto begin = text.find_first_not_of(" \t\r");
    if (begin == std::string::npos) {
        return "";
    }
    const auto end = text.find_last_not_of(" \t\r");
    return text.substr(begin, end - begin + 1);
}

// Plain `key = value` configuration lines with `#` comments, expanded into
// the equivalent --key value tokens. They are injected ahead of the real
// command-line flags, so with take-last option policy the flags win.
std::vector<std::string> config_to_args(const std::string& path) {
    std::ifstream file(path);
    if (!file) {
        throw tmcc::validation_error("cannot read config file: " + path);
    }
    std::vector<std::string> args;
    std::string line;
    int line_no = 0;
    while (std::getline(file, line)) {
        ++line_no;
        const auto comment = line.find('#');
        if (comment != std::string::npos) {
            line = line.substr(0, comment);
        }
        line = trim(line);
        if (line.empty()) {
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw tmcc::validation_error("config line " + std::to_string(line_no) +
                                         " is not `key = value`: " + line);
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty() || value.empty()) {
            throw tmcc::validation_error("config line " + std::to_string(line_no) +
                                         " is not `key = value`: " + line);
        }
        if (key == "dump") {  // the only flag-valued key
            if (value == "true" || value == "1" || value == "yes" || value == "on") {
                args.push_back("--dump");
            } else if (value != "false" && value != "0" && value != "no" &&
                       value != "off") {
                throw tmcc::validation_error("config key dump must be boolean");
            }
            continue;
        }
        args.push_back("--" + key);
        args.push_back(value);
    }
    return args;
}

// Rebuilds argv with the config file contents spliced in right after the
// subcommand token.
std::vector<std::string> expand_config(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);

    std::string config_path;
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (args[i] == "--config" && i + 1 < args.size()) {
            config_path = args[i + 1];
        } else if (args[i].rfind("--config=", 0) == 0) {
            config_path = args[i].substr(9);
        }
    }
    if (config_path.empty()) {
        return args;
    }

    std::size_t subcommand_end = 0;
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (!args[i].empty() && args[i][0] != '-') {
            subcommand_end = i + 1;
            break;
        }
    }

    const auto config_args = config_to_args(config_path);
    std::vector<std::string> expanded(args.begin(),
                                      args.begin() + static_cast<long>(subcommand_end));
    expanded.insert(expanded.end(), config_args.begin(), config_args.end());
    expanded.insert(expanded.end(), args.begin() + static_cast<long>(subcommand_end),
                    args.end());
    return expanded;
}

void warn_empty_letters(const tmcc::AlphabetSpec& spec) {
    const auto empty = spec.empty_letters();
    if (empty.empty()) {
        return;
    }
    std::cerr << "warning: alphabet m=" << spec.size << " centered at "
              << spec.center << " leaves";
    for (int idx : empty) {
        std::cerr << " letter " << idx;
    }
    std::cerr << " without support (intensity too low for this alphabet)\n";
}

int cmd_state_info(double lambda, const std::string& out_path) {
    const tmcc::TmccState state(lambda);
    const auto dist = tmcc::build_distribution(state);
    const double mean = dist.mean();
    const double variance = dist.second_moment() - mean * mean;

    OutputTarget out(out_path);
    std::ostream& os = out.stream();
    os << "lambda:        " << fmt6(lambda) << "\n";
    os << "n_max:         " << state.n_max << "\n";
    os << "tail_mass:     " << fmt_sci(dist.tail_mass) << "\n";
    os << "mean:          " << fmt6(mean) << "\n";
    os << "variance:      " << fmt6(variance) << "\n";
    if (mean > 0.0) {
        os << "mandel_q:      " << fmt6((variance - mean) / mean) << "\n";
    } else {
        os << "mandel_q:      undefined\n";
    }
    os << "max_info_bits: " << fmt6(tmcc::shannon_entropy(dist.probs)) << "\n";
    return 0;
}

int cmd_entropy_curve(const SweepSpec& sweep, const std::string& alphabets,
                      const std::string& out_path) {
    sweep.validate();

    std::vector<std::string> requested;
    std::set<std::string> seen;
    std::stringstream tokens(alphabets);
    std::string token;
    while (std::getline(tokens, token, ',')) {
        if (token != "2" && token != "4" && token != "8" && token != "max") {
            throw tmcc::validation_error("alphabets must be a subset of 2,4,8,max");
        }
        if (seen.insert(token).second) {
            requested.push_back(token);
        }
    }
    if (requested.empty()) {
        throw tmcc::validation_error("alphabets must name at least one column");
    }

    OutputTarget out(out_path);
    std::ostream& os = out.stream();
    os << "lambda,mean";
    for (const char* name : {"2", "4", "8"}) {
        if (seen.count(name)) {
            os << ",H" << name;
        }
    }
    if (seen.count("max")) {
        os << ",Hmax";
    }
    os << "\n";

    for (double lambda : sweep.lambdas()) {
        const tmcc::TmccState state(lambda);
        const auto dist = tmcc::build_distribution(state);
        const int center = tmcc::center_from_mean(dist.mean());
        os << fmt6(lambda) << "," << fmt6(dist.mean());
        for (int m : {2, 4, 8}) {
            if (seen.count(std::to_string(m))) {
                const auto pmf = tmcc::letter_pmf(dist, tmcc::AlphabetSpec(m, center));
                os << "," << fmt6(tmcc::shannon_entropy(pmf));
            }
        }
        if (seen.count("max")) {
            os << "," << fmt6(tmcc::shannon_entropy(dist.probs));
        }
        os << "\n";
    }
    return 0;
}

int cmd_qber_curve(const SweepSpec& sweep, int m, const std::string& source_name,
                   const std::string& estimator_name, const std::string& out_path) {
    sweep.validate();
    const tmcc::ResendSource source = source_name == "poisson"
                                          ? tmcc::ResendSource::poisson
                                          : tmcc::ResendSource::tmcc;
    const tmcc::Estimator estimator = estimator_name == "paper-literal"
                                          ? tmcc::Estimator::paper_literal
                                          : tmcc::Estimator::probability_weighted;

    OutputTarget out(out_path);
    std::ostream& os = out.stream();
    os << "lambda,mean,p_err_letter,p_err_bit_eq14,p_err_bit_hamming\n";

    std::set<int> warned_centers;
    for (double lambda : sweep.lambdas()) {
        const tmcc::TmccState state(lambda);
        const double mean = tmcc::mean_photon_number(state);
        const tmcc::AlphabetSpec spec(m, tmcc::center_from_mean(mean));
        if (warned_centers.insert(spec.center).second) {
            warn_empty_letters(spec);
        }
        const auto report =
            tmcc::analytic_qber(state, m, tmcc::CloneAttack{source}, estimator);
        os << fmt6(lambda) << "," << fmt6(mean) << "," << fmt6(report.p_err) << ","
           << fmt6(report.p_err_per_bit) << "," << fmt6(report.p_err_per_bit_hamming)
           << "\n";
    }
    return 0;
}

int cmd_simulate(const tmcc::SessionConfig& config, int threads, bool dump,
                 const std::string& out_path) {
    if (dump && out_path.empty()) {
        throw tmcc::validation_error("--dump needs --out for the per-slot CSV");
    }

    const tmcc::TmccState state(config.lambda);
    const auto dist = tmcc::build_distribution(state);
    const tmcc::AlphabetSpec spec(config.alphabet_size,
                                  tmcc::center_from_mean(dist.mean()));
    warn_empty_letters(spec);

    tmcc::SessionResult result;
    if (dump) {
        std::vector<tmcc::SlotRecord> records;
        result = tmcc::run_session_with_records(config, records);
        OutputTarget out(out_path);
        std::ostream& os = out.stream();
        os << "slot,n_alice,n_bob,letter_alice,letter_bob\n";
        for (const auto& record : records) {
            os << record.slot << "," << record.n_alice << "," << record.n_bob << ","
               << record.letter_alice.index << "," << record.letter_bob.index << "\n";
        }
    } else {
        result = tmcc::run_session(config, threads);
    }

    std::string attack_name = "none";
    if (config.attack) {
        attack_name = config.attack->source == tmcc::ResendSource::tmcc
                          ? "clone-tmcc"
                          : "clone-poisson";
    }

    std::ostream& os = std::cout;
    os << "lambda:                 " << fmt6(config.lambda) << "\n";
    os << "alphabet_size:          " << config.alphabet_size << "\n";
    os << "slots:                  " << config.slots << "\n";
    os << "seed:                   " << config.seed << "\n";
    os << "attack:                 " << attack_name << "\n";
    os << "center:                 " << spec.center << "\n";
    os << "letter_error_rate:      " << fmt6(result.letter_error_rate) << "\n";
    os << "bit_error_rate_eq14:    " << fmt6(result.bit_error_rate_eq14) << "\n";
    os << "bit_error_rate_hamming: " << fmt6(result.bit_error_rate_hamming) << "\n";
    os << "empirical_letter_freq: ";
    for (double f : result.empirical_letter_freq) {
        os << " " << fmt6(f);
    }
    os << "\n";
    os << "empirical_mean:         " << fmt6(result.empirical_mean) << "\n";
    if (std::isnan(result.empirical_mandel_q)) {
        os << "empirical_mandel_q:     undefined\n";
    } else {
        os << "empirical_mandel_q:     " << fmt6(result.empirical_mandel_q) << "\n";
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Large-alphabet QKD calculator and protocol simulator for "
                 "two-mode coherently correlated photon beams"};
    app.require_subcommand(1);
    app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
    std::string config_file;  // consumed by expand_config before parsing

    // ---- state-info ----
    auto* state_info = app.add_subcommand(
        "state-info", "Photon statistics of the source at one intensity");
    double si_lambda = 1.0;
    std::string si_out;
    state_info->add_option("--lambda", si_lambda, "state parameter |lambda|")
        ->required()
        ->check(CLI::NonNegativeNumber);
    state_info->add_option("--out", si_out, "write the report here instead of stdout");
    state_info->add_option("--config", config_file, "key = value configuration file");

    // ---- entropy-curve ----
    auto* entropy_curve = app.add_subcommand(
        "entropy-curve", "CSV sweep of alphabet entropies over intensity");
    SweepSpec ec_sweep;
    std::string ec_alphabets = "2,4,8,max";
    std::string ec_out;
    entropy_curve->add_option("--lambda-min", ec_sweep.lambda_min, "sweep start")
        ->check(CLI::NonNegativeNumber);
    entropy_curve->add_option("--lambda-max", ec_sweep.lambda_max, "sweep end")
        ->check(CLI::NonNegativeNumber);
    entropy_curve->add_option("--points", ec_sweep.points, "number of sweep rows");
    entropy_curve
        ->add_option("--x-axis", ec_sweep.x_axis, "space points uniformly in this variable")
        ->check(CLI::IsMember({"lambda", "mean"}));
    entropy_curve->add_option("--alphabets", ec_alphabets,
                              "comma list from {2,4,8,max}");
    entropy_curve->add_option("--out", ec_out, "CSV destination (default stdout)");
    entropy_curve->add_option("--config", config_file, "key = value configuration file");

    // ---- qber-curve ----
    auto* qber_curve = app.add_subcommand(
        "qber-curve", "CSV sweep of the clone-attack QBER over intensity");
    SweepSpec qc_sweep;
    int qc_m = 2;
    std::string qc_source = "tmcc";
    std::string qc_estimator = "weighted";
    std::string qc_out;
    qber_curve->add_option("--lambda-min", qc_sweep.lambda_min, "sweep start")
        ->check(CLI::NonNegativeNumber);
    qber_curve->add_option("--lambda-max", qc_sweep.lambda_max, "sweep end")
        ->check(CLI::NonNegativeNumber);
    qber_curve->add_option("--points", qc_sweep.points, "number of sweep rows");
    qber_curve
        ->add_option("--x-axis", qc_sweep.x_axis, "space points uniformly in this variable")
        ->check(CLI::IsMember({"lambda", "mean"}));
    qber_curve->add_option("--m", qc_m, "alphabet size")
        ->check(CLI::IsMember({2, 4, 8}));
    qber_curve->add_option("--source", qc_source, "Eve's resend source")
        ->check(CLI::IsMember({"tmcc", "poisson"}));
    qber_curve->add_option("--estimator", qc_estimator, "QBER estimator")
        ->check(CLI::IsMember({"paper-literal", "weighted"}));
    qber_curve->add_option("--out", qc_out, "CSV destination (default stdout)");
    qber_curve->add_option("--config", config_file, "key = value configuration file");

    // ---- simulate ----
    auto* simulate = app.add_subcommand(
        "simulate", "Run a seeded Monte Carlo key-distribution session");
    double sim_lambda = 1.0;
    int sim_m = 2;
    std::uint64_t sim_slots = 100000;
    std::uint64_t sim_seed = 0;
    std::string sim_attack = "none";
    int sim_threads = 1;
    bool sim_dump = false;
    std::string sim_out;
    simulate->add_option("--lambda", sim_lambda, "state parameter |lambda|")
        ->required()
        ->check(CLI::NonNegativeNumber);
    simulate->add_option("--m", sim_m, "alphabet size")->check(CLI::IsMember({2, 4, 8}));
    simulate->add_option("--slots", sim_slots, "number of unit-time measurements");
    simulate->add_option("--seed", sim_seed, "64-bit session seed");
    simulate->add_option("--attack", sim_attack, "eavesdropper configuration")
        ->check(CLI::IsMember({"none", "clone-tmcc", "clone-poisson"}));
    simulate->add_option("--threads", sim_threads,
                         "worker shards (result is thread-count invariant)");
    simulate->add_flag("--dump", sim_dump, "write per-slot records as CSV to --out");
    simulate->add_option("--out", sim_out, "per-slot CSV destination (with --dump)");
    simulate->add_option("--config", config_file, "key = value configuration file");

    std::vector<std::string> args;
    try {
        args = expand_config(argc, argv);
    } catch (const tmcc::validation_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    std::reverse(args.begin(), args.end());  // the vector overload wants reversed args

    try {
        app.parse(args);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (*state_info) {
            return cmd_state_info(si_lambda, si_out);
        }
        if (*entropy_curve) {
            return cmd_entropy_curve(ec_sweep, ec_alphabets, ec_out);
        }
        if (*qber_curve) {
            return cmd_qber_curve(qc_sweep, qc_m, qc_source, qc_estimator, qc_out);
        }
        if (*simulate) {
            std::optional<tmcc::CloneAttack> attack;
            if (sim_attack == "clone-tmcc") {
                attack = tmcc::CloneAttack{tmcc::ResendSource::tmcc};
            } else if (sim_attack == "clone-poisson") {
                attack = tmcc::CloneAttack{tmcc::ResendSource::poisson};
            }
            const tmcc::SessionConfig config{sim_lambda, sim_m, sim_slots, sim_seed,
                                             attack};
            return cmd_simulate(config, sim_threads, sim_dump, sim_out);
        }
    } catch (const tmcc::validation_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitRuntime;
    }
    return 0;
}
