#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qcert/json_io.hpp"

namespace {

using qcert::Json;

constexpr const char* kSchema = "qcert/1";

std::uint64_t default_seed() {
    const char* env = std::getenv("QCERT_SEED");
    if (env == nullptr) return 0;
    try {
        return std::stoull(env);
    } catch (const std::exception&) {
        throw qcert::ValidationError("QCERT_SEED must be an unsigned integer");
    }
}

void write_output(const Json& j, const std::string& out_path) {
    std::string text = j.dump(2);
    if (out_path.empty()) {
        std::cout << text << "\n";
    } else {
        std::ofstream out(out_path);
        if (!out) {
            throw qcert::ValidationError("cannot open output file \"" + out_path + "\"");
        }
        out << text << "\n";
    }
}

std::vector<double> parse_q_grid(const std::string& text) {
    std::vector<double> qs;
    std::string token;
    std::stringstream ss(text);
    while (std::getline(ss, token, ',')) {
        if (token.empty()) continue;
        qs.push_back(std::stod(token));
    }
    if (qs.empty()) {
        throw qcert::ValidationError("empty q grid");
    }
    return qs;
}

struct CertifyArgs {
    std::string kind;
    std::string u_spec;
    std::string psi_path;
    std::string phi_path;
    double delta = 0.0;
    long copies = 1;
    std::string out_path;
};

int run_certify(const CertifyArgs& args) {
    Json problem{{"kind", args.kind}, {"delta", args.delta}, {"copies", args.copies}};
    Json result{{"schema", kSchema}};

    if (args.kind == "state") {
        qcert::PureState psi = qcert::load_pure_state(args.psi_path);
        qcert::PureState phi = qcert::load_pure_state(args.phi_path);
        problem["psi"] = qcert::vector_to_json(psi.amplitudes());
        problem["phi"] = qcert::vector_to_json(phi.amplitudes());
        qcert::StateCertProblem p(psi, phi, args.delta, args.copies);
        qcert::StateStrategy strategy = qcert::optimal_state_measurement(p);
        result["p1"] = strategy.p1;
        result["p2"] = strategy.p2;
        result["strategy"] = qcert::state_strategy_to_json(strategy);
        result["flags"] = strategy.flags;
    } else if (args.kind == "unitary") {
        qcert::UnitaryOperator u = qcert::load_unitary(args.u_spec);
        problem["u"] = qcert::matrix_to_json(u.matrix());
        qcert::UnitaryCertProblem p(u, args.delta, args.copies);
        qcert::UnitaryStrategy strategy = qcert::optimal_unitary_strategy(p);
        result["p1"] = strategy.p1;
        result["p2"] = strategy.p2;
        result["p2_parallel_formula"] =
            qcert::p2_unitary_parallel(u, args.delta, args.copies);
        result["strategy"] = qcert::unitary_strategy_to_json(strategy);
        result["flags"] = strategy.flags;
    } else if (args.kind == "povm") {
        qcert::UnitaryOperator u = qcert::load_unitary(args.u_spec);
        problem["u"] = qcert::matrix_to_json(u.matrix());
        qcert::PovmCertProblem p(u, args.delta, args.copies);
        qcert::DephasedStrategy strategy = qcert::assemble_povm_strategy(p);
        qcert::DiamondDistance dd = qcert::diamond_distance_povm(u);
        result["p1"] = strategy.p1;
        result["p2"] = strategy.p2;
        result["p2_parallel_formula"] =
            qcert::p2_povm_parallel(u, args.delta, args.copies);
        result["diamond_distance"] = dd.value;
        result["strategy"] = qcert::povm_strategy_to_json(strategy);
        result["flags"] = strategy.flags;
    } else {
        throw qcert::ValidationError("unknown certify kind \"" + args.kind + "\"");
    }

    result["problem"] = problem;
    write_output(result, args.out_path);
    return 0;
}

struct SimulateArgs {
    CertifyArgs base;
    std::string truth = "h0";
    long shots = 100000;
    std::uint64_t seed = 0;
    bool seed_given = false;
};

int run_simulate(const SimulateArgs& args) {
    std::uint64_t seed = args.seed_given ? args.seed : default_seed();
    qcert::Truth truth;
    if (args.truth == "h0") {
        truth = qcert::Truth::H0;
    } else if (args.truth == "h1") {
        truth = qcert::Truth::H1;
    } else {
        throw qcert::ValidationError("truth must be \"h0\" or \"h1\"");
    }

    Json problem{{"kind", args.base.kind},
                 {"delta", args.base.delta},
                 {"copies", args.base.copies},
                 {"truth", args.truth},
                 {"shots", args.shots}};
    std::optional<qcert::CertProblem> p;
    std::optional<qcert::Strategy> s;

    if (args.base.kind == "state") {
        qcert::PureState psi = qcert::load_pure_state(args.base.psi_path);
        qcert::PureState phi = qcert::load_pure_state(args.base.phi_path);
        problem["psi"] = qcert::vector_to_json(psi.amplitudes());
        problem["phi"] = qcert::vector_to_json(phi.amplitudes());
        qcert::StateCertProblem prob(psi, phi, args.base.delta, args.base.copies);
        s = qcert::optimal_state_measurement(prob);
        p = std::move(prob);
    } else if (args.base.kind == "unitary") {
        qcert::UnitaryOperator u = qcert::load_unitary(args.base.u_spec);
        problem["u"] = qcert::matrix_to_json(u.matrix());
        qcert::UnitaryCertProblem prob(u, args.base.delta, args.base.copies);
        s = qcert::optimal_unitary_strategy(prob);
        p = std::move(prob);
    } else if (args.base.kind == "povm") {
        qcert::UnitaryOperator u = qcert::load_unitary(args.base.u_spec);
        problem["u"] = qcert::matrix_to_json(u.matrix());
        qcert::PovmCertProblem prob(u, args.base.delta, args.base.copies);
        s = qcert::assemble_povm_strategy(prob);
        p = std::move(prob);
    } else {
        throw qcert::ValidationError("unknown simulate kind \"" + args.base.kind + "\"");
    }

    qcert::SimReport report = qcert::run_protocol(*p, *s, truth, args.shots, seed);
    Json result{{"schema", kSchema},
                {"problem", problem},
                {"report", qcert::sim_report_to_json(report)}};
    write_output(result, args.base.out_path);
    return 0;
}

struct RangeArgs {
    std::string u_spec;
    double delta = 0.05;
    std::string q_grid_text;
    long copies = 1;
    int n_dirs = 256;
    std::string out_path;
    std::string csv_path;
};

int run_emit_range(const RangeArgs& args) {
    qcert::UnitaryOperator u = qcert::load_unitary(args.u_spec);
    double q_default = std::sqrt(1.0 - args.delta);

    Json result{{"schema", kSchema}};
    result["problem"] = Json{{"u", qcert::matrix_to_json(u.matrix())},
                             {"delta", args.delta},
                             {"copies", args.copies},
                             {"n_dirs", args.n_dirs}};
    result["hull"] = qcert::range_set_to_json(qcert::hull_of_unitary(u));

    std::vector<qcert::RangeSet> sampled;
    if (args.copies <= 1) {
        std::vector<double> qs = args.q_grid_text.empty()
                                     ? std::vector<double>{q_default}
                                     : parse_q_grid(args.q_grid_text);
        Json ranges = Json::array();
        for (double q : qs) {
            qcert::RangeSet r = qcert::wq_boundary_samples(u.matrix(), q, args.n_dirs);
            sampled.push_back(r);
            ranges.push_back(qcert::range_set_to_json(r));
        }
        result["ranges"] = ranges;
    } else {
        // Parallel mode: per copy count, the hull of the tensor-power
        // eigenvalues and the distance of its sqrt(1-delta)-range to zero
        // via the spread identity.
        double theta = qcert::spectral_spread(u).theta;
        Json parallel = Json::array();
        for (long n = 1; n <= args.copies; ++n) {
            qcert::UnitaryOperator un(qcert::tensor_power(u.matrix(), n));
            qcert::RangeSet hull = qcert::hull_of_unitary(un);
            double spread_n = std::min(theta * static_cast<double>(n), 2.0 * M_PI);
            double dist = qcert::nu_q_from_nu(qcert::nu_from_spread(spread_n), q_default);
            Json entry{{"copies", n},
                       {"q", q_default},
                       {"hull", qcert::range_set_to_json(hull)},
                       {"dist_to_zero", dist}};
            parallel.push_back(entry);
        }
        result["parallel"] = parallel;
    }

    if (!args.csv_path.empty()) {
        std::ofstream csv(args.csv_path);
        if (!csv) {
            throw qcert::ValidationError("cannot open csv file \"" + args.csv_path +
                                         "\"");
        }
        csv << "q,re,im\n";
        csv.precision(17);
        for (const qcert::RangeSet& r : sampled) {
            for (const qcert::Complex& z : r.points) {
                csv << r.q << "," << z.real() << "," << z.imag() << "\n";
            }
        }
    }

    write_output(result, args.out_path);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Two-point certification of quantum states, unitary channels and "
                 "von Neumann measurements"};
    app.require_subcommand(1);

    CertifyArgs certify_args;
    CLI::App* certify = app.add_subcommand(
        "certify", "Compute the minimized type-II error and the optimal strategy");
    certify->add_option("kind", certify_args.kind, "Object kind: state|unitary|povm")
        ->required();
    certify->add_option("--u", certify_args.u_spec,
                        "Unitary matrix: JSON file or builtin (hadamard, fig1, fig2)");
    certify->add_option("--psi", certify_args.psi_path, "Null-hypothesis state file");
    certify->add_option("--phi", certify_args.phi_path,
                        "Alternative-hypothesis state file");
    certify->add_option("--delta", certify_args.delta, "Statistical significance")
        ->required();
    certify->add_option("--copies", certify_args.copies, "Parallel uses");
    certify->add_option("--out", certify_args.out_path, "Output JSON path");

    SimulateArgs sim_args;
    CLI::App* simulate = app.add_subcommand(
        "simulate", "Assemble the optimal strategy and run a Monte-Carlo protocol");
    simulate->add_option("kind", sim_args.base.kind, "Object kind: state|unitary|povm")
        ->required();
    simulate->add_option("--u", sim_args.base.u_spec, "Unitary matrix file or builtin");
    simulate->add_option("--psi", sim_args.base.psi_path, "Null-hypothesis state file");
    simulate->add_option("--phi", sim_args.base.phi_path,
                         "Alternative-hypothesis state file");
    simulate->add_option("--delta", sim_args.base.delta, "Statistical significance")
        ->required();
    simulate->add_option("--copies", sim_args.base.copies, "Parallel uses");
    simulate->add_option("--truth", sim_args.truth, "Which hypothesis holds: h0|h1");
    simulate->add_option("--shots", sim_args.shots, "Number of protocol runs");
    simulate->add_option("--seed", sim_args.seed, "RNG seed (default: QCERT_SEED or 0)")
        ->trigger_on_parse();
    simulate->add_option("--out", sim_args.base.out_path, "Output JSON path");

    RangeArgs range_args;
    CLI::App* range = app.add_subcommand(
        "emit-range", "Emit numerical-range hulls and W_q boundary samples");
    range->add_option("--u", range_args.u_spec, "Unitary matrix file or builtin")
        ->required();
    range->add_option("--delta", range_args.delta, "Significance for the default q");
    range->add_option("--q-grid", range_args.q_grid_text,
                      "Comma-separated q values to sample");
    range->add_option("--copies", range_args.copies,
                      "Emit the parallel sequence for 1..N copies");
    range->add_option("--n-dirs", range_args.n_dirs, "Boundary sampling directions");
    range->add_option("--out", range_args.out_path, "Output JSON path");
    range->add_option("--csv", range_args.csv_path, "Also write samples as CSV");

    try {
        app.parse(argc, argv);
        if (certify->parsed()) return run_certify(certify_args);
        if (simulate->parsed()) {
            sim_args.seed_given = simulate->count("--seed") > 0;
            return run_simulate(sim_args);
        }
        if (range->parsed()) return run_emit_range(range_args);
        return 2;
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);
        std::cerr << e.what() << "\n";
        return 2;
    } catch (const qcert::ValidationError& e) {
        std::cerr << "validation error: " << e.what() << "\n";
        return 2;
    } catch (const qcert::SolverError& e) {
        std::cerr << "solver error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
