// etopaq command-line driver
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "etopaq/io.hpp"
#include "etopaq/minsky.hpp"

using namespace etopaq;

namespace {

constexpr int kOk = 0, kNo = 1, kUnknown = 2, kInputError = 64, kInternal = 70;

struct InputError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

TimedAutomaton load_valid(const std::string& path) {
    TimedAutomaton ta;
    try {
        ta = load_ta(path);
    } catch (const std::exception& e) {
        throw InputError(e.what());
    }
    auto v = validate(ta);
    if (!v.empty()) {
        std::string msg = path + ": invalid automaton";
        for (const auto& x : v) msg += "\n  [" + x.rule + "] " + x.where + ": " + x.message;
        throw InputError(msg);
    }
    return ta;
}

MetaStrategy load_strategy(const TimedAutomaton& ta, const std::string& path) {
    try {
        return load_msf(ta, path);
    } catch (const std::exception& e) {
        throw InputError(e.what());
    }
}

// the automaton as read plus the prepared spaces
struct Session {
    TimedAutomaton ta;
    RegionSpace rs;
    BeliefSpace bs;
    explicit Session(const std::string& path) : ta(load_valid(path)), rs(prepare(ta)), bs(rs) {}
};

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Execution-time opacity control for timed automata"};
    app.require_subcommand(1);

    std::string ta_path, mode_name = "full", strategy_path, out_path, dot_path, machine_path;
    bool pretty = false, raw = false;
    size_t state_cap = 0, region_cap = 100000;
    double time_limit = 60.0;
    int workers = 1;

    auto add_solver_opts = [&](CLI::App* c) {
        c->add_option("--state-cap", state_cap, "Maximum number of game states (default: ETOPAQ_STATE_CAP or 200000)");
        c->add_option("--time-limit", time_limit, "Wall-clock limit for exploration in seconds");
        c->add_option("--workers", workers, "Exploration workers (exploration is sequential)")->check(CLI::PositiveNumber);
    };
    auto modes = CLI::IsMember({"full", "weak", "exists", "almost", "closed"});

    auto* check = app.add_subcommand("check", "Decide controllability, or check a given meta-strategy");
    check->add_option("ta", ta_path, "Automaton file")->required();
    check->add_option("--mode", mode_name, "full|weak|exists|almost|closed")->check(modes);
    check->add_option("--strategy", strategy_path, "Meta-strategy file to check instead of solving");
    add_solver_opts(check);

    auto* synth = app.add_subcommand("synthesize", "Synthesize a meta-strategy");
    synth->add_option("ta", ta_path, "Automaton file")->required();
    synth->add_option("--mode", mode_name, "full|weak|almost|closed")
        ->check(CLI::IsMember({"full", "weak", "almost", "closed"}));
    synth->add_option("-o,--output", out_path, "Meta-strategy output file")->required();
    add_solver_opts(synth);

    auto* sim = app.add_subcommand("simulate", "Print the oracle bucket table of a meta-strategy");
    sim->add_option("ta", ta_path, "Automaton file")->required();
    sim->add_option("--strategy", strategy_path, "Meta-strategy file")->required();

    auto* regions = app.add_subcommand("regions", "Export the reachable region automaton");
    regions->add_option("ta", ta_path, "Automaton file")->required();
    regions->add_option("--dot", dot_path, "DOT output file")->required();
    regions->add_option("--cap", region_cap, "Maximum number of regions");

    auto* beliefs = app.add_subcommand("beliefs", "Export the belief automaton");
    beliefs->add_option("ta", ta_path, "Automaton file")->required();
    beliefs->add_option("--dot", dot_path, "DOT output file")->required();
    beliefs->add_flag("--pretty", pretty, "Short belief names: bot, b0, b(0,1)', ...");

    auto* game = app.add_subcommand("game", "Export the explored game graph");
    game->add_option("ta", ta_path, "Automaton file")->required();
    game->add_option("--mode", mode_name, "full|weak|almost|closed")
        ->check(CLI::IsMember({"full", "weak", "almost", "closed"}));
    game->add_option("--dot", dot_path, "DOT output file")->required();
    add_solver_opts(game);

    auto* gen = app.add_subcommand("gen-minsky", "Compile a two-counter machine into gadgets");
    gen->add_option("machine", machine_path, "Machine file")->required();
    gen->add_option("-o,--output", out_path, "Automaton output file (default: stdout)");
    gen->add_flag("--raw", raw, "Keep the literal gadgets (finals not made urgent)");

    auto* norm = app.add_subcommand("normalize", "Print an automaton in canonical form with urgent finals");
    norm->add_option("ta", ta_path, "Automaton file")->required();
    norm->add_option("-o,--output", out_path, "Output file (default: stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kInputError;
    }

    try {
        SolveOptions opt;
        opt.state_cap = state_cap;
        opt.time_limit_s = time_limit;
        opt.workers = workers;

        if (*check) {
            Session s(ta_path);
            if (!strategy_path.empty()) {
                MetaStrategy phi = load_strategy(s.ta, strategy_path);
                Mode m = mode_name == "exists" ? Mode::Full : parse_mode(mode_name);
                if (mode_name == "exists") throw InputError("--strategy cannot be combined with --mode exists");
                Verdict v = check_metastrategy(s.bs, phi, m);
                if (v.ok) {
                    std::cout << "OK\n";
                    return kOk;
                }
                std::cout << "NOT-OK bucket " << bucket_str(v.bucket) << "\n";
                return kNo;
            }
            if (mode_name == "exists") {
                auto hits = check_exists(s.bs);
                if (hits.empty()) {
                    std::cout << "false\n";
                    return kNo;
                }
                std::cout << "true";
                for (int b : hits) std::cout << " bucket " << bucket_str(b);
                std::cout << "\n";
                return kOk;
            }
            SolveResult r = solve(s.bs, parse_mode(mode_name), opt);
            std::cout << status_str(r.status) << "\n";
            std::cerr << r.diagnostics << "\n";
            if (r.status == Status::Sat) {
                std::cout << witness_str(s.rs.ta(), r.witness);
                std::cout << print_msf(s.ta, witness_to_metastrategy(r.witness));
                return kOk;
            }
            return r.status == Status::Unsat ? kNo : kUnknown;
        }
        if (*synth) {
            Session s(ta_path);
            SolveResult r = solve(s.bs, parse_mode(mode_name), opt);
            std::cout << status_str(r.status) << "\n";
            std::cerr << r.diagnostics << "\n";
            if (r.status != Status::Sat) return r.status == Status::Unsat ? kNo : kUnknown;
            write_file(out_path, print_msf(s.ta, witness_to_metastrategy(r.witness)));
            return kOk;
        }
        if (*sim) {
            Session s(ta_path);
            MetaStrategy phi = load_strategy(s.ta, strategy_path);
            std::cout << bucket_report(oracle_buckets(s.rs, phi));
            return kOk;
        }
        if (*regions) {
            Session s(ta_path);
            write_file(dot_path, regions_dot(s.rs, region_cap));
            return kOk;
        }
        if (*beliefs) {
            Session s(ta_path);
            auto g = s.bs.explore(opt.state_cap ? opt.state_cap : default_state_cap());
            write_file(dot_path, beliefs_dot(s.bs, g, pretty));
            std::cerr << g.states.size() << " beliefs" << (g.complete ? "" : " (capped)") << "\n";
            return g.complete ? kOk : kUnknown;
        }
        if (*game) {
            Session s(ta_path);
            auto g = explore_game(s.bs, parse_mode(mode_name), opt);
            write_file(dot_path, game_dot(s.bs, g));
            std::cerr << g.states.size() << " game states" << (g.complete ? "" : " (" + g.stop_reason + ")") << "\n";
            return g.complete ? kOk : kUnknown;
        }
        if (*norm) {
            TimedAutomaton ta;
            try {
                ta = load_ta(ta_path);
            } catch (const std::exception& e) {
                throw InputError(e.what());
            }
            std::string text = print_ta(make_finals_urgent(ta));
            if (out_path.empty())
                std::cout << text;
            else
                write_file(out_path, text);
            return kOk;
        }
        if (*gen) {
            MinskyMachine m;
            try {
                m = parse_machine(read_file(machine_path));
            } catch (const std::exception& e) {
                throw InputError(machine_path + ": " + e.what());
            }
            TimedAutomaton ta = encode(m, raw);
            auto rep = structural_check(ta, m);
            for (const auto& x : rep.mismatches) std::cerr << "structural: " << x << "\n";
            if (out_path.empty())
                std::cout << print_ta(ta);
            else
                write_file(out_path, print_ta(ta));
            std::cerr << rep.locations << " locations, " << rep.edges << " edges\n";
            return rep.ok ? kOk : kNo;
        }
    } catch (const InputError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kInputError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kInternal;
    }
    return kOk;
}
