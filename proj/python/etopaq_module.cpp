// Python bindings: automata as text in, verdicts and meta-strategy files out.
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "etopaq/game.hpp"
#include "etopaq/io.hpp"
#include "etopaq/minsky.hpp"

namespace py = pybind11;
using namespace etopaq;

namespace {

struct Session {
    TimedAutomaton ta;
    RegionSpace rs;
    BeliefSpace bs;
    explicit Session(const TimedAutomaton& a) : ta(a), rs(prepare(a)), bs(rs) {}
};

Mode mode_arg(const std::string& name) {
    try {
        return parse_mode(name);
    } catch (const std::runtime_error& e) {
        throw py::value_error(e.what());
    }
}

py::dict solve_py(const TimedAutomaton& ta, const std::string& mode, size_t state_cap, double time_limit) {
    Mode m = mode_arg(mode);
    Session s(ta);
    SolveOptions opt;
    opt.state_cap = state_cap;
    opt.time_limit_s = time_limit;
    SolveResult r;
    {
        py::gil_scoped_release release;
        r = solve(s.bs, m, opt);
    }
    py::dict out;
    out["status"] = status_str(r.status);
    out["states"] = r.states;
    out["edges"] = r.edges;
    out["diagnostics"] = r.diagnostics;
    out["strategy"] = r.status == Status::Sat ? py::object(py::str(print_msf(ta, witness_to_metastrategy(r.witness))))
                                              : py::object(py::none());
    return out;
}

py::object check_py(const TimedAutomaton& ta, const std::string& strategy, const std::string& mode) {
    Session s(ta);
    auto v = check_metastrategy(s.bs, parse_msf(ta, strategy), mode_arg(mode));
    if (v.ok) return py::none();
    return py::str(bucket_str(v.bucket));
}

std::vector<std::string> exists_py(const TimedAutomaton& ta) {
    Session s(ta);
    std::vector<std::string> out;
    for (int b : check_exists(s.bs)) out.push_back(bucket_str(b));
    return out;
}

py::list simulate_py(const TimedAutomaton& ta, const std::string& strategy, int buckets) {
    Session s(ta);
    auto t = oracle_buckets(s.rs, parse_msf(ta, strategy));
    py::list out;
    for (int b = 0; b < buckets; ++b) out.append(py::make_tuple(bucket_str(b), t.at(b).priv, t.at(b).pub));
    return out;
}

py::dict minsky_py(const std::string& machine, bool raw) {
    auto m = parse_machine(machine);
    auto ta = encode(m, raw);
    auto rep = structural_check(ta, m);
    py::dict out;
    out["automaton"] = print_ta(ta);
    out["ok"] = rep.ok;
    out["locations"] = rep.locations;
    out["edges"] = rep.edges;
    out["mismatches"] = rep.mismatches;
    return out;
}

}  // namespace

PYBIND11_MODULE(_etopaq, m) {
    m.doc() = "Execution-time opacity control for timed automata";
    py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);

    py::class_<TimedAutomaton>(m, "Automaton")
        .def_static("parse", &parse_ta, py::arg("text"))
        .def_static("load", &load_ta, py::arg("path"))
        .def("text", &print_ta)
        .def("normalized", &make_finals_urgent)
        .def("validate",
             [](const TimedAutomaton& ta) {
                 std::vector<std::string> out;
                 for (const auto& v : validate(ta)) out.push_back(v.rule + ": " + v.message);
                 return out;
             })
        .def_readonly("clocks", &TimedAutomaton::clocks)
        .def_property_readonly("locations",
                               [](const TimedAutomaton& ta) {
                                   std::vector<std::string> out;
                                   for (const auto& l : ta.locations) out.push_back(l.name);
                                   return out;
                               })
        .def_property_readonly("edge_count", [](const TimedAutomaton& ta) { return ta.edges.size(); })
        .def("__repr__", [](const TimedAutomaton& ta) {
            return "<Automaton " + std::to_string(ta.locations.size()) + " locations, " +
                   std::to_string(ta.edges.size()) + " edges>";
        });

    m.def("solve", &solve_py, py::arg("automaton"), py::arg("mode") = "full", py::arg("state_cap") = 0,
          py::arg("time_limit") = 60.0, "Synthesize a meta-strategy; returns status, counts and the strategy file text");
    m.def("check", &check_py, py::arg("automaton"), py::arg("strategy"), py::arg("mode") = "full",
          "None when the strategy is OK, else the first offending bucket");
    m.def("exists", &exists_py, py::arg("automaton"), "Buckets with both a private and a public duration");
    m.def("simulate", &simulate_py, py::arg("automaton"), py::arg("strategy"), py::arg("buckets") = 8,
          "(bucket, priv, pub) per bucket from the region-level oracle");
    m.def("minsky", &minsky_py, py::arg("machine"), py::arg("raw") = false,
          "Encode a two-counter machine and run the structural check");
}
