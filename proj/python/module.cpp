#include "qsched/charging.hpp"
#include "qsched/qtrace.hpp"
#include "qsched/report_io.hpp"
#include "qsched/workbench.hpp"

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace qsched;

namespace {

py::object to_fraction(const Weight& w) {
  py::object fraction = py::module_::import("fractions").attr("Fraction");
  return fraction(w.numerator(), w.denominator());
}

Weight from_python(const py::handle& value) {
  auto w = parse_weight(py::str(value).cast<std::string>());
  if (!w) throw py::value_error("not a rational weight: " + py::str(value).cast<std::string>());
  return *w;
}

py::object json_to_python(const nlohmann::json& j) {
  py::object loads = py::module_::import("json").attr("loads");
  return loads(j.dump());
}

Trace build_trace(int buffer_size, const std::vector<std::tuple<int, int, int, py::object>>& packets) {
  RawTrace raw;
  raw.buffer_size = buffer_size;
  for (const auto& [id, release, deadline, weight] : packets) {
    raw.packets.push_back({id, release, deadline, from_python(weight)});
  }
  auto v = validate_trace(raw);
  if (!v.ok()) {
    std::string msg = "invalid trace:";
    for (const auto& e : v.errors) msg += " " + e + ";";
    throw py::value_error(msg);
  }
  return *v.trace;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "GreedyQueue bounded-buffer packet scheduling: schedulers, exact oracles, charging verifier";

  py::register_exception<BudgetExceeded>(m, "BudgetExceeded");
  py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);

  py::class_<Packet>(m, "Packet")
      .def_readonly("id", &Packet::id)
      .def_readonly("release", &Packet::release)
      .def_readonly("deadline", &Packet::deadline)
      .def_property_readonly("weight", [](const Packet& p) { return to_fraction(p.weight); })
      .def("__repr__", [](const Packet& p) {
        return "Packet(id=" + std::to_string(p.id) + ", release=" + std::to_string(p.release) +
               ", deadline=" + std::to_string(p.deadline) + ", weight=" + format_weight(p.weight) + ")";
      });

  py::class_<Trace>(m, "Trace")
      .def(py::init(&build_trace), py::arg("buffer_size"), py::arg("packets"),
           "packets: iterable of (id, release, deadline, weight); weight may be int, str or Fraction")
      .def_property_readonly("buffer_size", &Trace::buffer_size)
      .def_property_readonly("horizon", &Trace::horizon)
      .def_property_readonly("packets", &Trace::packets)
      .def("to_qtrace", &emit_trace)
      .def("digest", &trace_digest)
      .def("__eq__", [](const Trace& a, const Trace& b) { return a == b; })
      .def("__repr__", [](const Trace& t) {
        return "Trace(B=" + std::to_string(t.buffer_size()) + ", packets=" + std::to_string(t.packets().size()) + ")";
      });

  py::class_<Transcript>(m, "Transcript")
      .def_readonly("algorithm", &Transcript::algorithm)
      .def_property_readonly("total", [](const Transcript& t) { return to_fraction(t.total); })
      .def_property_readonly("sent",
                             [](const Transcript& t) {
                               std::vector<std::optional<PacketId>> out;
                               for (const Step& s : t.steps) {
                                 out.push_back(s.sent ? std::optional<PacketId>(s.sent->id) : std::nullopt);
                               }
                               return out;
                             },
                             "Packet id sent at each step 1..horizon, None when idle")
      .def("send_time", &Transcript::send_time)
      .def("rejection_time", &Transcript::rejection_time)
      .def("to_dict", [](const Transcript& t) { return json_to_python(to_json(t)); });

  py::class_<OfflineSchedule>(m, "OfflineSchedule")
      .def(py::init([](const std::map<PacketId, Time>& assignment, const Trace& trace) {
             OfflineSchedule s{assignment, Weight(0)};
             for (const auto& [id, when] : assignment) s.value += trace.packet(id).weight;
             return s;
           }),
           py::arg("assignment"), py::arg("trace"))
      .def_readonly("assignment", &OfflineSchedule::assignment)
      .def_property_readonly("value", [](const OfflineSchedule& s) { return to_fraction(s.value); });

  m.def("parse_trace", [](const std::string& text) { return parse_trace(text); }, py::arg("text"));
  m.def("emit_trace", &emit_trace, py::arg("trace"));
  m.def("run_grq", [](const Trace& t) { return run_grq(t); }, py::arg("trace"));
  m.def("run_naive_greedy", [](const Trace& t) { return run_naive_greedy(t); }, py::arg("trace"));
  m.def("check_grq_transcript",
        [](const Trace& t, const Transcript& tr) {
          auto v = check_grq_transcript(t, tr);
          for (auto& s : check_slot_monotonicity(tr)) v.push_back(s);
          return v;
        },
        py::arg("trace"), py::arg("transcript"));

  m.def("optimal_bounded",
        [](const Trace& t, std::size_t max_states) {
          OracleLimits limits;
          limits.max_states = max_states;
          return optimal_bounded(t, limits);
        },
        py::arg("trace"), py::arg("max_states") = OracleLimits{}.max_states);
  m.def("optimal_unbounded", &optimal_unbounded, py::arg("trace"));
  m.def("verify_schedule", &verify_schedule, py::arg("trace"), py::arg("schedule"));
  m.def("enumerate_feasible", &enumerate_feasible, py::arg("trace"), py::arg("limit"));

  m.def("check_charging",
        [](const Trace& t, std::optional<OfflineSchedule> adversary) {
          const OfflineSchedule adv = adversary ? *adversary : optimal_bounded(t);
          return json_to_python(to_json(check_charging(t, run_grq(t), adv)));
        },
        py::arg("trace"), py::arg("adversary") = py::none(),
        "Charge-map report against the given schedule (bounded optimum by default)");

  m.def("gen_killer", [](int b, const py::object& eps) { return gen_killer(b, from_python(eps)); }, py::arg("b"),
        py::arg("eps"));
  m.def("gen_random",
        [](int n, int horizon, int b, int weight_min, int weight_max, int denominator, int max_span, int bursts,
           std::uint64_t seed) {
          GeneratorParams p{n, horizon, b, weight_min, weight_max, denominator, max_span, bursts, seed};
          return gen_random(p);
        },
        py::arg("n") = 8, py::arg("horizon") = 6, py::arg("b") = 2, py::arg("weight_min") = 1,
        py::arg("weight_max") = 16, py::arg("denominator") = 1, py::arg("max_span") = -1, py::arg("bursts") = 0,
        py::arg("seed") = 1);

  m.def("adversarial_search",
        [](int n, int horizon, int b, int weight_max, std::uint64_t seed, std::size_t iterations) {
          GeneratorParams p;
          p.n = n;
          p.horizon = horizon;
          p.buffer_size = b;
          p.weight_max = weight_max;
          p.seed = seed;
          py::gil_scoped_release release;
          SearchResult r = adversarial_search(p, iterations);
          py::gil_scoped_acquire acquire;
          return py::make_tuple(r.worst, to_fraction(r.worst_ratio), r.exceedances);
        },
        py::arg("n") = 8, py::arg("horizon") = 6, py::arg("b") = 3, py::arg("weight_max") = 16,
        py::arg("seed") = 1, py::arg("iterations") = 1000,
        "Returns (worst_trace, worst_ratio, exceedances)");

  m.def("run_experiment",
        [](const py::object& config) {
          py::object dumps = py::module_::import("json").attr("dumps");
          ExperimentConfig cfg;
          try {
            cfg = parse_experiment_config(nlohmann::json::parse(dumps(config).cast<std::string>()));
          } catch (const ConfigError& e) {
            throw py::value_error(e.what());
          }
          return json_to_python(to_json(run_experiment(cfg)));
        },
        py::arg("config"), "Runs an experiment from a config dict and returns the JSON report as a dict");
}
