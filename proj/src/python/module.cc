#include <pybind11/complex.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "qscatter/errors.h"
#include "qscatter/phase_network.h"
#include "qscatter/scattering.h"
#include "qscatter/transfer_matrix.h"

namespace py = pybind11;
using namespace qscatter;

namespace {

std::vector<Amplitude> amplitudes_of(const QuantumState &s) {
    return {s.amplitudes().begin(), s.amplitudes().end()};
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Digital quantum scattering simulator and transfer-matrix oracle";

    py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
    py::register_exception<ValidationError>(m, "ValidationError", PyExc_ValueError);
    auto precondition = py::register_exception<PreconditionError>(m, "PreconditionError", PyExc_RuntimeError);
    py::register_exception<AsymmetryError>(m, "AsymmetryError", precondition.ptr());
    py::register_exception<SingularMatrixError>(m, "SingularMatrixError", PyExc_ArithmeticError);
    py::register_exception<UndefinedPhaseError>(m, "UndefinedPhaseError", PyExc_ArithmeticError);

    py::enum_<Basis>(m, "Basis").value("Z", Basis::Z).value("X", Basis::X).value("Y", Basis::Y);

    py::class_<SingleQubitGate>(m, "SingleQubitGate")
        .def(py::init<Amplitude, Amplitude, Amplitude, Amplitude>())
        .def_static("identity", &SingleQubitGate::identity)
        .def_static("hadamard", &SingleQubitGate::hadamard)
        .def_static("pauli_x", &SingleQubitGate::pauli_x)
        .def_static("pauli_y", &SingleQubitGate::pauli_y)
        .def_static("pauli_z", &SingleQubitGate::pauli_z)
        .def_static("phase", &SingleQubitGate::phase)
        .def("__call__", &SingleQubitGate::operator());

    py::class_<ShotRecord>(m, "ShotRecord")
        .def_readonly("plus", &ShotRecord::plus)
        .def_readonly("minus", &ShotRecord::minus)
        .def_readonly("seed", &ShotRecord::seed)
        .def_property_readonly("shots", &ShotRecord::shots)
        .def("mean", &ShotRecord::mean)
        .def("standard_error", &ShotRecord::standard_error);

    py::class_<QuantumState>(m, "QuantumState")
        .def(py::init<int>(), py::arg("num_qubits"))
        .def_static("basis_state", &QuantumState::basis_state, py::arg("num_qubits"), py::arg("index"))
        .def_static("from_amplitudes", &QuantumState::from_amplitudes, py::arg("amplitudes"))
        .def_property_readonly("num_qubits", &QuantumState::num_qubits)
        .def_property_readonly("amplitudes", &amplitudes_of)
        .def("__len__", &QuantumState::size)
        .def("norm_squared", &QuantumState::norm_squared)
        .def("normalize", &QuantumState::normalize)
        .def("apply_single_qubit", &QuantumState::apply_single_qubit, py::arg("target"), py::arg("gate"))
        .def(
            "apply_controlled",
            [](QuantumState &s, const std::vector<std::pair<int, int>> &controls, int target, const SingleQubitGate &g) {
                std::vector<Control> cs;
                for (auto [q, b] : controls) {
                    cs.push_back({q, b});
                }
                s.apply_controlled(cs, target, g);
            },
            py::arg("controls"), py::arg("target"), py::arg("gate"))
        .def("qft", &QuantumState::qft)
        .def("iqft", &QuantumState::iqft)
        .def("probability_one", &QuantumState::probability_one)
        .def("copy", [](const QuantumState &s) { return s; });

    m.def("measure_shots", &measure_shots, py::arg("state"), py::arg("qubit"), py::arg("basis"), py::arg("shots"), py::arg("seed"));
    m.def("outcome_minus_probability", &outcome_minus_probability);
    m.def("signed_momentum", &signed_momentum);
    m.def("linear_phase", &linear_phase);
    m.def("quadratic_phase", &quadratic_phase);
    m.def("kinetic_gate", &kinetic_gate);
    m.def("momentum_parity_gate", &momentum_parity_gate);
    m.def("kinetic_gate_count", [](int n) { return kinetic_network(n, 1.0).gate_count(); });
    m.def("kinetic_network_text", [](int n, double alpha) { return kinetic_network(n, alpha).to_text(); });
    m.def("barrier_support", &barrier_support);

    py::class_<TransferMatrix>(m, "TransferMatrix")
        .def_readonly("m11", &TransferMatrix::m11)
        .def_readonly("m12", &TransferMatrix::m12)
        .def_readonly("m21", &TransferMatrix::m21)
        .def_readonly("m22", &TransferMatrix::m22)
        .def("det", &TransferMatrix::det);

    py::class_<ScatteringAmplitudes>(m, "ScatteringAmplitudes")
        .def_readonly("reflection", &ScatteringAmplitudes::reflection)
        .def_readonly("transmission", &ScatteringAmplitudes::transmission);

    py::class_<PhaseShifts>(m, "PhaseShifts").def_readonly("even", &PhaseShifts::even).def_readonly("odd", &PhaseShifts::odd);

    m.def("delta_transfer", &delta_transfer, py::arg("eta"), py::arg("k"), py::arg("y") = 0.0);
    m.def("analytic_barrier_transfer",
          [](double v0, double energy, double a) { return analytic_barrier_transfer(v0, energy, a); });
    m.def("compose_transfer_chain",
          [](const std::vector<double> &etas, double k, double a, double center) { return compose_transfer_chain(etas, k, a, center); },
          py::arg("etas"), py::arg("k"), py::arg("a"), py::arg("center") = 0.0);
    m.def(
        "sample_delta_pulses",
        [](const std::function<double(double)> &v, double a, int pulses, double k) { return sample_delta_pulses(v, a, pulses, k); },
        py::arg("potential"), py::arg("a"), py::arg("pulses"), py::arg("k"));
    m.def("rt_from_transfer", &rt_from_transfer);
    m.def("phase_shifts_from_rt", &phase_shifts_from_rt);
    m.def("optical_theorem_residual", &optical_theorem_residual);

    py::class_<PotentialShape>(m, "PotentialShape")
        .def_static("zero", &PotentialShape::zero)
        .def_static("delta", &PotentialShape::delta, py::arg("g"), py::arg("center") = 0.0)
        .def_static("barrier", &PotentialShape::barrier, py::arg("height"), py::arg("width"), py::arg("center") = 0.0)
        .def_static("well", &PotentialShape::well, py::arg("depth"), py::arg("width"), py::arg("center") = 0.0)
        .def("value", &PotentialShape::value);
    m.def("barrier_from_exponent", &barrier_from_exponent);

    py::class_<SimulationConfig>(m, "SimulationConfig")
        .def(py::init([](int n, double gamma, double dtau, std::int64_t steps, double epsilon, std::uint64_t seed) {
                 return SimulationConfig{n, gamma, dtau, steps, epsilon, seed};
             }),
             py::arg("num_qubits") = 10, py::arg("gamma") = 1.0, py::arg("dtau") = 1e-4, py::arg("steps") = 1,
             py::arg("epsilon") = 1e-10, py::arg("seed") = 0)
        .def_readwrite("num_qubits", &SimulationConfig::num_qubits)
        .def_readwrite("gamma", &SimulationConfig::gamma)
        .def_readwrite("dtau", &SimulationConfig::dtau)
        .def_readwrite("steps", &SimulationConfig::steps)
        .def_readwrite("epsilon", &SimulationConfig::epsilon)
        .def_readwrite("seed", &SimulationConfig::seed);

    py::class_<WavePacketSpec>(m, "WavePacketSpec")
        .def(py::init([](std::int64_t k0, double sigma_k, double xi0) { return WavePacketSpec{k0, sigma_k, xi0}; }),
             py::arg("k0"), py::arg("sigma_k") = 0.0, py::arg("xi0") = -0.25)
        .def_readwrite("k0", &WavePacketSpec::k0)
        .def_readwrite("sigma_k", &WavePacketSpec::sigma_k)
        .def_readwrite("xi0", &WavePacketSpec::xi0);

    py::class_<ScatteringEstimate>(m, "ScatteringEstimate")
        .def_readonly("reflection", &ScatteringEstimate::reflection)
        .def_readonly("transmission", &ScatteringEstimate::transmission)
        .def_readonly("p_reflect", &ScatteringEstimate::p_reflect)
        .def_readonly("p_transmit", &ScatteringEstimate::p_transmit)
        .def_readonly("shots", &ScatteringEstimate::shots)
        .def_readonly("p_reflect_stderr", &ScatteringEstimate::p_reflect_stderr)
        .def_readonly("x_mean", &ScatteringEstimate::x_mean)
        .def_property_readonly("method", [](const ScatteringEstimate &e) { return estimate_method_name(e.method); });

    py::class_<SimulationResult>(m, "SimulationResult")
        .def_readonly("tau", &SimulationResult::tau)
        .def_readonly("exact", &SimulationResult::exact)
        .def_readonly("shots", &SimulationResult::shots);

    m.def("prepare_packet", [](const SimulationConfig &c, const WavePacketSpec &p) { return prepare_packet(c, p); });
    m.def("asymptotic_time", &asymptotic_time);
    m.def("steps_for_asymptotic_time", &steps_for_asymptotic_time);
    m.def("momentum_readout_transform", &momentum_readout_transform);
    m.def("simulation_oracle", &simulation_oracle);
    m.def("run_simulation", &run_simulation, py::arg("config"), py::arg("packet"), py::arg("shape"), py::arg("shots") = 0);
}
