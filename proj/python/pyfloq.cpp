#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "floq/agpsolve.hpp"
#include "floq/experiment.hpp"
#include "floq/gauges.hpp"
#include "floq/kato.hpp"
#include "floq/models.hpp"
#include "floq/spectralflow.hpp"

namespace py = pybind11;
using namespace floq;

PYBIND11_MODULE(pyfloq, m) {
    m.doc() = "stroboscopic (Floquet) and geometric (Kato) decompositions of "
              "time-periodic quantum Hamiltonians";

    py::register_exception<InvalidInput>(m, "InvalidInput");
    py::register_exception<ResourceLimit>(m, "ResourceLimit");
    py::register_exception<NumericFailure>(m, "NumericFailure");

    py::class_<DriveProtocol>(m, "DriveProtocol")
        .def_property_readonly("dim", &DriveProtocol::dim)
        .def_property_readonly("period", &DriveProtocol::period)
        .def_property_readonly("is_kicked", &DriveProtocol::is_kicked)
        .def_property_readonly("name", &DriveProtocol::name)
        .def("hamiltonian", &DriveProtocol::hamiltonian, py::arg("t"))
        .def_property_readonly("metadata", &DriveProtocol::metadata);

    m.def("list_models", [] {
        std::vector<std::map<std::string, std::string>> out;
        for (const auto& mi : model_registry()) {
            std::map<std::string, std::string> e;
            e["name"] = mi.name;
            e["description"] = mi.description;
            out.push_back(e);
        }
        return out;
    });
    m.def("model_defaults", [](const std::string& name) {
        std::map<std::string, double> out;
        for (const auto& p : find_model(name).params) out[p.name] = p.value;
        return out;
    });
    m.def("make_drive", &make_model, py::arg("name"), py::arg("params") = std::map<std::string, double>{});

    m.def(
        "propagate",
        [](const DriveProtocol& d, double t0, double t1, int steps_per_period) {
            PropagateOptions o;
            if (steps_per_period > 0) o.steps_per_period = steps_per_period;
            return propagate(d, t0, t1, o);
        },
        py::arg("drive"), py::arg("t0"), py::arg("t1"), py::arg("steps_per_period") = 0);
    m.def(
        "monodromy",
        [](const DriveProtocol& d, double t0) { return monodromy(d, t0); }, py::arg("drive"),
        py::arg("t0") = 0.0);

    py::class_<FloquetSolution>(m, "FloquetSolution")
        .def_readonly("period", &FloquetSolution::period)
        .def_readonly("gauge_t0", &FloquetSolution::gauge_t0)
        .def_readonly("theta", &FloquetSolution::theta)
        .def_readonly("quasienergy", &FloquetSolution::quasienergy)
        .def_readonly("ell", &FloquetSolution::ell)
        .def_readonly("states", &FloquetSolution::states)
        .def_readonly("monodromy", &FloquetSolution::monodromy_matrix)
        .def("floquet_hamiltonian", &FloquetSolution::floquet_hamiltonian);

    m.def(
        "solve_floquet",
        [](const DriveProtocol& d, double t0, int steps_per_period) {
            FloquetOptions o;
            if (steps_per_period > 0) o.prop.steps_per_period = steps_per_period;
            return solve_floquet(d, t0, o);
        },
        py::arg("drive"), py::arg("t0") = 0.0, py::arg("steps_per_period") = 0);
    m.def("micromotion",
          [](const DriveProtocol& d, const FloquetSolution& s, double t) {
              return micromotion(d, s, t);
          });
    m.def("floquet_agp",
          [](const DriveProtocol& d, const FloquetSolution& s, double t) {
              return floquet_agp(d, s, t);
          });
    m.def("refold", &refold, py::arg("solution"), py::arg("ell"));

    py::class_<KatoResult>(m, "KatoResult")
        .def_readonly("period", &KatoResult::period)
        .def_readonly("gauge_t0", &KatoResult::gauge_t0)
        .def_readonly("times", &KatoResult::times)
        .def_readonly("E_K", &KatoResult::E_K)
        .def_readonly("xi_K", &KatoResult::xi_K)
        .def_readonly("xi_T", &KatoResult::xi_T)
        .def_readonly("gamma", &KatoResult::gamma)
        .def_readonly("gamma_principal", &KatoResult::gamma_principal)
        .def_readonly("wilson", &KatoResult::wilson)
        .def_readonly("kato_operator", &KatoResult::kato_op)
        .def_readonly("agp_times", &KatoResult::agp_times)
        .def_readonly("A_K_samples", &KatoResult::A_K_samples)
        .def_readonly("H_K_samples", &KatoResult::H_K_samples)
        .def_readonly("reconstruction_residual", &KatoResult::reconstruction_residual);

    m.def(
        "kato_analyze",
        [](const DriveProtocol& d, const FloquetSolution& s, int grid_points,
           std::vector<double> agp_sample_times) {
            KatoOptions o;
            if (grid_points > 0) o.grid_points = grid_points;
            o.agp_sample_times = std::move(agp_sample_times);
            return kato_analyze(d, s, o);
        },
        py::arg("drive"), py::arg("solution"), py::arg("grid_points") = 0,
        py::arg("agp_sample_times") = std::vector<double>{});

    py::class_<XYClosedForms>(m, "XYClosedForms")
        .def_readonly("h_F", &XYClosedForms::h_F)
        .def_readonly("a_F", &XYClosedForms::a_F)
        .def_readonly("h_K", &XYClosedForms::h_K)
        .def_readonly("a_K", &XYClosedForms::a_K)
        .def_readonly("eps_k", &XYClosedForms::eps_k)
        .def_readonly("eps_K_sq", &XYClosedForms::eps_K_sq)
        .def("floquet_energy", &XYClosedForms::floquet_energy)
        .def("kato_energy", &XYClosedForms::kato_energy);

    m.def(
        "xy_closed_forms",
        [](double g, double J, double A, double omega, double k, double t) {
            return xy_closed_forms(XYBlochParams{g, J, A, omega, k}, t);
        },
        py::arg("g"), py::arg("J"), py::arg("A"), py::arg("omega"), py::arg("k"),
        py::arg("t") = 0.0);

    m.def(
        "solve_kato_agp",
        [](const DriveProtocol& d, int n_h, double rank_tol) {
            if (!d.fourier())
                throw InvalidInput("solve_kato_agp: drive has no Fourier form");
            const int nh = n_h > 0 ? n_h : d.fourier()->max_harmonic() + 4;
            FourierOperator h = FourierOperator::from_series(*d.fourier(), nh);
            AgpSolveReport rep;
            FourierOperator a = solve_kato_agp(h, nh, rank_tol, &rep);
            py::dict out;
            out["omega"] = a.omega;
            out["n_h"] = a.n_max;
            std::map<int, Matrix> comps;
            for (int l = -a.n_max; l <= a.n_max; ++l) comps[l] = a.harmonic(l);
            out["harmonics"] = comps;
            out["residual"] = rep.residual;
            out["rank"] = py::int_(static_cast<long long>(rep.rank));
            return out;
        },
        py::arg("drive"), py::arg("n_h") = 0, py::arg("rank_tol") = 1e-8);

    m.def("hfe_kato", [](const DriveProtocol& d) {
        const auto r = hfe_kato(d);
        py::dict out;
        out["h_f0"] = r.h_f0;
        out["xi0"] = r.xi0;
        out["gamma0"] = r.gamma0;
        out["states0"] = r.states0;
        return out;
    });

    m.def("version", [] { return floq_version(); });
}
