#include <pybind11/functional.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "blowup/analysis.hpp"
#include "blowup/criteria.hpp"
#include "blowup/harness.hpp"
#include "blowup/shooting.hpp"
#include "blowup/spectral.hpp"

namespace py = pybind11;
using namespace blowup;

namespace {

py::array_t<double> field_values(const Field& f) {
  py::array_t<double> out(f.values.size());
  std::copy(f.values.begin(), f.values.end(), out.mutable_data());
  return out;
}

void set_field_values(Field& f, py::array_t<double, py::array::c_style> arr) {
  if (arr.ndim() != 1 || arr.shape(0) != static_cast<py::ssize_t>(f.values.size()))
    throw std::invalid_argument("values must be 1-D with one entry per grid node");
  std::copy(arr.data(), arr.data() + arr.shape(0), f.values.begin());
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "numerical laboratory for single-point blow-up of u_t = u_xx + |u|^{p-1}u";

  py::enum_<Frame>(m, "Frame")
      .value("physical", Frame::physical)
      .value("similarity", Frame::similarity);

  py::class_<Grid>(m, "Grid")
      .def(py::init<double, int>(), py::arg("y_max"), py::arg("n_points"))
      .def_readonly("y_max", &Grid::y_max)
      .def_readonly("n_points", &Grid::n_points)
      .def("spacing", &Grid::spacing)
      .def("node", &Grid::node)
      .def("nodes", [](const Grid& g) {
        std::vector<double> v(g.n_points);
        for (int i = 0; i < g.n_points; ++i) v[i] = g.node(i);
        return py::array_t<double>(py::ssize_t(v.size()), v.data());
      });

  py::class_<Field>(m, "Field")
      .def(py::init<Grid, Frame, double>(), py::arg("grid"), py::arg("frame"),
           py::arg("time"))
      .def_readonly("grid", &Field::grid)
      .def_readwrite("frame", &Field::frame)
      .def_readwrite("time", &Field::time)
      .def_property("values", &field_values, &set_field_values)
      .def("sup_norm", &Field::sup_norm)
      .def("interp", &Field::interp)
      .def_static("sample",
                  [](Grid g, Frame fr, double t, const std::function<double(double)>& f) {
                    return Field::sample(g, fr, t, f);
                  });

  py::class_<Params>(m, "Params")
      .def(py::init<double, int>(), py::arg("p") = 3.0, py::arg("N") = 1)
      .def_readonly("p", &Params::p)
      .def_readonly("N", &Params::N)
      .def_property_readonly("b", &Params::b)
      .def_property_readonly("kappa", &Params::kappa);

  // spectral
  m.def("hermite_poly", &hermite_poly, py::arg("ell"), py::arg("xi"));
  m.def("eigenvalue", &eigenvalue, py::arg("m"));
  m.def("hermite_norm_sq", &hermite_norm_sq, py::arg("ell"));
  py::class_<QuadratureRule>(m, "QuadratureRule")
      .def_readonly("nodes", &QuadratureRule::nodes)
      .def_readonly("weights", &QuadratureRule::weights)
      .def_readonly("degree", &QuadratureRule::degree)
      .def_static("gauss_hermite", &QuadratureRule::gauss_hermite, py::arg("n") = 64);
  m.def("weighted_integral",
        py::overload_cast<const std::function<double(double)>&, const QuadratureRule&>(
            &weighted_integral));
  m.def("weighted_integral", py::overload_cast<const Field&>(&weighted_integral));
  m.def("semigroup_apply", &semigroup_apply, py::arg("theta"), py::arg("f"));

  // model
  m.def("profile_phi", &profile_phi, py::arg("y"), py::arg("s"), py::arg("params"));
  m.def("profile_phi0", [](double z, const Params& pr) {
    ValueGrad v = profile_phi0(z, pr);
    return std::pair<double, double>{v.value, v.gradient};
  });
  m.def("potential_V", &potential_V);
  m.def("nonlinear_B", &nonlinear_B);
  m.def("remainder_R", &remainder_R);
  m.def("to_similarity", &to_similarity);
  m.def("from_similarity", &from_similarity);

  // decomposition
  m.def("cutoff_chi0", &cutoff_chi0);
  m.def("cutoff_chi", &cutoff_chi);
  py::class_<ModeDecomposition>(m, "ModeDecomposition")
      .def_readonly("q0", &ModeDecomposition::q0)
      .def_readonly("q1", &ModeDecomposition::q1)
      .def_readonly("q2", &ModeDecomposition::q2)
      .def_readonly("q_minus", &ModeDecomposition::q_minus)
      .def_readonly("q_e", &ModeDecomposition::q_e)
      .def_readonly("s", &ModeDecomposition::s)
      .def_readonly("K", &ModeDecomposition::K);
  m.def("project", &project, py::arg("r_b"), py::arg("beta"));
  m.def("decompose", &decompose, py::arg("r"), py::arg("s"), py::arg("K"));
  m.def("reconstruct", &reconstruct);
  py::class_<ShrinkingParams>(m, "ShrinkingParams")
      .def(py::init<double, double>(), py::arg("K") = 10.0, py::arg("A") = 50.0)
      .def_readonly("K", &ShrinkingParams::K)
      .def_readonly("A", &ShrinkingParams::A)
      .def("bound_q0", &ShrinkingParams::bound_q0)
      .def("bound_q1", &ShrinkingParams::bound_q1)
      .def("bound_q2", &ShrinkingParams::bound_q2)
      .def("bound_minus", &ShrinkingParams::bound_minus)
      .def("bound_e", &ShrinkingParams::bound_e)
      .def("envelope", &ShrinkingParams::envelope);
  py::class_<MembershipReport>(m, "MembershipReport")
      .def_readonly("s", &MembershipReport::s)
      .def_readonly("q0", &MembershipReport::q0)
      .def_readonly("q1", &MembershipReport::q1)
      .def_readonly("q2", &MembershipReport::q2)
      .def_readonly("norm_minus", &MembershipReport::norm_minus)
      .def_readonly("norm_e", &MembershipReport::norm_e)
      .def_readonly("margins", &MembershipReport::margins)
      .def_readonly("in_set", &MembershipReport::in_set)
      .def("csv_row", &MembershipReport::csv_row);
  m.def("shrinking_check", &shrinking_check);

  // solver
  py::class_<StepperConfig>(m, "StepperConfig")
      .def(py::init<>())
      .def_readwrite("ds", &StepperConfig::ds)
      .def_readwrite("upwind_radius", &StepperConfig::upwind_radius)
      .def_readwrite("snapshot_interval", &StepperConfig::snapshot_interval);
  m.def("gradient", &gradient);
  m.def(
      "step_q",
      [](const Field& q, double s, const StepperConfig& cfg, const Params& pr) {
        return step_q(q, s, cfg, pr);
      },
      py::arg("q"), py::arg("s"), py::arg("cfg"), py::arg("params"));
  m.def("step_w", &step_w);
  py::class_<RunRecord>(m, "RunRecord")
      .def_readonly("s0", &RunRecord::s0)
      .def_readonly("s_end", &RunRecord::s_end)
      .def_readonly("reports", &RunRecord::reports)
      .def_readonly("snapshot_s", &RunRecord::snapshot_s)
      .def_readonly("snapshots", &RunRecord::snapshots)
      .def_readonly("exited", &RunRecord::exited)
      .def_readonly("diverged", &RunRecord::diverged)
      .def_readonly("reached_end", &RunRecord::reached_end);
  m.def("run_similarity", &run_similarity, py::arg("q0"), py::arg("s0"), py::arg("s_end"),
        py::arg("cfg"), py::arg("params"), py::arg("shrink"), py::arg("store_fields") = true);
  py::class_<PhysicalConfig>(m, "PhysicalConfig")
      .def(py::init<>())
      .def_readwrite("dt_factor", &PhysicalConfig::dt_factor)
      .def_readwrite("stop_ratio", &PhysicalConfig::stop_ratio)
      .def_readwrite("snapshot_ratio", &PhysicalConfig::snapshot_ratio);
  py::class_<PhysicalRun>(m, "PhysicalRun")
      .def_readonly("blew_up", &PhysicalRun::blew_up)
      .def_readonly("verdict", &PhysicalRun::verdict)
      .def_readonly("T_est", &PhysicalRun::T_est)
      .def_readonly("t", &PhysicalRun::t)
      .def_readonly("snapshots", &PhysicalRun::snapshots)
      .def_readonly("sup_norm", &PhysicalRun::sup_norm);
  m.def("run_physical", &run_physical, py::arg("u0"), py::arg("cfg"), py::arg("params"));

  // shooting
  py::class_<ShotParams>(m, "ShotParams")
      .def(py::init([](double d0, double d1, double s0) {
             return ShotParams{d0, d1, s0};
           }),
           py::arg("d0"), py::arg("d1"), py::arg("s0"))
      .def_readwrite("d0", &ShotParams::d0)
      .def_readwrite("d1", &ShotParams::d1)
      .def_readwrite("s0", &ShotParams::s0);
  m.def("prepare_psi", &prepare_psi, py::arg("shot"), py::arg("K"), py::arg("A"),
        py::arg("grid"));
  py::class_<ExitReport>(m, "ExitReport")
      .def_readonly("exited", &ExitReport::exited)
      .def_readonly("components", &ExitReport::components)
      .def_readonly("s_exit", &ExitReport::s_exit)
      .def_readonly("ambiguous", &ExitReport::ambiguous)
      .def_readonly("sign", &ExitReport::sign)
      .def_readonly("crossing_outgoing", &ExitReport::crossing_outgoing);
  m.def("exit_classify", &exit_classify);
  py::class_<ShootConfig>(m, "ShootConfig")
      .def(py::init<>())
      .def_readwrite("s0", &ShootConfig::s0)
      .def_readwrite("K", &ShootConfig::K)
      .def_readwrite("A", &ShootConfig::A)
      .def_readwrite("horizon", &ShootConfig::horizon)
      .def_readwrite("tol", &ShootConfig::tol)
      .def_readwrite("stepper", &ShootConfig::stepper)
      .def_readwrite("params", &ShootConfig::params);
  py::class_<ShootResult>(m, "ShootResult")
      .def_readonly("success", &ShootResult::success)
      .def_readonly("failure", &ShootResult::failure)
      .def_readonly("d0", &ShootResult::d0)
      .def_readonly("d1", &ShootResult::d1)
      .def_readonly("achieved_exit_time", &ShootResult::achieved_exit_time)
      .def_readonly("trapped", &ShootResult::trapped)
      .def_readonly("record", &ShootResult::record)
      .def_readonly("progress_rows", &ShootResult::progress_rows);
  m.def("shoot", &shoot, py::call_guard<py::gil_scoped_release>());

  // analysis
  m.def("intermediate_error", [](const Field& w, double s, const Params& pr) {
    IntermediateError e = intermediate_error(w, s, pr);
    return std::pair<double, double>{e.err_u, e.err_grad};
  });
  m.def("t_of_x0", &t_of_x0, py::arg("x0"), py::arg("K"), py::arg("T"));
  py::class_<TrajectoryStore>(m, "TrajectoryStore")
      .def_static("from_run", &TrajectoryStore::from_run)
      .def_readonly("T", &TrajectoryStore::T)
      .def_readonly("t", &TrajectoryStore::t)
      .def("t_last", &TrajectoryStore::t_last)
      .def("sample", &TrajectoryStore::sample)
      .def("sample_grad", &TrajectoryStore::sample_grad);
  m.def("rescaled_UV", &rescaled_UV, py::arg("store"), py::arg("x0"), py::arg("xi"),
        py::arg("tau"), py::arg("K"));
  m.def("hat_UV", &hat_UV, py::arg("tau"), py::arg("x0"), py::arg("K"), py::arg("T"),
        py::arg("params"));
  m.def("hat_ode_residual", &hat_ode_residual, py::arg("tau"), py::arg("x0"), py::arg("K"),
        py::arg("T"), py::arg("params"), py::arg("fd_step") = 1e-4);
  m.def("final_profile_u_star", &final_profile_u_star);
  m.def("final_profile_grad_star", &final_profile_grad_star);
  py::class_<ProfileFitReport>(m, "ProfileFitReport")
      .def_readonly("grid", &ProfileFitReport::grid)
      .def_readonly("measured", &ProfileFitReport::measured)
      .def_readonly("envelope", &ProfileFitReport::envelope)
      .def_readonly("ratio", &ProfileFitReport::ratio)
      .def_readonly("fitted_C", &ProfileFitReport::fitted_C)
      .def_readonly("bounded", &ProfileFitReport::bounded)
      .def("to_csv", &ProfileFitReport::to_csv);
  m.def("intermediate_fit", &intermediate_fit);
  m.def("final_profile_fit", &final_profile_fit);
  m.def("mode_residuals", [](const RunRecord& rec, double A) {
    ModeResiduals mr = mode_residuals(rec, A);
    return std::tuple<double, double, double>{mr.c0, mr.c1, mr.c2};
  });
  m.def("final_probe_points", &final_probe_points, py::arg("store"), py::arg("K"),
        py::arg("n") = 9);
}
