#include <CLI11.hpp>
#include <cstdio>
#include <sys/stat.h>

#include "surfnema/config.hpp"
#include "surfnema/io.hpp"
#include "surfnema/kernels.hpp"
#include "surfnema/parallel.hpp"
#include "surfnema/qtensor.hpp"

using namespace surfnema;

namespace {

// Exit codes: 0 success, 1 validation failure, 2 runtime abort (blow-up),
// 3 verification failure.
constexpr int kOk = 0;
constexpr int kValidation = 1;
constexpr int kRuntimeAbort = 2;
constexpr int kVerifyFail = 3;

int cmd_simulate(const std::string& config_path, const std::string& out_override) {
  RunConfig cfg;
  try {
    cfg = parse_config(config_path);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return kValidation;
  }
  if (!cfg.warning.empty()) std::fprintf(stderr, "warning: %s\n", cfg.warning.c_str());
  if (!out_override.empty()) cfg.output_dir = out_override;
  try {
    ChartGeometry chart = build_chart(cfg);
    TrajectoryRecord rec = run_simulation(cfg, chart);
    std::printf("wrote %zu samples to %s/energy.csv\n", rec.samples.size(),
                cfg.output_dir.c_str());
    if (!rec.samples.empty()) {
      const auto& s = rec.samples.back();
      std::printf("final: t=%g E_tot=%.10g R_IM=%.6g R_NV=%.6g inext=%.3e\n", s.t, s.E_tot,
                  s.R_IM, s.R_NV, s.inext_residual);
    }
  } catch (const BlowUp& e) {
    std::fprintf(stderr, "aborted: %s\n", e.what());
    return kRuntimeAbort;
  } catch (const ProjectionNonConvergence& e) {
    std::fprintf(stderr, "aborted: %s\n", e.what());
    return kRuntimeAbort;
  } catch (const ValidationError& e) {
    std::fprintf(stderr, "validation error: %s\n", e.what());
    return kValidation;
  }
  return kOk;
}

int cmd_verify(unsigned long seed, int samples) {
  VerifyReport rep = verify_lemmas(seed, samples);
  std::printf("%-42s %-10s %-12s %-12s\n", "identity", "status", "residual", "tolerance");
  for (const auto& r : rep.results) {
    if (!r.checked) {
      std::printf("%-42s %-10s %-12s %-12s  (%s)\n", r.name.c_str(), "documented", "-", "-",
                  r.note.c_str());
      continue;
    }
    std::printf("%-42s %-10s %-12.3e %-12.1e%s%s\n", r.name.c_str(),
                r.pass ? "pass" : "FAIL", r.residual, r.tolerance,
                r.note.empty() ? "" : "  ", r.note.c_str());
  }
  return rep.all_pass() ? kOk : kVerifyFail;
}

int cmd_energy_audit(const std::string& trajectory, double tol) {
  TrajectoryRecord rec;
  try {
    rec = read_energy_csv(trajectory);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "cannot read trajectory: %s\n", e.what());
    return kValidation;
  }
  AuditSummary au;
  try {
    au = dissipation_audit(rec);
  } catch (const TooFewSamples& e) {
    std::fprintf(stderr, "audit error: %s\n", e.what());
    return kValidation;
  }
  double monotone_viol = 0;
  for (std::size_t i = 1; i < rec.samples.size(); ++i)
    monotone_viol = std::fmax(
        monotone_viol, rec.samples[i].E_tot - rec.samples[i - 1].E_tot);
  std::printf("samples: %zu\n", rec.samples.size());
  std::printf("max |dE_tot/dt + 2(R_IM + R_NV)| = %.6e\n", au.max_residual);
  std::printf("max energy increase between samples = %.6e\n", monotone_viol);
  if (tol >= 0.0 && au.max_residual > tol) {
    std::fprintf(stderr, "audit residual exceeds tolerance %.3e\n", tol);
    return kVerifyFail;
  }
  return kOk;
}

int cmd_terms_eval(const std::string& config_path, const std::string& term,
                   const std::string& out_override) {
  RunConfig cfg;
  try {
    cfg = parse_config(config_path);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return kValidation;
  }
  if (!out_override.empty()) cfg.output_dir = out_override;
  ::mkdir(cfg.output_dir.c_str(), 0775);
  ChartGeometry chart = build_chart(cfg);
  SimState st = build_initial_state(cfg, chart);
  VelocityState vs(chart.grid);
  vs.v = st.v;
  EmbTensor2Field Q = conforming_compose(chart, st.q, st.beta);
  // time-derivative data is not part of a static state; rates enter as zero
  EmbTensor2Field zeroQ(chart.grid);
  TangentTensor2Field zeroq(chart.grid);
  ScalarField zeros(chart.grid);

  TermBundle bundle;
  const ModelParams& p = cfg.model;
  if (term == "EL") {
    bundle = elastic_general(chart, p, Q);
    TermBundle conf = elastic_conforming(chart, p, st.q, st.beta);
    bundle.conforming = std::move(conf.conforming);
  } else if (term == "TH") {
    bundle = thermotropic_general(chart, p, Q);
    TermBundle conf = thermotropic_conforming(chart, p, st.q, st.beta);
    bundle.conforming = std::move(conf.conforming);
  } else if (term == "BE") {
    bundle = bending(chart, p);
  } else if (term == "IM") {
    bundle = immobility_general(chart, p, Q, zeroQ, p.phi);
  } else if (term == "NV") {
    DeformationGradients dg = deformation_gradients(chart, vs);
    auto nv = nematic_viscous_general(chart, p, Q, zeroQ, zeroQ, dg, p.phi);
    bundle.name = "NV";
    bundle.Sigma = std::move(nv.Sigma);
    bundle.H = std::move(nv.H);
    bundle.F = divC_tensor2(chart, *bundle.Sigma);
  } else if (term == "IC") {
    bundle = inextensibility(chart, st.p);
  } else if (term == "SC") {
    ScStress sc = sc_constraint_stress(chart, p, st.q, st.beta, vs, p.phi);
    bundle.name = "SC";
    bundle.Sigma = std::move(sc.Sigma);
    bundle.F = divC_tensor2(chart, *bundle.Sigma);
    bundle.conforming.varsigma = std::move(sc.varsigma);
  } else {
    std::fprintf(stderr, "unknown term '%s' (EL, TH, BE, IM, NV, IC, SC)\n", term.c_str());
    return kValidation;
  }

  std::vector<SnapshotField> fields;
  if (bundle.Sigma) fields.push_back({"Sigma", 9, bundle.Sigma->data.data()});
  if (bundle.F) fields.push_back({"F", 3, bundle.F->data.data()});
  if (bundle.H) fields.push_back({"H", 9, bundle.H->data.data()});
  if (bundle.conforming.sigma)
    fields.push_back({"sigma", 4, bundle.conforming.sigma->data.data()});
  if (bundle.conforming.varsigma)
    fields.push_back({"varsigma", 2, bundle.conforming.varsigma->data.data()});
  if (bundle.conforming.h) fields.push_back({"h", 4, bundle.conforming.h->data.data()});
  if (bundle.conforming.zeta)
    fields.push_back({"zeta", 2, bundle.conforming.zeta->data.data()});
  if (bundle.conforming.omega)
    fields.push_back({"omega", 1, bundle.conforming.omega->data.data()});
  if (bundle.conforming.f_perp)
    fields.push_back({"f_perp", 1, bundle.conforming.f_perp->data.data()});
  std::string base = cfg.output_dir + "/term_" + term;
  write_vtk(base + ".vtk", chart, fields);
  write_snema(base + ".snema", chart.grid, fields);
  if (bundle.energy) std::printf("energy = %.17g\n", *bundle.energy);
  std::printf("wrote %s.vtk and %s.snema (%zu fields)\n", base.c_str(), base.c_str(),
              fields.size());
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"surface Beris-Edwards nematodynamics kernels and solvers"};
  app.require_subcommand(1);

  std::string config_path, out_dir, trajectory, term = "EL";
  unsigned long seed = 42;
  int samples = 1000;
  double tol = -1.0;

  auto* sim = app.add_subcommand("simulate", "run a configured solver");
  sim->add_option("--config", config_path, "run configuration file")->required();
  sim->add_option("--out", out_dir, "override the output directory");

  auto* ver = app.add_subcommand("verify", "run the identity verification suite");
  ver->add_option("--seed", seed, "random seed");
  ver->add_option("--samples", samples, "samples per identity");

  auto* aud = app.add_subcommand("energy-audit", "audit a trajectory CSV");
  aud->add_option("--trajectory", trajectory, "energy.csv path")->required();
  aud->add_option("--tol", tol, "fail if the max residual exceeds this");

  auto* tev = app.add_subcommand("terms-eval", "evaluate one model term on the initial state");
  tev->add_option("--config", config_path, "run configuration file")->required();
  tev->add_option("--term", term, "term tag: EL TH BE IM NV IC SC");
  tev->add_option("--out", out_dir, "override the output directory");

  CLI11_PARSE(app, argc, argv);

  try {
    if (sim->parsed()) return cmd_simulate(config_path, out_dir);
    if (ver->parsed()) return cmd_verify(seed, samples);
    if (aud->parsed()) return cmd_energy_audit(trajectory, tol);
    if (tev->parsed()) return cmd_terms_eval(config_path, term, out_dir);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kRuntimeAbort;
  }
  return kOk;
}
