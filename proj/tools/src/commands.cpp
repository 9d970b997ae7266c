#include "sbpick_cli/commands.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <sstream>

#include "sbpick/error.hpp"
#include "sbpick/pipeline.hpp"

namespace sbpick::cli {

namespace {

namespace fs = std::filesystem;

const char* verdict_name(Verdict v) {
  switch (v) {
    case Verdict::Feasible: return "Feasible";
    case Verdict::Infeasible: return "Infeasible";
    case Verdict::Inconclusive: return "Inconclusive";
  }
  return "Inconclusive";
}

const char* membership_name(Membership m) {
  switch (m) {
    case Membership::Interior: return "Interior";
    case Membership::Boundary: return "Boundary";
    case Membership::Exterior: return "Exterior";
  }
  return "Exterior";
}

struct MissingInput : std::runtime_error {
  using std::runtime_error::runtime_error;
};

Json read_input(const fs::path& path) {
  std::error_code ec;
  if (!fs::is_regular_file(path, ec)) throw MissingInput("cannot read " + path.string());
  return read_json(path);
}

// Runs `body` and maps every failure category onto its exit code.
template <class Body>
int guarded(std::ostream& err, const char* command, Body&& body) {
  try {
    return body();
  } catch (const MissingInput& e) {
    err << command << ": " << e.what() << "\n";
    return kNoInput;
  } catch (const InputError& e) {
    err << command << ": malformed input: " << e.what() << "\n";
    return kMalformedInput;
  } catch (const OutputError& e) {
    err << command << ": " << e.what() << "\n";
    return kCannotWrite;
  } catch (const fs::filesystem_error& e) {
    err << command << ": " << e.what() << "\n";
    return kCannotWrite;
  } catch (const Json::exception& e) {
    err << command << ": malformed input: " << e.what() << "\n";
    return kMalformedInput;
  } catch (const Error& e) {
    err << command << ": numeric failure (" << to_string(e.kind()) << "): " << e.what() << "\n";
    return kNumericFailure;
  } catch (const std::exception& e) {
    err << command << ": numeric failure: " << e.what() << "\n";
    return kNumericFailure;
  }
}

std::string csv_row(std::initializer_list<double> values) {
  std::string row;
  for (double x : values) {
    if (!row.empty()) row += ',';
    row += format_double(x);
  }
  return row + "\n";
}

double parse_double(const std::string& token) {
  std::size_t used = 0;
  double x = 0.0;
  try {
    x = std::stod(token, &used);
  } catch (const std::exception&) {
    throw InputError("not a number: \"" + token + "\"");
  }
  while (used < token.size() && std::isspace(static_cast<unsigned char>(token[used]))) ++used;
  if (used != token.size()) throw InputError("not a number: \"" + token + "\"");
  return x;
}

}  // namespace

int cmd_solve(const fs::path& problem, const fs::path& out_dir, const RunConfig& cfg, std::ostream& err) {
  return guarded(err, "solve", [&]() -> int {
    const PickProblem p = problem_from_json(read_input(problem));
    try {
      validate(p);
    } catch (const Error& e) {
      throw InputError(e.what());
    }

    PipelineSettings settings;
    if (cfg.tol) settings.solver.tol = *cfg.tol;
    if (cfg.max_iter) settings.solver.max_sweeps = *cfg.max_iter;
    const InterpolationResult r = interpolate(p, settings);

    Json report;
    report["verdict"] = verdict_name(r.feasibility.verdict);
    report["sweeps"] = r.feasibility.sweeps;
    report["gap"] = r.feasibility.gap;
    report["nodes"] = p.size();
    report["lifted_nodes"] = r.lifted.size();

    fs::create_directories(out_dir);
    if (r.feasibility.verdict != Verdict::Feasible) {
      write_atomic(out_dir / "report.json", dump(report));
      err << "solve: " << verdict_name(r.feasibility.verdict) << " after " << r.feasibility.sweeps
          << " sweeps, gap " << format_double(r.feasibility.gap) << "\n";
      return r.feasibility.verdict == Verdict::Infeasible ? kInfeasible : kInconclusive;
    }

    const PickCertificate& cert = *r.certificate;
    const CertificateReport check = verify_certificate(r.lifted, cert, settings.solver.tol);
    const Symmetrized& sym = *r.model;
    const GModelReport gcheck = verify_gmodel(sym.model, p.targets);
    const BuiltColligation& built = *r.realization;
    const RealizedFunction f(built.colligation);

    Json residuals = Json::array();
    double worst = 0.0;
    for (std::size_t j = 0; j < p.size(); ++j) {
      const double d = std::abs(f(p.nodes[j]) - p.targets[j]);
      residuals.push_back(d);
      worst = std::max(worst, d);
    }

    report["polished"] = r.feasibility.polished;
    report["interior_certificate"] = r.interior_certificate;
    report["certificate"] = {{"residual", check.residual}, {"min_eig1", check.min_eig1},
                             {"min_eig2", check.min_eig2}, {"pass", check.pass}};
    report["gmodel"] = {{"dim", sym.model.dim()},
                        {"residual", gcheck.residual},
                        {"pass", gcheck.pass},
                        {"gram_mismatch", sym.report.gram_mismatch},
                        {"isometry_defect", sym.report.isometry_defect},
                        {"fit_residual", sym.report.fit_residual},
                        {"unitarity_defect", sym.report.unitarity_defect},
                        {"fiber_consistency", sym.report.fiber_consistency}};
    report["colligation"] = {{"gram_mismatch", built.report.gram_mismatch},
                             {"isometry_defect", built.report.isometry_defect},
                             {"fit_residual", built.report.fit_residual},
                             {"contraction_norm", built.report.contraction_norm},
                             {"reconstruction", built.report.reconstruction}};
    report["node_residuals"] = residuals;
    report["max_node_residual"] = worst;
    report["boundedness"] = {{"samples", cfg.samples},
                             {"seed", cfg.seed},
                             {"max_abs", boundedness_sweep(f, cfg.samples, cfg.seed)}};

    write_atomic(out_dir / "certificate.json", dump(certificate_to_json(cert)));
    write_atomic(out_dir / "gmodel.json", dump(gmodel_to_json(sym.model)));
    write_atomic(out_dir / "colligation.json", dump(colligation_to_json(built.colligation)));
    write_atomic(out_dir / "report.json", dump(report));
    return kOk;
  });
}

int cmd_eval(const fs::path& colligation, const fs::path& points, std::ostream& csv, const RunConfig& cfg,
             std::ostream& err) {
  return guarded(err, "eval", [&]() -> int {
    Colligation c = colligation_from_json(read_input(colligation));
    const std::vector<GPoint> pts = points_from_json(read_input(points));
    std::optional<RealizedFunction> f;
    try {
      f.emplace(std::move(c));
    } catch (const Error& e) {
      throw InputError(std::string("colligation: ") + e.what());
    }

    std::string body = "s1_re,s1_im,s2_re,s2_im,phi_re,phi_im,abs_phi\n";
    for (std::size_t k = 0; k < pts.size(); ++k) {
      const GPoint& s = pts[k];
      Complex value(NAN, NAN);
      if (membership(s).kind == Membership::Exterior) {
        if (cfg.strict) throw InputError("point " + std::to_string(k) + " lies outside the closure of G");
        err << "eval: warning: point " << k << " lies outside the closure of G\n";
      } else {
        try {
          value = (*f)(s);
        } catch (const Error& e) {
          if (cfg.strict) throw InputError("point " + std::to_string(k) + ": " + e.what());
          err << "eval: warning: point " << k << ": " << e.what() << "\n";
        }
      }
      const double mag = std::isnan(value.real()) ? NAN : std::abs(value);
      body += csv_row({s.s1.real(), s.s1.imag(), s.s2.real(), s.s2.imag(), value.real(), value.imag(), mag});
    }
    csv << body;
    return kOk;
  });
}

int cmd_generate(Index dim, std::size_t n, std::uint64_t seed, const fs::path& out_dir, std::ostream& err) {
  return guarded(err, "generate", [&]() -> int {
    if (dim < 1 || n < 1) throw InputError("dim and n must be at least 1");
    const GeneratedProblem g = generate_problem(dim, n, seed);
    fs::create_directories(out_dir);
    write_atomic(out_dir / "problem.json", dump(problem_to_json(g.problem)));
    write_atomic(out_dir / "reference_colligation.json", dump(colligation_to_json(g.reference)));
    return kOk;
  });
}

int cmd_check_membership(const std::string& point, std::ostream& out, std::ostream& err) {
  return guarded(err, "check", [&]() -> int {
    std::vector<double> parts;
    std::stringstream ss(point);
    for (std::string token; std::getline(ss, token, ',');) parts.push_back(parse_double(token));
    GPoint s;
    if (parts.size() == 2) {
      s = {parts[0], parts[1]};
    } else if (parts.size() == 4) {
      s = {{parts[0], parts[1]}, {parts[2], parts[3]}};
    } else {
      throw InputError("membership point must be \"s1,s2\" or \"s1_re,s1_im,s2_re,s2_im\"");
    }
    const MembershipReport m = membership(s);
    Json fib = Json::array();
    for (const BidiscPoint& mu : fiber(s).points) fib.push_back(Json::array({to_json(mu.l1), to_json(mu.l2)}));
    Json report = {{"point", to_json(s)},
                   {"membership", membership_name(m.kind)},
                   {"rho", m.rho},
                   {"fiber_radius", m.fiber_radius},
                   {"fiber", fib}};
    out << dump(report);
    return kOk;
  });
}

int cmd_check_spectral(const fs::path& pair, std::ostream& out, const RunConfig& cfg, std::ostream& err) {
  return guarded(err, "check", [&]() -> int {
    const CommutingPair p = pair_from_json(read_input(pair));
    if (cfg.grid < 1) throw InputError("--grid must be positive");
    const SpectralDomainReport r = spectral_domain_check(p, cfg.grid);
    Json spectrum = Json::array();
    for (const GPoint& s : joint_spectrum(p)) spectrum.push_back(to_json(s));
    Json report = {{"max_norm", r.max_norm},
                   {"argmax", to_json(r.argmax)},
                   {"grid", r.grid},
                   {"commutator_norm", p.commutator_norm()},
                   {"joint_spectrum", spectrum}};
    out << dump(report);
    return kOk;
  });
}

int cmd_check_discontinuity(double r, std::ostream& out, std::ostream& err) {
  return guarded(err, "check", [&]() -> int {
    if (!(r > 0.0 && r < 1.0)) throw InputError("r must lie in (0, 1)");
    std::vector<double> rs{1.0 - 1e-1, 1.0 - 1e-2, 1.0 - 1e-3, 1.0 - 1e-4, r};
    std::sort(rs.begin(), rs.end());
    rs.erase(std::unique(rs.begin(), rs.end()), rs.end());
    std::string body = "r,value,direct\n";
    for (double x : rs) {
      const DiscontinuityReport d = discontinuity_demo({adaptive_lambda_grid(1.0, x), 1.0}, x);
      body += csv_row({x, d.closed_form, d.direct});
    }
    out << body;
    return kOk;
  });
}

}  // namespace sbpick::cli
