#include "indicial/report.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "indicial/oracle.hpp"
#include "indicial/spectral_flow.hpp"

namespace indicial {

using ojson = nlohmann::ordered_json;

namespace {

ojson cjson(cplx z) { return ojson::array({z.real(), z.imag()}); }

ojson vjson(const Vec& v) {
  ojson a = ojson::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(cjson(v(i)));
  return a;
}

const char* command_name(Command c) {
  switch (c) {
    case Command::Roots: return "roots";
    case Command::Classify: return "classify";
    case Command::Sf: return "sf";
    case Command::Extensions: return "extensions";
    case Command::Verify: return "verify";
    case Command::All: return "all";
  }
  return "?";
}

ojson pencil_json(const PencilSpec& p) {
  ojson cs = ojson::array();
  for (const auto& a : p.coeffs) {
    ojson M = ojson::array();
    for (int r = 0; r < a.rows(); ++r) {
      ojson row = ojson::array();
      for (int c = 0; c < a.cols(); ++c) row.push_back(cjson(a(r, c)));
      M.push_back(row);
    }
    cs.push_back(M);
  }
  return {{"m", p.m}, {"mu", p.mu()}, {"n", p.n()}, {"coeffs", cs}};
}

// Boundary data of the subspace: each basis vector split by root into
// log-coefficient expansions.
ojson subspace_json(const QuotientModel& Q, const ExtensionSubspace& D) {
  ojson vecs = ojson::array();
  for (int k = 0; k < D.dim(); ++k) {
    ojson parts = ojson::array();
    for (const auto& b : Q.blocks) {
      Vec x = D.basis.col(k).segment(b.offset, b.germ.dim());
      if (x.norm() <= 1e-12 * std::max(1.0, D.basis.col(k).norm())) continue;
      Vec f = b.germ.stacked() * x;
      PrincipalPart pp = PrincipalPart::from_stacked(b.root.sigma0, f, b.germ.n);
      LogCoefficients lc = log_coeffs_from_germ(pp);
      ojson terms = ojson::array();
      for (int j = 0; j < lc.e.cols(); ++j)
        if (lc.e.col(j).norm() > 1e-13 * std::max(1.0, lc.e.norm()))
          terms.push_back({{"log_power", j}, {"e", vjson(lc.e.col(j))}});
      parts.push_back({{"sigma0", cjson(b.root.sigma0)}, {"terms", terms}});
    }
    vecs.push_back(parts);
  }
  return {{"dim", D.dim()}, {"basis", vecs}};
}

struct Check {
  std::string name;
  cplx value;
  cplx reference;
  double error;
  bool pass;
};

Check make_check(std::string name, cplx value, cplx ref, double scale, double thresh) {
  double err = std::abs(value - ref) / std::max(std::abs(ref), scale);
  return {std::move(name), value, ref, err, err <= thresh};
}

std::vector<Check> oracle_checks(const QuotientModel& Q, unsigned seed) {
  std::vector<Check> out;
  const PencilSpec& p = Q.p;
  oracle::CutoffSpec c1;
  oracle::CutoffSpec c2{0.3, 0.9, 3};
  double gscale = std::max(1e-300, Q.gram.cwiseAbs().maxCoeff());
  for (size_t a = 0; a < Q.blocks.size(); ++a)
    for (size_t b = 0; b < Q.blocks.size(); ++b) {
      const auto& A = Q.blocks[a];
      const auto& B = Q.blocks[b];
      for (int i = 0; i < A.germ.dim(); ++i)
        for (int j = 0; j < B.germ.dim(); ++j) {
          auto u = oracle::QuasiPolynomial::from_log_coeffs(log_coeffs_from_germ(A.germ.basis[i]), c1);
          auto v = oracle::QuasiPolynomial::from_log_coeffs(log_coeffs_from_germ(B.germ.basis[j]), c1);
          cplx direct = oracle::pairing_direct(p, u, v);
          std::ostringstream nm;
          nm << "pairing root" << a << "[" << i << "] x root" << b << "[" << j << "]";
          if (static_cast<int>(b) == A.partner) {
            cplx ref = Q.gram(A.offset + i, B.offset + j);
            out.push_back(make_check(nm.str(), direct, ref, 1e-3 * gscale, 1e-6));
            u.cutoff = c2;
            v.cutoff = c2;
            out.push_back(make_check(nm.str() + " (second cutoff)", oracle::pairing_direct(p, u, v), ref,
                                     1e-3 * gscale, 1e-6));
          } else {
            out.push_back(make_check(nm.str() + " (orthogonal)", direct, 0.0, gscale, 1e-8));
          }
        }
    }
  // dictionary: principal part of the Mellin transform of each basis germ
  for (size_t a = 0; a < Q.blocks.size(); ++a) {
    const auto& A = Q.blocks[a];
    for (int i = 0; i < A.germ.dim(); ++i) {
      const PrincipalPart& f = A.germ.basis[i];
      LogCoefficients lc = log_coeffs_from_germ(f);
      auto u = oracle::QuasiPolynomial::from_log_coeffs(lc, c1);
      for (int comp = 0; comp < f.f.rows(); ++comp) {
        if (f.f.row(comp).cwiseAbs().maxCoeff() <= 1e-12 * std::max(1.0, f.f.norm())) continue;
        Mat got = oracle::mellin_principal_part(u, lc.sigma0, f.L(), comp);
        std::ostringstream nm;
        nm << "mellin root" << a << "[" << i << "] component " << comp;
        out.push_back(make_check(nm.str(), (got.row(0) - f.f.row(comp)).norm(), 0.0, f.f.row(comp).norm(), 1e-6));
      }
    }
  }
  // congruence self-test
  PencilSpec u = random_unimodular(p.n(), p.m, seed);
  PencilSpec pt = congruence(p, u);
  QuotientModel Qt = build_quotient(pt, Q.tol, Q.window);
  auto sig = [](const QuotientModel& M) {
    int s = 0;
    for (const auto& inv : critical_invariants(M)) s += inv.signature_contribution;
    return s;
  };
  Inertia d0 = deficiency_indices(Q), d1 = deficiency_indices(Qt);
  out.push_back(make_check("congruence: quotient dimension", static_cast<double>(Qt.dim()),
                           static_cast<double>(Q.dim()), 1.0, 0.0));
  out.push_back(make_check("congruence: signature", static_cast<double>(sig(Qt)), static_cast<double>(sig(Q)),
                           1.0, 0.0));
  out.push_back(make_check("congruence: deficiency n_plus", static_cast<double>(d1.n_plus),
                           static_cast<double>(d0.n_plus), 1.0, 0.0));
  out.push_back(make_check("congruence: deficiency n_minus", static_cast<double>(d1.n_minus),
                           static_cast<double>(d0.n_minus), 1.0, 0.0));
  return out;
}

struct Analysis {
  ojson report;
  int exit_code = 0;
};

void fail(Analysis& an, const Error& e) {
  an.report["error"] = {{"kind", error_name(e.code())}, {"message", e.what()}};
  if (an.exit_code == 0) an.exit_code = exit_code_for(e.category());
}

ojson extension_entry(const QuotientModel& Q, const std::function<ExtensionSubspace()>& make, bool& precondition_failed) {
  try {
    ExtensionSubspace D = make();
    ojson j = {{"status", "ok"}};
    j.update(subspace_json(Q, D));
    return j;
  } catch (const Error& e) {
    if (e.category() != ErrorCategory::Precondition) throw;
    precondition_failed = true;
    return {{"status", "unavailable"}, {"reason", error_name(e.code())}};
  }
}

Analysis analyse(const PencilSpec& p, const RunOptions& opt) {
  Analysis an;
  ojson& r = an.report;
  r["report_version"] = 1;
  r["command"] = command_name(opt.command);
  r["pencil"] = pencil_json(p);
  r["tolerances"] = {{"rank_rel", opt.tol.rank_rel},
                     {"zero_eig_abs", opt.tol.zero_eig_abs},
                     {"root_cluster", opt.tol.root_cluster},
                     {"line_snap", opt.tol.line_snap}};
  r["samples"] = opt.samples;
  ojson warnings = ojson::array();
  try {
    if (!check_symmetry(p, opt.tol))
      throw Error(ErrorCode::NotSymmetric, "p(sigma*)^* differs from p(sigma)");
    const double T = opt.window ? *opt.window : default_window(p);
    r["window"] = T;
    std::vector<Root> roots = boundary_spectrum(p, opt.tol, T);
    QuotientModel Q;
    bool have_q = false;
    if (opt.command != Command::Roots) {
      Q = build_quotient(p, opt.tol, T);
      have_q = true;
      for (const auto& w : Q.warnings) warnings.push_back(w);
    }
    ojson rt = ojson::array();
    for (size_t i = 0; i < roots.size(); ++i) {
      ojson e = {{"sigma0", cjson(roots[i].sigma0)},
                 {"alg_mult", roots[i].alg_mult},
                 {"band", band_name(roots[i].band)},
                 {"star_partner", roots[i].star_partner}};
      if (have_q)
        for (const auto& b : Q.blocks)
          if (b.root.sigma0 == roots[i].sigma0) e["partial_mults"] = b.germ.partial_mults;
      rt.push_back(e);
    }
    r["roots"] = rt;
    r["star_symmetric"] = check_star_symmetry(roots, p.m, opt.tol);
    r["minimal_domain_flag"] = minimal_domain_flag(roots);
    if (opt.command == Command::Roots) {
      r["warnings"] = warnings;
      return an;
    }
    r["quotient_dim"] = Q.dim();

    const bool want_classify = opt.command == Command::Classify || opt.command == Command::All ||
                               opt.command == Command::Extensions;
    const bool want_sf = opt.command == Command::Sf || opt.command == Command::All;
    std::vector<CriticalRootInvariants> invs;
    if (want_classify || want_sf) invs = critical_invariants(Q);
    ojson crit = ojson::array();
    int total_sf = 0;
    for (const auto& inv : invs) {
      ojson e = {{"sigma0", cjson(inv.sigma0)}};
      if (want_classify) {
        ojson pe = ojson::array();
        for (const auto& c : inv.per_ell)
          pe.push_back({{"ell", c.ell}, {"m0", c.m0}, {"m_plus", c.m_plus}, {"m_minus", c.m_minus}});
        e["per_ell"] = pe;
        e["signature_contribution"] = inv.signature_contribution;
      }
      if (want_sf) {
        FlowResult f = sf_at_root(p, inv.sigma0, roots, opt.tol);
        total_sf += f.sf;
        e["spectral_flow"] = {{"sf", f.sf}, {"delta", f.delta}, {"eps0", f.eps0}};
      }
      crit.push_back(e);
    }
    if (want_classify || want_sf) r["critical_roots"] = crit;
    if (want_classify) {
      Inertia d = deficiency_indices(Q);
      r["total_signature"] = total_signature(invs);
      r["deficiency_indices"] = {{"n_plus", d.n_plus}, {"n_minus", d.n_minus}};
      r["sign_condition"] = sign_condition(Q);
      r["semibounded"] = semibounded_check(p, opt.tol, opt.samples, T);
    }
    if (want_sf) r["spectral_flow_total"] = total_sf;

    if (opt.command == Command::Extensions || opt.command == Command::All) {
      bool pre = false;
      ojson ext;
      ext["friedrichs"] = extension_entry(Q, [&] { return friedrichs_subspace(Q, opt.samples); }, pre);
      ext["krein"] = extension_entry(Q, [&] { return krein_subspace(Q, opt.samples); }, pre);
      ext["invariant_selfadjoint"] = extension_entry(Q, [&] { return construct_invariant_selfadjoint(Q); }, pre);
      r["extensions"] = ext;
      if (pre && opt.command == Command::Extensions) an.exit_code = 4;
    }
    if (opt.command == Command::Verify || opt.command == Command::All) {
      std::vector<Check> checks = oracle_checks(Q, opt.seed);
      bool ok = true;
      ojson cj = ojson::array();
      for (const auto& c : checks) {
        ok = ok && c.pass;
        cj.push_back({{"name", c.name},
                      {"value", cjson(c.value)},
                      {"reference", cjson(c.reference)},
                      {"error", c.error},
                      {"pass", c.pass}});
      }
      r["verification"] = {{"passed", ok}, {"checks", cj}};
      r["cross_block_max"] = Q.cross_block_max;
      if (!ok && an.exit_code == 0) an.exit_code = 3;
    }
  } catch (const Error& e) {
    fail(an, e);
  } catch (const std::exception& e) {
    an.report["error"] = {{"kind", "internal"}, {"message", e.what()}};
    if (an.exit_code == 0) an.exit_code = 3;
  }
  r["warnings"] = warnings;
  return an;
}

std::string fmt_c(const ojson& z) {
  std::ostringstream s;
  s << std::setprecision(10) << z[0].get<double>() << (z[1].get<double>() < 0 ? " - " : " + ")
    << std::abs(z[1].get<double>()) << "i";
  return s.str();
}

std::string text_report(const ojson& r) {
  std::ostringstream s;
  s << "command: " << r["command"].get<std::string>() << "\n";
  if (r.contains("error"))
    s << "error: " << r["error"]["message"].get<std::string>() << "\n";
  if (r.contains("roots")) {
    s << "roots:\n";
    for (const auto& x : r["roots"]) {
      s << "  " << fmt_c(x["sigma0"]) << "  mult " << x["alg_mult"] << "  " << x["band"].get<std::string>();
      if (x.contains("partial_mults")) s << "  partial multiplicities " << x["partial_mults"].dump();
      s << "\n";
    }
  }
  if (r.contains("quotient_dim")) s << "quotient dimension: " << r["quotient_dim"] << "\n";
  if (r.contains("critical_roots"))
    for (const auto& c : r["critical_roots"]) {
      s << "critical root " << fmt_c(c["sigma0"]) << ":";
      if (c.contains("per_ell"))
        for (const auto& e : c["per_ell"])
          s << " [ell " << e["ell"] << ": m0 " << e["m0"] << ", m+ " << e["m_plus"] << ", m- " << e["m_minus"] << "]";
      if (c.contains("signature_contribution")) s << " contribution " << c["signature_contribution"];
      if (c.contains("spectral_flow")) s << " sf " << c["spectral_flow"]["sf"];
      s << "\n";
    }
  for (const char* k : {"total_signature", "spectral_flow_total", "sign_condition", "semibounded"})
    if (r.contains(k)) s << k << ": " << r[k].dump() << "\n";
  if (r.contains("deficiency_indices"))
    s << "deficiency indices: (" << r["deficiency_indices"]["n_plus"] << ", " << r["deficiency_indices"]["n_minus"] << ")\n";
  if (r.contains("extensions"))
    for (auto it = r["extensions"].begin(); it != r["extensions"].end(); ++it) {
      s << it.key() << ": ";
      if (it.value()["status"] == "ok")
        s << "dim " << it.value()["dim"] << "\n";
      else
        s << "unavailable (" << it.value()["reason"].get<std::string>() << ")\n";
    }
  if (r.contains("verification")) {
    s << "verification: " << (r["verification"]["passed"].get<bool>() ? "passed" : "FAILED") << "\n";
    for (const auto& c : r["verification"]["checks"])
      s << "  " << (c["pass"].get<bool>() ? "ok   " : "FAIL ") << c["name"].get<std::string>() << "  error "
        << c["error"].get<double>() << "\n";
  }
  for (const auto& w : r["warnings"]) s << "warning: " << w.get<std::string>() << "\n";
  return s.str();
}

}  // namespace

int exit_code_for(ErrorCategory c) {
  switch (c) {
    case ErrorCategory::Validation: return 2;
    case ErrorCategory::Numerical: return 3;
    case ErrorCategory::Precondition: return 4;
  }
  return 3;
}

RunResult run_analysis(const PencilSpec& p, const RunOptions& opt) {
  Analysis an = analyse(p, opt);
  RunResult res;
  res.exit_code = an.exit_code;
  res.output = opt.json ? an.report.dump(2) + "\n" : text_report(an.report);
  return res;
}

RunResult run_file(const std::string& path, const RunOptions& opt) {
  std::stringstream buf;
  if (path == "-") {
    buf << std::cin.rdbuf();
  } else {
    std::ifstream in(path);
    if (!in) {
      ojson r = {{"report_version", 1}, {"error", {{"kind", "ParseError"}, {"message", "cannot open " + path}}}};
      return {2, r.dump(2) + "\n"};
    }
    buf << in.rdbuf();
  }
  try {
    PencilSpec p = pencil_from_json(buf.str());
    return run_analysis(p, opt);
  } catch (const Error& e) {
    ojson r = {{"report_version", 1}, {"error", {{"kind", error_name(e.code())}, {"message", e.what()}}}};
    return {exit_code_for(e.category()), opt.json ? r.dump(2) + "\n" : std::string("error: ") + e.what() + "\n"};
  }
}

int run_cli(int argc, char** argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Boundary spectrum, quotient form and selfadjoint extensions of an indicial pencil"};
  std::string command, path;
  RunOptions opt;
  double window = 0.0;
  bool text = false, json = false;
  app.add_option("command", command, "roots | classify | sf | extensions | verify | all")
      ->required()
      ->check(CLI::IsMember({"roots", "classify", "sf", "extensions", "verify", "all"}));
  app.add_option("pencil", path, "pencil JSON file, - for stdin")->required();
  app.add_option("--tol-rank", opt.tol.rank_rel, "relative singular value cutoff");
  app.add_option("--tol-zero", opt.tol.zero_eig_abs, "eigenvalue zero cutoff");
  app.add_option("--window", window, "half width of the root window in Re sigma");
  app.add_option("--samples", opt.samples, "critical line samples for the semiboundedness check");
  app.add_flag("--json", json, "JSON report (default)");
  app.add_flag("--text", text, "plain text report");
  app.add_option("--seed", opt.seed, "seed for the randomized congruence self-test");
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e, out, err);
    return rc == 0 ? 0 : 2;
  }
  if (window > 0) opt.window = window;
  opt.json = !text || json;
  static const std::map<std::string, Command> cmds{{"roots", Command::Roots},     {"classify", Command::Classify},
                                                   {"sf", Command::Sf},           {"extensions", Command::Extensions},
                                                   {"verify", Command::Verify},   {"all", Command::All}};
  opt.command = cmds.at(command);
  RunResult res = run_file(path, opt);
  out << res.output;
  return res.exit_code;
}

}  // namespace indicial
