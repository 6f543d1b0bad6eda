#include "morrey/grid.hpp"
#include "morrey/harness.hpp"
#include "morrey/maximal.hpp"
#include "morrey/norms.hpp"
#include "morrey/potentials.hpp"
#include "morrey/transforms.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

namespace {

std::string fmt17(double v) {
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

morrey::GridFunction load(const std::string& path) {
  try {
    return morrey::read_pmg(path);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    std::exit(1);
  }
}

struct DomainFlags {
  std::string kind = "all";
  double R = 1;
  double base_t = 0;
  double S = 0, T = 1;
  std::vector<double> center;

  morrey::NormDomain build() const {
    Eigen::Vector3d c = Eigen::Vector3d::Zero();
    for (size_t a = 0; a < center.size() && a < 3; ++a) c[long(a)] = center[a];
    if (kind == "all") return morrey::NormDomain::all();
    if (kind == "cylinder") return morrey::NormDomain::cylinder(R, base_t, c);
    if (kind == "strip") return morrey::NormDomain::strip(S, T);
    if (kind == "ball") return morrey::NormDomain::ball(R, c);
    std::cerr << "error: unknown domain kind '" << kind << "'\n";
    std::exit(1);
  }

  void attach(CLI::App* cmd) {
    cmd->add_option("--domain", kind, "all|cylinder|strip|ball");
    cmd->add_option("--R", R, "cylinder/ball radius");
    cmd->add_option("--base-t", base_t, "cylinder base time");
    cmd->add_option("--S", S, "strip start");
    cmd->add_option("--T", T, "strip end");
    cmd->add_option("--center", center, "spatial center coordinates");
  }
};

void write_out(const std::string& path, const morrey::GridFunction& f) {
  try {
    morrey::write_pmg(path, f);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    std::exit(1);
  }
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"parabolic Morrey space toolkit"};
  app.require_subcommand(1);
  int threads = 1;
  app.add_option("--threads", threads, "worker cap (results are unchanged)");

  // ---- norm ------------------------------------------------------------
  auto* cmd_norm = app.add_subcommand("norm", "compute a norm of a PMG file");
  std::string n_kind = "lp", n_in;
  double n_p = 2, n_q1 = 2, n_q2 = 2, n_beta = 0;
  bool n_geom = false;
  DomainFlags n_dom;
  cmd_norm->add_option("--kind", n_kind, "lp|mixed|morrey|mixed-morrey");
  cmd_norm->add_option("--p", n_p, "Lebesgue exponent");
  cmd_norm->add_option("--q1", n_q1, "inner (spatial) exponent");
  cmd_norm->add_option("--q2", n_q2, "outer (time) exponent");
  cmd_norm->add_option("--beta", n_beta, "Morrey exponent");
  cmd_norm->add_flag("--geometric-centers", n_geom, "scan geometric centers");
  cmd_norm->add_option("--in", n_in, "input PMG file")->required();
  n_dom.attach(cmd_norm);

  // ---- apply (potential / maximal / transform share the machinery) -----
  auto* cmd_apply = app.add_subcommand("apply", "apply an operator, write PMG");
  std::string a_op = "Palpha", a_in, a_out;
  double a_alpha = 1, a_beta = 0, a_R = 2, a_smax = 16, a_inner = 1, a_outer = 2;
  int a_axis = 0;
  cmd_apply->add_option("--op", a_op,
                        "Palpha|P1adj|stationary|riesz|grad|Mbeta|Mhat|scale|"
                        "timefold|hestenes|annulus");
  cmd_apply->add_option("--alpha", a_alpha, "kernel order");
  cmd_apply->add_option("--beta", a_beta, "maximal exponent");
  cmd_apply->add_option("--R", a_R, "dilation factor");
  cmd_apply->add_option("--s-max", a_smax, "time-marginal truncation");
  cmd_apply->add_option("--axis", a_axis, "gradient component");
  cmd_apply->add_option("--inner", a_inner, "cutoff inner radius");
  cmd_apply->add_option("--outer", a_outer, "cutoff outer radius");
  cmd_apply->add_option("--in", a_in, "input PMG file")->required();
  cmd_apply->add_option("--out", a_out, "output PMG file")->required();

  auto* cmd_pot = app.add_subcommand("potential", "apply the kernel potential");
  std::string p_in, p_out;
  double p_alpha = 1;
  cmd_pot->add_option("--alpha", p_alpha, "kernel order")->required();
  cmd_pot->add_option("--in", p_in, "input PMG file")->required();
  cmd_pot->add_option("--out", p_out, "output PMG file")->required();

  auto* cmd_max = app.add_subcommand("maximal", "apply a maximal operator");
  std::string m_in, m_out, m_op = "mbeta";
  double m_beta_v = 0;
  cmd_max->add_option("--op", m_op, "mbeta|mhat");
  cmd_max->add_option("--beta", m_beta_v, "exponent");
  cmd_max->add_option("--in", m_in, "input PMG file")->required();
  cmd_max->add_option("--out", m_out, "output PMG file")->required();

  auto* cmd_tr = app.add_subcommand("transform", "apply a grid transform");
  std::string t_in, t_out, t_op = "scale";
  double t_R = 2;
  cmd_tr->add_option("--op", t_op, "scale|timefold|hestenes|annulus");
  cmd_tr->add_option("--R", t_R, "dilation factor");
  cmd_tr->add_option("--in", t_in, "input PMG file")->required();
  cmd_tr->add_option("--out", t_out, "output PMG file")->required();

  // ---- check -----------------------------------------------------------
  auto* cmd_check = app.add_subcommand("check", "run the verification suite");
  std::string c_suite = "all", c_config = "smoke", c_json = "report.json",
              c_csv = "report.csv";
  int c_d = 0, c_nx = 0;
  double c_q = 1.25;
  cmd_check->add_option("--suite", c_suite, "all or comma-separated case ids");
  cmd_check->add_option("--config", c_config, "smoke|full");
  cmd_check->add_option("--out", c_json, "JSON report path");
  cmd_check->add_option("--csv", c_csv, "CSV report path");
  cmd_check->add_option("--d", c_d, "override dimension");
  cmd_check->add_option("--nx", c_nx, "override resolution");
  cmd_check->add_option("--q", c_q, "counterexample exponent (informational)");

  CLI11_PARSE(app, argc, argv);

  if (*cmd_norm) {
    morrey::GridFunction f = load(n_in);
    morrey::NormDomain Q = n_dom.build();
    morrey::MorreyOptions opts;
    opts.geometric_centers = n_geom;
    double value = 0;
    morrey::MorreyResult res;
    bool morrey_kind = false;
    try {
      if (n_kind == "lp") {
        value = morrey::lp_norm(f, n_p, Q);
      } else if (n_kind == "mixed") {
        value = morrey::mixed_norm(f, n_q1, n_q2, Q);
      } else if (n_kind == "morrey") {
        res = morrey::morrey_norm(f, n_p, n_beta, Q, opts);
        value = res.value;
        morrey_kind = true;
      } else if (n_kind == "mixed-morrey") {
        res = morrey::mixed_morrey_norm(f, n_q1, n_q2, n_beta, Q, opts);
        value = res.value;
        morrey_kind = true;
      } else {
        std::cerr << "error: unknown norm kind '" << n_kind << "'\n";
        return 1;
      }
    } catch (const std::exception& e) {
      std::cerr << "error: " << e.what() << "\n";
      return 1;
    }
    std::ostringstream os;
    os << "{\"value\":" << fmt17(value);
    if (morrey_kind) {
      os << ",\"rho_star\":" << fmt17(res.rho_star) << ",\"center_star\":["
         << fmt17(res.center_t);
      for (int a = 0; a < f.grid.d; ++a) os << "," << fmt17(res.center_x[a]);
      os << "],\"degenerate\":" << (res.degenerate ? "true" : "false");
    }
    os << "}";
    std::cout << os.str() << "\n";
    return morrey_kind && res.degenerate ? 4 : 0;
  }

  auto run_apply = [&](const std::string& op, const std::string& in,
                       const std::string& out, double alpha, double beta,
                       double R, double smax, int axis, double inner,
                       double outer) -> int {
    morrey::GridFunction f = load(in);
    try {
      double quad = -1;
      morrey::GridFunction result;
      if (op == "Palpha") {
        auto r = morrey::apply_P_alpha(f, alpha);
        result = r.field;
        quad = r.quad_error;
      } else if (op == "P1adj") {
        auto r = morrey::apply_P1_adjoint(f);
        result = r.field;
        quad = r.quad_error;
      } else if (op == "stationary") {
        auto r = morrey::apply_P_alpha_stationary(f, alpha, smax);
        result = r.field;
        quad = r.quad_error;
      } else if (op == "riesz") {
        result = morrey::riesz_potential(f, alpha);
      } else if (op == "grad") {
        result = morrey::grad_from_heat_data(f)[size_t(axis)];
      } else if (op == "Mbeta") {
        result = morrey::m_beta(f, beta);
      } else if (op == "Mhat") {
        result = morrey::m_hat(f);
      } else if (op == "scale") {
        result = morrey::parabolic_scale(f, R);
      } else if (op == "timefold") {
        result = morrey::time_fold(f);
      } else if (op == "hestenes") {
        result = morrey::hestenes_extend(f);
      } else if (op == "annulus") {
        result = morrey::annulus_pullback(f);
      } else if (op == "cutoff-time") {
        result = f;
        result.values *= morrey::cutoff_time(f.grid, inner, outer).values;
      } else if (op == "cutoff-space") {
        result = f;
        result.values *= morrey::cutoff_space(f.grid, inner, outer).values;
      } else {
        std::cerr << "error: unknown op '" << op << "'\n";
        return 1;
      }
      write_out(out, result);
      std::ostringstream os;
      os << "{\"out\":\"" << out << "\"";
      if (quad >= 0) os << ",\"quad_error\":" << fmt17(quad);
      os << "}";
      std::cout << os.str() << "\n";
      return 0;
    } catch (const std::exception& e) {
      std::cerr << "error: " << e.what() << "\n";
      return 1;
    }
  };

  if (*cmd_apply)
    return run_apply(a_op, a_in, a_out, a_alpha, a_beta, a_R, a_smax, a_axis,
                     a_inner, a_outer);
  if (*cmd_pot) return run_apply("Palpha", p_in, p_out, p_alpha, 0, 1, 16, 0, 1, 2);
  if (*cmd_max)
    return run_apply(m_op == "mhat" ? "Mhat" : "Mbeta", m_in, m_out, 1, m_beta_v,
                     1, 16, 0, 1, 2);
  if (*cmd_tr) return run_apply(t_op, t_in, t_out, 1, 0, t_R, 16, 0, 1, 2);

  if (*cmd_check) {
    morrey::SuiteConfig cfg;
    if (c_config == "full") {
      cfg.d = 2;
      cfg.nx = 64;
      cfg.exhaustive = true;
    } else if (c_config != "smoke") {
      std::cerr << "error: unknown config '" << c_config << "'\n";
      return 1;
    }
    if (c_d > 0) cfg.d = c_d;
    if (c_nx > 0) cfg.nx = c_nx;
    (void)c_q;

    std::vector<std::string> known = morrey::registry_ids();
    std::vector<std::string> ids;
    if (c_suite == "all") {
      ids = known;
    } else {
      std::stringstream ss(c_suite);
      std::string tok;
      while (std::getline(ss, tok, ',')) {
        if (tok.empty()) continue;
        if (std::find(known.begin(), known.end(), tok) == known.end()) {
          std::cerr << "error: unknown case id '" << tok << "'. known ids:";
          for (const auto& k : known) std::cerr << " " << k;
          std::cerr << "\n";
          return 1;
        }
        ids.push_back(tok);
      }
    }
    morrey::SuiteReport rep;
    try {
      rep = morrey::run_suite(ids, cfg);
    } catch (const std::exception& e) {
      std::cerr << "error: " << e.what() << "\n";
      return 2;
    }
    {
      std::ofstream js(c_json);
      js << morrey::suite_json(rep) << "\n";
      std::ofstream cs(c_csv);
      cs << morrey::suite_csv(rep);
    }
    for (const auto& c : rep.cases)
      std::cout << c.id << ": " << (c.pass() ? "pass" : "FAIL")
                << " n_emp=" << fmt17(c.n_emp) << "\n";
    return rep.exit_code();
  }
  return 0;
}
