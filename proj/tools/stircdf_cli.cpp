// Command-line front end: evaluation and inversion of the Stirling-sum
// distribution S'_{n,m}(theta), Fu's F_s, and the reproduction/verification
// harnesses.  Exit codes: 0 ok, 2 invalid arguments, 3 convergence failure.

#include <cmath>
#include <cstdio>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "stircdf/asymptotic_series.hpp"
#include "stircdf/dispatch.hpp"
#include "stircdf/inversion.hpp"
#include "stircdf/rational.hpp"
#include "stircdf/saddle_geometry.hpp"

using nlohmann::json;
using namespace stircdf;

namespace {

std::string fmt(double v, int digits = 15) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  std::ostringstream os;
  os << std::setprecision(digits) << v;
  return os.str();
}

json json_number(double v) {
  if (std::isinf(v)) return json(v > 0 ? "inf" : "-inf");
  return json(v);
}

const char* method_name(Method m) {
  switch (m) {
    case Method::recurrence: return "recurrence";
    case Method::asymptotic: return "asymptotic";
    case Method::bruteforce: return "bruteforce";
  }
  return "?";
}

const char* inversion_method_name(InversionMethod m) {
  switch (m) {
    case InversionMethod::newton: return "newton";
    case InversionMethod::asymptotic: return "asymptotic";
    case InversionMethod::hybrid: return "hybrid";
  }
  return "?";
}

RequestedMethod parse_method(const std::string& name) {
  if (name == "auto") return RequestedMethod::automatic;
  if (name == "recurrence") return RequestedMethod::recurrence;
  if (name == "asymptotic") return RequestedMethod::asymptotic;
  if (name == "bruteforce") return RequestedMethod::bruteforce;
  throw CLI::ValidationError("--method", "unknown method '" + name + "'");
}

double parse_theta(const std::string& text) {
  try {
    return rational_from_string(text).get_d();
  } catch (const std::invalid_argument&) {
    std::size_t pos = 0;
    const double v = std::stod(text, &pos);
    if (pos != text.size()) throw CLI::ValidationError("--theta", "cannot parse '" + text + "'");
    return v;
  }
}

void emit_eval(long n, long m, double theta, const EvalResult& ev, const std::string& exact,
               const std::string& format) {
  const double fs = fu_fs(ev);
  if (format == "json") {
    json j{{"command", "eval"},
           {"n", n},
           {"m", m},
           {"theta", theta},
           {"s_prime", ev.s_prime},
           {"t_prime", ev.t_prime},
           {"fs", json_number(fs)},
           {"primary_branch", ev.primary_branch == Branch::S ? "S" : "T"},
           {"method", method_name(ev.method)},
           {"error_estimate", ev.error_estimate}};
    if (!exact.empty()) j["s_prime_exact"] = exact;
    std::cout << j.dump() << "\n";
  } else if (format == "csv") {
    std::cout << "n,m,theta,s_prime,t_prime,fs,method,err\n"
              << n << ',' << m << ',' << fmt(theta) << ',' << fmt(ev.s_prime) << ','
              << fmt(ev.t_prime) << ',' << fmt(fs) << ',' << method_name(ev.method) << ','
              << fmt(ev.error_estimate) << "\n";
  } else {
    std::cout << "S'_{" << n << ',' << m << "}(" << fmt(theta) << ") = " << fmt(ev.s_prime)
              << "\nT' = " << fmt(ev.t_prime) << "\nF_s = " << fmt(fs)
              << "\nmethod = " << method_name(ev.method)
              << "\nerror estimate = " << fmt(ev.error_estimate, 3) << "\n";
    if (!exact.empty()) std::cout << "exact = " << exact << "\n";
  }
}

void emit_inversion(const char* command, long n, long m, double input, const char* input_name,
                    const InversionResult& inv, const std::string& format) {
  if (format == "json") {
    json j{{"command", command},
           {"n", n},
           {"m", m},
           {input_name, input},
           {"theta", inv.theta},
           {"method", inversion_method_name(inv.method)},
           {"iterations_or_terms", inv.iterations_or_terms},
           {"residual", inv.residual}};
    if (inv.tau_terms) {
      j["tau_terms"] = {(*inv.tau_terms)[0], (*inv.tau_terms)[1], (*inv.tau_terms)[2]};
    }
    if (!inv.iterates.empty()) j["iterates"] = inv.iterates;
    std::cout << j.dump() << "\n";
  } else if (format == "csv") {
    std::cout << "n,m," << input_name << ",theta,method,iterations_or_terms,residual\n"
              << n << ',' << m << ',' << fmt(input) << ',' << fmt(inv.theta) << ','
              << inversion_method_name(inv.method) << ',' << inv.iterations_or_terms << ','
              << fmt(inv.residual, 3) << "\n";
  } else {
    std::cout << "theta = " << fmt(inv.theta) << "\nmethod = " << inversion_method_name(inv.method)
              << "\n" << (inv.method == InversionMethod::asymptotic ? "terms" : "iterations")
              << " = " << inv.iterations_or_terms << "\nresidual = " << fmt(inv.residual, 3)
              << "\n";
  }
}

double delta_at(long n, long m, double s, double theta) {
  const EvalResult ev = evaluate(Params{n, m, theta});
  return std::fabs(s / ev.s_prime - 1.0);
}

struct TableRow {
  long n, m;
  double s;
  double theta[3];
  double delta[3];
};

std::vector<TableRow> newton_table() {
  std::vector<TableRow> rows;
  const double svals[] = {0.0001, 0.25, 0.50, 0.75};
  for (const auto& [m, n] : {std::pair<long, long>{10, 25}, {25, 50}}) {
    for (double s : svals) {
      const InversionResult inv = invert_newton(n, m, s);
      TableRow row{n, m, s, {}, {}};
      for (int j = 0; j < 3; ++j) {
        const std::size_t idx = std::min<std::size_t>(2 * j, inv.iterates.size() - 1);
        row.theta[j] = inv.iterates[idx];
        row.delta[j] = delta_at(n, m, s, row.theta[j]);
      }
      rows.push_back(row);
    }
  }
  return rows;
}

std::vector<TableRow> asymptotic_table() {
  std::vector<TableRow> rows;
  const double svals[] = {0.0001, 0.25, 0.50, 0.75};
  for (const auto& [m, n] : {std::pair<long, long>{200, 250}, {500, 1000}}) {
    for (double s : svals) {
      TableRow row{n, m, s, {}, {}};
      for (int terms = 1; terms <= 3; ++terms) {
        const InversionResult inv = invert_asymptotic(n, m, s, terms);
        row.theta[terms - 1] = inv.theta;
        row.delta[terms - 1] = inv.residual;
      }
      rows.push_back(row);
    }
  }
  return rows;
}

void emit_table(const std::vector<TableRow>& rows, int which, const std::string& format) {
  // Table 1 prints Newton iterates 0/2/4; Table 2 the 1/2/3-term inversions.
  const char* l0 = "theta0";
  const char* l1 = which == 1 ? "theta2" : "theta1";
  const char* l2 = which == 1 ? "theta4" : "theta2";
  const char* d0 = "delta0";
  const char* d1 = which == 1 ? "delta2" : "delta1";
  const char* d2 = which == 1 ? "delta4" : "delta2";
  if (format == "json") {
    json arr = json::array();
    for (const auto& r : rows) {
      arr.push_back(json{{"m", r.m}, {"n", r.n}, {"s", r.s},
                         {l0, r.theta[0]}, {d0, r.delta[0]},
                         {l1, r.theta[1]}, {d1, r.delta[1]},
                         {l2, r.theta[2]}, {d2, r.delta[2]}});
    }
    std::cout << json{{"command", "table"}, {"which", which}, {"rows", arr}}.dump() << "\n";
    return;
  }
  if (format == "csv") {
    std::cout << "m,n,s," << l0 << ',' << d0 << ',' << l1 << ',' << d1 << ',' << l2 << ',' << d2
              << "\n";
    for (const auto& r : rows) {
      std::cout << r.m << ',' << r.n << ',' << fmt(r.s) << ',' << fmt(r.theta[0], 10) << ','
                << fmt(r.delta[0], 2) << ',' << fmt(r.theta[1], 10) << ',' << fmt(r.delta[1], 2)
                << ',' << fmt(r.theta[2], 10) << ',' << fmt(r.delta[2], 2) << "\n";
    }
    return;
  }
  std::cout << std::left << std::setw(10) << "m/n" << std::setw(9) << "s";
  for (const auto* h : {l0, d0, l1, d1, l2, d2}) std::cout << std::setw(14) << h;
  std::cout << "\n";
  for (const auto& r : rows) {
    std::ostringstream mn;
    mn << r.m << '/' << r.n;
    std::cout << std::left << std::setw(10) << mn.str() << std::setw(9) << fmt(r.s, 4);
    for (int j = 0; j < 3; ++j) {
      std::cout << std::setw(14) << fmt(r.theta[j], 9) << std::setw(14) << fmt(r.delta[j], 2);
    }
    std::cout << "\n";
  }
}

struct VerifyCell {
  double rho;
  long m;
  double theta;
  double residual;
};

std::vector<VerifyCell> verify_grid(long n, int terms, const std::vector<double>& rhos,
                                    const std::vector<long>& ms) {
  std::vector<VerifyCell> cells;
  for (double rho : rhos) {
    for (long m : ms) {
      const PhaseGeometry geom(n - 1, m - 1);
      const double theta = rho * geom.z0();
      const double s_nm = s_prime_asymptotic(Params{n, m, theta}, terms).s_prime;
      const double s_nm1 = s_prime_asymptotic(Params{n, m - 1, theta}, terms).s_prime;
      const double s_np1m = s_prime_asymptotic(Params{n + 1, m, theta}, terms).s_prime;
      const double resid = recursion_residual(n, m, theta, s_nm, s_nm1, s_np1m);
      cells.push_back({rho, m, theta, resid});
    }
  }
  return cells;
}

void emit_verify(long n, int terms, const std::vector<double>& rhos,
                 const std::vector<long>& ms, const std::vector<VerifyCell>& cells,
                 const std::string& format) {
  double max_abs = 0.0;
  for (const auto& c : cells) max_abs = std::max(max_abs, std::fabs(c.residual));
  if (format == "json") {
    json arr = json::array();
    for (const auto& c : cells) {
      arr.push_back(json{{"rho", c.rho}, {"m", c.m}, {"theta", c.theta}, {"residual", c.residual}});
    }
    std::cout << json{{"command", "verify"}, {"n", n}, {"terms", terms},
                      {"cells", arr}, {"max_abs_residual", max_abs}}.dump()
              << "\n";
    return;
  }
  if (format == "csv") {
    std::cout << "rho,m,theta,residual\n";
    for (const auto& c : cells) {
      std::cout << fmt(c.rho, 4) << ',' << c.m << ',' << fmt(c.theta, 12) << ','
                << fmt(c.residual, 3) << "\n";
    }
    return;
  }
  std::cout << "recursion residuals, n=" << n << ", " << terms << " terms\n";
  std::cout << std::left << std::setw(8) << "rho\\m";
  for (long mm : ms) std::cout << std::setw(12) << mm;
  std::cout << "\n";
  std::size_t i = 0;
  for (std::size_t r = 0; r < rhos.size(); ++r) {
    std::cout << std::left << std::setw(8) << fmt(rhos[r], 3);
    for (std::size_t j = 0; j < ms.size() && i < cells.size(); ++j, ++i) {
      std::cout << std::setw(12) << fmt(std::fabs(cells[i].residual), 2);
    }
    std::cout << "\n";
  }
  std::cout << "max |residual| = " << fmt(max_abs, 3) << "\n";
}

int run(int argc, char** argv) {
  CLI::App app{"stircdf: evaluation and inversion of the Stirling-sum distribution S'_{n,m}(theta)"};
  app.require_subcommand(1);

  std::string format = "text";
  app.add_option("--format", format, "output format")->check(CLI::IsMember({"json", "csv", "text"}))
      ->capture_default_str();

  long n = 0, m = 0;
  std::string theta_text;
  std::string method_text = "auto";
  int terms = 0;
  double s_value = 0.0, f_value = 0.0, tol = 1e-12;

  auto* eval_cmd = app.add_subcommand("eval", "evaluate S', T', and F_s at one point");
  eval_cmd->add_option("--n", n, "sample size index n")->required();
  eval_cmd->add_option("--m", m, "lower summation index m")->required();
  eval_cmd->add_option("--theta", theta_text, "theta > 0 (decimal or rational a/b)")->required();
  eval_cmd->add_option("--method", method_text, "auto|recurrence|asymptotic|bruteforce");
  eval_cmd->add_option("--terms", terms, "asymptotic term count (default by size)");

  auto* fs_cmd = app.add_subcommand("fs", "evaluate Fu's F_s at one point");
  fs_cmd->add_option("--n", n)->required();
  fs_cmd->add_option("--m", m)->required();
  fs_cmd->add_option("--theta", theta_text)->required();
  fs_cmd->add_option("--method", method_text);
  fs_cmd->add_option("--terms", terms);

  auto* invert_cmd = app.add_subcommand("invert", "solve S'_{n,m}(theta) = s for theta");
  invert_cmd->add_option("--n", n)->required();
  invert_cmd->add_option("--m", m)->required();
  invert_cmd->add_option("--s", s_value, "target in (0,1)")->required();
  invert_cmd->add_option("--method", method_text, "auto|newton|asymptotic");
  invert_cmd->add_option("--terms", terms, "asymptotic inversion terms (1..3)");
  invert_cmd->add_option("--tol", tol, "relative residual tolerance");

  auto* fsinv_cmd = app.add_subcommand("fs-invert", "solve F_s = f for theta");
  fsinv_cmd->add_option("--n", n)->required();
  fsinv_cmd->add_option("--m", m)->required();
  fsinv_cmd->add_option("--f", f_value, "target F_s value, |f| <= 700")->required();
  fsinv_cmd->add_option("--tol", tol);

  auto* trans_cmd = app.add_subcommand("transition", "theta_t where S' = T' = 1/2");
  trans_cmd->add_option("--n", n)->required();
  trans_cmd->add_option("--m", m)->required();

  int which = 1;
  auto* table_cmd = app.add_subcommand("table", "reproduce the inversion study tables");
  table_cmd->add_option("--which", which, "1 = Newton, 2 = asymptotic")->check(CLI::Range(1, 2));

  std::vector<double> rhos;
  std::vector<long> m_list;
  auto* verify_cmd = app.add_subcommand("verify", "recursion-residual grid for the asymptotic evaluator");
  verify_cmd->add_option("--n", n)->required();
  verify_cmd->add_option("--terms", terms, "expansion terms (default by size)");
  verify_cmd->add_option("--rho", rhos, "theta = rho * z0 scaling factors");
  verify_cmd->add_option("--m", m_list, "m values of the grid");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  if (eval_cmd->parsed() || fs_cmd->parsed()) {
    const RequestedMethod method = parse_method(method_text);
    std::string exact;
    const EvalResult ev = evaluate_with_rational_theta(n, m, theta_text, method, terms, &exact);
    emit_eval(n, m, parse_theta(theta_text), ev, exact, format);
    return 0;
  }
  if (invert_cmd->parsed()) {
    InversionResult inv;
    if (method_text == "asymptotic") {
      inv = invert_asymptotic(n, m, s_value, terms > 0 ? terms : 3);
    } else if (method_text == "newton" || method_text == "auto") {
      inv = invert_newton(n, m, s_value, tol, recursion_cap());
    } else {
      throw CLI::ValidationError("--method", "unknown inversion method '" + method_text + "'");
    }
    emit_inversion("invert", n, m, s_value, "s", inv, format);
    return 0;
  }
  if (fsinv_cmd->parsed()) {
    const InversionResult inv = fu_fs_invert(n, m, f_value, tol, recursion_cap());
    emit_inversion("fs-invert", n, m, f_value, "f", inv, format);
    return 0;
  }
  if (trans_cmd->parsed()) {
    const double theta_t = transition_theta(n, m, recursion_cap());
    if (format == "json") {
      std::cout << json{{"command", "transition"}, {"n", n}, {"m", m}, {"theta_t", theta_t}}.dump()
                << "\n";
    } else if (format == "csv") {
      std::cout << "n,m,theta_t\n" << n << ',' << m << ',' << fmt(theta_t) << "\n";
    } else {
      std::cout << "theta_t = " << fmt(theta_t) << "\n";
    }
    return 0;
  }
  if (table_cmd->parsed()) {
    emit_table(which == 1 ? newton_table() : asymptotic_table(), which, format);
    return 0;
  }
  if (verify_cmd->parsed()) {
    if (terms <= 0) terms = default_term_count(n);
    if (rhos.empty()) {
      rhos = n >= 100000 ? std::vector<double>{0.97, 0.98, 0.99, 1.00}
                         : std::vector<double>{0.70, 0.80, 0.90, 1.00};
    }
    if (m_list.empty()) {
      for (double frac : {0.15, 0.30, 0.45, 0.60, 0.75, 0.90}) {
        m_list.push_back(static_cast<long>(frac * static_cast<double>(n) + 0.5));
      }
    }
    emit_verify(n, terms, rhos, m_list, verify_grid(n, terms, rhos, m_list), format);
    return 0;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const ConvergenceError& e) {
    std::cerr << "convergence failure: " << e.what() << "\n";
    return 3;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid arguments: " << e.what() << "\n";
    return 2;
  } catch (const std::domain_error& e) {
    std::cerr << "invalid arguments: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
