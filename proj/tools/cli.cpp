#include "cli.hpp"

#include <boost/multiprecision/cpp_bin_float.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "estfid/estfid.hpp"
#include "json.hpp"

namespace estfid::cli {
namespace {

using ojson = nlohmann::ordered_json;
using big_float = boost::multiprecision::cpp_bin_float_50;

std::string f15(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.15g", v);
  return buf;
}

std::string opt15(const std::optional<double>& v) { return v ? f15(*v) : std::string(); }

std::string rat_exact(const big_rational& r) { return r.str(); }

/// Decimal rendering of an exact rational; a wide binary float keeps tiny
/// magnitudes (e.g. the normalization coefficients at large d) printable.
std::string rat_decimal(const big_rational& r) { return big_float(r).str(15); }

void json_set(ojson& obj, const char* key, const std::optional<double>& v) {
  if (v) {
    obj[key] = *v;
  } else {
    obj[key] = nullptr;
  }
}

/// Data sink: --output file when given, otherwise the session stream.
struct sink {
  std::ofstream file;
  std::ostream* os = nullptr;

  static sink open(const std::string& path, std::ostream& fallback, std::ostream& err,
                   bool& ok) {
    sink s;
    ok = true;
    if (path.empty()) {
      s.os = &fallback;
      return s;
    }
    s.file.open(path);
    if (!s.file) {
      err << "error: cannot open output file '" << path << "'\n";
      ok = false;
      return s;
    }
    s.os = &s.file;
    return s;
  }

  std::ostream& stream() { return *os; }
};

// ---------------------------------------------------------------------------

struct fidelity_opts {
  int n = 0;
  int d = 0;
  double tol = default_eig_tol;
  std::string format = "csv";
  std::string output;
};

int cmd_fidelity(const fidelity_opts& o, std::ostream& out, std::ostream& err) {
  bool ok = false;
  sink s = sink::open(o.output, out, err, ok);
  if (!ok) return 1;
  fidelity_record rec = fidelity(o.n, o.d, o.tol);
  if (o.format == "json") {
    ojson j;
    j["n"] = rec.n;
    j["d"] = rec.d;
    j["dim"] = rec.dim;
    j["f_est"] = rec.f_est;
    j["h_nd"] = rec.h_nd;
    j["residual"] = rec.residual;
    s.stream() << j.dump(2) << '\n';
  } else {
    s.stream() << "n,d,dim,f_est,h_nd,residual\n"
               << rec.n << ',' << rec.d << ',' << rec.dim << ',' << f15(rec.f_est) << ','
               << f15(rec.h_nd) << ',' << f15(rec.residual) << '\n';
  }
  return 0;
}

// ---------------------------------------------------------------------------

struct sweep_opts {
  int d = 0;
  int n_min = 0;
  int n_max = 0;
  int step = 0;
  double tol = default_eig_tol;
  int threads = 0;
  std::size_t max_dim = default_max_diagrams;
  std::string format = "csv";
  std::string output;
};

int cmd_sweep(const sweep_opts& o, std::ostream& out, std::ostream& err) {
  bool ok = false;
  sink s = sink::open(o.output, out, err, ok);
  if (!ok) return 1;
  if (o.n_max < o.n_min) {
    err << "error: --n-max must be >= --n-min\n";
    return 1;
  }
  if (o.d != 2 && o.d != 3) {
    err << "warning: sandwich columns (lambda_graph, sandwich_lower, variational_upper) "
           "are available only for d in {2,3}; rows carry the fidelity columns only\n";
  }
  std::vector<int> ns;
  for (int n = o.n_min; n <= o.n_max; n += o.step) ns.push_back(n);
  sweep_series series = sweep(o.d, ns, o.tol, o.max_dim, o.threads);

  int failures = 0;
  for (const auto& row : series.rows) {
    if (row.error) {
      ++failures;
      err << "warning: n=" << row.n << " failed: " << *row.error << '\n';
    }
  }

  // Extrapolation over the sweep window; rows below n = 50 are excluded where
  // higher-order corrections dominate.
  std::optional<extrapolation_result> fit;
  const fit_window window{std::max(o.n_min, 50), o.n_max};
  try {
    fit = extrapolate(series, window);
  } catch (const std::exception& e) {
    err << "note: extrapolation skipped: " << e.what() << '\n';
  }

  if (o.format == "json") {
    ojson j;
    j["d"] = series.d;
    j["rows"] = ojson::array();
    for (const auto& row : series.rows) {
      ojson r;
      r["n"] = row.n;
      r["d"] = series.d;
      if (row.error) {
        r["error"] = *row.error;
      } else {
        r["dim"] = row.dim;
        r["f_est"] = row.f_est;
        r["h_nd"] = row.h_nd;
        json_set(r, "lambda_graph", row.lambda_graph);
        json_set(r, "sandwich_lower", row.sandwich_lower);
        json_set(r, "variational_upper", row.variational_upper);
      }
      j["rows"].push_back(std::move(r));
    }
    if (fit) {
      ojson f;
      f["h_infinity"] = fit->h_infinity;
      f["coefficients"] = fit->coefficients;
      f["std_error"] = fit->ci;
      f["rows_used"] = fit->rows_used;
      f["window"] = {window.n_lo, window.n_hi};
      j["extrapolation"] = std::move(f);
    } else {
      j["extrapolation"] = nullptr;
    }
    s.stream() << j.dump(2) << '\n';
  } else {
    s.stream() << "n,d,dim,f_est,h_nd,lambda_graph,sandwich_lower,variational_upper\n";
    for (const auto& row : series.rows) {
      if (row.error) {
        s.stream() << row.n << ',' << series.d << ",,,,,,\n";
        continue;
      }
      s.stream() << row.n << ',' << series.d << ',' << row.dim << ',' << f15(row.f_est)
                 << ',' << f15(row.h_nd) << ',' << opt15(row.lambda_graph) << ','
                 << opt15(row.sandwich_lower) << ',' << opt15(row.variational_upper) << '\n';
    }
    if (fit) {
      s.stream() << "# h_infinity = " << f15(fit->h_infinity) << " +- " << f15(fit->ci)
                 << " (least-squares h + c1/n + c2/n^2 over " << fit->rows_used
                 << " rows, n in [" << window.n_lo << ", " << window.n_hi << "])\n";
    }
  }
  return failures > 0 ? 1 : 0;
}

// ---------------------------------------------------------------------------

struct fem_opts {
  int n = 0;
  int d = 0;
  double tol = default_eig_tol;
  std::string format = "csv";
  std::string output;
  std::string export_mesh_path;
};

int cmd_fem(const fem_opts& o, std::ostream& out, std::ostream& err) {
  bool ok = false;
  sink s = sink::open(o.output, out, err, ok);
  if (!ok) return 1;
  triangulation tri = build_triangulation(o.n, o.d);
  if (!o.export_mesh_path.empty()) {
    std::ofstream mesh(o.export_mesh_path);
    if (!mesh) {
      err << "error: cannot open mesh file '" << o.export_mesh_path << "'\n";
      return 1;
    }
    export_mesh(tri, mesh);
  }
  const double value = fem_min_eig(o.n, o.d, o.tol);
  const double continuum = continuous_reference(o.d);
  const double rel = (value - continuum) / continuum;
  if (o.format == "json") {
    ojson j;
    j["n"] = o.n;
    j["d"] = o.d;
    j["interior"] = tri.num_interior;
    j["vertices"] = tri.num_vertices();
    j["simplices"] = tri.num_simplices();
    j["fem_min"] = value;
    j["continuum"] = continuum;
    j["rel_error"] = rel;
    s.stream() << j.dump(2) << '\n';
  } else {
    s.stream() << "n,d,interior,vertices,simplices,fem_min,continuum,rel_error\n"
               << o.n << ',' << o.d << ',' << tri.num_interior << ',' << tri.num_vertices()
               << ',' << tri.num_simplices() << ',' << f15(value) << ',' << f15(continuum)
               << ',' << f15(rel) << '\n';
  }
  return 0;
}

// ---------------------------------------------------------------------------

struct graph_opts {
  int n = 0;
  int d = 0;
  double tol = default_eig_tol;
  std::string format = "csv";
  std::string output;
  std::string dump_edges_path;
};

int cmd_graph(const graph_opts& o, std::ostream& out, std::ostream& err) {
  bool ok = false;
  sink s = sink::open(o.output, out, err, ok);
  if (!ok) return 1;
  boundary_graph g = build_boundary_graph(o.n, o.d);
  if (!o.dump_edges_path.empty()) {
    std::ofstream edges(o.dump_edges_path);
    if (!edges) {
      err << "error: cannot open edge file '" << o.dump_edges_path << "'\n";
      return 1;
    }
    g.dump_edges(edges);
  }
  dirichlet_laplacian_matrix lap = dirichlet_laplacian(g);
  eig_result low = extremal_eig(lap.matrix, extremal_side::smallest, o.tol);
  const double nn = static_cast<double>(o.n) * o.n;
  const double sandwich = nn * low.value / (static_cast<double>(o.d) * o.d);
  if (o.format == "json") {
    ojson j;
    j["n"] = o.n;
    j["d"] = o.d;
    j["interior"] = g.num_interior();
    j["boundary"] = g.num_boundary();
    j["edges"] = g.edges.size();
    j["lambda_min"] = low.value;
    j["sandwich_lower"] = sandwich;
    s.stream() << j.dump(2) << '\n';
  } else {
    s.stream() << "n,d,interior,boundary,edges,lambda_min,sandwich_lower\n"
               << o.n << ',' << o.d << ',' << g.num_interior() << ',' << g.num_boundary()
               << ',' << g.edges.size() << ',' << f15(low.value) << ',' << f15(sandwich)
               << '\n';
  }
  return 0;
}

// ---------------------------------------------------------------------------

struct kahn_opts {
  int d = 0;
  bool verify_mc = false;
  std::uint64_t samples = 1000000;
  std::uint64_t seed = 1729;
  int threads = 0;
  std::string format = "csv";
  std::string output;
};

int cmd_kahn(const kahn_opts& o, std::ostream& out, std::ostream& err) {
  bool ok = false;
  sink s = sink::open(o.output, out, err, ok);
  if (!ok) return 1;

  const kahn_ratios closed = ratios_closed_form(o.d);
  bool recursion_checked = false;
  if (o.d <= 50) {
    const kahn_ratios rec = ratios_recursive(o.d);
    recursion_checked = true;
    if (rec.a_ratio != closed.a_ratio || rec.b_ratio != closed.b_ratio ||
        rec.c_ratio != closed.c_ratio ||
        rec.d_sqrt5_coefficient != closed.d_sqrt5_coefficient) {
      err << "error: recursive and closed-form moment ratios disagree at d=" << o.d << '\n';
      return 1;
    }
  }
  const big_rational ray = rayleigh_kahn(o.d);
  const big_rational hu = h_upper(o.d);

  std::optional<mc_ratio_result> mc;
  if (o.verify_mc) mc = mc_oracle(o.d, o.samples, o.seed, o.threads);

  const big_rational* exact[3] = {&closed.a_ratio, &closed.b_ratio, &closed.c_ratio};
  int mc_failures = 0;
  if (mc) {
    for (int j = 0; j < 3; ++j) {
      const double dev = mc->estimate[j] - static_cast<double>(*exact[j]);
      const double se = mc->std_error[j];
      if ((se > 0.0 && std::abs(dev) > 5.0 * se) || (se == 0.0 && dev != 0.0)) {
        err << "error: Monte Carlo ratio " << j << " off by " << f15(dev) << " (se "
            << f15(se) << ") at d=" << o.d << '\n';
        ++mc_failures;
      }
    }
  }

  struct line {
    const char* name;
    const big_rational* value;
    int mc_index;  // -1: no Monte Carlo column
  };
  const line lines[] = {
      {"a_ratio", &closed.a_ratio, 0},
      {"b_ratio", &closed.b_ratio, 1},
      {"c_ratio", &closed.c_ratio, 2},
      {"d_sqrt5_coefficient", &closed.d_sqrt5_coefficient, -1},
      {"rayleigh_quotient", &ray, -1},
      {"h_upper", &hu, -1},
  };

  if (o.format == "json") {
    ojson j;
    j["d"] = o.d;
    j["recursion_cross_checked"] = recursion_checked;
    for (const line& l : lines) {
      ojson q;
      q["exact"] = rat_exact(*l.value);
      q["decimal"] = rat_decimal(*l.value);
      if (mc && l.mc_index >= 0) {
        q["mc_estimate"] = mc->estimate[l.mc_index];
        q["mc_std_error"] = mc->std_error[l.mc_index];
      }
      j[l.name] = std::move(q);
    }
    if (mc) {
      j["samples"] = mc->samples;
      j["seed"] = mc->seed;
    }
    s.stream() << j.dump(2) << '\n';
  } else {
    s.stream() << "d,quantity,exact,decimal,mc_estimate,mc_std_error\n";
    for (const line& l : lines) {
      s.stream() << o.d << ',' << l.name << ',' << rat_exact(*l.value) << ','
                 << rat_decimal(*l.value) << ',';
      if (mc && l.mc_index >= 0) {
        s.stream() << f15(mc->estimate[l.mc_index]) << ','
                   << f15(mc->std_error[l.mc_index]);
      } else {
        s.stream() << ',';
      }
      s.stream() << '\n';
    }
  }
  return mc_failures > 0 ? 1 : 0;
}

// ---------------------------------------------------------------------------

struct bounds_opts {
  std::vector<int> d_list;
  std::string format = "csv";
  std::string output;
};

int cmd_bounds(const bounds_opts& o, std::ostream& out, std::ostream& err) {
  bool ok = false;
  sink s = sink::open(o.output, out, err, ok);
  if (!ok) return 1;
  std::vector<bounds_row> rows = bounds_table(o.d_list);
  if (o.format == "json") {
    ojson j = ojson::array();
    for (const auto& r : rows) {
      ojson e;
      e["d"] = r.d;
      e["christandl_lo"] = r.christandl_lo;
      e["christandl_hi"] = r.christandl_hi;
      e["yang_hi"] = r.yang_hi;
      e["haah_lo"] = r.haah_lo;
      e["kahn_hi"] = r.kahn_hi;
      e["conjecture_lo"] = r.conjecture_lo;
      json_set(e, "exact", r.exact);
      j.push_back(std::move(e));
    }
    s.stream() << j.dump(2) << '\n';
  } else {
    s.stream() << "d,christandl_lo,christandl_hi,yang_hi,haah_lo,kahn_hi,conjecture_lo,exact\n";
    for (const auto& r : rows) {
      s.stream() << r.d << ',' << f15(r.christandl_lo) << ',' << f15(r.christandl_hi) << ','
                 << f15(r.yang_hi) << ',' << f15(r.haah_lo) << ',' << f15(r.kahn_hi) << ','
                 << f15(r.conjecture_lo) << ',' << opt15(r.exact) << '\n';
    }
  }
  return 0;
}

// ---------------------------------------------------------------------------

struct verify_opts {
  std::string suite = "all";
  int n_max = 20;
  double tol = default_eig_tol;
  int threads = 0;
  std::string output;
};

int verify_domination(const verify_opts& o, std::ostream& s) {
  int failures = 0;
  int checks = 0;
  for (int d : {2, 3}) {
    for (int n = 1; n <= o.n_max; ++n) {
      domination_report rep = domination_check(n, d, o.tol);
      ++checks;
      if (!rep.passed) ++failures;
      s << (rep.passed ? "PASS " : "FAIL ") << rep.summary << '\n';
    }
  }
  s << "SUMMARY domination: " << checks << " checks, " << failures << " failures\n";
  return failures;
}

int verify_kahn_ratios(std::ostream& s) {
  int failures = 0;
  for (int d = 2; d <= 50; ++d) {
    const kahn_ratios a = ratios_closed_form(d);
    const kahn_ratios b = ratios_recursive(d);
    const bool match = a.a_ratio == b.a_ratio && a.b_ratio == b.b_ratio &&
                       a.c_ratio == b.c_ratio &&
                       a.d_sqrt5_coefficient == b.d_sqrt5_coefficient;
    const bool ray_ok = rayleigh_kahn(d) == big_rational(d) * h_upper(d);
    if (!match || !ray_ok) {
      ++failures;
      s << "FAIL moment ratios d=" << d << (match ? "" : " (recursion mismatch)")
        << (ray_ok ? "" : " (Rayleigh quotient mismatch)") << '\n';
    }
  }
  s << (failures == 0 ? "PASS" : "FAIL")
    << " moment ratios: recursion = closed form and Rayleigh = d * bound for d in [2,50]\n";
  s << "SUMMARY kahn-ratios: 49 checks, " << failures << " failures\n";
  return failures;
}

int verify_sandwich(const verify_opts& o, std::ostream& s) {
  int failures = 0;
  int checks = 0;
  for (int d : {2, 3}) {
    std::vector<int> ns;
    for (int n = 2; n <= o.n_max; ++n) ns.push_back(n);
    sweep_series series = sweep(d, ns, o.tol, default_max_diagrams, o.threads);
    for (const auto& row : series.rows) {
      ++checks;
      if (row.error) {
        ++failures;
        s << "FAIL sandwich d=" << d << " n=" << row.n << ": " << *row.error << '\n';
        continue;
      }
      bool ok = true;
      if (row.sandwich_lower && *row.sandwich_lower > row.h_nd + 1e-9) ok = false;
      if (row.variational_upper && row.h_nd > *row.variational_upper + 1e-9) ok = false;
      if (!ok) {
        ++failures;
        s << "FAIL sandwich d=" << d << " n=" << row.n << ": lower "
          << opt15(row.sandwich_lower) << " h " << f15(row.h_nd) << " upper "
          << opt15(row.variational_upper) << '\n';
      }
    }
    s << "PASS sandwich d=" << d << ": enclosure held on " << series.rows.size()
      << " rows\n";
  }
  s << "SUMMARY sandwich: " << checks << " checks, " << failures << " failures\n";
  return failures;
}

int cmd_verify(const verify_opts& o, std::ostream& out, std::ostream& err) {
  bool ok = false;
  sink s = sink::open(o.output, out, err, ok);
  if (!ok) return 1;
  int failures = 0;
  if (o.suite == "domination" || o.suite == "all") failures += verify_domination(o, s.stream());
  if (o.suite == "kahn-ratios" || o.suite == "all") failures += verify_kahn_ratios(s.stream());
  if (o.suite == "sandwich" || o.suite == "all") failures += verify_sandwich(o, s.stream());
  s.stream() << (failures == 0 ? "VERIFY PASS" : "VERIFY FAIL") << " (suite " << o.suite
             << ", " << failures << " failures)\n";
  return failures > 0 ? 1 : 0;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{
      "Estimation-fidelity toolkit: exact finite-size fidelities from the Young "
      "lattice, Dirichlet-graph and finite-element spectral bounds, exact moment "
      "ratio ladders with a Monte Carlo oracle, and bound-comparison tables"};
  app.name("estfid");
  app.require_subcommand(1);

  fidelity_opts fo;
  CLI::App* fid = app.add_subcommand("fidelity", "Optimal estimation fidelity F_est(n,d)");
  fid->add_option("--n", fo.n, "number of channel uses")->required()->check(CLI::PositiveNumber);
  fid->add_option("--d", fo.d, "local dimension")->required()->check(CLI::Range(2, 1000000));
  fid->add_option("--tol", fo.tol, "eigensolver residual tolerance")->check(CLI::PositiveNumber);
  fid->add_option("--format", fo.format, "output format")->check(CLI::IsMember({"csv", "json"}));
  fid->add_option("--output", fo.output, "write data to this file instead of stdout");

  sweep_opts so;
  CLI::App* sw = app.add_subcommand("sweep", "Sweep h_{n,d} = n^2(1-F_est) over n with sandwich columns");
  sw->add_option("--d", so.d, "local dimension")->required()->check(CLI::Range(2, 1000000));
  sw->add_option("--n-min", so.n_min, "first n")->required()->check(CLI::PositiveNumber);
  sw->add_option("--n-max", so.n_max, "last n")->required()->check(CLI::PositiveNumber);
  sw->add_option("--step", so.step, "n increment")->required()->check(CLI::PositiveNumber);
  sw->add_option("--tol", so.tol, "eigensolver residual tolerance")->check(CLI::PositiveNumber);
  sw->add_option("--threads", so.threads, "worker threads (default: ESTFID_THREADS or hardware)");
  sw->add_option("--max-dim", so.max_dim, "lattice capacity guard")->check(CLI::PositiveNumber);
  sw->add_option("--format", so.format, "output format")->check(CLI::IsMember({"csv", "json"}));
  sw->add_option("--output", so.output, "write data to this file instead of stdout");

  fem_opts eo;
  CLI::App* fe = app.add_subcommand("fem", "P1 finite-element minimal pencil eigenvalue on the scaled lattice mesh");
  fe->add_option("--n", eo.n, "mesh scale (lattice weight)")->required()->check(CLI::Range(2, 100000000));
  fe->add_option("--d", eo.d, "local dimension")->required()->check(CLI::IsMember({2, 3}));
  fe->add_option("--tol", eo.tol, "pencil solver residual tolerance")->check(CLI::PositiveNumber);
  fe->add_option("--format", eo.format, "output format")->check(CLI::IsMember({"csv", "json"}));
  fe->add_option("--output", eo.output, "write data to this file instead of stdout");
  fe->add_option("--export-mesh", eo.export_mesh_path, "write the triangulation to this file");

  graph_opts go;
  CLI::App* gr = app.add_subcommand("graph", "Dirichlet boundary graph and its minimal Laplacian eigenvalue");
  gr->add_option("--n", go.n, "lattice weight")->required()->check(CLI::PositiveNumber);
  gr->add_option("--d", go.d, "local dimension")->required()->check(CLI::Range(2, 1000000));
  gr->add_option("--tol", go.tol, "eigensolver residual tolerance")->check(CLI::PositiveNumber);
  gr->add_option("--format", go.format, "output format")->check(CLI::IsMember({"csv", "json"}));
  gr->add_option("--output", go.output, "write data to this file instead of stdout");
  gr->add_option("--dump-edges", go.dump_edges_path, "write the edge list to this file");

  kahn_opts ko;
  CLI::App* ka = app.add_subcommand("kahn", "Exact moment ratios and the analytic deficiency upper bound");
  ka->add_option("--d", ko.d, "local dimension")->required()->check(CLI::Range(2, 1000000));
  ka->add_flag("--verify-mc", ko.verify_mc, "cross-check the ratios by Monte Carlo");
  ka->add_option("--samples", ko.samples, "Monte Carlo sample count")->check(CLI::PositiveNumber);
  ka->add_option("--seed", ko.seed, "Monte Carlo seed");
  ka->add_option("--threads", ko.threads, "worker threads (default: ESTFID_THREADS or hardware)");
  ka->add_option("--format", ko.format, "output format")->check(CLI::IsMember({"csv", "json"}));
  ka->add_option("--output", ko.output, "write data to this file instead of stdout");

  bounds_opts bo;
  CLI::App* bd = app.add_subcommand("bounds", "Closed-form bound-comparison table over d");
  bd->add_option("--d-list", bo.d_list, "dimensions, e.g. 2,3,10,100")
      ->required()
      ->delimiter(',')
      ->check(CLI::Range(2, 100000000));
  bd->add_option("--format", bo.format, "output format")->check(CLI::IsMember({"csv", "json"}));
  bd->add_option("--output", bo.output, "write data to this file instead of stdout");

  verify_opts vo;
  CLI::App* ve = app.add_subcommand("verify", "Run a self-check suite and report pass/fail");
  ve->add_option("--suite", vo.suite, "which suite to run")
      ->check(CLI::IsMember({"domination", "kahn-ratios", "sandwich", "all"}));
  ve->add_option("--n-max", vo.n_max, "largest lattice weight checked")->check(CLI::PositiveNumber);
  ve->add_option("--tol", vo.tol, "eigensolver residual tolerance")->check(CLI::PositiveNumber);
  ve->add_option("--threads", vo.threads, "worker threads");
  ve->add_option("--output", vo.output, "write the report to this file instead of stdout");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  }

  try {
    if (fid->parsed()) return cmd_fidelity(fo, out, err);
    if (sw->parsed()) return cmd_sweep(so, out, err);
    if (fe->parsed()) return cmd_fem(eo, out, err);
    if (gr->parsed()) return cmd_graph(go, out, err);
    if (ka->parsed()) return cmd_kahn(ko, out, err);
    if (bd->parsed()) return cmd_bounds(bo, out, err);
    if (ve->parsed()) return cmd_verify(vo, out, err);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

}  // namespace estfid::cli
