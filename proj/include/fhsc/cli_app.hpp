#pragma once

// Command-line front end.  Subcommands cover the individual experiment
// families (spectrum, ward, threshold, energy, residual, bounds, laplacian,
// ode, flow) plus `suite`, which runs the full acceptance battery.
//
// Outputs per invocation, under --out DIR:
//   results.json   versioned document, floats rounded to 15 significant
//                  digits, so identical (config, seed) reruns are
//                  byte-identical
//   *.csv          plot-ready tables
//   run.log        human-readable task log with wall times
//
// Exit status: 0 all checked assertions passed, 1 an assertion failed,
// 2 configuration error, 3 resource cap exceeded.

#include <atomic>
#include <chrono>
#include <cmath>
#include <fstream>
#include <map>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "fhsc/acceptance.hpp"
#include "fhsc/dec.hpp"
#include "fhsc/field_energy.hpp"
#include "fhsc/hopf_spectra.hpp"
#include "fhsc/json_io.hpp"
#include "fhsc/laplacian.hpp"
#include "fhsc/mesh.hpp"
#include "fhsc/num.hpp"
#include "fhsc/ode_profile.hpp"

namespace fhsc {
namespace cli {

struct GlobalOptions {
  std::string config_path;
  std::string out_dir = "out";
  uint64_t seed = 0x5eed;
  int threads = 1;
  double tolerance_scale = 1.0;
};

// flat key=value file, '#' starts a comment, blank lines ignored
inline std::map<std::string, std::string> parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw config_error("cannot read config file " + path);
  std::map<std::string, std::string> kv;
  std::string line;
  int lineno = 0;
  auto trim = [](std::string s) {
    const char* ws = " \t\r";
    const size_t b = s.find_first_not_of(ws);
    if (b == std::string::npos) return std::string();
    const size_t e = s.find_last_not_of(ws);
    return s.substr(b, e - b + 1);
  };
  while (std::getline(in, line)) {
    ++lineno;
    const size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw config_error("config line " + std::to_string(lineno) +
                         ": expected key=value");
    const std::string key = trim(line.substr(0, eq));
    const std::string val = trim(line.substr(eq + 1));
    if (key.empty()) throw config_error("config line " + std::to_string(lineno) +
                                        ": empty key");
    kv[key] = val;
  }
  return kv;
}

// config supplies defaults for the global options; explicit flags win
inline void apply_config(GlobalOptions& opt, const CLI::App& app,
                         const std::map<std::string, std::string>& kv) {
  for (const auto& [key, val] : kv) {
    try {
      if (key == "seed") {
        if (app.count("--seed") == 0) opt.seed = std::stoull(val);
      } else if (key == "out") {
        if (app.count("--out") == 0) opt.out_dir = val;
      } else if (key == "threads") {
        if (app.count("--threads") == 0) opt.threads = std::stoi(val);
      } else if (key == "tolerance_scale") {
        if (app.count("--tolerance-scale") == 0) opt.tolerance_scale = std::stod(val);
      } else {
        throw config_error("unknown config key " + key);
      }
    } catch (const std::invalid_argument&) {
      throw config_error("config key " + key + ": cannot parse value '" + val + "'");
    } catch (const std::out_of_range&) {
      throw config_error("config key " + key + ": value out of range");
    }
  }
  if (opt.threads < 1) throw config_error("threads must be >= 1");
  if (!(opt.tolerance_scale > 0)) throw config_error("tolerance-scale must be > 0");
}

// run count independent jobs on up to `threads` workers; out[i] = job(i), so
// the merged result is deterministic regardless of scheduling
template <class T, class F>
std::vector<T> run_indexed(int threads, int count, F&& job) {
  std::vector<T> out(count);
  if (threads <= 1 || count <= 1) {
    for (int i = 0; i < count; ++i) out[i] = job(i);
    return out;
  }
  std::atomic<int> next{0};
  std::vector<std::exception_ptr> errors(size_t(std::min(threads, count)));
  auto worker = [&](int w) {
    try {
      for (int i = next.fetch_add(1); i < count; i = next.fetch_add(1))
        out[i] = job(i);
    } catch (...) {
      errors[w] = std::current_exception();
    }
  };
  std::vector<std::thread> pool;
  for (int w = 0; w < std::min(threads, count); ++w) pool.emplace_back(worker, w);
  for (auto& t : pool) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  return out;
}

class Runner {
 public:
  GlobalOptions opt;
  Json data = Json::object();
  std::vector<std::string> failures;

  explicit Runner(GlobalOptions o) : opt(std::move(o)) {
    ensure_directory(opt.out_dir);
    start_ = clock_::now();
  }

  void check(bool ok, const std::string& what) {
    if (!ok) failures.push_back(what);
  }

  void log_task(const std::string& name, double seconds, const std::string& status) {
    char buf[256];
    std::snprintf(buf, sizeof buf, "task %-28s %-6s %8.3f s", name.c_str(),
                  status.c_str(), seconds);
    log_.push_back(buf);
  }

  template <class F>
  auto timed(const std::string& name, F&& fn) {
    const auto t0 = clock_::now();
    try {
      auto result = fn();
      log_task(name, secs(t0), "ok");
      return result;
    } catch (...) {
      log_task(name, secs(t0), "error");
      throw;
    }
  }

  void write_csv(const std::string& name, const CsvTable& table) {
    write_text_file(opt.out_dir + "/" + name, table.body());
  }

  int finish(const std::string& command) {
    Json doc;
    doc["schema_version"] = 1;
    doc["command"] = command;
    doc["seed"] = opt.seed;
    doc["threads"] = opt.threads;
    doc["tolerance_scale"] = rounded(opt.tolerance_scale);
    doc["status"] = failures.empty() ? "pass" : "fail";
    doc["failures"] = failures;
    doc["data"] = data;
    write_json_file(opt.out_dir + "/results.json", doc);
    std::string log_body;
    for (const auto& l : log_) log_body += l + "\n";
    char buf[128];
    std::snprintf(buf, sizeof buf, "overall %-28s %-6s %8.3f s\n", command.c_str(),
                  failures.empty() ? "pass" : "FAIL", secs(start_));
    log_body += buf;
    write_text_file(opt.out_dir + "/run.log", log_body);
    std::printf("%s: %s (%zu failure%s); results in %s\n", command.c_str(),
                failures.empty() ? "pass" : "FAIL", failures.size(),
                failures.size() == 1 ? "" : "s", opt.out_dir.c_str());
    for (const auto& f : failures) std::printf("  failed: %s\n", f.c_str());
    return failures.empty() ? 0 : 1;
  }

 private:
  using clock_ = std::chrono::steady_clock;
  static double secs(clock_::time_point t0) {
    return std::chrono::duration<double>(clock_::now() - t0).count();
  }
  std::vector<std::string> log_;
  clock_::time_point start_;
};

// --- spectrum ----------------------------------------------------------------

inline int cmd_spectrum(Runner& r, int n_max) {
  if (n_max < 0 || n_max > kMaxWeight)
    throw config_error("spectrum: n-max must lie in [0, 64]");
  struct Row {
    SpectrumReport hess, a;
  };
  auto rows = r.timed("spectrum-blocks", [&] {
    return run_indexed<Row>(r.opt.threads, n_max + 1, [](int n) {
      return Row{block_spectrum(hessian_block(n)), block_spectrum(a_block(n))};
    });
  });
  CsvTable csv("n,kind,alpha,index,computed,predicted");
  Json reports = Json::array();
  for (int n = 0; n <= n_max; ++n) {
    for (const SpectrumReport* rep : {&rows[n].hess, &rows[n].a}) {
      for (size_t i = 0; i < rep->eigenvalues.size(); ++i)
        csv.raw_row(std::to_string(n) + "," + to_string(rep->kind) + ",0," +
                    std::to_string(i) + "," + fmt15(rep->eigenvalues[i]) + "," +
                    fmt15(rep->predicted[i]));
      Json jr;
      jr["n"] = n;
      jr["kind"] = to_string(rep->kind);
      jr["max_abs_deviation"] = rounded(rep->max_abs_deviation);
      jr["min_eigenvalue"] = rounded(rep->eigenvalues.front());
      reports.push_back(jr);
      r.check(rep->max_abs_deviation <= 1e-10,
              std::string(to_string(rep->kind)) + " block n=" + std::to_string(n) +
                  " deviation above 1e-10");
      if (rep->kind == BlockKind::Hessian)
        r.check(rep->eigenvalues.front() >= -1e-12,
                "hessian block n=" + std::to_string(n) + " eigenvalue below -1e-12");
    }
  }
  r.write_csv("spectrum.csv", csv);
  r.data["reports"] = reports;
  return r.finish("spectrum");
}

// --- ward --------------------------------------------------------------------

inline int cmd_ward(Runner& r, double a_min, double a_max, int points) {
  if (points < 2 || !(a_max > a_min) || a_min < 0)
    throw config_error("ward: need points >= 2 and 0 <= alpha-min < alpha-max");
  auto reports = r.timed("ward-sweep", [&] {
    return run_indexed<SpectrumReport>(r.opt.threads, points, [&](int i) {
      const double alpha = a_min + (a_max - a_min) * i / (points - 1);
      return block_spectrum(ward_block(alpha));
    });
  });
  CsvTable csv("n,kind,alpha,index,computed,predicted");
  CsvTable mins("alpha,min_eigenvalue");
  Json arr = Json::array();
  for (const SpectrumReport& rep : reports) {
    for (size_t i = 0; i < rep.eigenvalues.size(); ++i)
      csv.raw_row("1,ward," + fmt15(rep.alpha) + "," + std::to_string(i) + "," +
                  fmt15(rep.eigenvalues[i]) + "," + fmt15(rep.predicted[i]));
    mins.raw_row(fmt15(rep.alpha) + "," + fmt15(rep.eigenvalues.front()));
    Json jr;
    jr["alpha"] = rounded(rep.alpha);
    jr["max_abs_deviation"] = rounded(rep.max_abs_deviation);
    jr["min_eigenvalue"] = rounded(rep.eigenvalues.front());
    arr.push_back(jr);
    r.check(rep.max_abs_deviation <= 1e-12,
            "ward alpha=" + fmt15(rep.alpha) + " deviation above 1e-12");
  }
  r.write_csv("ward.csv", csv);
  r.write_csv("ward_min.csv", mins);
  r.data["sweep"] = arr;
  return r.finish("ward");
}

// --- threshold -----------------------------------------------------------------

inline int cmd_threshold(Runner& r, double lo, double hi, double tol) {
  const double alpha_star = r.timed("threshold-bisection", [&] {
    return stability_threshold(lo, hi, tol);
  });
  r.data["alpha_star"] = rounded(alpha_star);
  r.data["bracket"] = Json::array({rounded(lo), rounded(hi)});
  r.data["tol"] = rounded(tol);
  return r.finish("threshold");
}

// --- energy --------------------------------------------------------------------

inline int cmd_energy(Runner& r, int torus_size, int hopf_size, int product_size) {
  const double pi2 = kPi * kPi;
  CsvTable csv("case,energy,target,abs_error");
  auto record = [&](const std::string& name, double e, double target, double tol,
                    bool relative) {
    const double err = std::abs(e - target);
    csv.raw_row(name + "," + fmt15(e) + "," + fmt15(target) + "," + fmt15(err));
    Json je;
    je["energy"] = rounded(e);
    je["target"] = rounded(target);
    je["abs_error"] = rounded(err);
    r.data[name] = je;
    const double cap = relative ? tol * std::abs(target) : tol;
    r.check(err <= cap, name + " energy error " + fmt15(err) + " above " + fmt15(cap));
  };
  Mesh t2 = Mesh::flat_torus(2, torus_size);
  record("identity_torus",
         r.timed("energy-identity", [&] { return energy(identity_torus_map(t2)); }),
         0.5, 1e-13, false);
  Eigen::MatrixXi L(2, 2);
  L << 2, 0, 0, 1;
  record("degree_two_torus",
         r.timed("energy-linear", [&] { return energy(linear_torus_map(t2, L)); }),
         2.0, 1e-13, false);
  Mesh s3 = Mesh::su2_euler(hopf_size);
  record("fibration",
         r.timed("energy-fibration", [&] { return energy(hopf_map(s3)); }),
         8.0 * pi2, 5e-3, true);
  Mesh pr = Mesh::sphere_product(
      {product_size, product_size / 2, product_size, product_size / 2});
  record("product_projection",
         r.timed("energy-projection",
                 [&] { return energy(product_projection_map(pr)); }),
         8.0 * pi2, 5e-3, true);
  r.write_csv("energy.csv", csv);
  return r.finish("energy");
}

// --- residual -------------------------------------------------------------------

inline int cmd_residual(Runner& r, int hopf_coarse, int product_coarse) {
  struct Case {
    std::string name;
    double coarse, fine, threshold;
  };
  std::vector<Case> cases;
  const double ts = r.opt.tolerance_scale;
  r.timed("residual-torus", [&] {
    Mesh c = Mesh::flat_torus(2, 32), f = Mesh::flat_torus(2, 64);
    cases.push_back({"identity", el_residual(identity_torus_map(c), ts).residual_norm,
                     el_residual(identity_torus_map(f), ts).residual_norm,
                     criticality_threshold(f, ts)});
    Eigen::MatrixXi L(2, 2);
    L << 2, 0, 0, 1;
    cases.push_back({"linear", el_residual(linear_torus_map(c, L), ts).residual_norm,
                     el_residual(linear_torus_map(f, L), ts).residual_norm,
                     criticality_threshold(f, ts)});
    return 0;
  });
  r.timed("residual-fibration", [&] {
    Mesh c = Mesh::su2_euler(hopf_coarse), f = Mesh::su2_euler(2 * hopf_coarse);
    cases.push_back({"fibration", el_residual(hopf_map(c), ts).residual_norm,
                     el_residual(hopf_map(f), ts).residual_norm,
                     criticality_threshold(f, ts)});
    return 0;
  });
  r.timed("residual-projection", [&] {
    Mesh c = Mesh::sphere_product({product_coarse, product_coarse / 2, product_coarse,
                                   product_coarse / 2});
    Mesh f = Mesh::sphere_product({2 * product_coarse, product_coarse,
                                   2 * product_coarse, product_coarse});
    cases.push_back({"projection", el_residual(product_projection_map(c), ts).residual_norm,
                     el_residual(product_projection_map(f), ts).residual_norm,
                     criticality_threshold(f, ts)});
    return 0;
  });
  CsvTable csv("case,coarse_norm,fine_norm,observed_order,fine_threshold");
  for (const Case& c : cases) {
    const bool exact = c.coarse < 1e-12 && c.fine < 1e-12;
    const double order = exact ? std::numeric_limits<double>::infinity()
                               : observed_order(c.coarse, c.fine);
    csv.raw_row(c.name + "," + fmt15(c.coarse) + "," + fmt15(c.fine) + "," +
                fmt15(order) + "," + fmt15(c.threshold));
    Json jc;
    jc["coarse_norm"] = rounded(c.coarse);
    jc["fine_norm"] = rounded(c.fine);
    jc["observed_order"] = exact ? Json("exact") : Json(round_sig15(order));
    jc["fine_threshold"] = rounded(c.threshold);
    r.data[c.name] = jc;
    r.check(exact || order >= 1.9, c.name + " residual order below 1.9");
    r.check(c.fine <= c.threshold, c.name + " fine residual above 10 h^2");
  }
  r.write_csv("residual.csv", csv);
  return r.finish("residual");
}

// --- bounds ---------------------------------------------------------------------

inline int cmd_bounds(Runner& r, int count2, int count4) {
  if (count2 < 1 || count4 < 1) throw config_error("bounds: counts must be >= 1");
  Mesh t2 = Mesh::flat_torus(2, 16);
  Mesh t4 = Mesh::flat_torus(4, 6);
  auto g2 = r.timed("bounds-2d", [&] {
    return run_indexed<Bound2d>(r.opt.threads, count2, [&](int i) {
      Rng rng(derive_seed(r.opt.seed, "b2d" + std::to_string(i)));
      return bound_2d(accept::detail_acc::random_torus_map(t2, rng, 0.3, true));
    });
  });
  auto g4 = r.timed("bounds-4d", [&] {
    return run_indexed<Bound4d>(r.opt.threads, count4, [&](int i) {
      Rng rng(derive_seed(r.opt.seed, "b4d" + std::to_string(i)));
      return bound_4d(accept::detail_acc::random_torus_map(t4, rng, 0.2, true));
    });
  });
  CsvTable c2("index,energy,integral,bound,gap");
  double min2 = 1e300;
  for (int i = 0; i < count2; ++i) {
    c2.raw_row(std::to_string(i) + "," + fmt15(g2[i].energy) + "," +
               fmt15(g2[i].integral) + "," + fmt15(g2[i].bound) + "," +
               fmt15(g2[i].gap));
    min2 = std::min(min2, g2[i].gap);
  }
  CsvTable c4("index,energy,integral,bound,gap,which_side");
  double min4 = 1e300;
  for (int i = 0; i < count4; ++i) {
    c4.raw_row(std::to_string(i) + "," + fmt15(g4[i].energy) + "," +
               fmt15(g4[i].integral) + "," + fmt15(g4[i].bound) + "," +
               fmt15(g4[i].gap) + "," + g4[i].which_side);
    min4 = std::min(min4, g4[i].gap);
  }
  double eq_gap = 0.0;
  const int mats[4][4] = {{1, 0, 0, 1}, {2, 0, 0, 1}, {1, 1, 0, 1}, {2, 1, 1, 1}};
  for (const auto& mm : mats) {
    Eigen::MatrixXi L(2, 2);
    L << mm[0], mm[1], mm[2], mm[3];
    eq_gap = std::max(eq_gap, std::abs(bound_2d(linear_torus_map(t2, L)).gap));
  }
  eq_gap = std::max(eq_gap, std::abs(bound_4d(identity_torus_map(t4)).gap));
  r.write_csv("bounds2d.csv", c2);
  r.write_csv("bounds4d.csv", c4);
  r.data["min_gap_2d"] = rounded(min2);
  r.data["min_gap_4d"] = rounded(min4);
  r.data["equality_case_gap"] = rounded(eq_gap);
  r.check(min2 >= -1e-10, "2d bound violated beyond -1e-10");
  r.check(min4 >= -1e-10, "4d bound violated beyond -1e-10");
  r.check(eq_gap <= 1e-10, "equality cases deviate beyond 1e-10");
  return r.finish("bounds");
}

// --- laplacian ------------------------------------------------------------------

inline int cmd_laplacian(Runner& r) {
  auto emit = [&](const std::string& tag, const LaplacianSpectra& s) {
    CsvTable csv("operator,index,eigenvalue");
    for (size_t i = 0; i < s.laplacian.size(); ++i)
      csv.raw_row("laplacian," + std::to_string(i) + "," + fmt15(s.laplacian[i]));
    for (size_t i = 0; i < s.delta_d.size(); ++i)
      csv.raw_row("delta_d," + std::to_string(i) + "," + fmt15(s.delta_d[i]));
    for (size_t i = 0; i < s.d_delta.size(); ++i)
      csv.raw_row("d_delta," + std::to_string(i) + "," + fmt15(s.d_delta[i]));
    r.write_csv(tag + ".csv", csv);
  };
  Mesh t2 = Mesh::flat_torus(2, 8);
  auto a2 = r.timed("laplacian-2d-forms2", [&] { return laplacian_spectrum(t2, 2); });
  auto b2 = r.timed("laplacian-2d-forms1", [&] { return laplacian_spectrum(t2, 1); });
  emit("laplacian_t2_p2", a2);
  emit("laplacian_t2_p1", b2);
  const double gap2 = match_value_sets(a2.laplacian, b2.delta_d, 1e-8).max_unmatched_gap;
  Mesh t4 = Mesh::flat_torus(4, 4);
  auto a4 = r.timed("laplacian-4d-forms2", [&] { return laplacian_spectrum(t4, 2); });
  auto b4 = r.timed("laplacian-4d-forms1", [&] { return laplacian_spectrum(t4, 1); });
  auto c4 = r.timed("laplacian-4d-forms3", [&] { return laplacian_spectrum(t4, 3); });
  emit("laplacian_t4_p2", a4);
  emit("laplacian_t4_p1", b4);
  emit("laplacian_t4_p3", c4);
  std::vector<double> uni = b4.delta_d;
  uni.insert(uni.end(), c4.d_delta.begin(), c4.d_delta.end());
  const double gap_union = match_value_sets(a4.laplacian, uni, 1e-8).max_unmatched_gap;
  const double gap_refine =
      match_value_sets(a4.laplacian, b4.delta_d, 1e-8).max_unmatched_gap;
  r.data["torus2_gap"] = rounded(gap2);
  r.data["torus4_union_gap"] = rounded(gap_union);
  r.data["torus4_refinement_gap"] = rounded(gap_refine);
  r.check(gap2 <= 1e-9, "2-torus spectrum decomposition gap above 1e-9");
  r.check(gap_union <= 1e-9, "4-torus union gap above 1e-9");
  r.check(gap_refine <= 1e-9, "4-torus refinement gap above 1e-9");
  return r.finish("laplacian");
}

// --- ode ------------------------------------------------------------------------

inline int cmd_ode(Runner& r, double t1, double t2, int points, double h_step) {
  const double pi2 = kPi * kPi;
  const double glued = r.timed("ode-glued", [&] { return glued_energy(t1, t2, points); });
  Json jg;
  jg["energy"] = rounded(glued);
  jg["target"] = "pi^2";
  jg["abs_err"] = rounded(std::abs(glued - pi2));
  r.data["glued"] = jg;
  r.check(std::abs(glued - pi2) <= 1e-3, "glued energy misses pi^2 by more than 1e-3");
  auto traj = r.timed("ode-integrate", [&] {
    return integrate_el(1.0, -1.0, std::log(2.0), 10.0, h_step);
  });
  double max_err = 0.0;
  CsvTable csv("t,alpha,alpha_dot,exact_alpha");
  for (size_t i = 0; i < traj.t.size(); ++i) {
    const double exact = exact_profile(traj.t[i]).alpha;
    max_err = std::max(max_err, std::abs(traj.alpha[i] - exact));
    csv.raw_row(fmt15(traj.t[i]) + "," + fmt15(traj.alpha[i]) + "," +
                fmt15(traj.alpha_dot[i]) + "," + fmt15(exact));
  }
  r.write_csv("profile.csv", csv);
  Json ji;
  ji["max_error"] = rounded(max_err);
  ji["h_drift"] = rounded(traj.h_drift);
  ji["h_step"] = rounded(h_step);
  r.data["integrator"] = ji;
  r.check(max_err <= 1e-8, "integrator misses the exact profile by more than 1e-8");
  r.check(traj.h_drift <= 1e-10, "conserved quantity drift above 1e-10");
  return r.finish("ode");
}

// --- flow -----------------------------------------------------------------------

inline int cmd_flow(Runner& r, int size, int steps, double dt, double amp) {
  Mesh t2 = Mesh::flat_torus(2, size);
  Rng rng(derive_seed(r.opt.seed, "flow"));
  DiscreteMap f = accept::detail_acc::random_torus_map(t2, rng, amp, false);
  auto traj = r.timed("gradient-flow", [&] {
    return gradient_flow(f, steps, dt, r.opt.tolerance_scale);
  });
  CsvTable csv("step,energy,residual_norm,dt");
  bool monotone = true;
  for (size_t i = 0; i < traj.size(); ++i) {
    csv.raw_row(std::to_string(traj[i].step) + "," + fmt15(traj[i].energy) + "," +
                fmt15(traj[i].residual_norm) + "," + fmt15(traj[i].dt));
    if (i > 0 && traj[i].energy > traj[i - 1].energy) monotone = false;
  }
  r.write_csv("flow.csv", csv);
  r.data["steps_taken"] = int(traj.size()) - 1;
  r.data["initial_energy"] = rounded(traj.front().energy);
  r.data["final_energy"] = rounded(traj.back().energy);
  r.data["final_residual"] = rounded(traj.back().residual_norm);
  r.check(monotone, "flow energy increased on an accepted step");
  r.check(traj.back().energy <= traj.front().energy, "flow did not descend");
  return r.finish("flow");
}

// --- suite ----------------------------------------------------------------------

inline int cmd_suite(Runner& r) {
  Json arr = Json::array();
  auto results = accept::run_acceptance(r.opt.seed, [&](const accept::CriterionResult& c) {
    std::printf("criterion %2d [%s]: %s  %s\n", c.index, c.name.c_str(),
                c.passed ? "PASS" : "FAIL", c.detail.c_str());
    std::fflush(stdout);
    r.log_task("criterion-" + std::to_string(c.index), 0.0,
               c.passed ? "pass" : "FAIL");
  });
  for (const auto& c : results) {
    Json jc;
    jc["index"] = c.index;
    jc["name"] = c.name;
    jc["passed"] = c.passed;
    jc["detail"] = c.detail;
    arr.push_back(jc);
    r.check(c.passed, "criterion " + std::to_string(c.index) + " (" + c.name + ")");
  }
  r.data["criteria"] = arr;
  return r.finish("suite");
}

// --- entry point ------------------------------------------------------------------

inline int run_main(int argc, char** argv) {
  CLI::App app{"numerical verification toolkit for a strong-coupling field energy"};
  app.require_subcommand(1);
  GlobalOptions opt;
  app.add_option("--config", opt.config_path, "flat key=value config file");
  app.add_option("--out", opt.out_dir, "output directory (default: out)");
  app.add_option("--seed", opt.seed, "master seed for randomized checks");
  app.add_option("--threads", opt.threads, "worker threads for independent tasks");
  app.add_option("--tolerance-scale", opt.tolerance_scale,
                 "scale factor for criticality thresholds");

  int n_max = 20;
  auto* sc_spectrum = app.add_subcommand("spectrum", "block spectra vs closed forms");
  sc_spectrum->add_option("--n-max", n_max, "largest representation weight");

  double a_min = 0.0, a_max = 3.0;
  int points = 13;
  auto* sc_ward = app.add_subcommand("ward", "deformation family eigenvalue sweep");
  sc_ward->add_option("--alpha-min", a_min, "first coupling value");
  sc_ward->add_option("--alpha-max", a_max, "last coupling value");
  sc_ward->add_option("--points", points, "number of sweep points");

  double lo = 0.0, hi = 2.0, tol = 1e-6;
  auto* sc_threshold = app.add_subcommand("threshold", "bisect the stability threshold");
  sc_threshold->add_option("--lo", lo, "bracket lower end");
  sc_threshold->add_option("--hi", hi, "bracket upper end");
  sc_threshold->add_option("--tol", tol, "bisection tolerance");

  int torus_size = 32, hopf_size = 48, product_size = 64;
  auto* sc_energy = app.add_subcommand("energy", "reference energies");
  sc_energy->add_option("--torus-size", torus_size, "flat torus grid size");
  sc_energy->add_option("--fibration-size", hopf_size, "group mesh grid size");
  sc_energy->add_option("--product-size", product_size,
                        "equator size of the product mesh");

  int hopf_coarse = 24, product_coarse = 16;
  auto* sc_residual = app.add_subcommand("residual", "criticality residual convergence");
  sc_residual->add_option("--fibration-coarse", hopf_coarse, "coarse group mesh size");
  sc_residual->add_option("--product-coarse", product_coarse,
                          "coarse product mesh equator size");

  int count2 = 100, count4 = 50;
  auto* sc_bounds = app.add_subcommand("bounds", "topological lower bounds");
  sc_bounds->add_option("--count-2d", count2, "random 2d maps");
  sc_bounds->add_option("--count-4d", count4, "random 4d maps");

  auto* sc_laplacian = app.add_subcommand("laplacian", "form-Laplacian spectra");

  double t1 = 1e-6, t2 = 30.0, h_step = 5e-4;
  int ode_points = 100000;
  auto* sc_ode = app.add_subcommand("ode", "reduced profile checks");
  sc_ode->add_option("--t1", t1, "left end of the sampled interval");
  sc_ode->add_option("--t2", t2, "right end of the sampled interval");
  sc_ode->add_option("--points", ode_points, "quadrature sample count");
  sc_ode->add_option("--h-step", h_step, "integrator step");

  int flow_size = 16, flow_steps = 40;
  double flow_dt = 0.05, flow_amp = 0.05;
  auto* sc_flow = app.add_subcommand("flow", "gradient descent from a perturbed map");
  sc_flow->add_option("--size", flow_size, "torus grid size");
  sc_flow->add_option("--steps", flow_steps, "descent steps");
  sc_flow->add_option("--dt", flow_dt, "initial step size");
  sc_flow->add_option("--amplitude", flow_amp, "perturbation amplitude");

  auto* sc_suite = app.add_subcommand("suite", "full acceptance battery");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (!opt.config_path.empty())
      apply_config(opt, app, parse_config_file(opt.config_path));
    if (opt.threads < 1 || !(opt.tolerance_scale > 0))
      throw config_error("threads must be >= 1 and tolerance-scale > 0");
    Runner runner(opt);
    if (sc_spectrum->parsed()) return cmd_spectrum(runner, n_max);
    if (sc_ward->parsed()) return cmd_ward(runner, a_min, a_max, points);
    if (sc_threshold->parsed()) return cmd_threshold(runner, lo, hi, tol);
    if (sc_energy->parsed())
      return cmd_energy(runner, torus_size, hopf_size, product_size);
    if (sc_residual->parsed()) return cmd_residual(runner, hopf_coarse, product_coarse);
    if (sc_bounds->parsed()) return cmd_bounds(runner, count2, count4);
    if (sc_laplacian->parsed()) return cmd_laplacian(runner);
    if (sc_ode->parsed()) return cmd_ode(runner, t1, t2, ode_points, h_step);
    if (sc_flow->parsed()) return cmd_flow(runner, flow_size, flow_steps, flow_dt, flow_amp);
    if (sc_suite->parsed()) return cmd_suite(runner);
    throw config_error("no subcommand selected");
  } catch (const config_error& e) {
    std::fprintf(stderr, "configuration error: %s\n", e.what());
    return 2;
  } catch (const resource_error& e) {
    std::fprintf(stderr, "resource cap exceeded: %s\n", e.what());
    return 3;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "configuration error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}

}  // namespace cli
}  // namespace fhsc
