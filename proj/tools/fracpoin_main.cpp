// fracpoin: build Whitney decompositions and tree coverings of rectilinear
// domains, decompose functions along the tree, and verify the weighted
// fractional Poincare-type inequalities with explicit constants.

#include <CLI11.hpp>
#include <cmath>
#include <fstream>
#include <iostream>
#include <nlohmann/json.hpp>

#include "fracpoin/constants.hpp"
#include "fracpoin/covering.hpp"
#include "fracpoin/decomposition.hpp"
#include "fracpoin/json_io.hpp"
#include "fracpoin/pair_kernels.hpp"
#include "fracpoin/quadrature.hpp"
#include "fracpoin/util.hpp"

using namespace fracpoin;

namespace {

void emit(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text;
    if (text.empty() || text.back() != '\n') std::cout << '\n';
  } else {
    write_text_file(out_path, text);
  }
}

double parse_q(const std::string& s) {
  if (s == "inf" || s == "infinity") return std::numeric_limits<double>::infinity();
  return std::stod(s);
}

KernelSpec make_kernel(const std::string& name, double s, double tau, double beta,
                       std::shared_ptr<const BoundarySet> F) {
  if (name == "classical") return KernelSpec::classical(s);
  if (name == "tauball") return KernelSpec::tau_ball(s, tau);
  if (name == "weighted") return KernelSpec::weighted_main(s, tau, beta, std::move(F));
  if (name.rfind("ponce", 0) == 0) {
    RhoSpec rho;
    rho.s = s;
    std::string kind = name.size() > 6 ? name.substr(6) : "power";
    if (kind == "power")
      rho.kind = RhoSpec::Kind::Power;
    else if (kind == "log")
      rho.kind = RhoSpec::Kind::Logarithmic;
    else if (kind == "plateau") {
      rho.kind = RhoSpec::Kind::Plateau;
      rho.c = 0.75;
    } else
      throw CLI::ValidationError("--kernel", "unknown rho kind: " + kind);
    return KernelSpec::radial_ponce(rho, beta, std::move(F));
  }
  throw CLI::ValidationError("--kernel", "unknown kernel: " + name);
}

struct CommonGeom {
  std::string domain_arg = "square";
  int gen = 6;
  int grid_div = 32;

  DomainPtr domain;
  void resolve() { domain = domain_from_arg(domain_arg); }
};

int cmd_whitney(const std::string& domain_arg, int gen, const std::string& out) {
  auto domain = domain_from_arg(domain_arg);
  auto dec = whitney_decompose(domain, gen);
  auto rep = verify_whitney(*dec);
  Json j = {{"decomposition", whitney_to_json(*dec)}, {"report", whitney_report_to_json(rep)}};
  emit(j.dump(2), out);
  return rep.pass() ? 0 : 1;
}

int cmd_cover_cube(int n, double tau, const std::string& L, const std::string& out) {
  PointR corner = PointR::make(n);
  Cube q = Cube::make(corner, Rat::from_string(L));
  auto cov = cube_tree_covering(q, tau);
  auto rep = verify_tree_covering(*cov);
  Json j = {{"covering", covering_to_json(*cov)}, {"report", covering_report_to_json(rep)}};
  emit(j.dump(2), out);
  return rep.pass() ? 0 : 1;
}

int cmd_cover_john(const std::string& domain_arg, int gen, const std::string& root,
                   const std::string& out) {
  auto domain = domain_from_arg(domain_arg);
  auto dec = whitney_decompose(domain, gen);
  std::optional<PointR> hint;
  if (!root.empty()) {
    PointR p = PointR::make(domain->dim());
    size_t pos = 0;
    for (int k = 0; k < domain->dim(); ++k) {
      size_t comma = root.find(',', pos);
      p.x[k] = Rat::from_string(root.substr(pos, comma - pos));
      pos = comma == std::string::npos ? root.size() : comma + 1;
    }
    hint = p;
  }
  auto cov = john_tree_covering(dec, hint);
  auto rep = verify_tree_covering(*cov);
  Json j = {{"covering", covering_to_json(*cov)}, {"report", covering_report_to_json(rep)}};
  emit(j.dump(2), out);
  return rep.pass() ? 0 : 1;
}

int cmd_decompose(const std::string& domain_arg, int gen, int div, const std::string& covering,
                  double tau, const std::string& field_spec, uint64_t seed,
                  const std::string& out) {
  auto domain = domain_from_arg(domain_arg);
  auto grid = Grid::make(domain, div);
  CoveringPtr cov;
  if (covering == "john") {
    cov = john_tree_covering(whitney_decompose(domain, gen));
  } else if (covering == "cube") {
    BoxR bb = domain->bounding_box();
    if (!(domain->volume() == bb.volume()))
      throw CLI::ValidationError("--covering", "cube coverings need a full rectangular domain");
    cov = cube_tree_covering(Cube::make(bb.lo, bb.side(0)), tau);
  } else {
    throw CLI::ValidationError("--covering", "expected john or cube");
  }
  auto cache = make_covering_grid_cache(cov, grid);
  auto fields = make_field_batch(grid, field_spec, seed);
  bool all_pass = true;
  Json results = Json::array();
  for (auto& f : fields) {
    // restrict to the covered region and remove the mean there
    double sum = 0;
    size_t covered = 0;
    for (size_t c = 0; c < f.v.size(); ++c) {
      if (cache->owner[c] >= 0) {
        sum += f.v[c];
        ++covered;
      } else {
        f.v[c] = 0;
      }
    }
    double mean = covered ? sum / static_cast<double>(covered) : 0;
    for (size_t c = 0; c < f.v.size(); ++c)
      if (cache->owner[c] >= 0) f.v[c] -= mean;

    auto res = orthogonal_decompose(cache, f);
    auto rep = verify_decomposition(*cache, f, res);
    all_pass = all_pass && rep.pass();
    Json item = {{"field", f.id}, {"report", decomp_report_to_json(rep)}};
    if (!out.empty()) item["decomposition"] = decomposition_to_json(res);
    results.push_back(std::move(item));
  }
  Json j = {{"seed", seed}, {"results", std::move(results)}};
  emit(j.dump(2), out);
  return all_pass ? 0 : 1;
}

int cmd_hardy_probe(const std::string& domain_arg, int gen, int div, const std::string& q_str,
                    int trials, uint64_t seed, double beta, const std::string& F_arg,
                    const std::string& out) {
  auto domain = domain_from_arg(domain_arg);
  auto grid = Grid::make(domain, div);
  auto cov = john_tree_covering(whitney_decompose(domain, gen));
  auto cache = make_covering_grid_cache(cov, grid);
  std::shared_ptr<const BoundarySet> F;
  if (beta > 0) F = boundary_set_from_arg(*domain, F_arg);
  auto rep = hardy_norm_probe(*cache, parse_q(q_str), beta, F.get(), trials, seed);
  Json j = {{"q", q_str},          {"beta", beta},     {"trials", rep.trials},
            {"seed", rep.seed},    {"max_ratio", rep.max_ratio},
            {"bound", rep.bound},  {"c2", rep.c2},     {"pass", rep.pass},
            {"backend", kern::backend_name()}};
  emit(j.dump(2), out);
  return rep.pass ? 0 : 1;
}

int cmd_verify(const std::string& domain_arg, int gen, int div, double p, double s, double tau,
               double beta, const std::string& F_arg, const std::string& kernel_name,
               const std::string& field_spec, uint64_t seed, bool localized, int diag_depth,
               int chi_depth, const std::string& out) {
  auto domain = domain_from_arg(domain_arg);
  auto grid = Grid::make(domain, div);
  std::shared_ptr<const BoundarySet> F;
  if (beta > 0) F = boundary_set_from_arg(*domain, F_arg);
  KernelSpec kernel = make_kernel(kernel_name, s, tau, beta, F);

  auto dec = whitney_decompose(domain, gen);
  auto cov = john_tree_covering(dec);
  double K = boman_constant(*cov).K_d;
  double constant;
  if (kernel.variant == KernelSpec::Variant::WeightedMain) {
    constant = breakdown_john(domain->dim(), p, s, tau, beta, K).total;
  } else if (kernel.variant == KernelSpec::Variant::RadialPonce) {
    constant = breakdown_ponce(domain->dim(), p, beta, K).total;
  } else {
    constant = std::numeric_limits<double>::infinity();  // exploratory kernels
  }

  QuadOptions opts;
  opts.diag_depth = diag_depth;
  opts.chi_depth = chi_depth;

  auto fields = make_field_batch(grid, field_spec, seed);
  GridPtr coarse;
  if (div % 2 == 0 && div >= 2) coarse = Grid::make(domain, div / 2);

  std::string csv;
  csv += "# fracpoin verify seed=" + std::to_string(seed) + " K=" + fmt_g17(K) +
         " gen=" + std::to_string(gen) + " div=" + std::to_string(div) +
         " localized=" + (localized ? std::string("1") : std::string("0")) +
         " backend=" + kern::backend_name() + "\n";
  bool all_pass = true;
  std::vector<double> gaps;
  std::string lines;
  for (const auto& f : fields) {
    RatioRecord rec = verify_inequality(f, p, kernel, constant, localized ? cov.get() : nullptr,
                                        opts);
    all_pass = all_pass && rec.pass;
    lines += rec.csv_line() + "\n";
    if (coarse) {
      auto cfields = make_field_batch(coarse, f.id.rfind("random:", 0) == 0 ? f.id : field_spec,
                                      seed);
      // regenerate the matching coarse field: same family and seed
      Field cf = cfields.front();
      if (f.id.rfind("random:", 0) == 0)
        cf = make_band_limited(coarse, std::stoull(f.id.substr(7)));
      RatioRecord crec = verify_inequality(cf, p, kernel, constant,
                                           nullptr, opts);
      if (rec.rhs > 0 && crec.rhs > 0)
        gaps.push_back(std::fabs(rec.rhs - crec.rhs) / rec.rhs);
    }
  }
  if (!gaps.empty()) {
    std::sort(gaps.begin(), gaps.end());
    csv += "# refinement: rhs relative gap between div=" + std::to_string(div) +
           " and div=" + std::to_string(div / 2) + " median=" + fmt_g17(gaps[gaps.size() / 2]) +
           "\n";
  }
  csv += std::string(RatioRecord::csv_header()) + "\n" + lines;
  emit(csv, out);
  return all_pass ? 0 : 1;
}

int cmd_constants(int n, double p, double s, double tau, double beta, double K,
                  const std::string& kind, const std::string& L, const std::string& out) {
  ConstantBreakdown b;
  if (kind == "john")
    b = breakdown_john(n, p, s, tau, beta, K);
  else if (kind == "cube")
    b = breakdown_cube(n, p, s, tau, Rat::from_string(L).to_double());
  else if (kind == "ponce")
    b = breakdown_ponce(n, p, beta, K);
  else
    throw CLI::ValidationError("--kind", "expected john, cube or ponce");
  emit(breakdown_to_json(b).dump(2), out);
  return 0;
}

int cmd_estimate(const std::string& domain_arg, int div, double p, const std::string& kernel_name,
                 double s, double tau, double beta, const std::string& F_arg,
                 const std::string& method, int budget, uint64_t seed, int diag_depth,
                 const std::string& out) {
  auto domain = domain_from_arg(domain_arg);
  auto grid = Grid::make(domain, div);
  std::shared_ptr<const BoundarySet> F;
  if (beta > 0) F = boundary_set_from_arg(*domain, F_arg);
  KernelSpec kernel = make_kernel(kernel_name, s, tau, beta, F);
  QuadOptions opts;
  opts.diag_depth = diag_depth;

  EstimateResult res;
  if (method == "rayleigh") {
    if (p != 2.0) throw CLI::ValidationError("--method", "rayleigh requires p = 2");
    res = estimate_rayleigh(grid, kernel, opts);
  } else if (method == "random_search") {
    res = estimate_random_search(grid, kernel, p, budget, seed, opts);
  } else {
    throw CLI::ValidationError("--method", "expected rayleigh or random_search");
  }
  Json j = {{"value", res.value},       {"method", res.method},   {"iterations", res.iterations},
            {"residual", res.residual}, {"seed", res.seed},       {"div", div},
            {"note", "empirical lower bound on the sharp constant"}};
  emit(j.dump(2), out);
  return 0;
}

int cmd_sweep_tau(const std::string& domain_arg, int gen, int div, double p, double s, double beta,
                  const std::string& F_arg, const std::string& taus_str, const std::string& out) {
  auto domain = domain_from_arg(domain_arg);
  std::shared_ptr<const BoundarySet> F;
  if (beta > 0) F = boundary_set_from_arg(*domain, F_arg);
  std::vector<double> taus;
  size_t pos = 0;
  while (pos < taus_str.size()) {
    size_t comma = taus_str.find(',', pos);
    taus.push_back(std::stod(taus_str.substr(pos, comma - pos)));
    pos = comma == std::string::npos ? taus_str.size() : comma + 1;
  }
  auto rows = tau_sweep(domain, gen, div, p, s, beta, F, taus);
  std::string csv = "tau,theoretical,empirical,slack\n";
  bool ok = true;
  for (const auto& r : rows) {
    csv += fmt_g17(r.tau) + "," + fmt_g17(r.theoretical) + "," + fmt_g17(r.empirical) + "," +
           fmt_g17(r.slack) + "\n";
    ok = ok && r.empirical <= r.theoretical;
  }
  emit(csv, out);
  return ok ? 0 : 1;
}

int cmd_rooms_probe(int k, const std::string& js_str, double s, double tau, int div,
                    const std::string& out) {
  std::vector<int> js;
  size_t pos = 0;
  while (pos < js_str.size()) {
    size_t comma = js_str.find(',', pos);
    js.push_back(std::stoi(js_str.substr(pos, comma - pos)));
    pos = comma == std::string::npos ? js_str.size() : comma + 1;
  }
  auto rows = rooms_probe(k, js, s, tau, div);
  std::string csv = "j,width,estimate\n";
  for (const auto& r : rows)
    csv += std::to_string(r.j) + "," + fmt_g17(std::ldexp(1.0, -r.j)) + "," +
           fmt_g17(r.estimate) + "\n";
  if (rows.size() >= 2) {
    double growth = rows.back().estimate / rows.front().estimate;
    csv += "# growth factor j=" + std::to_string(rows.front().j) + " to j=" +
           std::to_string(rows.back().j) + ": " + fmt_g17(growth) + " (exploratory)\n";
  }
  emit(csv, out);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"weighted fractional Poincare inequality toolkit"};
  app.require_subcommand(1);

  std::string domain = "square", out, root, q_str = "2", field_spec = "random:10";
  std::string F_arg = "corner", kernel_name = "weighted", covering = "john", kind = "john";
  std::string L = "1", taus = "0.2,0.4,0.6,0.8", js = "1,2,3", method = "rayleigh";
  int gen = 6, div = 32, n = 2, trials = 100, budget = 200, diag_depth = 3, chi_depth = 1, k = 2;
  double p = 2, s = 0.5, tau = 0.5, beta = 0, K = 1;
  uint64_t seed = 1;

  auto* c_whitney = app.add_subcommand("whitney", "Whitney decomposition + verification");
  c_whitney->add_option("--domain", domain);
  c_whitney->add_option("--gen", gen);
  c_whitney->add_option("--out", out);

  auto* c_cube = app.add_subcommand("cover-cube", "tree covering of a cube");
  c_cube->add_option("--n", n);
  c_cube->add_option("--tau", tau)->required();
  c_cube->add_option("--L", L);
  c_cube->add_option("--out", out);

  auto* c_john = app.add_subcommand("cover-john", "tree covering of a John domain");
  c_john->add_option("--domain", domain);
  c_john->add_option("--gen", gen);
  c_john->add_option("--root", root);
  c_john->add_option("--out", out);

  auto* c_dec = app.add_subcommand("decompose", "orthogonal decomposition + verification");
  c_dec->add_option("--domain", domain);
  c_dec->add_option("--gen", gen);
  c_dec->add_option("-r,--div", div);
  c_dec->add_option("--covering", covering);
  c_dec->add_option("--tau", tau);
  c_dec->add_option("--field", field_spec);
  c_dec->add_option("--seed", seed);
  c_dec->add_option("--out", out);

  auto* c_hardy = app.add_subcommand("hardy-probe", "operator norm probe of T");
  c_hardy->add_option("--domain", domain);
  c_hardy->add_option("--gen", gen);
  c_hardy->add_option("-r,--div", div);
  c_hardy->add_option("--q", q_str);
  c_hardy->add_option("--trials", trials);
  c_hardy->add_option("--seed", seed);
  c_hardy->add_option("--beta", beta);
  c_hardy->add_option("--F", F_arg);
  c_hardy->add_option("--out", out);

  auto* c_verify = app.add_subcommand("verify", "inequality verification over field batches");
  c_verify->add_option("--domain", domain);
  c_verify->add_option("--gen", gen);
  c_verify->add_option("-r,--div", div);
  c_verify->add_option("--p", p);
  c_verify->add_option("--s", s);
  c_verify->add_option("--tau", tau);
  c_verify->add_option("--beta", beta);
  c_verify->add_option("--F", F_arg);
  c_verify->add_option("--kernel", kernel_name);
  c_verify->add_option("--fields", field_spec);
  c_verify->add_option("--seed", seed);
  c_verify->add_flag("--localized", "sum the rhs over the covering sets");
  c_verify->add_option("--rd", diag_depth);
  c_verify->add_option("--chi-depth", chi_depth);
  c_verify->add_option("--out", out);

  auto* c_const = app.add_subcommand("constants", "closed-form constant breakdown");
  c_const->add_option("--n", n);
  c_const->add_option("--p", p);
  c_const->add_option("--s", s);
  c_const->add_option("--tau", tau);
  c_const->add_option("--beta", beta);
  c_const->add_option("--K", K);
  c_const->add_option("--kind", kind);
  c_const->add_option("--L", L);
  c_const->add_option("--out", out);

  auto* c_est = app.add_subcommand("estimate", "empirical sharp-constant lower bound");
  c_est->add_option("--domain", domain);
  c_est->add_option("-r,--div", div);
  c_est->add_option("--p", p);
  c_est->add_option("--kernel", kernel_name);
  c_est->add_option("--s", s);
  c_est->add_option("--tau", tau);
  c_est->add_option("--beta", beta);
  c_est->add_option("--F", F_arg);
  c_est->add_option("--method", method);
  c_est->add_option("--budget", budget);
  c_est->add_option("--seed", seed);
  c_est->add_option("--rd", diag_depth);
  c_est->add_option("--out", out);

  auto* c_sweep = app.add_subcommand("sweep-tau", "theoretical vs empirical constants over tau");
  c_sweep->add_option("--domain", domain);
  c_sweep->add_option("--gen", gen);
  c_sweep->add_option("-r,--div", div);
  c_sweep->add_option("--p", p);
  c_sweep->add_option("--s", s);
  c_sweep->add_option("--beta", beta);
  c_sweep->add_option("--F", F_arg);
  c_sweep->add_option("--taus", taus);
  c_sweep->add_option("--out", out);

  auto* c_rooms = app.add_subcommand("rooms-probe", "constant growth on rooms-and-corridors");
  c_rooms->add_option("--k", k);
  c_rooms->add_option("--js", js);
  c_rooms->add_option("--s", s);
  c_rooms->add_option("--tau", tau);
  c_rooms->add_option("-r,--div", div);
  c_rooms->add_option("--out", out);

  CLI11_PARSE(app, argc, argv);

  try {
    if (c_whitney->parsed()) return cmd_whitney(domain, gen, out);
    if (c_cube->parsed()) return cmd_cover_cube(n, tau, L, out);
    if (c_john->parsed()) return cmd_cover_john(domain, gen, root, out);
    if (c_dec->parsed())
      return cmd_decompose(domain, gen, div, covering, tau, field_spec, seed, out);
    if (c_hardy->parsed())
      return cmd_hardy_probe(domain, gen, div, q_str, trials, seed, beta, F_arg, out);
    if (c_verify->parsed())
      return cmd_verify(domain, gen, div, p, s, tau, beta, F_arg, kernel_name, field_spec, seed,
                        c_verify->count("--localized") > 0, diag_depth, chi_depth, out);
    if (c_const->parsed()) return cmd_constants(n, p, s, tau, beta, K, kind, L, out);
    if (c_est->parsed())
      return cmd_estimate(domain, div, p, kernel_name, s, tau, beta, F_arg, method, budget, seed,
                          diag_depth, out);
    if (c_sweep->parsed())
      return cmd_sweep_tau(domain, gen, div, p, s, beta, F_arg, taus, out);
    if (c_rooms->parsed()) return cmd_rooms_probe(k, js, s, tau, div, out);
  } catch (const CLI::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
