#include "fracpoin/json_io.hpp"

#include <fstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "fracpoin/util.hpp"

namespace fracpoin {

namespace {

Rat rat_from_json(const Json& j) {
  if (j.is_string()) return Rat::from_string(j.get<std::string>());
  if (j.is_number_integer()) return Rat(j.get<long long>());
  if (j.is_number_float()) return Rat::from_double(j.get<double>());
  throw std::invalid_argument("expected a rational (string \"p/q\" or number)");
}

PointR point_from_json(const Json& j) {
  PointR p;
  p.n = 0;
  for (const auto& c : j) p.x[p.n++] = rat_from_json(c);
  return p;
}

Json rat_to_json(const Rat& r) { return Json(r.to_string()); }

Json point_to_json(const PointR& p) {
  Json out = Json::array();
  for (int k = 0; k < p.n; ++k) out.push_back(rat_to_json(p.x[k]));
  return out;
}

}  // namespace

DomainSpec parse_domain_spec(const Json& j) {
  DomainSpec spec;
  if (j.contains("family")) {
    std::string fam = j.at("family").get<std::string>();
    Json params = j.value("params", Json::object());
    if (fam == "square") {
      spec.family = DomainSpec::Family::Square;
      if (params.contains("L")) spec.square_side = rat_from_json(params.at("L"));
    } else if (fam == "l_shape") {
      spec.family = DomainSpec::Family::LShape;
    } else if (fam == "slit_square") {
      spec.family = DomainSpec::Family::SlitSquare;
    } else if (fam == "rooms_and_corridors") {
      spec.family = DomainSpec::Family::RoomsAndCorridors;
      spec.rooms_k = params.value("k", 2);
      spec.corridor_widths.clear();
      if (params.contains("widths"))
        for (const auto& w : params.at("widths")) spec.corridor_widths.push_back(rat_from_json(w));
      if (spec.corridor_widths.empty() && spec.rooms_k > 1)
        spec.corridor_widths.assign(spec.rooms_k - 1, Rat(1, 4));
    } else {
      throw std::invalid_argument("unknown domain family: " + fam);
    }
    return spec;
  }
  if (j.contains("cells")) {
    spec.family = DomainSpec::Family::Explicit;
    spec.cell_size = rat_from_json(j.at("cell_size"));
    const auto& cells = j.at("cells");
    spec.n = cells.empty() ? 2 : static_cast<int>(cells.front().size());
    for (const auto& c : cells) {
      CellIndex idx{};
      int k = 0;
      for (const auto& v : c) idx[k++] = v.get<int64_t>();
      spec.cells.push_back(idx);
    }
    if (j.contains("slit_faces")) {
      for (const auto& s : j.at("slit_faces")) {
        LatticeFace f;
        f.axis = s.at("axis").get<int>();
        int k = 0;
        for (const auto& v : s.at("cell")) f.cell[k++] = v.get<int64_t>();
        spec.slits.push_back(f);
      }
    }
    return spec;
  }
  throw std::invalid_argument("domain spec needs \"family\" or \"cells\"");
}

DomainPtr domain_from_json(const Json& j) { return build_domain(parse_domain_spec(j)); }

DomainPtr domain_from_arg(const std::string& arg) {
  if (!arg.empty() && arg.front() == '@') {
    std::ifstream in(arg.substr(1));
    if (!in) throw std::invalid_argument("cannot open domain file " + arg.substr(1));
    Json j;
    in >> j;
    return domain_from_json(j);
  }
  if (!arg.empty() && arg.front() == '{') return domain_from_json(Json::parse(arg));
  return build_domain_named(arg);
}

std::shared_ptr<const BoundarySet> boundary_set_from_json(const RectilinearDomain& dom,
                                                          const Json& j) {
  std::vector<BoxR> segments;
  for (const auto& seg : j.at("segments")) {
    PointR from = point_from_json(seg.at("from"));
    PointR to = point_from_json(seg.at("to"));
    PointR lo = PointR::make(from.n), hi = PointR::make(from.n);
    for (int k = 0; k < from.n; ++k) {
      lo.x[k] = min(from.x[k], to.x[k]);
      hi.x[k] = max(from.x[k], to.x[k]);
    }
    segments.push_back(BoxR::make(lo, hi));
  }
  return std::make_shared<BoundarySet>(dom, std::move(segments));
}

std::shared_ptr<const BoundarySet> boundary_set_from_arg(const RectilinearDomain& dom,
                                                         const std::string& arg) {
  if (arg == "corner") return std::make_shared<BoundarySet>(BoundarySet::corner(dom));
  if (arg == "edge") return std::make_shared<BoundarySet>(BoundarySet::one_edge(dom));
  if (arg == "boundary") return std::make_shared<BoundarySet>(BoundarySet::whole_boundary(dom));
  if (!arg.empty() && arg.front() == '@') {
    std::ifstream in(arg.substr(1));
    if (!in) throw std::invalid_argument("cannot open boundary set file " + arg.substr(1));
    Json j;
    in >> j;
    return boundary_set_from_json(dom, j);
  }
  if (!arg.empty() && arg.front() == '{') return boundary_set_from_json(dom, Json::parse(arg));
  throw std::invalid_argument("unknown boundary set: " + arg);
}

Json whitney_to_json(const WhitneyDecomposition& dec) {
  Json cubes = Json::array();
  for (size_t i = 0; i < dec.size(); ++i) {
    cubes.push_back({{"corner", point_to_json(dec.cubes[i].corner)},
                     {"side", rat_to_json(dec.cubes[i].side)},
                     {"generation", dec.generation[i]}});
  }
  return {{"domain", dec.domain->name},
          {"max_generation", dec.max_generation},
          {"uncovered", rat_to_json(dec.uncovered)},
          {"cubes", cubes}};
}

Json whitney_report_to_json(const WhitneyReport& rep) {
  return {{"pass", rep.pass()},
          {"disjoint_interiors", rep.disjoint_interiors},
          {"volume_identity", rep.volume_identity},
          {"contained", rep.contained},
          {"size_bounds", rep.size_bounds},
          {"neighbor_ratios", rep.neighbor_ratios},
          {"neighbor_count", rep.neighbor_count},
          {"collar_bound", rep.collar_bound},
          {"worst_dist_over_diam_lo", rep.worst_dist_over_diam_lo},
          {"worst_dist_over_diam_hi", rep.worst_dist_over_diam_hi},
          {"worst_neighbor_ratio", rep.worst_neighbor_ratio},
          {"max_neighbors", rep.max_neighbors},
          {"uncovered", rep.uncovered.to_string()},
          {"failures", rep.failures}};
}

Json covering_to_json(const TreeCovering& cov) {
  Json nodes = Json::array();
  for (size_t t = 0; t < cov.size(); ++t) {
    Json node = {{"id", t},
                 {"parent", cov.parent[t]},
                 {"level", cov.level[t]},
                 {"U", {{"lo", point_to_json(cov.U[t].lo)}, {"hi", point_to_json(cov.U[t].hi)}}}};
    if (static_cast<int>(t) != cov.root)
      node["B"] = {{"lo", point_to_json(cov.B[t].lo)}, {"hi", point_to_json(cov.B[t].hi)}};
    nodes.push_back(std::move(node));
  }
  Json summary = {{"kind", cov.kind == TreeCovering::Kind::Cube ? "cube" : "john"},
                  {"nodes", cov.size()},
                  {"N", cov.overlap_N},
                  {"root", cov.root}};
  if (cov.kind == TreeCovering::Kind::Cube) summary["m"] = cov.m;
  if (cov.kind == TreeCovering::Kind::John) summary["K"] = boman_constant(cov).K_d;
  return {{"summary", summary}, {"nodes", nodes}};
}

Json covering_report_to_json(const CoveringReport& rep) {
  return {{"pass", rep.pass()},
          {"tree_ok", rep.tree_ok},
          {"overlap_ok", rep.overlap_ok},
          {"transfer_ok", rep.transfer_ok},
          {"partition_ok", rep.partition_ok},
          {"eccentricity_ok", rep.eccentricity_ok},
          {"measured_overlap", rep.measured_overlap},
          {"max_eccentricity", rep.max_eccentricity},
          {"K", rep.K},
          {"failures", rep.failures}};
}

Json breakdown_to_json(const ConstantBreakdown& b) {
  return {{"kind", b.kind}, {"n", b.n},   {"p", b.p},       {"q", b.q},
          {"s", b.s},       {"tau", b.tau}, {"beta", b.beta}, {"K", b.K},
          {"N", b.N},       {"m", b.m},   {"c_np", b.c_np}, {"c1", b.c1},
          {"c0", b.c0},     {"c2", b.c2}, {"total", b.total}};
}

Json decomposition_to_json(const DecompositionResult& res) {
  Json parts = Json::array();
  for (size_t i = 0; i < res.parts.size(); ++i) {
    const auto& part = res.parts[i];
    Json bumps = Json::array();
    for (const auto& [s, amp] : part.bumps) bumps.push_back({{"node", s}, {"amplitude", amp}});
    parts.push_back({{"node", part.node},
                     {"grid_values", res.project_part(i)},
                     {"bumps", std::move(bumps)}});
  }
  return {{"residual_mean", res.residual_mean},
          {"uncovered_mass", res.uncovered_mass},
          {"parts", std::move(parts)}};
}

Json decomp_report_to_json(const DecompReport& rep) {
  return {{"pass", rep.pass()},
          {"sum_ok", rep.sum_ok},
          {"support_ok", rep.support_ok},
          {"means_ok", rep.means_ok},
          {"bounds_ok", rep.bounds_ok},
          {"worst_sum_residual", rep.worst_sum_residual},
          {"worst_mean_residual", rep.worst_mean_residual},
          {"min_bound_slack", rep.min_bound_slack},
          {"bound_violations", rep.bound_violations},
          {"failures", rep.failures}};
}

Field field_from_json(GridPtr grid, const Json& j) {
  Field f;
  f.grid = std::move(grid);
  f.id = j.value("id", "json");
  const auto& vals = j.at("values");
  if (vals.size() != f.grid->size())
    throw std::invalid_argument("field: value count does not match the grid");
  f.v.reserve(vals.size());
  for (const auto& v : vals) f.v.push_back(v.get<double>());
  return f;
}

Json field_to_json(const Field& f) {
  return {{"id", f.id},
          {"domain", f.grid->domain().name},
          {"div", f.grid->div()},
          {"values", f.v}};
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << content;
}

}  // namespace fracpoin
